"""
Run records: one JSON object per line, append-only.

Records with the same params fingerprint describe shards of one campaign and
are merged by adding their accumulators.
"""

import hashlib
import json
import logging
import subprocess
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional

from triperc.errors import RecordError
from triperc.pool import Accumulator, params_fingerprint

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
PACKAGE_DIR = Path(__file__).resolve().parent


def is_git_repo(path) -> bool:
    try:
        result = subprocess.run(
            ["git", "-C", str(path), "rev-parse", "--is-inside-work-tree"],
            capture_output=True,
            text=True,
            check=False,
        )
        return result.returncode == 0 and result.stdout.strip() == "true"
    except Exception:
        return False


@lru_cache(maxsize=1)
def source_fingerprint() -> str:
    """``git:<HEAD>`` inside a checkout, else ``sha256:<hash of the package sources>``."""
    if is_git_repo(PACKAGE_DIR):
        result = subprocess.run(
            ["git", "-C", str(PACKAGE_DIR), "rev-parse", "HEAD"],
            capture_output=True,
            text=True,
            check=False,
        )
        head = result.stdout.strip()
        if result.returncode == 0 and head:
            return f"git:{head}"

    digest = hashlib.sha256()
    for path in sorted(PACKAGE_DIR.rglob("*.py")):
        if "tests" in path.relative_to(PACKAGE_DIR).parts:
            continue
        digest.update(path.relative_to(PACKAGE_DIR).as_posix().encode("utf-8"))
        digest.update(path.read_bytes())
    return f"sha256:{digest.hexdigest()}"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunRecord:
    """One campaign (or shard of a campaign) and its accumulated sums."""

    command: str
    params: Dict[str, Any]
    accumulators: List[Accumulator]
    started: str = field(default_factory=_now)
    finished: Optional[str] = None
    source: str = field(default_factory=source_fingerprint)
    shards: List[List[int]] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @property
    def fingerprint(self) -> str:
        return params_fingerprint({"command": self.command, **self.params})

    def accumulator_map(self) -> Dict[str, Accumulator]:
        return {acc.observable: acc for acc in self.accumulators}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "command": self.command,
            "params": self.params,
            "params_fingerprint": self.fingerprint,
            "accumulators": [acc.to_dict() for acc in self.accumulators],
            "started": self.started,
            "finished": self.finished,
            "source": self.source,
            "shards": self.shards,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RunRecord":
        try:
            version = int(data["schema_version"])
            if version > SCHEMA_VERSION:
                raise RecordError(f"record schema {version} is newer than supported {SCHEMA_VERSION}")
            return cls(
                command=str(data["command"]),
                params=dict(data["params"]),
                accumulators=[Accumulator.from_dict(a) for a in data["accumulators"]],
                started=data.get("started") or "",
                finished=data.get("finished"),
                source=data.get("source") or "",
                shards=[[int(a), int(b)] for a, b in data.get("shards", [])],
                schema_version=version,
            )
        except (KeyError, TypeError, ValueError) as e:
            raise RecordError(f"malformed run record: {e}") from e


def append_record(path, record: RunRecord) -> None:
    if record.finished is None:
        record.finished = _now()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as f:
        f.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")
    logger.debug("Appended %s record %s to %s", record.command, record.fingerprint[:12], path)


def load_records(path) -> List[RunRecord]:
    """Read every record of a JSONL file; blank lines are skipped."""
    path = Path(path)
    if not path.exists():
        raise RecordError(f"Record file not found: {path}")
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise RecordError(f"{path}:{number}: not valid JSON: {e}") from e
            records.append(RunRecord.from_dict(data))
    return records


def merge_records(records: Iterable[RunRecord]) -> List[RunRecord]:
    """
    Merge records sharing a params fingerprint, keeping first-seen order.

    The merged record keeps the earliest start and latest finish time; its
    source is the common source fingerprint, or "mixed".
    """
    merged: Dict[str, RunRecord] = {}
    for record in records:
        key = record.fingerprint
        if key not in merged:
            merged[key] = RunRecord(
                command=record.command,
                params=dict(record.params),
                accumulators=list(record.accumulators),
                started=record.started,
                finished=record.finished,
                source=record.source,
                shards=[list(s) for s in record.shards],
                schema_version=record.schema_version,
            )
            continue
        target = merged[key]
        _check_disjoint(target.shards, record.shards, key)
        ours = target.accumulator_map()
        theirs = record.accumulator_map()
        if ours.keys() != theirs.keys():
            raise RecordError(f"records {key[:12]} carry different observables")
        target.accumulators = [ours[name].merge(theirs[name]) for name in ours]
        target.started = min(target.started, record.started)
        target.finished = max(target.finished or "", record.finished or "") or None
        if target.source != record.source:
            target.source = "mixed"
        target.shards = sorted(target.shards + [list(s) for s in record.shards])
        target.schema_version = max(target.schema_version, record.schema_version)
    return list(merged.values())


def _check_disjoint(ours: List[List[int]], theirs: List[List[int]], key: str) -> None:
    """Shards are [first_trial, stop) trial ranges of one seed and must not overlap."""
    for a_lo, a_hi in ours:
        for b_lo, b_hi in theirs:
            if a_lo < b_hi and b_lo < a_hi:
                raise RecordError(
                    f"records {key[:12]} overlap on trials [{max(a_lo, b_lo)}, {min(a_hi, b_hi)})"
                )
