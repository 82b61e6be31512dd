"""Structured JSON reports: exact rationals as "p/q" strings, atomic writes,
and a results tree reports/<command>/<timestamp>-<hash>.json with a `latest`
pointer per command.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

REPORTS_ENV = "MMSLAB_REPORTS"
SCHEMA = 1


def _version() -> str:
    from . import __version__
    return __version__


def to_jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    if hasattr(obj, "item") and callable(obj.item):   # numpy scalars
        return obj.item()
    return obj


def canonical_json(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))


def inputs_hash(inputs: dict) -> str:
    return hashlib.sha256(canonical_json(inputs).encode()).hexdigest()[:12]


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict
    verdicts: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.provenance:
            self.provenance = {"tool": "mmslab", "version": _version(),
                               "timestamp": datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S.%fZ"),
                               "schema": SCHEMA}

    def as_dict(self) -> dict:
        return to_jsonable({"command": self.command, "inputs": self.inputs, "results": self.results,
                            "verdicts": self.verdicts, "provenance": self.provenance})

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"

    def payload(self) -> dict:
        """Everything except provenance: the part that must reproduce exactly."""
        d = self.as_dict()
        d.pop("provenance")
        return d


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=path.suffix)
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def default_root() -> Path:
    return Path(os.environ.get(REPORTS_ENV, "reports"))


def write_report(report: Report, out: str | os.PathLike | None = None, root=None) -> Path:
    """Write to ``out`` when given, otherwise into the results tree under ``root``."""
    text = report.dumps()
    if out is not None:
        path = Path(out)
        atomic_write(path, text)
        return path
    base = Path(root) if root is not None else default_root()
    stamp = report.provenance["timestamp"]
    path = base / report.command / f"{stamp}-{inputs_hash(report.inputs)}.json"
    atomic_write(path, text)
    atomic_write(base / report.command / "latest", path.name + "\n")
    return path


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())


def latest_report(command: str, root=None) -> Path | None:
    base = Path(root) if root is not None else default_root()
    ptr = base / command / "latest"
    if not ptr.exists():
        return None
    return base / command / ptr.read_text().strip()


__all__ = ["Report", "write_report", "load_report", "latest_report", "to_jsonable", "canonical_json",
           "inputs_hash", "atomic_write", "REPORTS_ENV", "default_root"]
