"""Machine-readable experiment reports (JSON body plus a CSV view)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

SCHEMA = 1


def jsonable(obj: Any) -> Any:
    """Plain-JSON copy of ``obj``; infinities become the strings ``"inf"``/``"-inf"``."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def from_json_number(x: Any) -> float:
    if x == "inf":
        return math.inf
    if x == "-inf":
        return -math.inf
    if x == "nan":
        return math.nan
    return float(x)


@dataclass
class Report:
    command: str
    config: dict
    results: dict
    trials: list[dict] = field(default_factory=list)
    wall_time: float | None = None
    error: dict | None = None

    def body(self) -> dict:
        out = {
            "schema": SCHEMA,
            "command": self.command,
            "config": jsonable(self.config),
            "results": jsonable(self.results),
        }
        if self.trials:
            out["trials"] = jsonable(self.trials)
        if self.error is not None:
            out["error"] = jsonable(self.error)
        return out

    def body_json(self) -> str:
        """Canonical serialization without timing; identical across reruns."""
        return json.dumps(self.body(), sort_keys=True, indent=2)

    def to_json(self) -> str:
        out = self.body()
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 6)
        return json.dumps(out, sort_keys=True, indent=2)

    def summary_fields(self) -> dict:
        """Scalar entries of ``results``, nested keys joined with dots."""
        flat: dict[str, Any] = {}

        def walk(prefix: str, val: Any) -> None:
            if isinstance(val, dict):
                for k, v in val.items():
                    walk(f"{prefix}.{k}" if prefix else str(k), v)
            elif not isinstance(val, list):
                flat[prefix] = val

        walk("", jsonable(self.results))
        return flat

    def to_csv(self) -> str:
        """One row per trial (``record=trial``) then one ``record=summary`` row."""
        rows = [{"record": "trial", **_flat_row(t)} for t in jsonable(self.trials)]
        rows.append({"record": "summary", **self.summary_fields()})
        columns: list[str] = []
        for row in rows:
            for k in row:
                if k not in columns:
                    columns.append(k)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue()


def _flat_row(rec: dict) -> dict:
    return {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in rec.items()}
