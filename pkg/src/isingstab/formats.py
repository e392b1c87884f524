"""JSON and CSV artifacts exchanged by the command-line tool.

Every JSON document carries ``"schema": 1`` at top level.  Readers accept
documents without the field (hand-written inputs) but reject other versions.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .graphs import Graph
from .hamiltonian import IsingInstance, as_spins

SCHEMA_VERSION = 1


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def dumps(payload: dict) -> str:
    doc = {"schema": SCHEMA_VERSION, **_jsonable(payload)}
    return json.dumps(doc, indent=2) + "\n"


def to_csv(rows: list[dict], columns: list[str] | None = None) -> str:
    if not rows:
        return ""
    columns = columns or list(rows[0].keys())
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for r in rows:
        writer.writerow(_jsonable(r))
    return buf.getvalue()


def load_json(path) -> dict:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    version = data.get("schema", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported schema version {version}")
    return data


def load_graph(path) -> Graph:
    data = load_json(path)
    return Graph.from_json(data["graph"] if "graph" in data else data)


def load_instance(path) -> IsingInstance:
    return IsingInstance.from_json(load_json(path))


def load_config(path) -> np.ndarray:
    """Spins from a config document: ``{"config": [...]}`` or ``{"spins": [...]}``."""
    data = load_json(path)
    for key in ("config", "spins"):
        if key in data:
            return as_spins(data[key])
    raise ValueError(f"{path}: no 'config' or 'spins' field")
