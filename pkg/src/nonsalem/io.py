"""JSON and CSV artifacts.

JSON is written with sorted keys, two-space indent and a trailing newline;
floats use Python's shortest round-trip repr, so values reload bit-exactly.
Non-finite floats become ``null``.  CSV follows RFC 4180 (CRLF line ends).
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .bounds import BoundReport, SeriesReport
from .fourier import DecayProfile, FourierTable, FunctionTable
from .measures import AtomicMeasure, GridMeasure

HERMITIAN_TOL = 1e-12


def to_jsonable(obj):
    """Plain Python structure with numpy scalars unwrapped and NaN/inf as None."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return [to_jsonable(obj.real), to_jsonable(obj.imag)]
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(obj, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(obj), encoding="utf-8")
    return path


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def write_csv(header, rows, path) -> Path:
    buf = io.StringIO(newline="")
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if isinstance(v, float) and not math.isfinite(v) else v for v in row])
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(buf.getvalue().encode("utf-8"))
    return path


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# -- measures -----------------------------------------------------------------


def measure_to_dict(mu) -> dict:
    if isinstance(mu, AtomicMeasure):
        atoms = [[p.tolist(), float(w)] for p, w in zip(mu.points, mu.weights)]
        return {"dim": mu.dim, "atoms": atoms, "meta": mu.meta}
    return {"dim": mu.dim, "resolution": mu.resolution, "mass": mu.mass.reshape(-1).tolist(), "meta": mu.meta}


def measure_from_dict(doc: dict):
    """Rebuild a measure; the constructors re-validate every invariant."""
    dim = int(doc["dim"])
    meta = doc.get("meta") or {}
    if "atoms" in doc:
        points = np.array([a[0] for a in doc["atoms"]], dtype=float).reshape(-1, dim)
        weights = np.array([a[1] for a in doc["atoms"]], dtype=float)
        return AtomicMeasure(points, weights, meta)
    if "mass" in doc:
        N = int(doc["resolution"])
        return GridMeasure(np.array(doc["mass"], dtype=float).reshape((N,) * dim), meta)
    raise ValueError("measure document needs 'atoms' or 'mass'")


def save_measure(mu, path) -> Path:
    return write_json(measure_to_dict(mu), path)


def load_measure(path):
    return measure_from_dict(read_json(path))


# -- Fourier tables -------------------------------------------------------------


def table_to_dict(table: FourierTable) -> dict:
    if isinstance(table, FunctionTable):
        table = table.dense()
    f, v = table.entries()
    order = np.lexsort(f.T[::-1])
    entries = [[f[i].tolist(), float(v[i].real), float(v[i].imag)] for i in order]
    return {"dim": table.dim, "box_radius": table.box_radius, "entries": entries, "meta": table.meta}


def table_from_dict(doc: dict) -> FourierTable:
    dim, R = int(doc["dim"]), int(doc["box_radius"])
    side = 2 * R + 1
    coeffs = np.full((side,) * dim, np.nan, dtype=complex)
    for xi, re, im in doc["entries"]:
        coeffs[tuple(int(k) + R for k in xi)] = complex(re, im)
    if np.isnan(coeffs).any():
        raise ValueError("table document does not fill its box")
    return FourierTable(coeffs, meta=doc.get("meta"))


def validate_table(table: FourierTable, tol: float = HERMITIAN_TOL) -> None:
    """Probability-measure invariants: coeff(0) = 1, Hermitian symmetry, |coeff| <= 1."""
    c = table.coeffs if not isinstance(table, FunctionTable) else table.dense().coeffs
    center = (table.box_radius,) * table.dim
    if abs(c[center] - 1) > tol:
        raise ValueError(f"coeff(0) = {c[center]} differs from 1")
    flipped = np.conj(c[(slice(None, None, -1),) * table.dim])
    if np.max(np.abs(c - flipped)) > tol:
        raise ValueError("table is not Hermitian")
    if np.max(np.abs(c)) > 1 + tol:
        raise ValueError("coefficient magnitude exceeds 1")


def save_table(table: FourierTable, path) -> Path:
    return write_json(table_to_dict(table), path)


def load_table(path) -> FourierTable:
    return table_from_dict(read_json(path))


def save_decay_csv(profile: DecayProfile, path) -> Path:
    return write_csv(["radius", "peak"], profile.rows(), path)


# -- reports ------------------------------------------------------------------


REPORT_COLUMNS = ["name", "params", "lhs", "rhs_main", "tail", "ratio", "verdict"]


def _params_cell(params: dict) -> str:
    return json.dumps(to_jsonable(params), sort_keys=True, separators=(",", ":"), allow_nan=False)


def save_reports_json(reports, path) -> Path:
    return write_json([r.to_dict() for r in reports], path)


def save_reports_csv(reports, path) -> Path:
    rows = [[r.name, _params_cell(r.params), r.lhs, r.rhs_main, r.tail, r.ratio, r.verdict] for r in reports]
    return write_csv(REPORT_COLUMNS, rows, path)


def _num(v) -> float:
    return float("nan") if v is None or v == "" else float(v)


def report_from_dict(doc: dict) -> BoundReport:
    return BoundReport(doc["name"], _num(doc["lhs"]), _num(doc["rhs_main"]), _num(doc["tail"]),
                       _num(doc["ratio"]), dict(doc["params"]), doc["verdict"])


def load_reports_json(path) -> list[BoundReport]:
    return [report_from_dict(d) for d in read_json(path)]


def load_reports_csv(path) -> list[BoundReport]:
    return [report_from_dict(row | {"params": json.loads(row["params"])}) for row in read_csv(path)]


def save_series(report: SeriesReport, json_path, csv_path=None) -> Path:
    write_json(report.to_dict(), json_path)
    if csv_path is not None:
        write_csv(["Q_max", "partial_sum"], report.partial_sums, csv_path)
    return Path(json_path)
