"""Machine-readable reports: JSON (schema-validated) and fixed-column CSV."""

from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources
from typing import Any, Iterable

import numpy as np

SCHEMA_VERSION = 1

CSV_COLUMNS = {
    "average": ["ensemble", "n", "psi", "method", "value", "est_error", "std_error", "samples", "seed", "wall_time_s"],
    "pfaffian": ["dim", "method", "value_real", "value_imag", "sign_real", "sign_imag", "log_abs"],
    "jpdf": ["n", "L", "M", "quantity", "value", "std_error"],
    "verify": ["suite", "check", "status", "max_residual", "tolerance", "cases"],
}

SAMPLE_CSV_COLUMNS = ["index", "L", "M", "product"]


def load_schema() -> dict:
    return json.loads(resources.files("ginibre").joinpath("report_schema.json").read_text())


def _clean(obj: Any) -> Any:
    """JSON-safe copy: numpy scalars unwrapped, non-finite floats -> None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (complex, np.complexfloating)):
        return {"real": _clean(obj.real), "imag": _clean(obj.imag)}
    return obj


def make_report(command: str, config: dict, result: dict, wall_time: float) -> dict:
    from . import __version__

    return _clean(
        {
            "schema_version": SCHEMA_VERSION,
            "package_version": __version__,
            "command": command,
            "config": config,
            "result": result,
            "wall_time_s": wall_time,
        }
    )


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False)


def fmt(x: Any) -> str:
    """17 significant digits for floats; other values via str."""
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def to_csv(command: str, rows: Iterable[dict]) -> str:
    columns = CSV_COLUMNS[command]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def write_sample_csv(path, products: np.ndarray, real_counts: np.ndarray | None, n: int) -> None:
    """Per-sample rows: index, L, M, product (L and M empty for GinUE)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SAMPLE_CSV_COLUMNS)
        for i, value in enumerate(products):
            if real_counts is None or real_counts[i] < 0:
                big_l = big_m = ""
            else:
                big_l = int(real_counts[i])
                big_m = (n - big_l) // 2
            writer.writerow([i, big_l, big_m, fmt(value)])
