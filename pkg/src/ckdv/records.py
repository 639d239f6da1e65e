"""Run records and the on-disk formats: JSONL records, two-column TSV curves,
and the (k, complex coefficient) spectrum file for arbitrary initial data."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .spectral import GridSpec, SpectralField


@dataclass
class RunRecord:
    config: dict[str, Any] = field(default_factory=dict)
    rows: list[dict[str, Any]] = field(default_factory=list)
    status: str = "running"
    wall_time: float = 0.0
    states: list = field(default_factory=list)

    def column(self, key: str) -> np.ndarray:
        return np.array([row[key] for row in self.rows])

    @property
    def times(self) -> np.ndarray:
        return self.column("t")

    def append(self, row: dict[str, Any]) -> None:
        if self.rows and not row["t"] > self.rows[-1]["t"]:
            raise ValueError(f"record times must increase: {row['t']} after {self.rows[-1]['t']}")
        self.rows.append(row)


def to_jsonable(obj: Any) -> Any:
    """Convert dataclasses, enums, numpy scalars/arrays and non-finite floats."""
    if is_dataclass(obj) and not isinstance(obj, type):
        return {k: to_jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v) for v in items]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_jsonl(path, records: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(to_jsonable(rec), sort_keys=True) + "\n")


def read_jsonl(path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def write_tsv(path, x, y, header: tuple[str, str] = ("x", "y")) -> None:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError("x and y must have the same shape")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {header[0]}\t{header[1]}\n")
        for a, b in zip(x, y):
            fh.write(f"{float(a)!r}\t{float(b)!r}\n")


def read_tsv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, comments="#", delimiter="\t", ndmin=2)
    return data[:, 0], data[:, 1]


def write_spectrum(path, fld: SpectralField) -> None:
    """Two columns: integer mode k, complex coefficient (Python complex syntax)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# n_points={fld.grid.n_points} length={fld.grid.length!r}\n")
        for k, c in zip(fld.grid.k, fld.coeffs):
            if c != 0:
                fh.write(f"{int(k)}\t{complex(c)!r}\n")


def read_spectrum(path, grid: GridSpec) -> SpectralField:
    """Read a (k, coefficient) file; missing modes are zero.

    Modes may be given for k >= 0 only, in which case the negative half is
    filled by Hermitian symmetry.
    """
    coeffs = np.zeros(grid.n_points, dtype=np.complex128)
    seen_negative = False
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'k<TAB>coefficient'")
            k = int(parts[0])
            if abs(k) > grid.n_points // 2 or k == -(grid.n_points // 2):
                raise ValueError(f"{path}:{lineno}: mode {k} outside the grid")
            c = complex(parts[1].replace(" ", ""))
            coeffs[k % grid.n_points] = c
            seen_negative |= k < 0
    if not seen_negative:
        n = grid.n_points
        coeffs[n // 2 + 1:] = np.conj(coeffs[1: n // 2][::-1])
        coeffs[0] = coeffs[0].real
        coeffs[n // 2] = coeffs[n // 2].real
    return SpectralField(grid, coeffs)
