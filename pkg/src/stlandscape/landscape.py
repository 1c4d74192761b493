"""Persistence landscapes over the window × scale grid."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .grid import BifiltrationGrid, GridPoint, region_ranks
from .zigzag import landscape_from_barcode

FIELDS = ("t_windows", "cols", "rows", "k_max", "hom_dim", "epsilons", "values")


@dataclass(frozen=True, eq=False)
class Landscape:
    """``values[k-1, row, col]`` is λ_k at grid node (col, row), in grid units."""

    t_windows: int
    cols: int
    rows: int
    k_max: int
    hom_dim: int
    epsilons: tuple[float, ...]
    values: np.ndarray = field(repr=False)

    dtype = np.int64

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.k_max, self.rows, self.cols):
            raise ValueError(f"values have shape {vals.shape}, expected {(self.k_max, self.rows, self.cols)}")
        if self.cols != 2 * self.t_windows - 1:
            raise ValueError("cols must equal 2 * t_windows - 1")
        if len(self.epsilons) != self.rows:
            raise ValueError("one epsilon per row is required")
        vals = vals.astype(self.dtype, copy=True)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.values.shape

    def layer(self, k: int) -> np.ndarray:
        if not 1 <= k <= self.k_max:
            raise ValueError(f"k must lie in 1..{self.k_max}")
        return self.values[k - 1]

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return self._header() == other._header() and np.array_equal(self.values, other.values)

    __hash__ = None

    def _header(self) -> dict:
        return {
            "t_windows": self.t_windows,
            "cols": self.cols,
            "rows": self.rows,
            "k_max": self.k_max,
            "hom_dim": self.hom_dim,
            "epsilons": list(self.epsilons),
        }

    def to_dict(self) -> dict:
        d = self._header()
        d["values"] = self.values.tolist()
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":")) + "\n"

    def write(self, path) -> None:
        Path(path).write_text(self.to_json())


class MeanLandscape(Landscape):
    """Pointwise average of landscapes; entries are reals."""

    dtype = np.float64

    def to_dict(self) -> dict:
        d = self._header()
        d["values"] = [[[float(v) for v in row] for row in layer] for layer in self.values]
        return d


def from_dict(d: dict) -> Landscape:
    missing = [k for k in FIELDS if k not in d]
    if missing:
        raise ValueError(f"landscape JSON lacks fields {missing}")
    vals = d["values"]
    flat = [v for layer in vals for row in layer for v in row]
    if any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in flat):
        raise ValueError("landscape values must be numbers")
    cls = MeanLandscape if any(isinstance(v, float) for v in flat) else Landscape
    try:
        arr = np.array(vals, dtype=cls.dtype)
    except ValueError:
        raise ValueError("landscape values are ragged") from None
    return cls(
        int(d["t_windows"]), int(d["cols"]), int(d["rows"]), int(d["k_max"]), int(d["hom_dim"]),
        tuple(d["epsilons"]), arr,
    )


def read_landscape(path) -> Landscape:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON ({exc})") from None
    return from_dict(d)


# -- computation --------------------------------------------------------------

def landscape_at(g: BifiltrationGrid, x: GridPoint, k_max: int) -> list[int]:
    ranks = region_ranks(g, x)
    out = []
    for k in range(1, k_max + 1):
        ok = [e for e, r in enumerate(ranks) if r >= k]
        out.append(max(ok) if ok else 0)
    return out


def _rows_worker(args):
    g, rows, k_max = args
    return [[landscape_at(g, GridPoint(c, r), k_max) for c in range(g.cols)] for r in rows]


def compute_landscape(g: BifiltrationGrid, k_max: int = 3, threads: int = 1) -> Landscape:
    """λ_k at every node for k = 1..k_max (0 when no square reaches rank k)."""
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    vals = np.zeros((k_max, g.rows, g.cols), dtype=np.int64)
    if threads > 1 and g.rows > 1:
        lean = BifiltrationGrid(g.node_dims, g.h_edges, g.v_edges, g.epsilons, g.p)
        chunks = [list(range(g.rows))[i::threads] for i in range(threads)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_rows_worker, [(lean, ch, k_max) for ch in chunks if ch]))
        for ch, res in zip([c for c in chunks if c], results):
            for r, line in zip(ch, res):
                for c, lam in enumerate(line):
                    vals[:, r, c] = lam
    else:
        for r in range(g.rows):
            for c in range(g.cols):
                vals[:, r, c] = landscape_at(g, GridPoint(c, r), k_max)
    return Landscape(g.t_windows, g.cols, g.rows, k_max, g.p, tuple(g.epsilons), vals)


def _same_shape(a: Landscape, b: Landscape) -> None:
    if a.values.shape != b.values.shape:
        raise ValueError(f"landscape shapes differ: {a.values.shape} vs {b.values.shape}")


def distance_p(a: Landscape, b: Landscape, p: float = 2.0) -> float:
    """L^p norm of the pointwise difference over all (k, row, col)."""
    _same_shape(a, b)
    p = float(p)
    if not p >= 1:
        raise ValueError("p must be at least 1")
    diff = np.abs(a.values.astype(float) - b.values.astype(float))
    if diff.size == 0:
        return 0.0
    if math.isinf(p):
        return float(diff.max())
    return float(np.sum(diff**p) ** (1.0 / p))


def mean(ls: Sequence[Landscape]) -> MeanLandscape:
    if not ls:
        raise ValueError("cannot average an empty list of landscapes")
    first = ls[0]
    for other in ls[1:]:
        _same_shape(first, other)
    total = np.zeros(first.values.shape, dtype=np.float64)
    for l in ls:
        total += l.values
    return MeanLandscape(
        first.t_windows, first.cols, first.rows, first.k_max, first.hom_dim, first.epsilons, total / len(ls)
    )


def restriction_landscape(g: BifiltrationGrid, line: tuple[str, int], k_max: int = 3) -> np.ndarray:
    """Landscape of the module restricted to one row or one column.

    ``line`` is ``("row", j)`` for the zigzag at scale j or ``("col", i)`` for
    the one-parameter module of column i.  Returns ``(k_max, length)``.
    """
    kind, idx = line
    if kind == "row":
        if not 0 <= idx < g.rows:
            raise ValueError(f"row {idx} outside 0..{g.rows - 1}")
        bc = g.row_module(idx).barcode()
        n = g.cols
    elif kind == "col":
        if not 0 <= idx < g.cols:
            raise ValueError(f"column {idx} outside 0..{g.cols - 1}")
        bc = g.column_module(idx).barcode()
        n = g.rows
    else:
        raise ValueError(f"line kind must be 'row' or 'col', got {kind!r}")
    out = np.zeros((k_max, n))
    for k in range(1, k_max + 1):
        for x in range(n):
            out[k - 1, x] = landscape_from_barcode(bc, k, x)
    return out


def property_violations(l: Landscape) -> list[str]:
    """Non-negativity, monotonicity in k and 1-Lipschitz (max metric) checks.

    For the king-move metric on a grid, Lipschitz on the eight neighbour
    steps is equivalent to Lipschitz for all pairs.
    """
    v = l.values.astype(float)
    out = []
    if np.any(v < 0):
        out.append("negative value")
    if np.any(v[1:] > v[:-1]):
        out.append("not non-increasing in k")
    steps = [
        v[:, :, 1:] - v[:, :, :-1],
        v[:, 1:, :] - v[:, :-1, :],
        v[:, 1:, 1:] - v[:, :-1, :-1],
        v[:, 1:, :-1] - v[:, :-1, 1:],
    ]
    if any(s.size and np.abs(s).max() > 1 + 1e-12 for s in steps):
        out.append("not 1-Lipschitz")
    return out


def cpu_count() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else os.cpu_count() or 1
