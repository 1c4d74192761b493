"""The window × scale grid of homology spaces and its square regions.

Columns alternate between windows (even) and unions of neighbouring windows
(odd); rows are Rips scales.  Arrows go window → union within a row and
row j → row j+1 within a column.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .complex import rips_filtration, union_rips_filtration
from .f2linalg import BitMatrix
from .homology import FilteredHomology, HomologyBasis, inclusion_indices, induced_map
from .signals import WindowedClouds
from .zigzag import BACKWARD, FORWARD, ZigzagModule, poset_gen_rank


@dataclass(frozen=True, order=True)
class GridPoint:
    col: int
    row: int

    def __iter__(self):
        return iter((self.col, self.row))


@dataclass(frozen=True)
class SquareRegion:
    center: GridPoint
    radius: int

    def nodes(self) -> list[GridPoint]:
        c, r, e = self.center.col, self.center.row, self.radius
        return [GridPoint(i, j) for j in range(r - e, r + e + 1) for i in range(c - e, c + e + 1)]

    def inside(self, cols: int, rows: int) -> bool:
        c, r, e = self.center.col, self.center.row, self.radius
        return e >= 0 and c - e >= 0 and c + e < cols and r - e >= 0 and r + e < rows


def poset_leq(a: GridPoint, b: GridPoint) -> bool:
    if a.row > b.row:
        return False
    return a.col == b.col or (a.col % 2 == 0 and abs(b.col - a.col) == 1)


def _block_diag(blocks: Sequence[BitMatrix]) -> BitMatrix:
    rows: list[int] = []
    shift = 0
    for b in blocks:
        rows.extend(r << shift for r in b.rows)
        shift += b.ncols
    return BitMatrix(len(rows), shift, rows)


class BifiltrationGrid:
    """Homology spaces and edge maps over ``cols x rows`` nodes.

    ``h_edges[row][i]`` is the map between columns i and i+1 (from the even
    one to the odd one); ``v_edges[row][col]`` maps row to row+1.
    """

    def __init__(
        self,
        node_dims,
        h_edges,
        v_edges,
        epsilons: Sequence[float] | None = None,
        p: int = 1,
        bases=None,
    ):
        self.node_dims = np.asarray(node_dims, dtype=np.int64)
        if self.node_dims.ndim != 2 or self.node_dims.shape[1] % 2 == 0:
            raise ValueError("node_dims must be rows x cols with an odd number of columns")
        self.rows, self.cols = self.node_dims.shape
        self.t_windows = (self.cols + 1) // 2
        self.p = p
        self.epsilons = list(range(self.rows)) if epsilons is None else [float(e) for e in epsilons]
        if len(self.epsilons) != self.rows:
            raise ValueError("one epsilon per row is required")
        self.h_edges = [list(r) for r in h_edges]
        self.v_edges = [list(r) for r in v_edges]
        self.bases = bases
        self._validate()

    def _validate(self) -> None:
        d = self.node_dims
        if len(self.h_edges) != self.rows or any(len(r) != self.cols - 1 for r in self.h_edges):
            raise ValueError("h_edges must be rows x (cols - 1)")
        if len(self.v_edges) != self.rows - 1 or any(len(r) != self.cols for r in self.v_edges):
            raise ValueError("v_edges must be (rows - 1) x cols")
        for row in range(self.rows):
            for i, m in enumerate(self.h_edges[row]):
                src, dst = (i, i + 1) if i % 2 == 0 else (i + 1, i)
                if m.shape != (d[row, dst], d[row, src]):
                    raise ValueError(f"h_edges[{row}][{i}] has shape {m.shape}")
        for row in range(self.rows - 1):
            for c, m in enumerate(self.v_edges[row]):
                if m.shape != (d[row + 1, c], d[row, c]):
                    raise ValueError(f"v_edges[{row}][{c}] has shape {m.shape}")

    def dim(self, x: GridPoint) -> int:
        return int(self.node_dims[x.row, x.col])

    def contains(self, x: GridPoint) -> bool:
        return 0 <= x.col < self.cols and 0 <= x.row < self.rows

    def edge(self, a: GridPoint, b: GridPoint) -> BitMatrix:
        """Map of a covering relation a ≪ b (or identity for a == b)."""
        if a == b:
            return BitMatrix.identity(self.dim(a))
        if a.col == b.col and b.row == a.row + 1:
            return self.v_edges[a.row][a.col]
        if a.row == b.row and a.col % 2 == 0 and abs(a.col - b.col) == 1:
            return self.h_edges[a.row][min(a.col, b.col)]
        raise ValueError(f"{a} -> {b} is not a grid edge")

    def map(self, a: GridPoint, b: GridPoint) -> BitMatrix:
        """Structure map for any comparable pair a ≪ b."""
        if not poset_leq(a, b):
            raise ValueError(f"{a} is not below {b}")
        m = BitMatrix.identity(self.dim(a))
        cur = a
        if b.col != a.col:
            nxt = GridPoint(b.col, a.row)
            m = self.edge(cur, nxt) @ m
            cur = nxt
        while cur.row < b.row:
            nxt = GridPoint(cur.col, cur.row + 1)
            m = self.edge(cur, nxt) @ m
            cur = nxt
        return m

    def commutes(self) -> bool:
        for row in range(self.rows - 1):
            for i in range(self.cols - 1):
                even, odd = (i, i + 1) if i % 2 == 0 else (i + 1, i)
                a = self.v_edges[row][odd] @ self.h_edges[row][i]
                b = self.h_edges[row + 1][i] @ self.v_edges[row][even]
                if a != b:
                    return False
        return True

    def row_module(self, row: int) -> ZigzagModule:
        arrows = []
        for i, m in enumerate(self.h_edges[row]):
            arrows.append((FORWARD if i % 2 == 0 else BACKWARD, m))
        return ZigzagModule(self.node_dims[row].tolist(), arrows)

    def column_module(self, col: int) -> ZigzagModule:
        arrows = [(FORWARD, self.v_edges[row][col]) for row in range(self.rows - 1)]
        return ZigzagModule(self.node_dims[:, col].tolist(), arrows)

    def eps_bound(self, x: GridPoint) -> int:
        return min(x.col, self.cols - 1 - x.col, x.row, self.rows - 1 - x.row)

    def __repr__(self) -> str:
        return f"BifiltrationGrid(cols={self.cols}, rows={self.rows}, p={self.p})"


# -- explicit modules ---------------------------------------------------------

def interval_grid(cols: int, rows: int, support: Iterable) -> BifiltrationGrid:
    """Interval module: F2 on ``support`` (a convex set of nodes), identities inside."""
    sup = {GridPoint(*x) for x in support}
    dims = np.zeros((rows, cols), dtype=np.int64)
    for x in sup:
        dims[x.row, x.col] = 1

    def m(a, b):
        if a in sup and b in sup:
            return BitMatrix.identity(1)
        return BitMatrix.zeros(int(b in sup), int(a in sup))

    h = []
    for row in range(rows):
        line = []
        for i in range(cols - 1):
            even, odd = (i, i + 1) if i % 2 == 0 else (i + 1, i)
            line.append(m(GridPoint(even, row), GridPoint(odd, row)))
        h.append(line)
    v = [[m(GridPoint(c, row), GridPoint(c, row + 1)) for c in range(cols)] for row in range(rows - 1)]
    return BifiltrationGrid(dims, h, v)


def direct_sum(grids: Sequence[BifiltrationGrid]) -> BifiltrationGrid:
    g0 = grids[0]
    if any(g.node_dims.shape != g0.node_dims.shape for g in grids):
        raise ValueError("grids differ in shape")
    dims = sum(g.node_dims for g in grids)
    h = [[_block_diag([g.h_edges[r][i] for g in grids]) for i in range(g0.cols - 1)] for r in range(g0.rows)]
    v = [[_block_diag([g.v_edges[r][c] for g in grids]) for c in range(g0.cols)] for r in range(g0.rows - 1)]
    return BifiltrationGrid(dims, h, v, g0.epsilons, g0.p)


def square(center, radius: int) -> set[GridPoint]:
    return set(SquareRegion(GridPoint(*center), radius).nodes())


# -- construction from point clouds -----------------------------------------

def build_grid(wc: WindowedClouds, epsilons: Sequence[float], p: int) -> BifiltrationGrid:
    """Rips homology of every window and union at every scale, plus edge maps."""
    eps = [float(e) for e in epsilons]
    if not eps:
        raise ValueError("at least one epsilon is required")
    if any(b <= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilons must be strictly ascending")
    if eps[0] < 0:
        raise ValueError("epsilons must be non-negative")
    windows = list(wc)
    if not windows:
        raise ValueError("no windows")
    offsets = np.concatenate([[0], np.cumsum([len(w) for w in windows])]).tolist()
    t = len(windows)
    cols = 2 * t - 1
    top, max_dim = eps[-1], p + 1

    columns: list[FilteredHomology] = []
    for c in range(cols):
        i = c // 2
        if c % 2 == 0:
            w = windows[i]
            fc = rips_filtration(w.points, range(offsets[i], offsets[i] + len(w)), top, max_dim)
        else:
            fc = union_rips_filtration(windows[i], windows[i + 1], top, max_dim, offsets[i], offsets[i + 1])
        columns.append(FilteredHomology(fc, p, label=f"col{c}"))

    bases: list[list[HomologyBasis]] = [[fh.basis_at(e) for fh in columns] for e in eps]
    dims = [[b.betti for b in row] for row in bases]

    incl = []
    for i in range(cols - 1):
        even, odd = (i, i + 1) if i % 2 == 0 else (i + 1, i)
        incl.append(inclusion_indices(columns[even].fc.of_dim(p), columns[odd].fc.index(p)))
    h = []
    for row in bases:
        line = []
        for i in range(cols - 1):
            even, odd = (i, i + 1) if i % 2 == 0 else (i + 1, i)
            line.append(induced_map(row[even], row[odd], incl[i]))
        h.append(line)
    v = [[induced_map(bases[r][c], bases[r + 1][c]) for c in range(cols)] for r in range(len(eps) - 1)]
    return BifiltrationGrid(dims, h, v, eps, p, bases)


# -- regions and paths ------------------------------------------------------

def fences(r: SquareRegion, cols: int | None = None, rows: int | None = None):
    """Lower and upper fence of a square, as left-to-right node runs."""
    if r.radius < 0 or (cols is not None and rows is not None and not r.inside(cols, rows)):
        raise ValueError(f"region {r} is outside the grid")
    c, row, e = r.center.col, r.center.row, r.radius
    if e == 0:
        return [r.center], [r.center]
    lo, hi = c - e, c + e
    even_lo, even_hi = lo + (lo % 2), hi - (hi % 2)
    odd_lo, odd_hi = lo + 1 - (lo % 2), hi - 1 + (hi % 2)
    lower = [GridPoint(i, row - e) for i in range(even_lo, even_hi + 1)]
    upper = [GridPoint(i, row + e) for i in range(odd_lo, odd_hi + 1)]
    return lower, upper


@dataclass(frozen=True)
class BoundaryPath:
    """Nested boundary paths; ``markers[e] = (s, t)`` bounds the ε = e subpath."""

    nodes: tuple[GridPoint, ...]
    markers: tuple[tuple[int, int], ...]

    def arrows(self) -> list[str]:
        out = []
        for a, b in zip(self.nodes, self.nodes[1:]):
            out.append(FORWARD if poset_leq(a, b) else BACKWARD)
        return out

    def subpath(self, e: int) -> tuple[GridPoint, ...]:
        s, t = self.markers[e]
        return self.nodes[s : t + 1]


def _walk(row: int, c0: int, c1: int) -> list[GridPoint]:
    """Nodes after (c0, row) up to and including (c1, row)."""
    step = 1 if c1 >= c0 else -1
    return [GridPoint(c, row) for c in range(c0 + step, c1 + step, step)]


def boundary_path(center: GridPoint, radius: int, cols: int | None = None, rows: int | None = None) -> BoundaryPath:
    if cols is not None and rows is not None and not SquareRegion(center, radius).inside(cols, rows):
        raise ValueError(f"square of radius {radius} at {center} leaves the grid")
    if radius < 0:
        raise ValueError("radius must be non-negative")
    nodes = [center]
    markers = [(0, 0)]
    for e in range(1, radius + 1):
        lower, upper = fences(SquareRegion(center, e))
        first, last = nodes[0], nodes[-1]
        down = _walk(lower[-1].row, lower[-1].col, first.col)
        up = _walk(last.row, last.col, upper[0].col)
        head = lower + down
        nodes = head + nodes + up + upper
        markers = [(s + len(head), t + len(head)) for s, t in markers]
        markers.append((0, len(nodes) - 1))
    return BoundaryPath(tuple(nodes), tuple(markers))


def path_module(g: BifiltrationGrid, path: BoundaryPath) -> ZigzagModule:
    arrows = []
    for a, b in zip(path.nodes, path.nodes[1:]):
        if poset_leq(a, b):
            arrows.append((FORWARD, g.edge(a, b)))
        else:
            arrows.append((BACKWARD, g.edge(b, a)))
    return ZigzagModule([g.dim(x) for x in path.nodes], arrows)


def region_ranks(g: BifiltrationGrid, center: GridPoint, stop_at_zero: bool = True) -> list[int]:
    """rank of the square of radius ε at ``center`` for ε = 0..eps_bound.

    With ``stop_at_zero`` the ranks after the first zero are filled in as
    zero without computing them (ranks only decrease as squares grow).
    """
    if not g.contains(center):
        raise ValueError(f"{center} is outside the grid")
    bound = g.eps_bound(center)
    path = boundary_path(center, bound)
    z = path_module(g, path)
    base = path.markers[0][0]
    return z.ranks_nested(base, path.markers, stop_at_zero=stop_at_zero)


def oracle_interval_rank(g: BifiltrationGrid, r: SquareRegion) -> int:
    """Generalized rank of a square from its full limit and colimit."""
    if not r.inside(g.cols, g.rows):
        raise ValueError(f"region {r} is outside the grid")
    nodes = r.nodes()
    dims = [g.dim(x) for x in nodes]
    arrows = []
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i != j and poset_leq(a, b):
                arrows.append((i, j, g.map(a, b)))
    return poset_gen_rank(dims, arrows, 0)
