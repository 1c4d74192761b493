"""Simplicial complexes and Vietoris-Rips constructions over global vertex ids."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .f2linalg import BitMatrix
from .signals import PointCloud

Simplex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Face-closed simplicial complex.

    ``simplices[p]`` is the lexicographically sorted tuple of p-simplices,
    each an ascending tuple of vertex ids.
    """

    vertex_ids: tuple[int, ...]
    simplices: tuple[tuple[Simplex, ...], ...]

    @classmethod
    def from_simplices(cls, simplices) -> "SimplicialComplex":
        """Face-close an arbitrary iterable of simplices."""
        closed: set[Simplex] = set()
        for s in simplices:
            s = tuple(sorted(s))
            if len(set(s)) != len(s):
                raise ValueError(f"simplex {s} repeats a vertex")
            closed.update(_faces_all(s))
        return cls._from_set(closed)

    @classmethod
    def _from_set(cls, closed: set[Simplex]) -> "SimplicialComplex":
        if not closed:
            return cls((), ())
        top = max(len(s) for s in closed) - 1
        by_dim: list[list[Simplex]] = [[] for _ in range(top + 1)]
        for s in closed:
            by_dim[len(s) - 1].append(s)
        dims = tuple(tuple(sorted(x)) for x in by_dim)
        return cls(tuple(v[0] for v in dims[0]), dims)

    @property
    def max_dim(self) -> int:
        return len(self.simplices) - 1

    def of_dim(self, p: int) -> tuple[Simplex, ...]:
        if 0 <= p < len(self.simplices):
            return self.simplices[p]
        return ()

    def count(self, p: int) -> int:
        return len(self.of_dim(p))

    def index(self, p: int) -> dict[Simplex, int]:
        return {s: i for i, s in enumerate(self.of_dim(p))}

    def __contains__(self, s) -> bool:
        s = tuple(s)
        return s in set(self.of_dim(len(s) - 1))

    def all_simplices(self) -> set[Simplex]:
        return {s for dim in self.simplices for s in dim}

    def is_subcomplex_of(self, other: "SimplicialComplex") -> bool:
        return self.all_simplices() <= other.all_simplices()

    def is_face_closed(self) -> bool:
        present = self.all_simplices()
        return all(f in present for s in present if len(s) > 1 for f in facets(s))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.vertex_ids == other.vertex_ids and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self) -> str:
        counts = ", ".join(str(len(s)) for s in self.simplices)
        return f"SimplicialComplex(counts=[{counts}])"


def facets(s: Simplex) -> list[Simplex]:
    return [s[:i] + s[i + 1 :] for i in range(len(s))]


def _faces_all(s: Simplex) -> set[Simplex]:
    out = {s}
    if len(s) > 1:
        for f in facets(s):
            out |= _faces_all(f)
    return out


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Euclidean distance matrix.

    Accumulates coordinate by coordinate so that a pair of points gets the
    same distance no matter which larger cloud it is embedded in.
    """
    pts = np.asarray(points, dtype=float)
    d2 = np.zeros((pts.shape[0], pts.shape[0]))
    for k in range(pts.shape[1]):
        diff = pts[:, k, None] - pts[None, :, k]
        d2 += diff * diff
    return np.sqrt(d2)


class FilteredComplex:
    """Rips filtration truncated at ``max_eps``.

    Simplices of each dimension are stored in filtration order: ascending
    diameter, ties broken lexicographically.  The complex at any scale
    ``eps <= max_eps`` is a prefix of every dimension's list.
    """

    def __init__(self, simplices: list[list[Simplex]], values: list[np.ndarray]):
        self.simplices = simplices
        self.values = values
        self._index: list[dict[Simplex, int] | None] = [None] * len(simplices)

    @property
    def max_dim(self) -> int:
        return len(self.simplices) - 1

    def of_dim(self, p: int) -> list[Simplex]:
        return self.simplices[p] if 0 <= p < len(self.simplices) else []

    def value_of_dim(self, p: int) -> np.ndarray:
        return self.values[p] if 0 <= p < len(self.values) else np.zeros(0)

    def count_at(self, p: int, eps: float) -> int:
        """Number of p-simplices with diameter <= eps (the prefix length)."""
        return int(np.searchsorted(self.value_of_dim(p), eps, side="right"))

    def index(self, p: int) -> dict[Simplex, int]:
        if not 0 <= p < len(self.simplices):
            return {}
        idx = self._index[p]
        if idx is None:
            idx = {s: i for i, s in enumerate(self.simplices[p])}
            self._index[p] = idx
        return idx

    def at(self, eps: float) -> SimplicialComplex:
        dims = []
        for p in range(len(self.simplices)):
            n = self.count_at(p, eps)
            dims.append(tuple(sorted(self.simplices[p][:n])))
        while dims and not dims[-1]:
            dims.pop()
        if not dims:
            return SimplicialComplex((), ())
        return SimplicialComplex(tuple(v[0] for v in dims[0]), tuple(dims))


def rips_filtration(
    points: np.ndarray, ids: Sequence[int], max_eps: float, max_dim: int
) -> FilteredComplex:
    """Rips filtration of a cloud whose i-th point carries vertex id ``ids[i]``.

    ``ids`` must be strictly ascending so that local and global vertex orders
    agree.
    """
    if max_eps < 0 or max_dim < 0:
        raise ValueError("max_eps and max_dim must be non-negative")
    ids = [int(i) for i in ids]
    if any(b <= a for a, b in zip(ids, ids[1:])):
        raise ValueError("vertex ids must be strictly ascending")
    n = len(ids)
    if n != len(points):
        raise ValueError("one id per point is required")
    dist = pairwise_distances(points) if n else np.zeros((0, 0))
    dl = dist.tolist()
    close = dist <= max_eps

    upper = []
    for i in range(n):
        row = close[i].copy()
        row[: i + 1] = False
        upper.append(sum(1 << int(j) for j in np.flatnonzero(row)))

    # cliques[k] holds (local vertex tuple, diameter, common upper neighbours)
    level = [((i,), 0.0, upper[i]) for i in range(n)]
    local: list[list[tuple[tuple[int, ...], float]]] = [[(s, d) for s, d, _ in level]]
    for _ in range(max_dim):
        nxt = []
        for s, diam, cand in level:
            c = cand
            while c:
                low = c & -c
                j = low.bit_length() - 1
                c ^= low
                dj = dl[j]
                d = diam
                for v in s:
                    if dj[v] > d:
                        d = dj[v]
                nxt.append((s + (j,), d, cand & upper[j]))
        if not nxt:
            break
        level = nxt
        local.append([(s, d) for s, d, _ in level])

    simplices, values = [], []
    for dim_list in local:
        dim_list.sort(key=lambda sd: (sd[1], sd[0]))
        simplices.append([tuple(ids[v] for v in s) for s, _ in dim_list])
        values.append(np.array([d for _, d in dim_list], dtype=float))
    return FilteredComplex(simplices, values)


def vietoris_rips(pc: PointCloud, eps: float, max_dim: int, id_offset: int = 0) -> SimplicialComplex:
    """Rips complex: all vertex sets of size <= max_dim+1 with pairwise distances <= eps."""
    if eps < 0 or max_dim < 0:
        raise ValueError("eps and max_dim must be non-negative")
    ids = range(id_offset, id_offset + len(pc))
    return rips_filtration(pc.points, ids, eps, max_dim).at(eps)


def _union_cloud(a: PointCloud, b: PointCloud, id_offset_a: int, id_offset_b: int):
    ra = range(id_offset_a, id_offset_a + len(a))
    rb = range(id_offset_b, id_offset_b + len(b))
    if len(a) and len(b) and not (ra.stop <= rb.start or rb.stop <= ra.start):
        raise ValueError("vertex id ranges of the two clouds overlap")
    if len(a) and len(b) and a.dim != b.dim:
        raise ValueError("clouds live in different dimensions")
    pts = [p for p in (a.points, b.points) if len(p)]
    ids = list(ra) + list(rb)
    if not pts:
        return np.zeros((0, max(a.dim, b.dim))), []
    allpts = np.concatenate(pts, axis=0)
    order = np.argsort(ids, kind="stable")
    return allpts[order], [ids[i] for i in order]


def union_rips_filtration(
    a: PointCloud, b: PointCloud, max_eps: float, max_dim: int, id_offset_a: int, id_offset_b: int
) -> FilteredComplex:
    pts, ids = _union_cloud(a, b, id_offset_a, id_offset_b)
    return rips_filtration(pts, ids, max_eps, max_dim)


def union_rips(
    a: PointCloud, b: PointCloud, eps: float, max_dim: int, id_offset_a: int, id_offset_b: int
) -> SimplicialComplex:
    """Rips complex of the union cloud; both parts keep their own vertex ids."""
    if eps < 0 or max_dim < 0:
        raise ValueError("eps and max_dim must be non-negative")
    return union_rips_filtration(a, b, eps, max_dim, id_offset_a, id_offset_b).at(eps)


def boundary_matrix(k: SimplicialComplex, p: int) -> BitMatrix:
    """F2 boundary map from p-chains to (p-1)-chains in sorted simplex order."""
    if p < 1:
        raise ValueError("boundary matrices start at p = 1")
    rows = k.of_dim(p - 1)
    cols = k.of_dim(p)
    ridx = {s: i for i, s in enumerate(rows)}
    out = [0] * len(rows)
    for j, s in enumerate(cols):
        for f in facets(s):
            out[ridx[f]] |= 1 << j
    return BitMatrix(len(rows), len(cols), out)
