"""Zigzag modules over F2: limits, colimits, generalized ranks and barcodes.

Two independent routes to the generalized rank live here.

* ``poset_limit`` / ``poset_colimit`` build the limit and colimit of any
  finite diagram by stacking constraints over the direct sum.  They are
  slow but transparent and double as the brute-force oracle.
* ``gen_rank_range`` sweeps outward from a base index, tracking which
  vectors at the base extend to sections (of the module and of its dual).
  The rank is that of the pairing between the two subspaces.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .f2linalg import (
    BitMatrix,
    _insert,
    dot,
    hstack,
    inverse,
    kernel_basis,
    random_invertible,
    rank,
)

FORWARD = "forward"
BACKWARD = "backward"
_ALIASES = {"f": FORWARD, "forward": FORWARD, "b": BACKWARD, "backward": BACKWARD}


def _direction(d: str) -> str:
    try:
        return _ALIASES[d]
    except KeyError:
        raise ValueError(f"unknown arrow direction {d!r}") from None


# -- finite diagrams ------------------------------------------------------

def _offsets(dims: Sequence[int]) -> list[int]:
    out = [0]
    for d in dims:
        out.append(out[-1] + d)
    return out


def _mask(d: int) -> int:
    return (1 << d) - 1


def poset_limit(dims: Sequence[int], arrows: Sequence[tuple[int, int, BitMatrix]]):
    """Sections of a diagram as vectors of the direct sum.

    ``arrows`` holds ``(u, w, A)`` with ``A: M_u -> M_w``.  Returns the
    kernel basis of the stacked constraint ``A v_u = v_w`` for every arrow,
    together with the block offsets.
    """
    off = _offsets(dims)
    rows = []
    for u, w, a in arrows:
        if a.shape != (dims[w], dims[u]):
            raise ValueError(f"arrow {u}->{w} has shape {a.shape}, expected {(dims[w], dims[u])}")
        for r in range(a.nrows):
            rows.append((a.rows[r] << off[u]) | (1 << (off[w] + r)))
    constraint = BitMatrix(len(rows), off[-1], rows)
    return kernel_basis(constraint), off


class _Quotient:
    """The quotient of F2^n by a subspace, with canonical coordinates."""

    def __init__(self, n: int, relations: Iterable[int]):
        self.pivots: dict[int, int] = {}
        for v in relations:
            _insert(self.pivots, v)
        self.free = [i for i in range(n) if i not in self.pivots]
        self._slot = {pos: i for i, pos in enumerate(self.free)}

    @property
    def dim(self) -> int:
        return len(self.free)

    def coords(self, x: int) -> int:
        pivots = self.pivots
        out = 0
        while x:
            h = x.bit_length() - 1
            p = pivots.get(h)
            if p is not None:
                x ^= p
            else:
                out |= 1 << self._slot[h]
                x ^= 1 << h
        return out


def poset_colimit(dims: Sequence[int], arrows: Sequence[tuple[int, int, BitMatrix]]):
    """The direct sum modulo ``j_u(v) - j_w(A v)``; returns (quotient, offsets)."""
    off = _offsets(dims)
    rel = []
    for u, w, a in arrows:
        if a.shape != (dims[w], dims[u]):
            raise ValueError(f"arrow {u}->{w} has shape {a.shape}, expected {(dims[w], dims[u])}")
        for i, col in enumerate(a.columns()):
            rel.append((1 << (off[u] + i)) | (col << off[w]))
    return _Quotient(off[-1], rel), off


def poset_gen_rank(dims, arrows, base: int = 0) -> int:
    """Rank of the limit-to-colimit map of a connected diagram, via node ``base``."""
    sections, off = poset_limit(dims, arrows)
    quot, _ = poset_colimit(dims, arrows)
    lo, d = off[base], dims[base]
    images = [quot.coords(((s >> lo) & _mask(d)) << lo) for s in sections]
    return rank(BitMatrix.from_columns(quot.dim, images))


# -- zigzag modules -------------------------------------------------------

class ZigzagModule:
    """Spaces ``F2^dims[i]`` joined by ``arrows[i]`` between i and i+1.

    A forward arrow is a ``dims[i+1] x dims[i]`` matrix, a backward arrow a
    ``dims[i] x dims[i+1]`` matrix.
    """

    def __init__(self, dims: Sequence[int], arrows: Sequence[tuple[str, BitMatrix]]):
        dims = [int(d) for d in dims]
        if not dims:
            raise ValueError("a zigzag module needs at least one space")
        if any(d < 0 for d in dims):
            raise ValueError("dimensions must be non-negative")
        if len(arrows) != len(dims) - 1:
            raise ValueError(f"{len(dims)} spaces need {len(dims) - 1} arrows, got {len(arrows)}")
        norm = []
        for i, (direction, m) in enumerate(arrows):
            direction = _direction(direction)
            want = (dims[i + 1], dims[i]) if direction == FORWARD else (dims[i], dims[i + 1])
            if m.shape != want:
                raise ValueError(f"arrow {i} ({direction}) has shape {m.shape}, expected {want}")
            norm.append((direction, m))
        self.dims = dims
        self.arrows = norm

    @property
    def n(self) -> int:
        """Index of the last space."""
        return len(self.dims) - 1

    @property
    def directions(self) -> list[str]:
        return [d for d, _ in self.arrows]

    def __repr__(self) -> str:
        arrows = "".join("→" if d == FORWARD else "←" for d in self.directions)
        return f"ZigzagModule(dims={self.dims}, arrows={arrows!r})"

    def dual(self) -> "ZigzagModule":
        """Pointwise dual: transposed matrices, reversed arrows."""
        flip = {FORWARD: BACKWARD, BACKWARD: FORWARD}
        return ZigzagModule(self.dims, [(flip[d], m.T) for d, m in self.arrows])

    def conjugate(self, changes: Sequence[BitMatrix]) -> "ZigzagModule":
        """Isomorphic module with ``changes[i]`` applied as new basis at index i."""
        inv = [inverse(p) for p in changes]
        arrows = []
        for i, (d, m) in enumerate(self.arrows):
            if d == FORWARD:
                arrows.append((d, changes[i + 1] @ m @ inv[i]))
            else:
                arrows.append((d, changes[i] @ m @ inv[i + 1]))
        return ZigzagModule(self.dims, arrows)

    def _check_range(self, s: int, e: int) -> None:
        if not 0 <= s <= e <= self.n:
            raise ValueError(f"invalid range [{s}, {e}] for indices 0..{self.n}")

    def _diagram(self, s: int, e: int):
        dims = self.dims[s : e + 1]
        arrows = []
        for i in range(s, e):
            d, m = self.arrows[i]
            if d == FORWARD:
                arrows.append((i - s, i - s + 1, m))
            else:
                arrows.append((i - s + 1, i - s, m))
        return dims, arrows

    # The three operations below follow the textbook description and serve
    # as reference implementations.

    def limit(self, s: int, e: int) -> tuple[int, list[BitMatrix]]:
        """Dimension of the limit over [s, e] and projections to each space."""
        self._check_range(s, e)
        dims, arrows = self._diagram(s, e)
        sections, off = poset_limit(dims, arrows)
        proj = []
        for i, d in enumerate(dims):
            cols = [(v >> off[i]) & _mask(d) for v in sections]
            proj.append(BitMatrix.from_columns(d, cols))
        return len(sections), proj

    def colimit(self, s: int, e: int) -> tuple[int, list[BitMatrix]]:
        """Dimension of the colimit over [s, e] and the maps from each space."""
        self._check_range(s, e)
        dims, arrows = self._diagram(s, e)
        quot, off = poset_colimit(dims, arrows)
        inj = []
        for i, d in enumerate(dims):
            inj.append(BitMatrix.from_columns(quot.dim, [quot.coords(1 << (off[i] + j)) for j in range(d)]))
        return quot.dim, inj

    def gen_rank_stacked(self, s: int, e: int) -> int:
        self._check_range(s, e)
        dims, arrows = self._diagram(s, e)
        return poset_gen_rank(dims, arrows, 0)

    # -- fast route -------------------------------------------------------

    def _steps(self, base: int, right: bool) -> list[tuple[bool, BitMatrix]]:
        """Arrows met walking away from ``base``, as (points_outward, matrix)."""
        if right:
            return [(d == FORWARD, m) for d, m in self.arrows[base:]]
        return [(d == BACKWARD, m) for d, m in reversed(self.arrows[:base])]

    def extendable(self, base: int, right: bool) -> list[list[int]]:
        """Subspaces of ``M_base`` that extend to sections over growing ranges.

        Entry ``j`` is a basis of the vectors at ``base`` extending to a
        section over the ``j`` spaces walked so far on that side (entry 0 is
        the whole space).
        """
        d0 = self.dims[base]
        out = [[1 << i for i in range(d0)]]
        # pairs (vector at base, vector at current index) packed as a | c << d0
        pairs = [(1 << i) | (1 << (i + d0)) for i in range(d0)]
        for outward, m in self._steps(base, right):
            if outward:
                nxt = []
                for v in pairs:
                    nxt.append((v & _mask(d0)) | (m.apply(v >> d0) << d0))
            else:
                # keep combinations whose current part lies in the image of m
                cur = BitMatrix.from_columns(m.nrows, [v >> d0 for v in pairs])
                ker = kernel_basis(hstack([cur, m]))
                k = len(pairs)
                nxt = []
                for x in ker:
                    a = 0
                    for i in range(k):
                        if (x >> i) & 1:
                            a ^= pairs[i] & _mask(d0)
                    nxt.append(a | ((x >> k) << d0))
            piv: dict[int, int] = {}
            pairs = [v for v in nxt if _insert(piv, v)]
            piv = {}
            out.append([a for a in (v & _mask(d0) for v in pairs) if _insert(piv, a)])
            if not out[-1]:
                # nothing extends; further steps cannot bring anything back
                break
        return out

    def gen_rank_range(self, s: int, e: int) -> int:
        """Generalized rank of the range [s, e] (number of bars containing it)."""
        self._check_range(s, e)
        return self.ranks_from(s, e)[e - s]

    def ranks_from(self, s: int, e_max: int | None = None) -> list[int]:
        """Generalized ranks of [s, e] for e = s..e_max (one sweep each way)."""
        e_max = self.n if e_max is None else e_max
        self._check_range(s, e_max)
        lim = self.extendable(s, True)
        dual = self.dual().extendable(s, True)
        out = []
        for j in range(e_max - s + 1):
            if j >= len(lim) or j >= len(dual):
                out.append(0)
            else:
                out.append(pairing_rank(dual[j], lim[j]))
        return out

    def ranks_nested(
        self, base: int, ranges: Sequence[tuple[int, int]], stop_at_zero: bool = False
    ) -> list[int]:
        """Generalized ranks of several ranges that all contain ``base``.

        Sections over [s, e] restricted to ``base`` are exactly the vectors
        extending both to the left as far as s and to the right as far as e,
        so four sweeps out of ``base`` answer every range.
        """
        for s, e in ranges:
            self._check_range(s, e)
            if not s <= base <= e:
                raise ValueError(f"range [{s}, {e}] does not contain {base}")
        d = self.dims[base]
        dual = self.dual()
        sides = [
            self.extendable(base, False),
            self.extendable(base, True),
            dual.extendable(base, False),
            dual.extendable(base, True),
        ]
        out = []
        for s, e in ranges:
            if stop_at_zero and out and out[-1] == 0:
                out.append(0)
                continue
            reach = (base - s, e - base, base - s, e - base)
            parts = [side[j] if j < len(side) else [] for side, j in zip(sides, reach)]
            lim = intersect(parts[0], parts[1], d)
            colim = intersect(parts[2], parts[3], d)
            out.append(pairing_rank(colim, lim))
        return out

    def barcode(self) -> "Barcode":
        n = self.n
        rk = [[0] * (n + 1) for _ in range(n + 1)]
        for s in range(n + 1):
            for j, r in enumerate(self.ranks_from(s)):
                rk[s][s + j] = r

        def get(b, d):
            if b < 0 or d > n or b > d:
                return 0
            return rk[b][d]

        bars = []
        for b in range(n + 1):
            for d in range(b, n + 1):
                mult = get(b, d) - get(b - 1, d) - get(b, d + 1) + get(b - 1, d + 1)
                if mult < 0:
                    raise ArithmeticError(f"negative multiplicity {mult} for bar [{b}, {d}]")
                bars.extend([(b, d)] * mult)
        return Barcode(n, tuple(bars))


def intersect(u: Sequence[int], w: Sequence[int], dim: int) -> list[int]:
    """Basis of span(u) ∩ span(w) inside F2^dim."""
    if not u or not w:
        return []
    m = hstack([BitMatrix.from_columns(dim, list(u)), BitMatrix.from_columns(dim, list(w))])
    out, piv = [], {}
    for x in kernel_basis(m):
        v = 0
        for i in range(len(u)):
            if (x >> i) & 1:
                v ^= u[i]
        if _insert(piv, v):
            out.append(v)
    return out


def pairing_rank(dual_vecs: Sequence[int], vecs: Sequence[int]) -> int:
    """Rank of the matrix of pairings ``<k, v>``."""
    if not dual_vecs or not vecs:
        return 0
    rows = []
    for k in dual_vecs:
        r = 0
        for j, v in enumerate(vecs):
            if dot(k, v):
                r |= 1 << j
        rows.append(r)
    return rank(BitMatrix(len(rows), len(vecs), rows))


# -- barcodes -------------------------------------------------------------

@dataclass(frozen=True)
class Barcode:
    """Multiset of closed integer bars ``[b, d]`` on indices 0..n, kept sorted."""

    n: int
    bars: tuple[tuple[int, int], ...]

    def __post_init__(self):
        bars = tuple(sorted((int(b), int(d)) for b, d in self.bars))
        for b, d in bars:
            if not 0 <= b <= d <= self.n:
                raise ValueError(f"bar [{b}, {d}] outside 0..{self.n}")
        object.__setattr__(self, "bars", bars)

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)

    def multiplicity(self) -> Counter:
        return Counter(self.bars)

    def dims(self) -> list[int]:
        out = [0] * (self.n + 1)
        for b, d in self.bars:
            for i in range(b, d + 1):
                out[i] += 1
        return out

    def covering(self, s: int, e: int) -> int:
        """Number of bars containing [s, e]."""
        return sum(1 for b, d in self.bars if b <= s and e <= d)


def interval_module(bc: Barcode, directions: Sequence[str]) -> ZigzagModule:
    """Direct sum of interval modules with identity maps inside each bar."""
    directions = [_direction(d) for d in directions]
    if len(directions) != bc.n:
        raise ValueError(f"{bc.n + 1} spaces need {bc.n} directions")
    members = [[k for k, (b, d) in enumerate(bc.bars) if b <= i <= d] for i in range(bc.n + 1)]
    pos = [{k: j for j, k in enumerate(m)} for m in members]
    arrows = []
    for i, direction in enumerate(directions):
        src, dst = (i, i + 1) if direction == FORWARD else (i + 1, i)
        m = BitMatrix.zeros(len(members[dst]), len(members[src]))
        for k, j in pos[src].items():
            if k in pos[dst]:
                m[pos[dst][k], j] = 1
        arrows.append((direction, m))
    return ZigzagModule([len(m) for m in members], arrows)


def synth_from_bars(bc: Barcode, directions: Sequence[str], seed: int) -> ZigzagModule:
    """Interval decomposable module with the given bars, hidden by random bases."""
    plain = interval_module(bc, directions)
    rng = np.random.default_rng(seed)
    return plain.conjugate([random_invertible(rng, d) for d in plain.dims])


def landscape_from_barcode(bc: Barcode | Iterable[tuple[int, int]], k: int, x: float) -> float:
    if k < 1:
        raise ValueError("k starts at 1")
    vals = sorted((max(min(x - b, d - x), 0) for b, d in bc), reverse=True)
    return vals[k - 1] if k <= len(vals) else 0
