"""F2 homology of complexes and maps induced by subcomplex inclusions.

A :class:`FilteredHomology` runs the standard column reduction once over a
whole filtration.  Because reduced boundary columns only ever absorb earlier
columns, the reduction restricted to any prefix of the filtration is again a
valid reduction, so a single pass yields explicit homology bases for every
scale.  A plain complex is handled as a one-step filtration.

Every basis element has a distinct "low" (highest index) p-simplex:

* a reduced boundary column ``R`` whose low was killed at or before the scale;
* a cycle ``V`` born at its low and still alive at the scale.

Expressing a cycle in homology is then a single pass of eliminations, which
is what makes inclusion-induced maps cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .complex import FilteredComplex, SimplicialComplex, facets
from .f2linalg import BitMatrix, iter_bits


class BrokenBasisError(ArithmeticError):
    """A cycle could not be expressed in a homology basis (internal invariant violated)."""


def _as_filtration(k: SimplicialComplex, p: int) -> FilteredComplex:
    dims = [list(k.of_dim(q)) for q in range(p + 2)]
    return FilteredComplex(dims, [np.zeros(len(d)) for d in dims])


class FilteredHomology:
    """Reduction of the p-th homology of a filtration.

    Attributes of note: ``cycles[e]`` is the cycle born with p-simplex ``e``
    (only for positive simplices), ``killer[e]`` is the reduced boundary
    column whose low is ``e`` and ``death[e]`` its filtration value.
    """

    def __init__(self, fc: FilteredComplex, p: int, label: str = ""):
        if p < 0:
            raise ValueError("homology dimension must be non-negative")
        self.fc = fc
        self.p = p
        self.label = label
        chains = fc.of_dim(p)
        self.birth = fc.value_of_dim(p)
        self.cycles: dict[int, int] = {}
        if p == 0:
            self.cycles = {i: 1 << i for i in range(len(chains))}
        else:
            row = fc.index(p - 1)
            pivots: dict[int, tuple[int, int]] = {}
            for j, s in enumerate(chains):
                col = 0
                for f in facets(s):
                    col ^= 1 << row[f]
                comb = 1 << j
                while col:
                    h = col.bit_length() - 1
                    piv = pivots.get(h)
                    if piv is None:
                        pivots[h] = (col, comb)
                        break
                    col ^= piv[0]
                    comb ^= piv[1]
                else:
                    self.cycles[j] = comb

        self.killer: dict[int, int] = {}
        self.death: dict[int, float] = {}
        cofaces = fc.of_dim(p + 1)
        coface_values = fc.value_of_dim(p + 1)
        if cofaces:
            row = fc.index(p)
            killer = self.killer
            for j, s in enumerate(cofaces):
                col = 0
                for f in facets(s):
                    col ^= 1 << row[f]
                while col:
                    h = col.bit_length() - 1
                    r = killer.get(h)
                    if r is None:
                        killer[h] = col
                        self.death[h] = float(coface_values[j])
                        break
                    col ^= r
        self._positive = np.array(sorted(self.cycles), dtype=np.int64)

    def basis_at(self, eps: float = 0.0) -> "HomologyBasis":
        n = self.fc.count_at(self.p, eps)
        alive = []
        for e in self._positive[: np.searchsorted(self._positive, n)]:
            e = int(e)
            d = self.death.get(e)
            if d is None or d > eps:
                alive.append(e)
        return HomologyBasis(self, float(eps), n, tuple(alive))

    def diagram(self) -> list[tuple[float, float]]:
        """Finite and infinite (birth, death) pairs, in birth order."""
        out = []
        for e in self._positive:
            e = int(e)
            out.append((float(self.birth[e]), self.death.get(e, float("inf"))))
        return out


@dataclass(frozen=True, eq=False)
class HomologyBasis:
    """Explicit basis of H_p of one complex (a filtration slice).

    Chain vectors are ints over the complex's p-simplices in ``simplices``
    order.  ``cycle_reps[i]`` represents the i-th homology basis vector.
    """

    source: FilteredHomology
    eps: float
    n_chains: int
    alive: tuple[int, ...]
    _slot: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._slot.update({e: i for i, e in enumerate(self.alive)})

    @property
    def p(self) -> int:
        return self.source.p

    @property
    def complex_ref(self) -> str:
        return f"{self.source.label}@{self.eps!r}"

    @property
    def betti(self) -> int:
        return len(self.alive)

    @property
    def simplices(self) -> list:
        return self.source.fc.of_dim(self.p)[: self.n_chains]

    @property
    def cycle_reps(self) -> list[int]:
        return [self.source.cycles[e] for e in self.alive]

    @property
    def boundary_basis(self) -> list[int]:
        eps = self.eps
        return [r for e, r in sorted(self.source.killer.items()) if self.source.death[e] <= eps]

    def coordinates(self, z: int) -> int:
        """Homology coordinates (bitmask over ``cycle_reps``) of the cycle ``z``."""
        src = self.source
        killer, death, cycles, slot = src.killer, src.death, src.cycles, self._slot
        eps = self.eps
        coords = 0
        while z:
            h = z.bit_length() - 1
            r = killer.get(h)
            if r is not None and death[h] <= eps:
                z ^= r
                continue
            i = slot.get(h)
            if i is None:
                raise BrokenBasisError(
                    f"chain with low simplex {h} is not a cycle of {self.complex_ref}"
                )
            z ^= cycles[h]
            coords ^= 1 << i
        return coords


def homology_basis(k: SimplicialComplex, p: int, label: str = "") -> HomologyBasis:
    """Homology basis of a single complex; chains follow the complex's sorted order."""
    return FilteredHomology(_as_filtration(k, p), p, label).basis_at(0.0)


def remap(v: int, index: Sequence[int]) -> int:
    out = 0
    for i in iter_bits(v):
        out |= 1 << int(index[i])
    return out


def induced_map(
    src: HomologyBasis, dst: HomologyBasis, inclusion: Sequence[int] | None = None
) -> BitMatrix:
    """Matrix (betti(dst) x betti(src)) of H_p(src) -> H_p(dst).

    ``inclusion[i]`` is the index in ``dst`` of the i-th p-simplex of ``src``;
    ``None`` means both share one index space (prefixes of one filtration).
    """
    if src.p != dst.p:
        raise ValueError("homology dimensions differ")
    cols = []
    for z in src.cycle_reps:
        if inclusion is not None:
            z = remap(z, inclusion)
        cols.append(dst.coordinates(z))
    return BitMatrix.from_columns(dst.betti, cols)


def inclusion_indices(src_simplices: Sequence, dst_index: dict) -> np.ndarray:
    """Positions in the destination of every source simplex (all must be present)."""
    try:
        return np.array([dst_index[s] for s in src_simplices], dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"simplex {exc.args[0]} missing from the target complex") from None
