import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stlandscape.f2linalg import BitMatrix, random_invertible, random_matrix, rank
from stlandscape.zigzag import (
    BACKWARD,
    FORWARD,
    Barcode,
    ZigzagModule,
    interval_module,
    landscape_from_barcode,
    synth_from_bars,
)


def col(*bits):
    return BitMatrix.from_dense(np.array(bits, dtype=np.uint8).reshape(-1, 1))


def example_modules():
    """0 ← F → F² ← F → 0, differing only in the two middle maps."""
    z_in = BitMatrix.zeros(0, 1)
    m = ZigzagModule([0, 1, 2, 1, 0], [("b", z_in), ("f", col(1, 0)), ("b", col(0, 1)), ("f", z_in)])
    n = ZigzagModule([0, 1, 2, 1, 0], [("b", z_in), ("f", col(1, 1)), ("b", col(1, 1)), ("f", z_in)])
    return m, n


def bars_strategy(max_n=12):
    return st.integers(0, max_n).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.integers(0, n).flatmap(lambda b: st.tuples(st.just(b), st.integers(b, n))), max_size=6),
            st.lists(st.sampled_from([FORWARD, BACKWARD]), min_size=n, max_size=n),
            st.integers(0, 2**31),
        )
    )


class TestExampleModules:
    def test_middle_ranks(self):
        m, n = example_modules()
        assert m.gen_rank_range(2, 2) == 2
        assert m.gen_rank_range(1, 2) == 1
        assert m.gen_rank_range(1, 3) == 0
        assert n.gen_rank_range(1, 3) == 1

    def test_barcodes(self):
        m, n = example_modules()
        assert m.barcode().bars == ((1, 2), (2, 3))
        assert n.barcode().bars == ((1, 3), (2, 2))

    def test_same_adjacent_ranks(self):
        m, n = example_modules()
        assert m.dims == n.dims
        for i in range(m.n):
            assert m.gen_rank_range(i, i + 1) == n.gen_rank_range(i, i + 1)


class TestLimitColimit:
    def test_single_space(self):
        z = ZigzagModule([3], [])
        d, proj = z.limit(0, 0)
        assert d == 3 and proj[0] == BitMatrix.identity(3)
        d, inj = z.colimit(0, 0)
        assert d == 3 and inj[0] == BitMatrix.identity(3)

    def test_identity_arrow(self):
        z = ZigzagModule([1, 1], [("f", BitMatrix.identity(1))])
        assert z.limit(0, 1)[0] == 1
        assert z.colimit(0, 1)[0] == 1

    def test_one_then_zero(self):
        # F ->1 F <-0 F: middle equals first and middle is 0, third is free
        z = ZigzagModule([1, 1, 1], [("f", BitMatrix.identity(1)), ("b", BitMatrix.zeros(1, 1))])
        d, proj = z.limit(0, 2)
        assert d == 1
        assert proj[0].is_zero() and proj[1].is_zero() and rank(proj[2]) == 1

    def test_colimit_kills_everything(self):
        z = ZigzagModule([0, 1, 0], [("b", BitMatrix.zeros(0, 1)), ("f", BitMatrix.zeros(0, 1))])
        assert z.colimit(0, 2)[0] == 0

    def test_projections_satisfy_constraints(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            dims = rng.integers(0, 4, size=5).tolist()
            arrows = []
            for i in range(4):
                if rng.random() < 0.5:
                    arrows.append(("f", random_matrix(rng, dims[i + 1], dims[i])))
                else:
                    arrows.append(("b", random_matrix(rng, dims[i], dims[i + 1])))
            z = ZigzagModule(dims, arrows)
            d, proj = z.limit(0, 4)
            for i, (direction, a) in enumerate(z.arrows):
                if direction == FORWARD:
                    assert a @ proj[i] == proj[i + 1]
                else:
                    assert a @ proj[i + 1] == proj[i]
            c, inj = z.colimit(0, 4)
            for i, (direction, a) in enumerate(z.arrows):
                if direction == FORWARD:
                    assert inj[i + 1] @ a == inj[i]
                else:
                    assert inj[i] @ a == inj[i + 1]


def test_shape_validation():
    with pytest.raises(ValueError):
        ZigzagModule([1, 2], [("f", BitMatrix.zeros(1, 2))])
    with pytest.raises(ValueError):
        ZigzagModule([1, 2], [])
    with pytest.raises(ValueError):
        ZigzagModule([1, 1], [("sideways", BitMatrix.identity(1))])
    z = ZigzagModule([1], [])
    with pytest.raises(ValueError):
        z.gen_rank_range(0, 1)


class TestSynth:
    def test_full_bar_identity(self):
        bc = Barcode(3, ((0, 3),))
        z = interval_module(bc, "fbf")
        assert all(m == BitMatrix.identity(1) for _, m in z.arrows)

    def test_empty_is_zero(self):
        z = synth_from_bars(Barcode(4, ()), "ffbb", seed=1)
        assert z.dims == [0] * 5
        assert z.barcode().bars == ()

    @settings(max_examples=80, deadline=None)
    @given(bars_strategy())
    def test_round_trip(self, case):
        n, bars, dirs, seed = case
        bc = Barcode(n, tuple(bars))
        z = synth_from_bars(bc, dirs, seed)
        assert z.dims == bc.dims()
        assert z.barcode() == bc
        for s in range(n + 1):
            ranks = z.ranks_from(s)
            for e in range(s, n + 1):
                assert ranks[e - s] == bc.covering(s, e)


@settings(max_examples=40, deadline=None)
@given(bars_strategy(7))
def test_fast_rank_matches_stacked_limits(case):
    n, bars, dirs, seed = case
    z = synth_from_bars(Barcode(n, tuple(bars)), dirs, seed)
    for s in range(n + 1):
        for e in range(s, n + 1):
            assert z.gen_rank_range(s, e) == z.gen_rank_stacked(s, e)


def test_generic_random_modules_agree_with_stacked():
    rng = np.random.default_rng(11)
    for _ in range(30):
        n = int(rng.integers(1, 6))
        dims = rng.integers(0, 4, size=n + 1).tolist()
        arrows = []
        for i in range(n):
            if rng.random() < 0.5:
                arrows.append(("f", random_matrix(rng, dims[i + 1], dims[i])))
            else:
                arrows.append(("b", random_matrix(rng, dims[i], dims[i + 1])))
        z = ZigzagModule(dims, arrows)
        bc = z.barcode()
        assert bc.dims() == dims
        for s in range(n + 1):
            for e in range(s, n + 1):
                r = z.gen_rank_range(s, e)
                assert r == z.gen_rank_stacked(s, e) == bc.covering(s, e)


def test_order_reversal():
    rng = np.random.default_rng(5)
    for seed in range(20):
        n = 8
        bars = []
        for _ in range(5):
            b = int(rng.integers(0, n + 1))
            bars.append((b, int(rng.integers(b, n + 1))))
        dirs = rng.choice([FORWARD, BACKWARD], size=n).tolist()
        z = synth_from_bars(Barcode(n, tuple(bars)), dirs, seed)
        for s in range(n + 1):
            for e in range(s, n + 1):
                r = z.gen_rank_range(s, e)
                if s > 0:
                    assert z.gen_rank_range(s - 1, e) <= r
                if e < n:
                    assert z.gen_rank_range(s, e + 1) <= r


def test_conjugation_invariance():
    rng = np.random.default_rng(8)
    z = synth_from_bars(Barcode(5, ((0, 2), (1, 5), (3, 3), (2, 4))), "fbbff", seed=3)
    w = z.conjugate([random_invertible(rng, d) for d in z.dims])
    for s in range(6):
        assert z.ranks_from(s) == w.ranks_from(s)


def test_forward_module_matches_rank_of_product():
    rng = np.random.default_rng(2)
    for _ in range(20):
        dims = rng.integers(0, 4, size=6).tolist()
        arrows = [("f", random_matrix(rng, dims[i + 1], dims[i])) for i in range(5)]
        z = ZigzagModule(dims, arrows)
        for s in range(6):
            prod = BitMatrix.identity(dims[s])
            for e in range(s, 6):
                if e > s:
                    prod = arrows[e - 1][1] @ prod
                assert z.gen_rank_range(s, e) == rank(prod)


class TestLandscapeFromBarcode:
    def test_examples(self):
        assert landscape_from_barcode([(1, 5)], 1, 3) == 2
        assert landscape_from_barcode([(1, 5)], 2, 3) == 0
        assert landscape_from_barcode([(0, 4), (2, 6)], 2, 3) == 1

    def test_outside_bar_is_zero(self):
        assert landscape_from_barcode([(2, 4)], 1, 7) == 0

    def test_k_must_be_positive(self):
        with pytest.raises(ValueError):
            landscape_from_barcode([(0, 1)], 0, 0)


def test_nested_ranks_match_direct_ranges():
    rng = np.random.default_rng(21)
    for seed in range(20):
        n = 10
        bars = []
        for _ in range(6):
            b = int(rng.integers(0, n + 1))
            bars.append((b, int(rng.integers(b, n + 1))))
        z = synth_from_bars(Barcode(n, tuple(bars)), rng.choice([FORWARD, BACKWARD], size=n).tolist(), seed)
        base = int(rng.integers(0, n + 1))
        ranges = [(base, base)]
        for _ in range(4):
            s, e = ranges[-1]
            ranges.append((max(0, s - int(rng.integers(0, 3))), min(n, e + int(rng.integers(0, 3)))))
        got = z.ranks_nested(base, ranges)
        assert got == [z.gen_rank_stacked(s, e) for s, e in ranges]


def test_nested_ranks_require_base_inside():
    z = synth_from_bars(Barcode(3, ((0, 3),)), "fff", 0)
    with pytest.raises(ValueError):
        z.ranks_nested(0, [(1, 2)])
