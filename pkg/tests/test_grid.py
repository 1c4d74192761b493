import numpy as np
import pytest
from conftest import random_grid

from stlandscape.grid import (
    BoundaryPath,
    GridPoint,
    SquareRegion,
    boundary_path,
    build_grid,
    direct_sum,
    fences,
    interval_grid,
    oracle_interval_rank,
    poset_leq,
    region_ranks,
    square,
)
from stlandscape.signals import PointCloud, WindowedClouds

P = GridPoint


def test_poset_examples():
    assert poset_leq(P(2, 0), P(3, 1))
    assert not poset_leq(P(3, 0), P(2, 1))
    assert poset_leq(P(1, 0), P(1, 3))
    assert not poset_leq(P(2, 1), P(3, 0))
    assert not poset_leq(P(2, 0), P(4, 0))


class TestFences:
    def test_radius_one(self):
        lower, upper = fences(SquareRegion(P(2, 2), 1))
        assert lower == [P(2, 1)]
        assert upper == [P(1, 3), P(2, 3), P(3, 3)]

    def test_radius_zero(self):
        assert fences(SquareRegion(P(3, 1), 0)) == ([P(3, 1)], [P(3, 1)])

    def test_radius_three(self):
        lower, upper = fences(SquareRegion(P(4, 4), 3))
        assert [x.col for x in lower] == list(range(2, 7))
        assert [x.col for x in upper] == list(range(1, 8))
        assert all(x.row == 1 for x in lower) and all(x.row == 7 for x in upper)
        # ends of the lower fence are minimal (even), ends of the upper are maximal (odd)
        assert lower[0].col % 2 == 0 and lower[-1].col % 2 == 0
        assert upper[0].col % 2 == 1 and upper[-1].col % 2 == 1

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            fences(SquareRegion(P(0, 2), 1), cols=5, rows=5)

    def test_fences_are_extremal(self):
        for c in range(3, 8):
            for e in range(0, 4):
                r = SquareRegion(P(c, 5), e)
                nodes = set(r.nodes())
                minimal = {x for x in nodes if not any(y != x and poset_leq(y, x) for y in nodes)}
                maximal = {x for x in nodes if not any(y != x and poset_leq(x, y) for y in nodes)}
                lower, upper = fences(r)
                assert minimal <= set(lower) and maximal <= set(upper)
                assert min(lower) in minimal and max(lower) in minimal
                assert min(upper) in maximal and max(upper) in maximal


class TestBoundaryPath:
    def test_example(self):
        path = boundary_path(P(2, 2), 1)
        assert path.nodes == (P(2, 1), P(2, 2), P(1, 2), P(1, 3), P(2, 3), P(3, 3))
        assert path.markers == ((1, 1), (0, 5))

    def test_radius_zero(self):
        path = boundary_path(P(4, 1), 0)
        assert path.nodes == (P(4, 1),) and path.markers == ((0, 0),)

    def test_leaves_grid(self):
        with pytest.raises(ValueError):
            boundary_path(P(1, 1), 2, cols=5, rows=5)

    @pytest.mark.parametrize("col", range(3, 10))
    @pytest.mark.parametrize("radius", range(0, 4))
    def test_invariants(self, col, radius):
        center = P(col, 4)
        path = boundary_path(center, radius)
        check_path(path, center, radius)


def check_path(path: BoundaryPath, center, radius):
    for a, b in zip(path.nodes, path.nodes[1:]):
        assert a != b and (poset_leq(a, b) or poset_leq(b, a))
        assert abs(a.col - b.col) + abs(a.row - b.row) == 1
    for e in range(1, radius + 1):
        s, t = path.markers[e]
        s1, t1 = path.markers[e - 1]
        assert s < s1 <= t1 < t
    for e in range(radius + 1):
        sub = path.subpath(e)
        inside = set(SquareRegion(center, e).nodes())
        assert set(sub) <= inside
        lower, upper = fences(SquareRegion(center, e))
        assert list(sub[: len(lower)]) == lower
        assert list(sub[len(sub) - len(upper) :]) == upper


class TestBuildGrid:
    def test_vertices_only(self):
        a = PointCloud([[0, 0], [5, 0], [0, 5]])
        b = PointCloud([[10, 0], [15, 0], [10, 5]])
        g = build_grid(WindowedClouds((a, b)), [0.0], 0)
        assert g.node_dims.tolist() == [[3, 6, 3]]

    def test_huge_scale_connects(self):
        rng = np.random.default_rng(0)
        wc = WindowedClouds(tuple(PointCloud(rng.normal(size=(5, 2))) for _ in range(3)))
        g = build_grid(wc, [0.0, 100.0], 0)
        assert g.node_dims[1].tolist() == [1] * 5
        assert g.node_dims[0].tolist() == [5, 10, 5, 10, 5]
        g1 = build_grid(wc, [0.0, 100.0], 1)
        # everything is a filled clique at the top scale
        assert g1.node_dims[1].tolist() == [0] * 5

    def test_rejects_bad_epsilons(self):
        wc = WindowedClouds((PointCloud([[0, 0]]),))
        with pytest.raises(ValueError):
            build_grid(wc, [1.0, 0.5], 1)
        with pytest.raises(ValueError):
            build_grid(wc, [], 1)

    @pytest.mark.parametrize("seed", range(6))
    def test_commutes(self, seed):
        g = random_grid(np.random.default_rng(seed), 3, 3, p=int(seed % 2))
        assert g.commutes()

    def test_betti_matches_direct_homology(self):
        from stlandscape.homology import homology_basis

        rng = np.random.default_rng(4)
        g = random_grid(rng, 3, 4, p=1)
        # each node against a from-scratch basis of its slice complex
        for row, eps in enumerate(g.epsilons):
            for col in range(g.cols):
                k = g.bases[row][col].source.fc.at(eps)
                assert homology_basis(k, 1).betti == g.node_dims[row, col]


class TestIntervalGrids:
    def test_single_square(self):
        g = interval_grid(5, 4, square((2, 2), 1))
        assert g.commutes()
        assert region_ranks(g, P(2, 2)) == [1, 1]
        assert region_ranks(g, P(2, 1)) == [1, 0]

    def test_zero_module(self):
        g = interval_grid(7, 5, [])
        assert all(r == 0 for c in range(7) for row in range(5) for r in region_ranks(g, P(c, row)))

    def test_oracle_single_point(self):
        rng = np.random.default_rng(1)
        g = random_grid(rng, 3, 3)
        for c in range(g.cols):
            for r in range(g.rows):
                assert oracle_interval_rank(g, SquareRegion(P(c, r), 0)) == g.node_dims[r, c]

    def test_oracle_on_interval(self):
        sup = square((3, 2), 1)
        g = interval_grid(7, 5, sup)
        for c in range(7):
            for r in range(5):
                for e in range(g.eps_bound(P(c, r)) + 1):
                    inside = set(SquareRegion(P(c, r), e).nodes()) <= sup
                    assert oracle_interval_rank(g, SquareRegion(P(c, r), e)) == int(inside)

    def test_rectangle_support(self):
        g = direct_sum([interval_grid(7, 6, square((2, 2), 1)), interval_grid(7, 6, square((2, 3), 1))])
        assert g.commutes()
        assert region_ranks(g, P(2, 2)) == [2, 1, 0]
        assert region_ranks(g, P(2, 3)) == [2, 1, 0]


def compare_with_oracle(g):
    for c in range(g.cols):
        for r in range(g.rows):
            x = P(c, r)
            ranks = region_ranks(g, x, stop_at_zero=False)
            assert len(ranks) == g.eps_bound(x) + 1
            assert all(a >= b for a, b in zip(ranks, ranks[1:]))
            for e, rk in enumerate(ranks):
                assert rk == oracle_interval_rank(g, SquareRegion(x, e)), (c, r, e)


@pytest.mark.parametrize("seed", range(8))
def test_path_ranks_match_oracle_small(seed):
    rng = np.random.default_rng(1000 + seed)
    compare_with_oracle(random_grid(rng, 3, 4, p=seed % 2))


@pytest.mark.parametrize("seed", range(3))
def test_path_ranks_match_oracle_larger(seed):
    rng = np.random.default_rng(2000 + seed)
    compare_with_oracle(random_grid(rng, 4, 5, p=1, lo=5, hi=7))


def test_path_ranks_match_oracle_on_sums_of_intervals():
    rng = np.random.default_rng(7)
    for _ in range(5):
        parts = []
        for _ in range(3):
            c0, c1 = sorted(rng.integers(0, 9, size=2).tolist())
            r0, r1 = sorted(rng.integers(0, 7, size=2).tolist())
            parts.append(interval_grid(9, 7, [(c, r) for c in range(c0, c1 + 1) for r in range(r0, r1 + 1)]))
        compare_with_oracle(direct_sum(parts))
