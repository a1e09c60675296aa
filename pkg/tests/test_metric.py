import random

import pytest

from crosscap3.curve_graph import OneSided, TwoSided
from crosscap3.errors import MarginError
from crosscap3.metric import (
    all_pairs_distances,
    bottleneck_triangle,
    check_bottleneck_property,
    check_distance_stability,
    check_subdivision_isometry,
    four_point_delta,
    interval,
    separates,
    thinness_report,
    tree_comparison,
)
from crosscap3.tet_tree import tree_distance


def floyd_warshall(vertices, adjacency):
    # Independent distance oracle.
    inf = float("inf")
    d = {u: {v: (0 if u == v else inf) for v in vertices} for u in vertices}
    for u in vertices:
        for v in adjacency[u]:
            d[u][v] = 1
    for k in vertices:
        for i in vertices:
            dik = d[i][k]
            for j in vertices:
                if dik + d[k][j] < d[i][j]:
                    d[i][j] = dik + d[k][j]
    return d


class TestDistances:
    def test_examples(self, dtable):
        t = dtable(2)
        assert t.d(0, 1) == 1
        assert t.d(0, 4) == 2  # fresh vertex of tetrahedron "0"

    def test_agrees_with_floyd_warshall(self, ball, cgraph):
        b = ball(1)
        oracle = floyd_warshall(list(b.vertices()), b.adjacency)
        t = all_pairs_distances(b)
        for u in b.vertices():
            for v in b.vertices():
                assert t.d(u, v) == oracle[u][v]
        cg = cgraph(1)
        oracle = floyd_warshall(cg.vertices, cg.adjacency)
        tc = all_pairs_distances(cg)
        for u in cg.vertices:
            for v in cg.vertices:
                assert tc.d(u, v) == oracle[u][v]

    def test_stability_between_radii(self, dtable, ctable):
        for n in range(3):
            assert check_distance_stability(dtable(n), dtable(n + 1))["ok"]
            assert check_distance_stability(ctable(n), ctable(n + 1))["ok"]

    def test_rejects_unknown_graph(self):
        with pytest.raises(TypeError):
            all_pairs_distances({0: {1}, 1: {0}})


class TestInterval:
    def test_degenerate(self, dtable):
        assert interval(dtable(1), 0, 0) == {0}

    def test_adjacent_pair(self, dtable):
        assert interval(dtable(1), 0, 1) == {0, 1}

    def test_distance_two_contains_common_neighbours(self, ball, dtable):
        b, t = ball(2), dtable(2)
        for x in b.vertices():
            for y in b.vertices():
                if t.d(x, y) == 2:
                    common = b.adjacency[x] & b.adjacency[y]
                    assert interval(t, x, y) == common | {x, y}

    def test_matches_direct_scan(self, ball, dtable):
        b, t = ball(2), dtable(2)
        rng = random.Random(1)
        for _ in range(50):
            x, y = rng.sample(range(b.n_vertices), 2)
            direct = {
                v for v in b.vertices() if t.d(x, v) + t.d(v, y) == t.d(x, y)
            }
            assert interval(t, x, y) == direct


class TestSubdivisionIsometry:
    def test_examples(self, dtable, ctable):
        td, tc = dtable(2), ctable(2)
        assert td.d(0, 1) == 1
        assert tc.d(OneSided(0), OneSided(1)) == 2
        assert tc.d(OneSided(0), OneSided(4)) == 4
        assert tc.d(TwoSided(0, 1), OneSided(0)) == 1

    def test_full_check(self, dtable, ctable):
        for n in range(4):
            report = check_subdivision_isometry(dtable(n), ctable(n))
            assert report.ok, report.violations

    def test_rejects_mismatched_sources(self, dtable, ctable):
        with pytest.raises(ValueError):
            check_subdivision_isometry(dtable(1), ctable(2))


class TestBottleneckTriangle:
    def test_branch_example(self, ball, dtable):
        # Fresh vertex 8 sits at tree depth 2 on the branch through face 0;
        # both middle vertices give the shared triangle of the branch.
        b, t = ball(3), dtable(3)
        assert t.d(0, 8) == 2
        for p in (2, 3):
            assert bottleneck_triangle(b, t, 0, 8, p) == {1, 2, 3}

    def test_contains_p_and_separates_everywhere(self, ball, dtable):
        b, t = ball(3), dtable(3)
        margin = [v for v in b.vertices() if b.in_margin(v)]
        checked = 0
        for i, x in enumerate(margin):
            for y in margin[i + 1 :]:
                if t.d(x, y) < 2:
                    continue
                for p in sorted(interval(t, x, y) - {x, y}):
                    delta = bottleneck_triangle(b, t, x, y, p)
                    checked += 1
                    assert p in delta
                    assert separates(b, delta, x, y)
        assert checked > 0

    def test_precondition_errors(self, ball, dtable):
        b, t = ball(3), dtable(3)
        with pytest.raises(ValueError):
            bottleneck_triangle(b, t, 0, 8, 0)  # p equals an endpoint
        with pytest.raises(ValueError):
            bottleneck_triangle(b, t, 0, 8, 1)  # 1 is not between 0 and 8

    def test_margin_violation(self, ball):
        b = ball(2)
        t = all_pairs_distances(b)
        with pytest.raises(MarginError):
            bottleneck_triangle(b, t, 0, 8, 2)  # 8 only lives at the boundary

    def test_separates_validates_endpoints(self, ball):
        with pytest.raises(ValueError):
            separates(ball(1), {0, 1}, 0, 4)


class TestBottleneckProperty:
    def test_radius_three(self, ball, dtable):
        report = check_bottleneck_property(ball(3), dtable(3))
        assert report.ok, report.failures
        assert report.pairs_checked > 0
        assert report.worst_margin <= 1.5

    def test_close_pairs_skipped(self, ball, dtable):
        # Radius 1: every in-margin pair is at distance <= 2, all vacuous.
        report = check_bottleneck_property(ball(1), dtable(1))
        assert report.pairs_checked == 0
        assert report.ok


def brute_thinness(table):
    # Independent oracle: direct triple loop over the distance dict.
    n = len(table)
    d = table.dist
    best = -1
    for x in range(n):
        for y in range(x + 1, n):
            between = [p for p in range(n) if d[x, p] + d[p, y] == d[x, y]]
            for z in range(n):
                side = [
                    q
                    for q in range(n)
                    if d[x, q] + d[q, z] == d[x, z] or d[y, q] + d[q, z] == d[y, z]
                ]
                for p in between:
                    best = max(best, min(int(d[p, q]) for q in side))
    return best


class TestThinness:
    def test_exhaustive_matches_brute_force(self, dtable, ctable):
        for t in (dtable(1), ctable(0)):
            report = thinness_report(t, 100.0)
            assert report.exhaustive
            assert report.max_value == brute_thinness(t)

    def test_tet_graph_bound(self, dtable):
        report = thinness_report(dtable(2), 1.5)
        assert report.exhaustive and report.ok
        assert report.max_value <= 1

    def test_curve_graph_bound(self, ctable):
        report = thinness_report(ctable(2), 3.0)
        assert report.exhaustive and report.ok

    def test_witness_is_attaining(self, ctable):
        t = ctable(1)
        report = thinness_report(t, 3.0)
        x, y, z, p = report.witness
        side = interval(t, x, z) | interval(t, y, z)
        assert p in interval(t, x, y)
        assert min(t.d(p, q) for q in side) == report.max_value

    def test_endpoint_triples_contribute_zero(self, dtable):
        # With z equal to an endpoint the side intervals absorb every p.
        t = dtable(2)
        rng = random.Random(2)
        for _ in range(30):
            x, y = rng.sample(range(len(t)), 2)
            for z in (x, y):
                side = interval(t, x, z) | interval(t, y, z)
                assert all(p in side for p in interval(t, x, y))

    def test_sampling_deterministic_and_bounded(self, dtable):
        t = dtable(2)
        full = thinness_report(t, 1.5)
        a = thinness_report(t, 1.5, triple_threshold=0, sample_cap=500, seed=3)
        b = thinness_report(t, 1.5, triple_threshold=0, sample_cap=500, seed=3)
        assert not a.exhaustive
        assert a.max_value == b.max_value and a.witness == b.witness
        assert a.max_value <= full.max_value
        assert a.triples_examined == 500


class TestFourPoint:
    def test_smoke_inequality(self, dtable, ctable):
        # Four-point delta never exceeds twice the interval thinness plus one.
        for t, bound in ((dtable(2), 1.5), (ctable(2), 3.0)):
            thin = thinness_report(t, bound)
            assert four_point_delta(t) <= 2 * thin.max_value + 1

    def test_sampled_is_lower_bound(self, dtable):
        t = dtable(2)
        exact = four_point_delta(t)
        sampled = four_point_delta(t, quad_threshold=0, sample_cap=300, seed=5)
        assert sampled <= exact


class TestTreeComparison:
    def test_root_vertices_map_to_root(self, ball, dtable):
        b = ball(2)
        for v in range(4):
            assert min(b.support[v]) == ""

    def test_distance_bounded_by_tree_distance_plus_one(self, ball, dtable):
        report = tree_comparison(ball(2), dtable(2))
        assert report.diff_max <= 1
        assert report.ratio_max <= 2.0

    def test_chain_bound(self, ball, dtable):
        # Vertices in tetrahedra at tree distance k are at most k + 1 apart.
        b, t = ball(3), dtable(3)
        for u in b.vertices():
            for v in b.vertices():
                k = min(
                    tree_distance(a, c) for a in b.support[u] for c in b.support[v]
                )
                assert t.d(u, v) <= k + 1

    def test_deterministic(self, ball, dtable):
        a = tree_comparison(ball(2), dtable(2))
        b = tree_comparison(ball(2), dtable(2))
        assert a == b
