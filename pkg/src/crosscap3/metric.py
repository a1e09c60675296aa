"""Distances, geodesic intervals, bottleneck triangles, and thinness.

All distances are exact breadth-first distances on a generated window.
In-window distances agree with the infinite complex: any excursion outside
the window crosses a separating triangle on the boundary and can be
shortcut through an edge of that triangle without getting longer.  The
distance-stability check between consecutive radii tests this empirically.

Thinness is measured on intervals (the union of all geodesics between two
vertices): for a triple (x, y, z) and a vertex p between x and y, how far p
is from the union of the other two intervals.  This is a consequence of
geodesic thinness and is computable in polynomial time; the exhaustive scan
switches to fixed-seed sampling above a configurable triple count.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .curve_graph import CurveGraphBall, OneSided, TwoSided
from .errors import MarginError
from .tet_tree import TetBall, tree_distance, tree_path

TRIPLE_THRESHOLD = 10_000_000
QUAD_THRESHOLD = 20_000_000
DEFAULT_SAMPLE_CAP = 1_000_000


class DistanceTable:
    """All-pairs distances over a fixed vertex order.

    ``vertices`` fixes the canonical order, ``dist`` is a symmetric integer
    matrix over it.  Construction is one BFS per source over an immutable
    graph; sources are independent, so this is safe to parallelize with a
    deterministic merge, though the implementation is sequential.
    """

    def __init__(self, vertices: list, index: dict, dist: np.ndarray, source):
        self.vertices = vertices
        self.index = index
        self.dist = dist
        self.source = source

    def d(self, u, v) -> int:
        return int(self.dist[self.index[u], self.index[v]])

    def __len__(self) -> int:
        return len(self.vertices)


def _int_adjacency(graph) -> tuple[list, list]:
    if isinstance(graph, TetBall):
        vertices = list(graph.vertices())
        adj = [sorted(graph.adjacency[v]) for v in vertices]
        return vertices, adj
    if isinstance(graph, CurveGraphBall):
        vertices = list(graph.vertices)
        index = {cv: i for i, cv in enumerate(vertices)}
        adj = [[index[nb] for nb in graph.adjacency[cv]] for cv in vertices]
        return vertices, adj
    raise TypeError(f"cannot take distances on {type(graph).__name__}")


def all_pairs_distances(graph) -> DistanceTable:
    """Exact BFS distances on a TetBall 1-skeleton or a CurveGraphBall."""
    vertices, adj = _int_adjacency(graph)
    n = len(vertices)
    dist = np.empty((n, n), dtype=np.int16)
    for s in range(n):
        row = [-1] * n
        row[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            du = row[u] + 1
            for w in adj[u]:
                if row[w] < 0:
                    row[w] = du
                    queue.append(w)
        dist[s] = row
    if dist.min() < 0:
        raise ValueError("graph is not connected")
    return DistanceTable(vertices, {v: i for i, v in enumerate(vertices)}, dist, graph)


def _interval_idx(table: DistanceTable, xi: int, yi: int) -> np.ndarray:
    d = table.dist
    return np.nonzero(d[xi] + d[yi] == d[xi, yi])[0]


def interval(table: DistanceTable, x, y) -> frozenset:
    """The betweenness set: all vertices on some geodesic from x to y."""
    idx = _interval_idx(table, table.index[x], table.index[y])
    return frozenset(table.vertices[i] for i in idx)


# ---------------------------------------------------------------------------
# Subdivision isometry

@dataclass
class SubdivisionReport:
    pairs_checked: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_subdivision_isometry(dd: DistanceTable, dc: DistanceTable) -> SubdivisionReport:
    """Verify the curve-graph metric is the doubled tetrahedron-ball metric.

    For one-sided vertices u, v: d_curve(u, v) = 2 d(u, v); a two-sided
    vertex sits at distance 1 past the nearer of its two endpoints.
    """
    if not isinstance(dc.source, CurveGraphBall) or dc.source.source is not dd.source:
        raise ValueError("tables must come from a ball and its own subdivision")
    n = len(dd)
    one_idx = np.array([dc.index[OneSided(v)] for v in range(n)])
    violations = []
    sub = dc.dist[np.ix_(one_idx, one_idx)]
    bad = np.argwhere(sub != 2 * dd.dist)
    for ui, vi in bad[:5]:
        violations.append(("one_sided", int(ui), int(vi)))
    pairs = n * (n - 1) // 2
    for t in dc.source.two_sided():
        row = dc.dist[dc.index[t], one_idx]
        want = np.minimum(2 * dd.dist[t.u], 2 * dd.dist[t.w]) + 1
        if not np.array_equal(row, want):
            violations.append(("two_sided", t.pair))
        pairs += n
    return SubdivisionReport(pairs_checked=pairs, violations=violations)


def check_distance_stability(small: DistanceTable, big: DistanceTable) -> dict:
    """Distances over the smaller window must be unchanged in the larger one."""
    idx = np.array([big.index[v] for v in small.vertices])
    same = np.array_equal(big.dist[np.ix_(idx, idx)], small.dist)
    return {
        "name": "distance_stability",
        "ok": bool(same),
        "vertices": len(small),
    }


# ---------------------------------------------------------------------------
# Bottleneck triangles

def _margin_vertex(ball: TetBall, v: int) -> None:
    if not ball.in_margin(v):
        raise MarginError(f"vertex {v} is only supported at the ball boundary")


def bottleneck_triangle(ball: TetBall, table: DistanceTable, x: int, y: int, p: int) -> frozenset:
    """A triangle through p separating x from y.

    Constructive: let q precede p on a geodesic from x to y, walk the tree
    geodesic from a tetrahedron containing q to one containing y, and cut at
    the first tetrahedron that has lost q; the shared face of that step is a
    separating triangle, and it must contain p because every vertex of it is
    adjacent to q.
    """
    if table.source is not ball:
        raise ValueError("table was not computed over this ball")
    _margin_vertex(ball, x)
    _margin_vertex(ball, y)
    dxp, dpy, dxy = table.d(x, p), table.d(p, y), table.d(x, y)
    if dxp < 1 or dpy < 1:
        raise ValueError("p must be distinct from both endpoints")
    if dxp + dpy != dxy:
        raise ValueError(f"{p} does not lie on a geodesic from {x} to {y}")
    preds = [
        q
        for q in sorted(ball.adjacency[p])
        if table.d(x, q) == dxp - 1 and table.d(q, y) == dpy + 1
    ]
    q = preds[0]
    start = min(ball.support[q])
    goal = min(ball.support[y])
    path = tree_path(start, goal)
    cut = next(i for i, addr in enumerate(path) if q not in ball.tets[addr])
    delta = frozenset(ball.tets[path[cut]]) & frozenset(ball.tets[path[cut - 1]])
    assert len(delta) == 3 and p in delta
    return delta


def separates(ball: TetBall, blocked, x: int, y: int) -> bool:
    """True iff deleting ``blocked`` disconnects x from y in the 1-skeleton."""
    blocked = set(blocked)
    if x in blocked or y in blocked:
        raise ValueError("endpoints may not be deleted")
    seen = {x}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in ball.adjacency[u]:
            if w == y:
                return False
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return True


@dataclass
class BottleneckReport:
    pairs_checked: int
    worst_margin: float
    neighborhood_checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.worst_margin <= 1.5


def check_bottleneck_property(ball: TetBall, table: DistanceTable) -> BottleneckReport:
    """Every in-margin pair at distance >= 3 admits a near-midpoint bottleneck.

    For each pair, picks the lexicographically least vertex p within 1/2 of
    the midpoint of a geodesic, builds the separating triangle through p,
    verifies separation by deletion-connectivity, and records how far the
    triangle's vertices are from the midpoint (the bound is 3/2).  Also
    confirms that deleting the closed 1-neighbourhood of the triangle and p
    still separates, whenever the endpoints survive that deletion.
    """
    margin = [v for v in ball.vertices() if ball.in_margin(v)]
    failures = []
    worst = 0.0
    pairs = 0
    nbhd_checked = 0
    for ai, x in enumerate(margin):
        for y in margin[ai + 1 :]:
            dxy = table.d(x, y)
            if dxy < 3:
                continue
            pairs += 1
            half = dxy // 2
            xi, yi = table.index[x], table.index[y]
            between = _interval_idx(table, xi, yi)
            p = min(int(i) for i in between if table.dist[xi, i] == half)
            delta = bottleneck_triangle(ball, table, x, y, p)
            if p not in delta:
                failures.append({"pair": (x, y), "error": "p not in triangle"})
                continue
            if not separates(ball, delta, x, y):
                failures.append({"pair": (x, y), "error": "triangle does not separate"})
                continue
            if dxy % 2 == 0:
                m_dist = max(table.d(w, p) for w in delta)
            else:
                p2 = min(
                    int(i)
                    for i in between
                    if table.dist[xi, i] == half + 1 and ball.has_edge(p, int(i))
                )
                m_dist = max(min(table.d(w, p), table.d(w, p2)) + 0.5 for w in delta)
            worst = max(worst, float(m_dist))
            blocked = set(delta) | {p}
            for w in list(blocked):
                blocked |= ball.adjacency[w]
            if x not in blocked and y not in blocked:
                nbhd_checked += 1
                if not separates(ball, blocked, x, y):
                    failures.append({"pair": (x, y), "error": "neighbourhood does not separate"})
    return BottleneckReport(
        pairs_checked=pairs,
        worst_margin=worst,
        neighborhood_checked=nbhd_checked,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# Thinness

@dataclass
class ThinnessReport:
    bound: float
    max_value: int
    witness: tuple
    triples_examined: int
    exhaustive: bool

    @property
    def ok(self) -> bool:
        return self.max_value <= self.bound


def thinness_report(
    table: DistanceTable,
    bound: float,
    *,
    triple_threshold: int = TRIPLE_THRESHOLD,
    sample_cap: int = DEFAULT_SAMPLE_CAP,
    seed: int = 0,
) -> ThinnessReport:
    """Worst distance from a between-vertex to the union of the other two intervals.

    Exhaustive over unordered triples when their number is at most
    ``triple_threshold``; otherwise samples ``sample_cap`` triples with a
    fixed-seed generator, which is deterministic per seed.
    """
    n = len(table)
    d = table.dist
    total = comb(n, 3)
    if total <= triple_threshold:
        value, witness = _thinness_exhaustive(d)
        examined = total
        exhaustive = True
    else:
        value, witness = _thinness_sampled(d, sample_cap, seed)
        examined = sample_cap
        exhaustive = False
    witness_v = tuple(table.vertices[i] for i in witness)
    return ThinnessReport(
        bound=bound,
        max_value=value,
        witness=witness_v,
        triples_examined=examined,
        exhaustive=exhaustive,
    )


def _thinness_exhaustive(d: np.ndarray) -> tuple[int, tuple]:
    n = d.shape[0]
    # point_to_interval[p, x, z] = distance from p to the interval of (x, z)
    point_to_interval = np.empty((n, n, n), dtype=np.int16)
    for x in range(n):
        point_to_interval[:, x, x] = d[:, x]
        for z in range(x + 1, n):
            idx = np.nonzero(d[x] + d[z] == d[x, z])[0]
            col = d[:, idx].min(axis=1)
            point_to_interval[:, x, z] = col
            point_to_interval[:, z, x] = col
    best = -1
    witness = (0, 0, 0, 0)
    for x in range(n):
        for y in range(x + 1, n):
            between = np.nonzero(d[x] + d[y] == d[x, y])[0]
            vals = np.minimum(
                point_to_interval[between, x, :], point_to_interval[between, y, :]
            )
            m = int(vals.max())
            if m > best:
                best = m
                pi, z = np.unravel_index(int(vals.argmax()), vals.shape)
                witness = (x, y, int(z), int(between[pi]))
    return best, witness


def _thinness_sampled(d: np.ndarray, samples: int, seed: int) -> tuple[int, tuple]:
    n = d.shape[0]
    rng = random.Random(seed)
    best = -1
    witness = (0, 0, 0, 0)
    for _ in range(samples):
        x, y, z = rng.sample(range(n), 3)
        between = np.nonzero(d[x] + d[y] == d[x, y])[0]
        union = np.nonzero(
            (d[x] + d[z] == d[x, z]) | (d[y] + d[z] == d[y, z])
        )[0]
        vals = d[np.ix_(between, union)].min(axis=1)
        m = int(vals.max())
        if m > best:
            best = m
            witness = (x, y, z, int(between[int(vals.argmax())]))
    return best, witness


def four_point_delta(
    table: DistanceTable,
    *,
    quad_threshold: int = QUAD_THRESHOLD,
    sample_cap: int = 200_000,
    seed: int = 0,
) -> float:
    """Hyperbolicity via the four-point condition: max (largest - middle)/2.

    Exhaustive below ``quad_threshold`` quadruples, sampled above; a sampled
    value is a lower bound, which is all the smoke test needs.
    """
    n = len(table)
    d = table.dist.astype(np.int32)
    if comb(n, 4) <= quad_threshold:
        best = 0
        for w in range(n):
            for x in range(w + 1, n):
                s1 = d[w, x] + d
                s2 = np.add.outer(d[w], d[x])
                s3 = np.add.outer(d[x], d[w])
                top = np.maximum(np.maximum(s1, s2), s3)
                mid = s1 + s2 + s3 - top - np.minimum(np.minimum(s1, s2), s3)
                best = max(best, int((top - mid).max()))
        return best / 2
    rng = random.Random(seed)
    best = 0
    for _ in range(sample_cap):
        w, x, y, z = rng.sample(range(n), 4)
        s = sorted(
            (int(d[w, x] + d[y, z]), int(d[w, y] + d[x, z]), int(d[w, z] + d[x, y]))
        )
        best = max(best, s[2] - s[1])
    return best / 2


# ---------------------------------------------------------------------------
# Tree comparison

@dataclass
class TreeComparisonReport:
    pairs: int
    diff_min: int
    diff_max: int
    ratio_min: float
    ratio_max: float


def tree_comparison(ball: TetBall, table: DistanceTable) -> TreeComparisonReport:
    """Empirical comparison of ball distances with tree distances.

    Each vertex is assigned the lexicographically least address in its
    support; the report gives min/max of d_ball - d_tree over all pairs and
    of the ratio over pairs with positive tree distance.  These are window
    statistics only; no constant for the infinite complex is claimed.
    """
    if table.source is not ball:
        raise ValueError("table was not computed over this ball")
    assign = [min(ball.support[v]) for v in ball.vertices()]
    diff_min = diff_max = None
    ratio_min = ratio_max = None
    pairs = 0
    n = ball.n_vertices
    for u in range(n):
        row = table.dist[u]
        for v in range(u + 1, n):
            pairs += 1
            dt = tree_distance(assign[u], assign[v])
            diff = int(row[v]) - dt
            diff_min = diff if diff_min is None else min(diff_min, diff)
            diff_max = diff if diff_max is None else max(diff_max, diff)
            if dt > 0:
                ratio = int(row[v]) / dt
                ratio_min = ratio if ratio_min is None else min(ratio_min, ratio)
                ratio_max = ratio if ratio_max is None else max(ratio_max, ratio)
    return TreeComparisonReport(
        pairs=pairs,
        diff_min=diff_min,
        diff_max=diff_max,
        ratio_min=ratio_min,
        ratio_max=ratio_max,
    )
