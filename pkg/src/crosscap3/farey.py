"""Exact-arithmetic model of the Farey complex.

Vertices are reduced extended rationals p/q (with 1/0 the single point at
infinity).  Two slopes p/q and r/s span an edge exactly when |ps - qr| = 1,
and every edge lies in exactly two triangles, so finite windows can be
generated by unfolding triangles across their edges.  The triangle
adjacency graph of such a window is a ball in the 3-regular dual tree.

All arithmetic is on Python integers, so denominators may grow without
overflow however deep a window is unfolded.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable

from .errors import CodomainTooSmallError, RadiusCapError

#: Dual-tree radius above which farey_ball refuses to run (3 * 2**n - 2 triangles).
FAREY_RADIUS_CAP = 16


@total_ordering
@dataclass(frozen=True, slots=True)
class Slope:
    """A reduced extended rational p/q, with q = 0 only for infinity (1/0).

    Instances must already be canonical: q >= 0, gcd(|p|, q) = 1 when q > 0,
    and (p, q) = (1, 0) for infinity.  Use :meth:`of` to canonicalize raw
    integer pairs.
    """

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den < 0:
            raise ValueError(f"denominator must be nonnegative: {self.num}/{self.den}")
        if self.den == 0:
            if self.num != 1:
                raise ValueError(f"infinity must be written 1/0, got {self.num}/0")
        elif math.gcd(abs(self.num), self.den) != 1:
            raise ValueError(f"slope not reduced: {self.num}/{self.den}")

    @classmethod
    def of(cls, num: int, den: int) -> "Slope":
        """Canonicalize an integer pair to a Slope."""
        if num == 0 and den == 0:
            raise ValueError("0/0 is not a slope")
        if den == 0:
            return cls(1, 0)
        if den < 0:
            num, den = -num, -den
        g = math.gcd(abs(num), den)
        return cls(num // g, den // g)

    @classmethod
    def from_string(cls, text: str) -> "Slope":
        """Parse the serialization "p/q"."""
        p, _, q = text.partition("/")
        if not _:
            raise ValueError(f"slope string must look like p/q: {text!r}")
        return cls.of(int(p), int(q))

    @property
    def is_infinity(self) -> bool:
        return self.den == 0

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __lt__(self, other: "Slope") -> bool:
        # Numeric order with infinity greatest; used only for canonical sorting.
        if self.is_infinity:
            return False
        if other.is_infinity:
            return True
        return self.num * other.den < other.num * self.den


#: A Farey triangle is a frozenset of three pairwise adjacent slopes.
FareyTriangle = frozenset

#: An ordered Farey triangle is a tuple of three distinct pairwise adjacent slopes.
OrderedTriangle = tuple

BASE_TRIANGLE: FareyTriangle = frozenset(
    (Slope(0, 1), Slope(1, 0), Slope(1, 1))
)


def farey_adjacent(a: Slope, b: Slope) -> bool:
    """True iff |ps - qr| = 1 for a = p/q, b = r/s."""
    return abs(a.num * b.den - a.den * b.num) == 1


def _require_adjacent(a: Slope, b: Slope) -> None:
    if not farey_adjacent(a, b):
        raise ValueError(f"slopes are not Farey neighbours: {a}, {b}")


def mediant(a: Slope, b: Slope) -> Slope:
    """The mediant (p+r)/(q+s) of two Farey neighbours."""
    _require_adjacent(a, b)
    return Slope.of(a.num + b.num, a.den + b.den)


def common_neighbors(a: Slope, b: Slope) -> frozenset:
    """The two slopes adjacent to both members of an adjacent pair.

    These are the mediant (p+r)/(q+s) and the difference (p-r)/(q-s),
    both canonicalized; they are the third vertices of the two triangles
    containing the edge {a, b}.
    """
    _require_adjacent(a, b)
    return frozenset(
        (
            Slope.of(a.num + b.num, a.den + b.den),
            Slope.of(a.num - b.num, a.den - b.den),
        )
    )


def triangle(a: Slope, b: Slope, c: Slope) -> FareyTriangle:
    """Build a Farey triangle, validating pairwise adjacency."""
    for x, y in ((a, b), (a, c), (b, c)):
        _require_adjacent(x, y)
    t = frozenset((a, b, c))
    if len(t) != 3:
        raise ValueError("triangle vertices must be distinct")
    return t


def validate_ordered_triangle(t: Iterable[Slope]) -> OrderedTriangle:
    """Check that t is a sequence of 3 distinct pairwise adjacent slopes."""
    t = tuple(t)
    if len(t) != 3:
        raise ValueError("ordered triangle needs exactly 3 slopes")
    triangle(*t)
    return t


def _edges(tri: FareyTriangle):
    a, b, c = sorted(tri)
    yield frozenset((a, b))
    yield frozenset((a, c))
    yield frozenset((b, c))


def triangle_unfold(tri: FareyTriangle, edge: frozenset) -> FareyTriangle:
    """The unique other triangle containing ``edge``.

    The third vertex of the result is the common neighbour of the edge's
    endpoints that does not lie in ``tri``; unfolding twice across the same
    edge is the identity.
    """
    edge = frozenset(edge)
    if not (edge < tri) or len(edge) != 2:
        raise ValueError(f"edge {set(edge)} is not contained in the triangle")
    (third,) = tri - edge
    x, y = edge
    others = common_neighbors(x, y) - {third}
    if len(others) != 1:
        raise ValueError(f"{set(tri)} is not a Farey triangle")
    (new_third,) = others
    return frozenset((x, y, new_third))


class FareyPatch:
    """A dual-tree ball of Farey triangles around a base triangle."""

    def __init__(self, base: FareyTriangle, radius: int, dual_distance: dict):
        self.base = base
        self.radius = radius
        self.dual_distance = dual_distance  # triangle -> distance from base
        self.triangles = frozenset(dual_distance)

    def __contains__(self, tri: FareyTriangle) -> bool:
        return tri in self.triangles

    def __len__(self) -> int:
        return len(self.triangles)

    def vertices(self) -> frozenset:
        return frozenset(s for tri in self.triangles for s in tri)

    def edges(self) -> set:
        return {e for tri in self.triangles for e in _edges(tri)}

    def to_json(self) -> dict:
        key = lambda s: (s.num, s.den)
        tris = sorted(
            (sorted(tri, key=key) for tri in self.triangles),
            key=lambda t: [key(s) for s in t],
        )
        return {
            "radius": self.radius,
            "triangles": [[str(s) for s in tri] for tri in tris],
        }


def farey_ball(base: FareyTriangle | None, radius: int, *, cap: int = FAREY_RADIUS_CAP) -> FareyPatch:
    """All triangles within dual-tree distance ``radius`` of ``base``.

    The result has 3 * 2**radius - 2 triangles.  Raises RadiusCapError above
    ``cap``; denominators grow exponentially with the radius.
    """
    if base is None:
        base = BASE_TRIANGLE
    base = triangle(*base)
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    if radius > cap:
        raise RadiusCapError(f"radius {radius} exceeds cap {cap}")
    dual_distance = {base: 0}
    frontier = [(base, None)]
    for r in range(1, radius + 1):
        nxt = []
        for tri, entry in frontier:
            for edge in _edges(tri):
                if edge == entry:
                    continue
                other = triangle_unfold(tri, edge)
                # The dual graph is a tree: unfolding never revisits a triangle.
                assert other not in dual_distance, "dual graph is not a tree"
                dual_distance[other] = r
                nxt.append((other, edge))
        frontier = nxt
    return FareyPatch(base, radius, dual_distance)


def ordered_triangle_map(
    src: OrderedTriangle,
    dst: OrderedTriangle,
    domain: FareyPatch,
    codomain: FareyPatch | None = None,
) -> dict:
    """The unique simplicial map on ``domain`` sending ``src`` to ``dst`` in order.

    Starting from the slot-wise assignment on src, the map is extended over
    the whole patch by parallel unfolding: whenever two domain triangles share
    an edge, their images must share the image edge, which pins the image of
    the new vertex to one of the two common neighbours.  Returns the vertex
    bijection as a dict.

    When ``codomain`` is given, every image triangle must lie in it;
    otherwise images are computed by exact arithmetic with no bound.
    """
    src = validate_ordered_triangle(src)
    dst = validate_ordered_triangle(dst)
    src_tri = frozenset(src)
    if src_tri not in domain:
        raise ValueError("source triangle does not lie in the domain patch")
    if codomain is not None and frozenset(dst) not in codomain:
        raise CodomainTooSmallError("destination triangle is outside the codomain patch")
    mapping = dict(zip(src, dst))
    seen = {src_tri}
    queue = deque([src_tri])
    while queue:
        tri = queue.popleft()
        for edge in _edges(tri):
            other = triangle_unfold(tri, edge)
            if other not in domain.triangles or other in seen:
                continue
            (old_third,) = tri - edge
            (new_third,) = other - edge
            x, y = edge
            candidates = common_neighbors(mapping[x], mapping[y]) - {mapping[old_third]}
            assert len(candidates) == 1, "image triangle degenerated"
            (image,) = candidates
            if new_third in mapping:
                assert mapping[new_third] == image, "unfolding produced an inconsistent image"
            else:
                mapping[new_third] = image
            if codomain is not None:
                img_tri = frozenset((mapping[x], mapping[y], image))
                if img_tri not in codomain:
                    raise CodomainTooSmallError(
                        f"image of triangle at dual distance {domain.dual_distance[other]} "
                        "left the codomain patch"
                    )
            seen.add(other)
            queue.append(other)
    return mapping


# ---------------------------------------------------------------------------
# Fractional-linear (Mobius) action, used to cross-validate propagated maps.

Matrix = tuple  # ((a, b), (c, d)) with integer entries and determinant +-1


def mat_det(m: Matrix) -> int:
    (a, b), (c, d) = m
    return a * d - b * c


def mat_mul(m1: Matrix, m2: Matrix) -> Matrix:
    (a, b), (c, d) = m1
    (e, f), (g, h) = m2
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_inverse(m: Matrix) -> Matrix:
    det = mat_det(m)
    if abs(det) != 1:
        raise ValueError(f"matrix determinant must be +-1, got {det}")
    (a, b), (c, d) = m
    if det == 1:
        return ((d, -b), (-c, a))
    return ((-d, b), (c, -a))


def mobius_apply(m: Matrix, s: Slope) -> Slope:
    """Apply p/q -> (a p + b q)/(c p + d q) for an integer matrix with det +-1."""
    if abs(mat_det(m)) != 1:
        raise ValueError(f"matrix determinant must be +-1, got {mat_det(m)}")
    (a, b), (c, d) = m
    return Slope.of(a * s.num + b * s.den, c * s.num + d * s.den)


def triangle_matrix(t: OrderedTriangle) -> Matrix:
    """The integer matrix sending (0/1, 1/0, 1/1) to ``t`` slot-wise.

    Unique up to global sign; its Mobius action realizes the ordered triangle
    correspondence, so it serves as an independent oracle for
    :func:`ordered_triangle_map`.
    """
    a, b, c = validate_ordered_triangle(t)
    if c == Slope.of(a.num + b.num, a.den + b.den):
        return ((b.num, a.num), (b.den, a.den))
    if c == Slope.of(a.num - b.num, a.den - b.den):
        return ((b.num, -a.num), (b.den, -a.den))
    raise ValueError(f"({a}, {b}, {c}) is not an ordered Farey triangle")


def triangle_pair_matrix(src: OrderedTriangle, dst: OrderedTriangle) -> Matrix:
    """The matrix whose Mobius action sends src to dst slot-wise."""
    return mat_mul(triangle_matrix(dst), mat_inverse(triangle_matrix(src)))
