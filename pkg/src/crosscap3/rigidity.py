"""Mapping classes as the simply transitive action on ordered tetrahedra.

A mapping class is pinned down by where it sends the root tetrahedron with
its slot order, and that image determines the whole map: once a tetrahedron
is mapped, the neighbour across each face has exactly one possible image
(each triangle lies in exactly two tetrahedra), with the fresh vertex going
to the fresh vertex.  Elements are therefore represented extensionally as
ordered destination tetrahedra and realized by propagation over a window.

This module also builds the exhaustion of the curve graph by unions of
tetrahedron stars, enumerates locally injective simplicial maps of the root
star, and mechanically verifies that each such map is the restriction of a
unique propagated element.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations

from .curve_graph import CurveGraphBall, OneSided, TwoSided, two_sided
from .errors import CodomainTooSmallError
from .tet_tree import TetBall, generate_ball, neighbor, triangle_cofaces


@dataclass(frozen=True, slots=True)
class OrderedTet:
    """A tetrahedron address with its 4 vertex ids listed in slot order."""

    address: str
    verts: tuple

    def __post_init__(self) -> None:
        if len(self.verts) != 4 or len(set(self.verts)) != 4:
            raise ValueError("an ordered tetrahedron lists 4 distinct vertices")


ROOT_TET = OrderedTet("", (0, 1, 2, 3))


@dataclass(frozen=True, slots=True)
class MappingClassElement:
    """The element sending the identity-ordered root tetrahedron to ``dst``."""

    dst: OrderedTet

    @classmethod
    def identity(cls) -> "MappingClassElement":
        return cls(ROOT_TET)

    def is_identity(self) -> bool:
        return self.dst == ROOT_TET


def _check_tet(ball: TetBall, otet: OrderedTet, role: str) -> None:
    if otet.address not in ball.tets:
        raise CodomainTooSmallError(f"{role} tetrahedron {otet.address!r} is not in the ball")
    if set(otet.verts) != set(ball.tets[otet.address]):
        raise ValueError(f"{role} vertices {otet.verts} do not match tetrahedron {otet.address!r}")


def _cross(codomain: TetBall, c_addr: str, images: tuple, domain_face: int):
    """Cross one face: the image of face i is the face dropping images[i]."""
    image_face = codomain.tets[c_addr].index(images[domain_face])
    c_next = neighbor(c_addr, image_face)
    if c_next not in codomain.tets:
        raise CodomainTooSmallError(
            f"image left the codomain ball at {c_addr!r} across face {image_face}"
        )
    out = list(images)
    out[domain_face] = codomain.tets[c_next][image_face]
    return c_next, tuple(out)


class VertexMap:
    """A propagated simplicial injection between two windows."""

    def __init__(self, element, domain, codomain, vertices, tets):
        self.element = element
        self.domain = domain
        self.codomain = codomain
        self.vertices = vertices  # domain vertex id -> codomain vertex id
        self.tets = tets  # domain address -> codomain address

    def apply(self, v: int) -> int:
        return self.vertices[v]

    def apply_curve(self, cv):
        if isinstance(cv, OneSided):
            return OneSided(self.vertices[cv.v])
        return two_sided(self.vertices[cv.u], self.vertices[cv.w])

    def fixes(self, ids) -> bool:
        return all(self.vertices[v] == v for v in ids)


def propagate_map(element: MappingClassElement, domain: TetBall, codomain: TetBall) -> VertexMap:
    """The unique simplicial injection of ``domain`` extending root -> dst.

    Walks the domain tree breadth-first; every crossing is forced, so the
    result is canonical.  Raises CodomainTooSmallError when the image of
    some domain tetrahedron is not generated; the codomain radius must be at
    least the domain radius plus the tree distance of dst from the root.
    """
    dst = element.dst
    _check_tet(codomain, dst, "destination")
    state = {"": (dst.address, dst.verts)}
    vertex_images = dict(zip((0, 1, 2, 3), dst.verts))
    queue = deque([""])
    while queue:
        addr = queue.popleft()
        c_addr, images = state[addr]
        for face in range(4):
            nxt = neighbor(addr, face)
            if nxt not in domain.tets or nxt in state:
                continue
            c_nxt, imgs = _cross(codomain, c_addr, images, face)
            state[nxt] = (c_nxt, imgs)
            vertex_images[domain.tets[nxt][face]] = imgs[face]
            queue.append(nxt)
    return VertexMap(
        element,
        domain,
        codomain,
        vertex_images,
        {a: c for a, (c, _) in state.items()},
    )


def image_of_ordered_tet(element: MappingClassElement, otet: OrderedTet, work: TetBall) -> OrderedTet:
    """Image of one ordered tetrahedron, propagating along a single tree path."""
    _check_tet(work, element.dst, "destination")
    _check_tet(work, otet, "source")
    c_addr, images = element.dst.address, element.dst.verts
    for letter in otet.address:
        c_addr, images = _cross(work, c_addr, images, int(letter))
    slots = work.tets[otet.address]
    return OrderedTet(c_addr, tuple(images[slots.index(v)] for v in otet.verts))


def compose(a: MappingClassElement, b: MappingClassElement, work: TetBall) -> MappingClassElement:
    """The element acting as ``a`` followed by ``b``."""
    return MappingClassElement(image_of_ordered_tet(b, a.dst, work))


def inverse(element: MappingClassElement, work: TetBall) -> MappingClassElement:
    """The element undoing ``element``; needs work radius >= |dst address|."""
    _check_tet(work, element.dst, "destination")
    c_addr, images = element.dst.address, element.dst.verts
    d_addr = ""
    while c_addr:
        back_face = int(c_addr[-1])
        domain_face = images.index(work.tets[c_addr][back_face])
        d_next = neighbor(d_addr, domain_face)
        if d_next not in work.tets:
            raise CodomainTooSmallError("work ball too small to invert")
        c_next = c_addr[:-1]
        out = list(images)
        out[domain_face] = work.tets[c_next][back_face]
        c_addr, images, d_addr = c_next, tuple(out), d_next
    slots = work.tets[d_addr]
    return MappingClassElement(
        OrderedTet(d_addr, tuple(slots[images.index(r)] for r in (0, 1, 2, 3)))
    )


def ordered_tets(ball: TetBall, max_length: int | None = None):
    """All ordered tetrahedra of the ball, addresses then slot orders, in order."""
    for addr in sorted(ball.tets, key=lambda a: (len(a), a)):
        if max_length is not None and len(addr) > max_length:
            continue
        for perm in permutations(ball.tets[addr]):
            yield OrderedTet(addr, perm)


# ---------------------------------------------------------------------------
# Star unions (the rigid exhaustion)

@dataclass(frozen=True)
class RigidSet:
    """Union of tetrahedron stars over a tree ball: level n uses radius n-1."""

    level: int
    one_sided: frozenset
    two_sided: frozenset  # of ordered pairs (u, w) with u < w


def star_union(level: int, ball: TetBall) -> RigidSet:
    """The union of the 10-vertex stars of all tetrahedra within radius level-1."""
    if level < 1:
        raise ValueError("level must be at least 1")
    if ball.radius < level - 1:
        raise ValueError(f"ball radius {ball.radius} too small for level {level}")
    ones: set = set()
    twos: set = set()
    for addr, verts in ball.tets.items():
        if len(addr) > level - 1:
            continue
        ones.update(verts)
        twos.update(tuple(sorted(p)) for p in combinations(verts, 2))
    return RigidSet(level, frozenset(ones), frozenset(twos))


def rigid_set_graph(y: RigidSet) -> dict:
    """The curve-graph adjacency of a star union."""
    adj = {OneSided(v): set() for v in y.one_sided}
    for u, w in y.two_sided:
        t = TwoSided(u, w)
        adj[t] = {OneSided(u), OneSided(w)}
        adj[OneSided(u)].add(t)
        adj[OneSided(w)].add(t)
    return adj


def check_map(domain_adj: dict, mapping: dict, cg: CurveGraphBall) -> tuple[bool, bool]:
    """(simplicial, locally injective) for a curve-vertex map into cg."""
    simplicial = True
    for cv, nbrs in domain_adj.items():
        img = mapping[cv]
        img_nbrs = cg.adjacency.get(img)
        if img_nbrs is None:
            return False, False
        for nb in nbrs:
            if mapping[nb] not in img_nbrs:
                simplicial = False
    locally_injective = True
    for cv, nbrs in domain_adj.items():
        images = [mapping[nb] for nb in nbrs]
        if len(set(images)) != len(images) or mapping[cv] in images:
            locally_injective = False
    return simplicial, locally_injective


# ---------------------------------------------------------------------------
# Enumeration of locally injective simplicial maps

def _heavy_ids(cg: CurveGraphBall) -> list[int]:
    # Vertices of degree >= 3 are exactly the one-sided ones.
    return sorted(
        cv.v
        for cv in cg.vertices
        if isinstance(cv, OneSided) and len(cg.adjacency[cv]) >= 3
    )


def _codistance_two(cg: CurveGraphBall, v: int) -> list[int]:
    # Ids whose one-sided vertex shares a two-sided neighbour with v.
    out = set()
    for t in cg.adjacency[OneSided(v)]:
        out.update(t.pair)
    out.discard(v)
    return sorted(out)


def enumerate_locally_injective(src: RigidSet, cg: CurveGraphBall) -> list[dict]:
    """All locally injective simplicial maps of the level-1 star into cg.

    Candidate images of the four one-sided vertices must have degree at
    least 3 (two-sided vertices have degree exactly 2) and be pairwise at
    distance 2; the six two-sided images are then forced to the determined
    common neighbours.  Every candidate map is validated explicitly.  Maps
    are returned ordered lexicographically by the image ids of slots 0-3.
    """
    if src.level != 1:
        raise ValueError("enumeration is defined for the level-1 star")
    slots = sorted(src.one_sided)
    domain_adj = rigid_set_graph(src)
    heavy = set(_heavy_ids(cg))
    maps = []
    for v0 in sorted(heavy):
        near0 = [v for v in _codistance_two(cg, v0) if v in heavy]
        for v1 in near0:
            near1 = set(_codistance_two(cg, v1))
            for v2 in (v for v in near0 if v in near1):
                near2 = set(_codistance_two(cg, v2))
                for v3 in (v for v in near0 if v in near1 and v in near2):
                    imgs = (v0, v1, v2, v3)
                    mapping = {OneSided(s): OneSided(i) for s, i in zip(slots, imgs)}
                    for (si, ii), (sj, ij) in combinations(zip(slots, imgs), 2):
                        mapping[two_sided(si, sj)] = two_sided(ii, ij)
                    simplicial, loc_inj = check_map(domain_adj, mapping, cg)
                    if simplicial and loc_inj:
                        maps.append(mapping)
    return maps


def element_of_map(mapping: dict, src: RigidSet, cg: CurveGraphBall) -> MappingClassElement:
    """Read off the element whose propagation restricts to ``mapping``."""
    slots = sorted(src.one_sided)
    imgs = tuple(mapping[OneSided(s)].v for s in slots)
    ball = cg.source
    cofaces = set.intersection(*(ball.support[v] for v in imgs))
    if len(cofaces) != 1:
        raise ValueError(f"images {imgs} do not span a unique tetrahedron")
    (addr,) = cofaces
    return MappingClassElement(OrderedTet(addr, imgs))


# ---------------------------------------------------------------------------
# Stabilizers and level checks

def pointwise_stabilizer_check(
    y, work: TetBall, *, dst_radius: int | None = None
) -> bool:
    """True iff only the identity fixes every listed one-sided vertex.

    Tests all elements whose destination lies within ``dst_radius`` of the
    root; that is sufficient because an element fixing the root star
    pointwise already has the identity destination.
    """
    ids = sorted(y.one_sided) if isinstance(y, RigidSet) else sorted(y)
    domain_radius = max(work.vertex_depth(v) for v in ids)
    if dst_radius is None:
        dst_radius = work.radius - domain_radius
    if dst_radius < 1:
        raise ValueError("work ball too small to test any non-identity element")
    domain = generate_ball(domain_radius, cap=max(domain_radius, work.radius))
    for otet in ordered_tets(work, max_length=dst_radius):
        element = MappingClassElement(otet)
        if element.is_identity():
            continue
        if propagate_map(element, domain, work).fixes(ids):
            return False
    return True


def _level_margin_count(ball: TetBall) -> int:
    return sum(1 for a in ball.tets if len(a) <= ball.radius - 1)


def rigidity_check_level(n: int, work: TetBall, cg: CurveGraphBall) -> dict:
    """Verify level-n rigidity mechanically; exhaustive for n <= 2.

    Level 1: every locally injective simplicial map of the root star into cg
    equals the restriction of exactly one propagated element.  Level 2: each
    level-1 map forces the images of the four adjacent tetrahedra (the
    second coface of each image face is unique), and each completed map of
    the level-2 star union is again a propagated element.  Levels >= 3 check
    the forcing step itself on the shell of the work ball: the shared face
    of each shell tetrahedron with its parent has exactly those two cofaces.
    """
    ball = cg.source
    radius = ball.radius
    if n == 1:
        src = star_union(1, work)
        maps = enumerate_locally_injective(src, cg)
        expected = 24 * len(ball.tets)
        witnesses = _match_propagated(maps, src, cg, generate_ball(0))
        return _level_report(1, radius, len(maps), expected, witnesses)
    if n == 2:
        return _check_level_two(work, cg)
    return induction_step_report(n, work)


def induction_step_report(level: int, work: TetBall) -> dict:
    """Check the forcing step on the shell of tetrahedra at tree distance ``level``.

    Each shell tetrahedron shares a face with its unique parent; a map fixing
    everything nearer the root must send it to a coface of that shared face
    other than the parent, so forcing is valid exactly when the face has those
    two cofaces and the two apexes (hence their determined two-sided
    vertices) are distinct.
    """
    if not 1 <= level <= work.radius:
        raise ValueError(f"level must be within the work radius {work.radius}")
    shell = sorted(a for a in work.tets if len(a) == level)
    witnesses = []
    for addr in shell:
        parent = addr[:-1]
        face = frozenset(work.tets[addr]) & frozenset(work.tets[parent])
        cof = triangle_cofaces(work, tuple(face))
        if set(cof) != {addr, parent}:
            witnesses.append({"tet": addr, "cofaces": list(cof)})
            continue
        (child_apex,) = set(work.tets[addr]) - face
        (parent_apex,) = set(work.tets[parent]) - face
        if child_apex == parent_apex:
            witnesses.append({"tet": addr, "error": "apexes coincide"})
    return _level_report(
        level,
        work.radius,
        len(shell) - len(witnesses),
        4 * 3 ** (level - 1),
        witnesses,
        check=f"induction_forcing_level_{level}",
    )


def _level_report(level, radius, found, expected, witnesses, check=None) -> dict:
    return {
        "check": check or f"rigidity_level_{level}",
        "level": level,
        "radius": radius,
        "count_found": found,
        "count_expected": expected,
        "witnesses_of_failure": witnesses,
    }


def _match_propagated(maps, src, cg, domain) -> list:
    witnesses = []
    seen = set()
    graph = rigid_set_graph(src)
    for mapping in maps:
        element = element_of_map(mapping, src, cg)
        if element in seen:
            witnesses.append({"element": str(element.dst), "error": "duplicate element"})
            continue
        seen.add(element)
        pm = propagate_map(element, domain, cg.source)
        if any(pm.apply_curve(cv) != mapping[cv] for cv in graph):
            witnesses.append({"element": str(element.dst), "error": "propagation mismatch"})
    return witnesses


def _check_level_two(work: TetBall, cg: CurveGraphBall) -> dict:
    ball = cg.source
    domain = generate_ball(1, cap=max(1, work.radius))
    src1 = star_union(1, domain)
    y2 = star_union(2, domain)
    graph2 = rigid_set_graph(y2)
    adj = ball.adjacency
    completed = []
    witnesses = []
    for base in enumerate_locally_injective(src1, cg):
        imgs = tuple(base[OneSided(i)].v for i in range(4))
        mapping = dict(base)
        dead = False
        for face in range(4):
            fresh = domain.tets["0123"[face]][face]
            face_imgs = [imgs[j] for j in range(4) if j != face]
            candidates = set.intersection(*(adj[v] for v in face_imgs)) - {imgs[face]}
            if not candidates:
                dead = True  # image tetrahedron has no second coface in the window
                break
            if len(candidates) > 1:
                witnesses.append({"base": imgs, "error": f"face {face} not forced"})
                dead = True
                break
            (new,) = candidates
            mapping[OneSided(fresh)] = OneSided(new)
            for j in range(4):
                if j != face:
                    mapping[two_sided(fresh, domain.tets["0123"[face]][j])] = two_sided(
                        new, imgs[j]
                    )
        if dead:
            continue
        simplicial, loc_inj = check_map(graph2, mapping, cg)
        if not (simplicial and loc_inj):
            witnesses.append({"base": imgs, "error": "completed map invalid"})
            continue
        completed.append(mapping)
    expected = 24 * _level_margin_count(ball)
    witnesses += _match_propagated_level2(completed, y2, cg, domain)
    return _level_report(2, ball.radius, len(completed), expected, witnesses)


def _match_propagated_level2(maps, y2, cg, domain) -> list:
    witnesses = []
    graph = rigid_set_graph(y2)
    seen = set()
    for mapping in maps:
        imgs = tuple(mapping[OneSided(i)].v for i in range(4))
        ball = cg.source
        cofaces = set.intersection(*(ball.support[v] for v in imgs))
        (addr,) = cofaces
        element = MappingClassElement(OrderedTet(addr, imgs))
        if element in seen:
            witnesses.append({"element": str(element.dst), "error": "duplicate element"})
            continue
        seen.add(element)
        pm = propagate_map(element, domain, ball)
        if any(pm.apply_curve(cv) != mapping[cv] for cv in graph):
            witnesses.append({"element": str(element.dst), "error": "propagation mismatch"})
    return witnesses
