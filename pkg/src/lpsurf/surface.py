"""Quasi-triangulations of unpunctured marked surfaces and their flips.

A state is a region complex: oriented triangles with signed edge slots, plus
two special region kinds for configurations containing a one-sided closed
curve.  A ``pocket`` is a Moebius-strip piece cut off by a portal edge (a loop
at a marked point) and containing one one-sided curve together with the unique
arc crossing it; a ``mob1`` region is the whole Moebius strip with one marked
point holding a bare one-sided curve.  Signs record the traversal direction of
each side along the region's boundary walk; a pair of slots of the same arc
glues two region boundaries, coherently when the signs differ and with an
orientation reversal when they agree.

Flips are local rewrites:

* generic arcs rotate the diagonal of their quadrilateral;
* an arc whose quadrilateral walk repeats a side adjacently with equal signs
  cuts off a Moebius piece, so its flip replaces it by a one-sided curve
  (and conversely for the curve);
* the crossing arc of a pocket flips by reattaching the pocket mouth the
  other way around (the two non-portal sides of the portal triangle swap).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence

from .lp_core import InvalidSeed, LPSeed, validate_seed
from .poly import Polynomial, PolyError, VariableContext
from .quiver import Quiver, cancel_two_cycles

__all__ = [
    "MarkedSurface",
    "QuasiTriangulation",
    "LiftedTriangulation",
    "SurfaceError",
    "rank",
    "initial_quasi_triangulation",
    "flip",
    "new_quasi_arc",
    "canonical_code",
    "double_cover",
    "adjacency_quiver",
    "seed_from_quasi_triangulation",
    "detect_m2",
    "check_state",
    "surface_stats",
    "surface_to_json",
    "surface_from_json",
    "triangulation_to_json",
]

SCHEMA_VERSION = 1

TRI = "tri"
POCKET = "pocket"
MOB1 = "mob1"


class SurfaceError(PolyError):
    """Invalid surface or illegal state/flip request."""


@dataclass(frozen=True)
class MarkedSurface:
    """Unpunctured bordered surface: genus, cross-caps, marked boundary."""

    genus: int
    cross_caps: int
    boundary: tuple[int, ...]
    boundary_variables: bool = True

    def __post_init__(self):
        object.__setattr__(self, "boundary", tuple(int(m) for m in self.boundary))

    def check(self) -> None:
        if self.genus < 0 or self.cross_caps < 0:
            raise SurfaceError("negative genus or cross-cap count")
        if len(self.boundary) < 1:
            raise SurfaceError("at least one boundary component is required")
        if any(m < 1 for m in self.boundary):
            raise SurfaceError("every boundary component needs a marked point")
        if self.rank < 1:
            raise SurfaceError(
                "surface admits no quasi-triangulation (monogon, digon or triangle)"
            )

    @property
    def orientable(self) -> bool:
        return self.cross_caps == 0

    @property
    def marked_points(self) -> int:
        return sum(self.boundary)

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - self.cross_caps - len(self.boundary)

    @property
    def rank(self) -> int:
        return self.marked_points - 3 * self.euler_characteristic

    def default_labels(self) -> tuple[tuple[str, ...], ...]:
        if len(self.boundary) == 1:
            return (tuple(f"b{j + 1}" for j in range(self.boundary[0])),)
        return tuple(
            tuple(f"b{i + 1}_{j + 1}" for j in range(m)) for i, m in enumerate(self.boundary)
        )


def rank(surface: MarkedSurface) -> int:
    """Number of quasi-arcs in any quasi-triangulation of the surface."""
    surface.check()
    return surface.rank


# -- states -------------------------------------------------------------------

Slot = tuple[int, int]  # (edge id, +1/-1 traversal sign)


@dataclass(frozen=True)
class QuasiTriangulation:
    """Immutable region complex; flips return fresh states."""

    surface: MarkedSurface
    regions: tuple
    boundary: tuple[tuple[int, str], ...]  # (edge id, label) per boundary segment
    next_id: int

    # -- derived structure -------------------------------------------------

    def boundary_ids(self) -> frozenset[int]:
        return frozenset(e for e, _ in self.boundary)

    def pockets(self) -> list[tuple[int, int, int, int]]:
        """(region index, portal, curve, crossing) per pocket."""
        return [
            (ri, r[1], r[2], r[3]) for ri, r in enumerate(self.regions) if r[0] == POCKET
        ]

    def mob1s(self) -> list[tuple[int, Slot, int]]:
        return [(ri, r[1], r[2]) for ri, r in enumerate(self.regions) if r[0] == MOB1]

    def portal_ids(self) -> frozenset[int]:
        return frozenset(p for _, p, _, _ in self.pockets())

    def curve_ids(self) -> frozenset[int]:
        ids = {c for _, _, c, _ in self.pockets()}
        ids.update(c for _, _, c in self.mob1s())
        return frozenset(ids)

    def crossing_ids(self) -> frozenset[int]:
        return frozenset(s for _, _, _, s in self.pockets())

    def slots(self) -> dict[int, list[tuple[int, int]]]:
        """Triangle and mob1 side slots per edge id: (region index, position)."""
        out: dict[int, list[tuple[int, int]]] = {}
        for ri, r in enumerate(self.regions):
            if r[0] == TRI:
                for pos, (e, _) in enumerate(r[1]):
                    out.setdefault(e, []).append((ri, pos))
            elif r[0] == MOB1:
                out.setdefault(r[1][0], []).append((ri, 0))
        return out

    def arc_ids(self) -> frozenset[int]:
        bnd = self.boundary_ids()
        portals = self.portal_ids()
        ids = {e for e in self.slots() if e not in bnd and e not in portals}
        ids.update(self.crossing_ids())
        return frozenset(ids)

    def quasi_arcs(self) -> tuple[int, ...]:
        return tuple(sorted(self.arc_ids() | self.curve_ids()))

    def is_pure_triangulation(self) -> bool:
        return all(r[0] == TRI for r in self.regions)

    def region_sides(self, ri: int) -> tuple[Slot, ...]:
        r = self.regions[ri]
        if r[0] == TRI:
            return r[1]
        if r[0] == POCKET:
            return ((r[1], 1),)
        return (r[1],)

    def portal_triangle(self, portal: int) -> tuple[int, int]:
        """(region index, position) of the portal's slot in its mouth triangle."""
        for ri, r in enumerate(self.regions):
            if r[0] == TRI:
                for pos, (e, _) in enumerate(r[1]):
                    if e == portal:
                        return ri, pos
        raise SurfaceError(f"portal {portal} has no mouth triangle")


# -- flips --------------------------------------------------------------------


def _rooted(tri: tuple[Slot, Slot, Slot], pos: int) -> tuple[Slot, Slot, Slot]:
    return (tri[pos], tri[(pos + 1) % 3], tri[(pos + 2) % 3])


def _quad_walk(t: QuasiTriangulation, e: int) -> tuple[tuple[Slot, Slot, Slot, Slot], int, int]:
    """Boundary walk of the union of e's two triangles glued along e.

    The second triangle is reversed when the gluing along ``e`` is
    orientation-reversing, so the walk is consistently oriented; the walk is
    well defined up to rotation by two (swapping the triangles' roles).
    """
    slot_list = t.slots()[e]
    (r1, p1), (r2, p2) = slot_list
    t1 = _rooted(t.regions[r1][1], p1)
    t2 = _rooted(t.regions[r2][1], p2)
    s1, s2 = t1[0][1], t2[0][1]
    w0, w1 = t1[1], t1[2]
    if s1 == s2:
        w2 = (t2[2][0], -t2[2][1])
        w3 = (t2[1][0], -t2[1][1])
    else:
        w2, w3 = t2[1], t2[2]
    return (w0, w1, w2, w3), r1, r2


def _flip_kind(t: QuasiTriangulation, q: int) -> str:
    if q in t.curve_ids():
        return "curve"
    if q in t.crossing_ids():
        return "crossing"
    if q not in t.arc_ids():
        raise SurfaceError(f"{q} is not a quasi-arc of this state")
    slot_list = t.slots()[q]
    (r1, _), (r2, _) = slot_list
    if r1 == r2:
        return "mono"
    w, _, _ = _quad_walk(t, q)
    for a, b in ((1, 2), (3, 0)):
        if w[a][0] == w[b][0]:
            if w[a][1] == w[b][1]:
                return "to_curve"
            raise SurfaceError("adjacent coherent self-gluing: puncture pattern")
    return "plain"


def flip(t: QuasiTriangulation, q: int) -> QuasiTriangulation:
    """The unique quasi-triangulation differing from ``t`` exactly at ``q``."""
    kind = _flip_kind(t, q)
    if kind == "curve":
        return _flip_curve(t, q)
    if kind == "crossing":
        return _flip_crossing(t, q)
    if kind == "mono":
        return _flip_mono_arc(t, q)
    w, r1, r2 = _quad_walk(t, q)
    if kind == "to_curve":
        return _flip_to_curve(t, q, w, r1, r2)
    return _flip_plain(t, q, w, r1, r2)


def _replace_regions(
    t: QuasiTriangulation, drop: Iterable[int], add: Iterable[tuple], next_id: int
) -> QuasiTriangulation:
    drop = set(drop)
    regions = tuple(r for ri, r in enumerate(t.regions) if ri not in drop) + tuple(add)
    return replace(t, regions=regions, next_id=next_id)


def _flip_plain(t, q, w, r1, r2) -> QuasiTriangulation:
    e_new = t.next_id
    t1 = ((e_new, 1), w[1], w[2])
    t2 = ((e_new, -1), w[3], w[0])
    return _replace_regions(t, (r1, r2), ((TRI, t1), (TRI, t2)), t.next_id + 1)


def _flip_to_curve(t, q, w, r1, r2) -> QuasiTriangulation:
    if w[3][0] == w[0][0]:
        w = (w[2], w[3], w[0], w[1])
    crossing = w[1][0]
    curve = t.next_id
    portal = t.next_id + 1
    mouth = ((portal, -1), w[3], w[0])
    pocket = (POCKET, portal, curve, crossing)
    return _replace_regions(t, (r1, r2), ((TRI, mouth), pocket), t.next_id + 2)


def _flip_curve(t, q) -> QuasiTriangulation:
    for ri, portal, curve, crossing in t.pockets():
        if curve == q:
            mi, pos = t.portal_triangle(portal)
            rooted = _rooted(t.regions[mi][1], pos)
            a, b = rooted[1], rooted[2]
            e_new = t.next_id
            t1 = ((e_new, 1), b, (crossing, 1))
            t2 = ((e_new, -1), (crossing, 1), a)
            return _replace_regions(t, (ri, mi), ((TRI, t1), (TRI, t2)), t.next_id + 1)
    # bare curve in a mob1 region flips back to the doubled arc
    for ri, side, curve in t.mob1s():
        if curve == q:
            e_new = t.next_id
            tri = ((e_new, 1), (e_new, 1), side)
            return _replace_regions(t, (ri,), ((TRI, tri),), t.next_id + 1)
    raise SurfaceError(f"curve {q} not found")


def _flip_crossing(t, q) -> QuasiTriangulation:
    for ri, portal, curve, crossing in t.pockets():
        if crossing == q:
            mi, pos = t.portal_triangle(portal)
            rooted = _rooted(t.regions[mi][1], pos)
            mouth = (rooted[0], rooted[2], rooted[1])
            s_new = t.next_id
            pocket = (POCKET, portal, curve, s_new)
            return _replace_regions(t, (ri, mi), ((TRI, mouth), pocket), t.next_id + 1)
    raise SurfaceError(f"crossing arc {q} not found")


def _flip_mono_arc(t, q) -> QuasiTriangulation:
    (r1, p1), (r2, p2) = t.slots()[q]
    assert r1 == r2
    tri = t.regions[r1][1]
    if tri[p1][1] != tri[p2][1]:
        raise SurfaceError("coherently self-glued arc: puncture pattern")
    fpos = 3 - p1 - p2
    f = tri[fpos]
    if f[0] not in t.boundary_ids():
        raise SurfaceError("arc doubled against a non-boundary side is illegal")
    curve = t.next_id
    return _replace_regions(t, (r1,), ((MOB1, f, curve),), t.next_id + 1)


def new_quasi_arc(before: QuasiTriangulation, after: QuasiTriangulation) -> int:
    """The quasi-arc created by the flip taking ``before`` to ``after``."""
    diff = set(after.quasi_arcs()) - set(before.quasi_arcs())
    if len(diff) != 1:
        raise SurfaceError("states do not differ by a single flip")
    return diff.pop()


# -- canonical form -------------------------------------------------------------


def canonical_code(t: QuasiTriangulation) -> tuple:
    """Minimal BFS code over all starting flags; gauge and label invariant.

    Boundary tokens carry the traversal sign relative to the segment's stored
    direction, which pins the boundary orientation and keeps mirror states
    distinct; arcs and portals are numbered in discovery order.
    """
    bnd_label = dict(t.boundary)
    slots = t.slots()
    pocket_by_portal = {p: ri for ri, p, _, _ in t.pockets()}
    best: Optional[tuple] = None
    for r0 in range(len(t.regions)):
        arity = len(t.region_sides(r0))
        for p0 in range(arity):
            for d0 in (1, -1):
                code = _bfs_code(t, bnd_label, slots, pocket_by_portal, r0, p0, d0)
                if best is None or code < best:
                    best = code
    assert best is not None
    return best


def _bfs_code(t, bnd_label, slots, pocket_by_portal, r0, p0, d0) -> tuple:
    visited: dict[int, int] = {}
    edge_num: dict[int, int] = {}
    tokens: list = []
    queue: list[tuple[int, int, int]] = [(r0, p0, d0)]
    while queue:
        ri, entry, d = queue.pop(0)
        if ri in visited:
            continue
        visited[ri] = len(visited)
        r = t.regions[ri]
        sides = t.region_sides(ri)
        arity = len(sides)
        walk = [(entry + d * k) % arity for k in range(arity)]
        row: list = [r[0]]
        for pos in walk:
            e, s = sides[pos]
            eff = d * s
            if e in bnd_label:
                row.append(("b", bnd_label[e], eff))
                continue
            if e not in edge_num:
                edge_num[e] = len(edge_num)
            row.append(("e", edge_num[e]))
            # cross to the neighbor
            if e in pocket_by_portal and r[0] == TRI:
                ni = pocket_by_portal[e]
                if ni not in visited:
                    queue.append((ni, 0, 1))
            elif r[0] == POCKET:
                mi, mpos = t.portal_triangle(e)
                if mi not in visited:
                    # entry direction chosen so the crossing is coherent
                    ms = t.regions[mi][1][mpos][1]
                    queue.append((mi, mpos, -eff * ms))
            else:
                for (oi, opos) in slots[e]:
                    if oi == ri and opos == pos:
                        continue
                    if oi not in visited:
                        osides = t.region_sides(oi)
                        os = osides[opos][1]
                        queue.append((oi, opos, -eff * os))
        tokens.append(tuple(row))
    tokens.append(("#regions", len(visited)))
    return tuple(tokens)


# -- double cover and adjacency quiver ------------------------------------------


@dataclass(frozen=True)
class LiftedTriangulation:
    """Oriented double cover of a pure triangulation with its deck involution."""

    base: QuasiTriangulation
    triangles: tuple  # ((region, sheet), walk) with walk = tuple of (edge, lift, sign)
    mutable_edges: tuple[int, ...]
    frozen_edges: tuple[int, ...]

    def edge_lifts(self) -> list[tuple[int, int]]:
        return [(e, k) for e in self.mutable_edges + self.frozen_edges for k in (0, 1)]

    def involution(self, lift: tuple[int, int]) -> tuple[int, int]:
        return (lift[0], 1 - lift[1])


def double_cover(t: QuasiTriangulation) -> LiftedTriangulation:
    """Lift to the orientable double cover (two mirror sheets per triangle)."""
    if not t.is_pure_triangulation():
        raise SurfaceError("states containing one-sided curves have no global lift")
    slots = t.slots()
    bnd = t.boundary_ids()
    # sheet holding lift 0 for each slot
    lift0_sheet: dict[tuple[int, int], int] = {}
    for e, slot_list in slots.items():
        (r1, p1) = slot_list[0]
        s1 = t.regions[r1][1][p1][1]
        lift0_sheet[(r1, p1)] = 0 if s1 == 1 else 1
        if len(slot_list) == 2:
            (r2, p2) = slot_list[1]
            s2 = t.regions[r2][1][p2][1]
            lift0_sheet[(r2, p2)] = 0 if s2 == -1 else 1
    triangles = []
    for ri, r in enumerate(t.regions):
        tri = r[1]
        for sheet in (0, 1):
            order = (0, 1, 2) if sheet == 0 else (0, 2, 1)
            walk = []
            for pos in order:
                e, s = tri[pos]
                lift = 0 if lift0_sheet[(ri, pos)] == sheet else 1
                sign = s if sheet == 0 else -s
                walk.append((e, lift, sign))
            triangles.append(((ri, sheet), tuple(walk)))
    mutable = tuple(sorted(e for e in slots if e not in bnd))
    frozen = tuple(sorted(bnd))
    return LiftedTriangulation(t, tuple(triangles), mutable, frozen)


def cover_components(lt: LiftedTriangulation) -> int:
    """Connected components of the double cover (2 iff the base is orientable)."""
    adj: dict[tuple[int, int], set] = {}
    lift_members: dict[tuple[int, int], list] = {}
    for key, walk in lt.triangles:
        adj.setdefault(key, set())
        for e, lift, _ in walk:
            lift_members.setdefault((e, lift), []).append(key)
    for members in lift_members.values():
        for a in members:
            for b in members:
                if a != b:
                    adj[a].add(b)
    seen: set = set()
    comps = 0
    for key in adj:
        if key in seen:
            continue
        comps += 1
        stack = [key]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(adj[u] - seen)
    return comps


def adjacency_quiver(lt: LiftedTriangulation) -> Quiver:
    """One arrow i -> j per oriented lifted triangle where j follows i."""
    include_frozen = lt.base.surface.boundary_variables
    ordered = list(lt.mutable_edges) + (list(lt.frozen_edges) if include_frozen else [])
    pair_index = {e: i for i, e in enumerate(ordered)}
    n = len(ordered)
    raw = [[0] * (2 * n) for _ in range(2 * n)]

    def vertex(e: int, lift: int) -> Optional[int]:
        if e not in pair_index:
            return None
        return pair_index[e] + lift * n

    for _, walk in lt.triangles:
        vs = [vertex(e, lift) for e, lift, _ in walk]
        for k in range(3):
            a, b = vs[k], vs[(k + 1) % 3]
            if a is not None and b is not None:
                raw[a][b] += 1
    q = Quiver(n, cancel_two_cycles(raw), frozenset(
        pair_index[e] for e in lt.frozen_edges if e in pair_index
    ))
    for v in range(2 * n):
        if q.b[v][q.twin(v)] != 0:
            raise SurfaceError("anti-self-folded triangle: arrow between twin lifts")
    if not q.is_anti_symmetric():
        raise SurfaceError("adjacency quiver is not anti-symmetric")
    return q


# -- seed extraction -------------------------------------------------------------


def seed_from_quasi_triangulation(
    t: QuasiTriangulation,
    names: Optional[Mapping[int, str]] = None,
    provenance: Optional[str] = None,
) -> LPSeed:
    """The LP seed attached to a quasi-triangulation.

    Cluster variables follow the quasi-arcs in id order; boundary segments
    contribute frozen variables, or the constant 1 when the surface carries no
    boundary variables.
    """
    arcs = t.quasi_arcs()
    if names is None:
        names = {q: f"x{q}" for q in arcs}
    cluster = tuple(names[q] for q in arcs)
    frozen = tuple(lbl for _, lbl in t.boundary) if t.surface.boundary_variables else ()
    ctx = VariableContext(cluster, frozen)
    var = {q: Polynomial.variable(ctx, names[q]) for q in arcs}
    bnd_label = dict(t.boundary)
    pocket_of_portal = {p: (c, s) for _, p, c, s in t.pockets()}

    def lam(e: int) -> Polynomial:
        if e in bnd_label:
            if t.surface.boundary_variables:
                return Polynomial.variable(ctx, bnd_label[e])
            return Polynomial.const(ctx, 1)
        if e in pocket_of_portal:
            c, s = pocket_of_portal[e]
            return var[c].mul(var[s])
        return var[e]

    def mouth_sides(portal: int) -> tuple[Slot, Slot]:
        mi, pos = t.portal_triangle(portal)
        rooted = _rooted(t.regions[mi][1], pos)
        return rooted[1], rooted[2]

    polys = []
    curves = t.curve_ids()
    crossings = t.crossing_ids()
    for q in arcs:
        if q in curves:
            placed = False
            for _, portal, c, _ in t.pockets():
                if c == q:
                    a, b = mouth_sides(portal)
                    polys.append(lam(a[0]).add(lam(b[0])))
                    placed = True
                    break
            if not placed:
                for _, side, c in t.mob1s():
                    if c == q:
                        polys.append(lam(side[0]).mul_int(2))
                        placed = True
                        break
            assert placed
        elif q in crossings:
            for _, portal, c, s in t.pockets():
                if s == q:
                    a, b = mouth_sides(portal)
                    la, lb = lam(a[0]), lam(b[0])
                    polys.append(la.add(lb).pow(2).add(var[c].pow(2).mul(la).mul(lb)))
                    break
        else:
            polys.append(_triangle_arc_poly(t, q, lam))
    seed = LPSeed.initial(cluster, frozen, polys, provenance=provenance)
    violations = validate_seed(seed)
    if violations:
        raise InvalidSeed(violations)
    return seed


def _triangle_arc_poly(t: QuasiTriangulation, q: int, lam) -> Polynomial:
    slot_list = t.slots()[q]
    (r1, p1), (r2, p2) = slot_list
    if r1 == r2:
        tri = t.regions[r1][1]
        fpos = 3 - p1 - p2
        return lam(tri[fpos][0]).mul_int(2)
    w, _, _ = _quad_walk(t, q)
    for a, b in ((1, 2), (3, 0)):
        if w[a][0] == w[b][0] and w[a][1] == w[b][1]:
            others = {0, 1, 2, 3} - {a, b}
            i, j = sorted(others)
            return lam(w[i][0]).add(lam(w[j][0]))
    return lam(w[0][0]).mul(lam(w[2][0])).add(lam(w[1][0]).mul(lam(w[3][0])))


def detect_m2(t: QuasiTriangulation) -> list[int]:
    """Arcs of a triangulation whose flip produces a one-sided curve."""
    if not t.is_pure_triangulation():
        raise SurfaceError("detect_m2 expects a triangulation")
    out = []
    for q in sorted(t.arc_ids()):
        if _flip_kind(t, q) in ("to_curve", "mono"):
            out.append(q)
    return out


# -- state validation ------------------------------------------------------------


def _corner_classes(t: QuasiTriangulation) -> tuple[dict, int]:
    """Union-find over region corners; corner i sits between sides i-1 and i."""
    parent: dict = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    corners = []
    for ri in range(len(t.regions)):
        arity = len(t.region_sides(ri))
        for k in range(arity):
            c = (ri, k)
            parent[c] = c
            corners.append(c)

    def endpoints(ri: int, pos: int) -> tuple:
        arity = len(t.region_sides(ri))
        # walking side pos: starts at corner pos, ends at corner pos+1
        return (ri, pos), (ri, (pos + 1) % arity)

    incidences: dict[int, list] = {}
    for ri in range(len(t.regions)):
        sides = t.region_sides(ri)
        for pos, (e, s) in enumerate(sides):
            incidences.setdefault(e, []).append((ri, pos, s))
    for e, incs in incidences.items():
        if len(incs) == 1:
            continue
        (r1, p1, s1), (r2, p2, s2) = incs
        a_start, a_end = endpoints(r1, p1)
        b_start, b_end = endpoints(r2, p2)
        if s1 == s2:
            union(a_start, b_start)
            union(a_end, b_end)
        else:
            union(a_start, b_end)
            union(a_end, b_start)
    classes = {c: find(c) for c in corners}
    return classes, len(set(classes.values()))


def check_state(t: QuasiTriangulation) -> None:
    """Structural invariants of a state; raises SurfaceError on violation."""
    bnd = t.boundary_ids()
    portals = t.portal_ids()
    slots = t.slots()
    for e, slot_list in slots.items():
        expected = 1 if (e in bnd or e in portals) else 2
        if len(slot_list) != expected:
            raise SurfaceError(f"edge {e} has {len(slot_list)} slots, expected {expected}")
    for _, portal, curve, crossing in t.pockets():
        t.portal_triangle(portal)
        if crossing in slots or curve in slots:
            raise SurfaceError("pocket contents must not appear as region sides")
    for ri, r in enumerate(t.regions):
        if r[0] == TRI:
            by_edge: dict[int, list[int]] = {}
            for pos, (e, s) in enumerate(r[1]):
                by_edge.setdefault(e, []).append(s)
            for e, signs in by_edge.items():
                if len(signs) == 2:
                    if e in bnd or e in portals:
                        raise SurfaceError("boundary or portal repeated inside a triangle")
                    if signs[0] != signs[1]:
                        raise SurfaceError("coherently self-glued side: puncture pattern")
                    others = [x for x, _ in r[1] if x != e]
                    if others and others[0] not in bnd:
                        raise SurfaceError("arc doubling against a non-boundary side")
    if len(t.quasi_arcs()) != t.surface.rank:
        raise SurfaceError(
            f"state has {len(t.quasi_arcs())} quasi-arcs, surface rank is {t.surface.rank}"
        )


def surface_stats(t: QuasiTriangulation) -> dict:
    """Euler characteristic, vertex count, and boundary walk structure."""
    classes, nverts = _corner_classes(t)
    slots = t.slots()
    edges = set(slots) | t.portal_ids() | t.boundary_ids()
    ntris = sum(1 for r in t.regions if r[0] == TRI)
    chi = nverts - len(edges) + ntris
    # trace boundary cycles as an undirected multigraph on vertex classes
    # (stored edge directions are per-region gauge, so they may disagree)
    bnd_label = dict(t.boundary)
    endpoints: dict[int, tuple] = {}
    for ri in range(len(t.regions)):
        sides = t.region_sides(ri)
        arity = len(sides)
        for pos, (e, _) in enumerate(sides):
            if e in bnd_label:
                endpoints[e] = (classes[(ri, pos)], classes[(ri, (pos + 1) % arity)])
    at_vertex: dict = {}
    for e, (u, v) in endpoints.items():
        at_vertex.setdefault(u, []).append(e)
        at_vertex.setdefault(v, []).append(e)
    components = []
    seen_edges: set[int] = set()
    for e0, _ in t.boundary:
        if e0 in seen_edges:
            continue
        cycle = [bnd_label[e0]]
        seen_edges.add(e0)
        cur = endpoints[e0][1]
        while True:
            nxts = [x for x in at_vertex.get(cur, ()) if x not in seen_edges]
            if not nxts:
                break
            e = nxts[0]
            seen_edges.add(e)
            cycle.append(bnd_label[e])
            u, v = endpoints[e]
            cur = v if cur == u else u
        components.append(tuple(cycle))
    # every vertex must lie on the boundary (no punctures)
    boundary_vertices = set()
    for ri in range(len(t.regions)):
        sides = t.region_sides(ri)
        arity = len(sides)
        for pos, (e, s) in enumerate(sides):
            if e in bnd_label:
                boundary_vertices.add(classes[(ri, pos)])
                boundary_vertices.add(classes[(ri, (pos + 1) % arity)])
    interior = set(classes.values()) - boundary_vertices
    return {
        "vertices": nverts,
        "edges": len(edges),
        "triangles": ntris,
        "chi": chi,
        "boundary_components": components,
        "interior_vertices": len(interior),
    }


def verify_topology(t: QuasiTriangulation) -> None:
    s = t.surface
    stats = surface_stats(t)
    if stats["chi"] != s.euler_characteristic:
        raise SurfaceError(
            f"Euler characteristic {stats['chi']} != expected {s.euler_characteristic}"
        )
    if stats["interior_vertices"]:
        raise SurfaceError("interior vertex found: punctures are forbidden")
    got = sorted(len(c) for c in stats["boundary_components"])
    want = sorted(s.boundary)
    if got != want:
        raise SurfaceError(f"boundary structure {got} != expected {want}")
    if t.is_pure_triangulation():
        comps = cover_components(double_cover(t))
        if (comps == 2) != s.orientable:
            raise SurfaceError("double cover does not match orientability")


# -- initial triangulations -------------------------------------------------------


class _Builder:
    def __init__(self, surface: MarkedSurface, labels: Sequence[Sequence[str]]):
        self.surface = surface
        self.regions: list = []
        self.counter = itertools.count(0)
        self.boundary: list[tuple[int, str]] = []
        self.labels = tuple(tuple(component) for component in labels)

    def fresh(self) -> int:
        return next(self.counter)

    def boundary_edges(self, comp: int) -> list[int]:
        ids = [self.fresh() for _ in range(len(self.labels[comp]))]
        for eid, lbl in zip(ids, self.labels[comp]):
            self.boundary.append((eid, lbl))
        return ids

    def tri(self, a: Slot, b: Slot, c: Slot) -> None:
        self.regions.append((TRI, (a, b, c)))

    def fan(self, sides: list[Slot]) -> None:
        """Fan-triangulate a disk with the given boundary walk (>= 3 sides)."""
        n = len(sides)
        assert n >= 3
        if n == 3:
            self.tri(*sides)
            return
        diags = [self.fresh() for _ in range(n - 3)]
        self.tri(sides[0], sides[1], (diags[0], -1))
        for j in range(1, n - 3):
            self.tri((diags[j - 1], 1), sides[j + 1], (diags[j], -1))
        self.tri((diags[-1], 1), sides[n - 2], sides[n - 1])

    def crosscap_block(self, front: Slot, back: Slot) -> None:
        """Moebius piece between two mouth sides: the M_2-style pair of triangles."""
        e = self.fresh()
        f = self.fresh()
        self.tri((e, 1), front, (f, 1))
        self.tri((e, 1), back, (f, -1))

    def bridge(self, front: Slot, comp: int, back: Optional[Slot] = None) -> Optional[Slot]:
        """Annulus piece carrying an extra boundary component behind the front.

        The piece's mouth is the digon (front, back); when no back side is
        supplied a fresh arc is exposed for the enclosing polygon.
        """
        inner = self.boundary_edges(comp)
        exposed = None
        if back is None:
            exposed = self.fresh()
            back = (exposed, 1)
        a = self.fresh()
        b = self.fresh()
        self.tri(front, (b, 1), (a, -1))
        walk: list[Slot] = [(a, 1)]
        walk += [(e, 1) for e in inner]
        walk += [(b, -1), back]
        self.fan(walk)
        return (exposed, -1) if exposed is not None else None

    def handle_region(self, mouth: Slot) -> None:
        """One-holed torus glued along the mouth side."""
        p = self.fresh()
        q = self.fresh()
        self.fan([mouth, (p, 1), (q, 1), (p, -1), (q, -1)])

    def state(self) -> QuasiTriangulation:
        return QuasiTriangulation(
            self.surface, tuple(self.regions), tuple(self.boundary), next(self.counter)
        )


def initial_quasi_triangulation(
    surface: MarkedSurface,
    labels: Optional[Sequence[Sequence[str]]] = None,
) -> QuasiTriangulation:
    """A deterministic triangulation (no one-sided curves) of the surface."""
    surface.check()
    if labels is None:
        labels = surface.default_labels()
    labels = tuple(tuple(component) for component in labels)
    if len(labels) != len(surface.boundary) or any(
        len(component) != m for component, m in zip(labels, surface.boundary)
    ):
        raise SurfaceError("labels do not match the boundary structure")

    g, c, bnd = surface.genus, surface.cross_caps, surface.boundary
    b = _Builder(surface, labels)

    # Moebius strip with one marked point: a single doubled-arc triangle
    if (g, c, len(bnd)) == (0, 1, 1) and bnd[0] == 1:
        (s1,) = b.boundary_edges(0)
        alpha = b.fresh()
        b.tri((alpha, 1), (alpha, 1), (s1, 1))
        t = b.state()
        _validate_initial(t)
        return t

    # annulus with one marked point on the first component: handle directly
    if (g, c, len(bnd)) == (0, 0, 2) and bnd[0] == 1 and bnd[1] == 1:
        (s1,) = b.boundary_edges(0)
        (s2,) = b.boundary_edges(1)
        e = b.fresh()
        f = b.fresh()
        b.tri((e, 1), (s1, 1), (f, 1))
        b.tri((e, -1), (s2, 1), (f, -1))
        t = b.state()
        _validate_initial(t)
        return t

    # longest boundary component becomes the outer polygon so the closure
    # has enough sides; crosscaps and bridges chain behind the first segment
    order = sorted(range(len(bnd)), key=lambda i: -bnd[i])
    b.labels = tuple(labels[i] for i in order)
    counts = [bnd[i] for i in order]

    outer = b.boundary_edges(0)
    front: Optional[Slot] = (outer[0], 1)
    rest: list[Slot] = [(e, 1) for e in outer[1:]]
    bridges = len(bnd) - 1
    closure_len = 1 + len(rest) + g

    # when the closure polygon would degenerate, fold its last side into the
    # final front-chain gadget (or cap the front with a one-holed torus)
    merge_back: Optional[Slot] = None
    pentagon_front = False
    if closure_len == 2:
        if rest:
            if bridges >= 1 or c >= 1:
                merge_back = rest.pop()
            else:
                raise SurfaceError("no built-in initial triangulation for this surface shape")
        else:
            pentagon_front = True  # the second side would be the last handle door
    elif closure_len == 1:
        if g >= 1:
            pentagon_front = True
        else:
            raise SurfaceError("no built-in initial triangulation for this surface shape")

    for k in range(c):
        if k == c - 1 and merge_back is not None and bridges == 0:
            b.crosscap_block(front, merge_back)
            front = None
        else:
            exposed = b.fresh()
            b.crosscap_block(front, (exposed, 1))
            front = (exposed, -1)
    for j, comp in enumerate(range(1, len(counts))):
        if front is None:
            raise SurfaceError("no front side available for this surface shape")
        if comp == len(counts) - 1 and merge_back is not None:
            front = b.bridge(front, comp, merge_back)
        else:
            front = b.bridge(front, comp)
    doors: list[Slot] = []
    n_doors = g - 1 if pentagon_front else g
    for _ in range(n_doors):
        d = b.fresh()
        b.handle_region((d, 1))
        doors.append((d, -1))
    if pentagon_front:
        if front is None:
            raise SurfaceError("no front side available for this surface shape")
        b.handle_region(front)
        front = None

    closure = ([front] if front is not None else []) + rest + doors
    if closure:
        if len(closure) < 3:
            raise SurfaceError("no built-in initial triangulation for this surface shape")
        b.fan(closure)
    t = b.state()
    _validate_initial(t)
    return t


def _validate_initial(t: QuasiTriangulation) -> None:
    check_state(t)
    verify_topology(t)


# -- serialization ----------------------------------------------------------------


def surface_to_json(s: MarkedSurface) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "genus": s.genus,
        "cross_caps": s.cross_caps,
        "boundary": list(s.boundary),
        "boundary_variables": s.boundary_variables,
    }


def surface_from_json(data: dict) -> MarkedSurface:
    if "punctures" in data and data["punctures"]:
        raise SurfaceError("punctured surfaces are rejected")
    s = MarkedSurface(
        int(data.get("genus", 0)),
        int(data.get("cross_caps", 0)),
        tuple(data["boundary"]),
        bool(data.get("boundary_variables", True)),
    )
    s.check()
    return s


def triangulation_to_json(t: QuasiTriangulation) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "surface": surface_to_json(t.surface),
        "regions": [list(_region_json(r)) for r in t.regions],
        "boundary": [[e, lbl] for e, lbl in t.boundary],
        "next_id": t.next_id,
        "quasi_arcs": list(t.quasi_arcs()),
    }


def _region_json(r) -> tuple:
    if r[0] == TRI:
        return (TRI, [list(s) for s in r[1]])
    if r[0] == POCKET:
        return (POCKET, r[1], r[2], r[3])
    return (MOB1, list(r[1]), r[2])


def triangulation_from_json(data: dict) -> QuasiTriangulation:
    surface = surface_from_json(data["surface"])
    regions = []
    for r in data["regions"]:
        if r[0] == TRI:
            regions.append((TRI, tuple((int(e), int(s)) for e, s in r[1])))
        elif r[0] == POCKET:
            regions.append((POCKET, int(r[1]), int(r[2]), int(r[3])))
        elif r[0] == MOB1:
            regions.append((MOB1, (int(r[1][0]), int(r[1][1])), int(r[2])))
        else:
            raise SurfaceError(f"unknown region type {r[0]!r}")
    return QuasiTriangulation(
        surface,
        tuple(regions),
        tuple((int(e), str(lbl)) for e, lbl in data["boundary"]),
        int(data["next_id"]),
    )
