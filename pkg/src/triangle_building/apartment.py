"""Growing finite apartment patches around a chosen vertex.

Patch coordinates are axial lattice coordinates ``(m, n)`` meaning
``m R + n L``.  Steps R, L-R and -L multiply by a generator, steps L, -R
and R-L by an inverse generator, so vertex types increase by one along
the first three directions.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .building_local import _letter_between, chambers_at
from .errors import BacktrackExhausted
from .group_words import NormalForm, mul_gen, mul_gen_inv
from .labels import ChamberLabel
from .presentation import TrianglePresentation
from .sector_geometry import (
    SectorDiagram,
    position,
    random_diagram,
    random_extension,
    relocate_to_e,
    vertices,
)

R, L = (1, 0), (0, 1)
# counter-clockwise from R-L; even entries are lines, odd entries points
DIRECTIONS = [(1, -1), (1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1)]
POINT_DIRS = {(1, 0), (-1, 1), (0, -1)}


def add(p, q):
    return (p[0] + q[0], p[1] + q[1])


def sub(p, q):
    return (p[0] - q[0], p[1] - q[1])


def hex_distance(p) -> int:
    m, n = p
    return (abs(m) + abs(n) + abs(m + n)) // 2


def hex_ball(radius: int, center=(0, 0)) -> list[tuple[int, int]]:
    pts = []
    for m in range(-radius, radius + 1):
        for n in range(-radius, radius + 1):
            if hex_distance((m, n)) <= radius:
                pts.append(add(center, (m, n)))
    return pts


def _ring_order(p):
    """Sort key: distance from the origin, then counter-clockwise angle."""
    import math

    m, n = p
    x, y = m + n / 2, n * math.sqrt(3) / 2
    return (hex_distance(p), round(math.atan2(y, x) % (2 * math.pi), 9))


def triangles(positions) -> list[tuple[tuple[int, int], ...]]:
    """Unit triangles with all corners in ``positions``."""
    pos = set(positions)
    out = []
    for p in sorted(pos):
        up = (p, add(p, L), add(p, R))
        down = (p, add(p, (-1, 1)), add(p, L))
        for tri in (up, down):
            if all(v in pos for v in tri):
                out.append(tri)
    return out


def step_ok(pres, u: NormalForm, w: NormalForm, direction) -> bool:
    """Whether w = u * (a letter of the kind the lattice step requires)."""
    letter = _letter_between(pres, u, w)
    if letter is None:
        return False
    return (letter[1] == 1) == (direction in POINT_DIRS)


def patch_problems(pres: TrianglePresentation, verts: dict) -> list[str]:
    problems = []
    if len(set(verts.values())) != len(verts):
        problems.append("two lattice points carry the same vertex")
    for p, w in verts.items():
        for dvec in DIRECTIONS:
            q = add(p, dvec)
            if q in verts and not step_ok(pres, w, verts[q], dvec):
                problems.append(f"edge {p} -> {q} is not a building edge of the right kind")
    return problems


def grow_patch(pres: TrianglePresentation, seed: dict, radius: int, rng: random.Random, budget: int = 200000) -> dict:
    """Extend ``seed`` to all lattice points within ``radius`` of the origin.

    Points are filled ring by ring; each new vertex must be a building
    neighbour of the right kind of every placed lattice neighbour and must
    not repeat a vertex.  Choices are shuffled by ``rng`` and undone on
    dead ends.
    """
    verts = dict(seed)
    used = set(verts.values())
    todo = sorted((p for p in hex_ball(radius) if p not in verts), key=_ring_order)
    steps = 0

    def candidates(p):
        nbrs = [(dvec, verts[add(p, dvec)]) for dvec in DIRECTIONS if add(p, dvec) in verts]
        if not nbrs:
            raise ValueError(f"lattice point {p} has no placed neighbour")
        dvec, u = nbrs[0]
        # the step from u to p is -dvec
        back = (-dvec[0], -dvec[1])
        mul = mul_gen if back in POINT_DIRS else mul_gen_inv
        out = []
        for x in range(pres.n_points):
            w = mul(pres, u, x)
            if w in used:
                continue
            if all(step_ok(pres, v, w, (-e[0], -e[1])) for e, v in nbrs[1:]):
                out.append(w)
        out.sort()
        rng.shuffle(out)
        return out

    def fill(k):
        nonlocal steps
        if k == len(todo):
            return True
        p = todo[k]
        for w in candidates(p):
            steps += 1
            if steps > budget:
                raise BacktrackExhausted(f"gave up after {budget} placements")
            verts[p] = w
            used.add(w)
            if fill(k + 1):
                return True
            del verts[p]
            used.discard(w)
        return False

    if not fill(0):
        raise BacktrackExhausted("no completion of the seed exists")
    return verts


def hexagon_seed(pres: TrianglePresentation, center: NormalForm, hexagon_words) -> dict:
    """Lattice seed from a vertex and a 6-cycle of its residue.

    ``hexagon_words`` is the cycle in order, starting at a generator
    neighbour.
    """
    seed = {(0, 0): center}
    order = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)]
    for dvec, w in zip(order, hexagon_words):
        seed[dvec] = w
    problems = patch_problems(pres, seed)
    if problems:
        raise ValueError("; ".join(problems))
    return seed


# Sectors read off a patch.

SECTOR_FRAMES = [
    ((1, 0), (1, -1)),
    ((1, 0), (0, 1)),
    ((-1, 1), (0, 1)),
    ((-1, 1), (-1, 0)),
    ((0, -1), (-1, 0)),
    ((0, -1), (1, -1)),
]
"""(point step, line step) for the six sector directions, counter-clockwise."""


def sector_in_patch(pres, verts: dict, apex, frame) -> SectorDiagram | None:
    """Truncation of the sector at ``apex`` in direction ``frame`` inside the patch."""
    dp, dl = frame

    def at(i, j):
        return add(apex, (i * dp[0] + j * dl[0], i * dp[1] + j * dl[1]))

    depth = 0
    while all(at(i, depth + 1 - i) in verts for i in range(depth + 2)):
        depth += 1
    if depth == 0:
        return None
    cells = {}
    for i in range(depth):
        for j in range(depth - i):
            here = verts[at(i, j)]
            a = _letter_between(pres, here, verts[at(i, j + 1)])
            b = _letter_between(pres, here, verts[at(i + 1, j)])
            cells[(i, j)] = ChamberLabel(a[0], b[0])
    return SectorDiagram(verts[apex], depth, cells)


@dataclass
class BoundaryCheck:
    frame: tuple
    label: ChamberLabel | None
    depth: int
    contains_seed: bool


def boundary_sectors(pres, verts: dict, seed_diagram: SectorDiagram) -> list[BoundaryCheck]:
    """For each of the six directions, the sector at e of that boundary point.

    Every apex of the patch is tried; all relocations of one direction must
    agree, and the deepest is kept.
    """
    out = []
    for frame in SECTOR_FRAMES:
        best = None
        relocs = []
        for apex in sorted(verts):
            d = sector_in_patch(pres, verts, apex, frame)
            if d is None:
                continue
            rel = relocate_to_e(pres, d)
            if rel.diagram is not None:
                relocs.append(rel.diagram)
                if best is None or rel.diagram.depth > best.depth:
                    best = rel.diagram
        if best is None:
            out.append(BoundaryCheck(frame, None, 0, False))
            continue
        for r in relocs:
            if best.truncate(r.depth) != r:
                raise AssertionError(f"apexes disagree about the boundary point in direction {frame}")
        ok = best.depth >= seed_diagram.depth and best.truncate(seed_diagram.depth) == seed_diagram
        out.append(BoundaryCheck(frame, best.base_label, best.depth, ok))
    return out


@dataclass
class ApartmentPatch:
    radius: int
    vertices: dict
    case: str
    seed_diagram: SectorDiagram
    tip: NormalForm
    boundary: list = field(default_factory=list)

    @property
    def boundary_labels(self) -> list[ChamberLabel]:
        return [b.label for b in self.boundary]

    def verified(self) -> bool:
        return len(self.boundary) == 6 and all(b.contains_seed for b in self.boundary)

    def chambers(self, pres) -> list[tuple[NormalForm, ...]]:
        return [tuple(self.vertices[p] for p in tri) for tri in triangles(self.vertices)]

    def to_json(self) -> str:
        data = {
            "radius": self.radius,
            "case": self.case,
            "tip": str(self.tip),
            "vertices": [[p[0], p[1], str(w)] for p, w in sorted(self.vertices.items())],
            "triangles": [[list(p) for p in tri] for tri in triangles(self.vertices)],
            "boundary": [
                {"frame": [list(f) for f in b.frame], "label": None if b.label is None else list(b.label),
                 "depth": b.depth, "contains_seed": b.contains_seed}
                for b in self.boundary
            ],
        }
        return json.dumps(data, separators=(", ", ": "))


def _lies_as(pres, chamber_vertices, cell_positions) -> bool:
    return sorted(position(w) for w in chamber_vertices) == sorted(cell_positions)


def _third_vertex(pres, chamber, u, w):
    (x,) = set(chamber.vertices(pres)) - {u, w}
    return x


def grow_apartment(pres: TrianglePresentation, t_depth: int, rng_seed: int, radius: int | None = None) -> ApartmentPatch:
    """A patch of an apartment whose six boundary points all lie in the
    cylinder of a random depth-t diagram T at e.

    T is extended by random layers to depth 2(t+1); the tip v1 is its vertex
    at (t+1, t+1).  Around v1 four consecutive chambers are chosen lying as
    the up-triangle A at v1's position; the two chambers closing the
    hexagon then lie either both as A (case "A") or both as the triangle B
    to the left of A (case "B").  In case B a second hexagon is built at
    the vertex v2 two steps left of v1, so that its two left sectors lie as
    the up-triangle at v2's position.  The seed is then grown to a patch.
    """
    if t_depth < 1:
        raise ValueError("t_depth must be at least 1")
    rng = random.Random(rng_seed)
    if radius is None:
        radius = t_depth + 2
    seed_diagram = random_diagram(pres, t_depth, rng)
    big = seed_diagram
    while big.depth < 2 * (t_depth + 1):
        big = random_extension(pres, big, rng)
    v1 = vertices(pres, big)[(t_depth + 1, t_depth + 1)]
    P = position(v1)
    cell_a = [P, add(P, L), add(P, R)]
    cell_b = [P, add(P, (-1, 1)), add(P, L)]

    def as_a(ch):
        return _lies_as(pres, ch.vertices(pres), cell_a)

    star = chambers_at(pres, v1)
    a_choices = [c for c in star if as_a(c)]
    assert len(a_choices) == pres.q ** 3, len(a_choices)
    a1 = rng.choice(a_choices)
    # name A1's other two vertices by kind
    others = sorted(set(a1.vertices(pres)) - {v1})
    u1 = next(w for w in others if step_ok(pres, v1, w, R))
    u0 = next(w for w in others if step_ok(pres, v1, w, L))
    ring = [u0, u1]
    prev = a1
    for _ in range(3):
        u_last, u_before = ring[-1], ring[-2]
        options = [
            c for c in star
            if c != prev and u_last in c.vertices(pres) and u_before not in c.vertices(pres) and as_a(c)
        ]
        assert len(options) == pres.q - 1, len(options)
        prev = rng.choice(options)
        ring.append(_third_vertex(pres, prev, v1, u_last))
    u0, u1, u2, u3, u4 = ring
    # u4 and u0 are both lines of the residue at v1; u5 is their common point
    u5 = next(
        c for c in (mul_gen(pres, v1, x) for x in range(pres.n_points))
        if _letter_between(pres, c, u4) and _letter_between(pres, c, u0)
    )
    if _lies_as(pres, (v1, u4, u5), cell_a) and _lies_as(pres, (v1, u5, u0), cell_a):
        case = "A"
    elif _lies_as(pres, (v1, u4, u5), cell_b) and _lies_as(pres, (v1, u5, u0), cell_b):
        case = "B"
    else:
        raise AssertionError("closing chambers lie neither both as A nor both as B")
    seed = {(0, 0): v1, R: u1, (1, -1): u2, (0, -1): u3, (-1, 0): u4, (-1, 1): u5, L: u0}
    if case == "B":
        v2 = u5
        P2 = position(v2)
        cell_c = [P2, add(P2, L), add(P2, R)]
        star2 = chambers_at(pres, v2)
        # C1 on the edge {v2, u0} away from v1
        c1_options = [c for c in star2 if u0 in c.vertices(pres) and v1 not in c.vertices(pres)]
        assert len(c1_options) == pres.q
        c1 = rng.choice(c1_options)
        w1 = _third_vertex(pres, c1, v2, u0)
        c1p_options = [
            c for c in star2
            if w1 in c.vertices(pres) and u0 not in c.vertices(pres)
            and _lies_as(pres, c.vertices(pres), cell_c)
        ]
        assert len(c1p_options) == pres.q - 1, len(c1p_options)
        c1p = rng.choice(c1p_options)
        w2 = _third_vertex(pres, c1p, v2, w1)
        w3 = next(
            c for c in (mul_gen_inv(pres, v2, x) for x in range(pres.n_points))
            if _letter_between(pres, c, w2) and _letter_between(pres, c, u4)
        )
        seed.update({(-1, 2): w1, (-2, 2): w2, (-2, 1): w3})
    problems = patch_problems(pres, seed)
    if problems:
        raise AssertionError("; ".join(problems))
    verts = grow_patch(pres, seed, radius, rng)
    patch = ApartmentPatch(radius, verts, case, seed_diagram, v1)
    patch.boundary = boundary_sectors(pres, verts, seed_diagram)
    return patch
