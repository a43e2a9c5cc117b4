"""Finite sector truncations (sector diagrams) and their chamber labels.

A diagram of depth k based at w has cells ``(i, j)`` with ``i + j < k``.
Cell ``(i, j) = (a, b)`` is the chamber with vertices ``v(i, j)``,
``v(i, j+1) = v(i, j) a_a^-1`` and ``v(i+1, j) = v(i, j) a_b``; so i counts
steps along the right wall and j along the left wall.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DepthInsufficient, FillContradiction, InadmissibleWall
from .group_words import (
    IDENTITY,
    NormalForm,
    inverse,
    mul_gen,
    mul_gen_inv,
    multiply,
    parse_word,
    reduce,
)
from .labels import ChamberLabel, a_minus, a_plus, alphabet
from .presentation import TrianglePresentation


@dataclass(frozen=True)
class SectorDiagram:
    base: NormalForm
    depth: int
    cells: dict = field(hash=False)

    def __post_init__(self):
        cells = {tuple(k): ChamberLabel(*v) for k, v in self.cells.items()}
        object.__setattr__(self, "cells", cells)
        expected = {(i, j) for i in range(self.depth) for j in range(self.depth - i)}
        if set(cells) != expected:
            raise ValueError(f"cells do not cover a depth-{self.depth} triangle")

    @property
    def base_label(self) -> ChamberLabel:
        return self.cells[(0, 0)]

    def key(self):
        return (self.base, self.depth, tuple(sorted(self.cells.items())))

    def __eq__(self, other):
        return isinstance(other, SectorDiagram) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def truncate(self, depth: int) -> "SectorDiagram":
        if depth > self.depth:
            raise ValueError("cannot truncate to a larger depth")
        cells = {k: v for k, v in self.cells.items() if k[0] + k[1] < depth}
        return SectorDiagram(self.base, depth, cells)

    def rebase(self, base: NormalForm) -> "SectorDiagram":
        """The same cells hung from another base vertex (left translation)."""
        return SectorDiagram(base, self.depth, self.cells)

    def right_wall(self) -> list[ChamberLabel]:
        return [self.cells[(i, 0)] for i in range(self.depth)]

    def left_wall(self) -> list[ChamberLabel]:
        return [self.cells[(0, j)] for j in range(self.depth)]


def third_label(pres, label) -> int:
    return pres.third(label[0], label[1])


def vertex_words(pres: TrianglePresentation, d: SectorDiagram):
    """Vertex words of d, and the list of positions where two paths disagree."""
    cached = d.__dict__.get("_vertex_words")
    if cached is not None and cached[0] is pres:
        return cached[1]
    v = {(0, 0): d.base}
    clashes = []
    for s in range(d.depth):
        for i in range(s + 1):
            j = s - i
            a, b = d.cells[(i, j)]
            here = v[(i, j)]
            for pos, w in (((i, j + 1), mul_gen_inv(pres, here, a)), ((i + 1, j), mul_gen(pres, here, b))):
                old = v.get(pos)
                if old is None:
                    v[pos] = w
                elif old != w:
                    clashes.append(pos)
    object.__setattr__(d, "_vertex_words", (pres, (v, clashes)))
    return v, clashes


def vertices(pres, d: SectorDiagram) -> dict[tuple[int, int], NormalForm]:
    return vertex_words(pres, d)[0]


def diagram_problems(pres: TrianglePresentation, d: SectorDiagram) -> list[str]:
    """Check chamber labels, path independence and geodesic growth."""
    problems = []
    for (i, j), (a, b) in sorted(d.cells.items()):
        if b not in pres.lam_pts[a]:
            problems.append(f"cell {(i, j)} = {(a, b)} is not a chamber label")
    if problems:
        return problems
    v, clashes = vertex_words(pres, d)
    for pos in clashes:
        problems.append(f"vertex {pos} differs along two paths")
    if problems:
        return problems
    binv = inverse(pres, d.base)
    for (m, n), w in sorted(v.items()):
        rel = multiply(pres, binv, w) if d.base != IDENTITY else w
        if rel.shape != (n, m):
            problems.append(f"vertex {(m, n)} has shape {rel.shape}, expected {(n, m)}")
    return problems


def is_valid(pres, d: SectorDiagram) -> bool:
    return not diagram_problems(pres, d)


def depth_one(label, base: NormalForm = IDENTITY) -> SectorDiagram:
    return SectorDiagram(base, 1, {(0, 0): ChamberLabel(*label)})


def brute_force_extensions(pres: TrianglePresentation, d: SectorDiagram) -> list[SectorDiagram]:
    """All depth+1 diagrams extending d, by search over raw labels.

    Cells of the new layer are assigned right to left from the full
    alphabet, pruning on vertex shapes and on agreement of vertex words
    reached from two cells.  Uses no transition sets and no filling rule.
    """
    k = d.depth
    labels = alphabet(pres)
    binv = inverse(pres, d.base)
    old = vertices(pres, d)
    out = []

    def ok_vertex(pos, w, placed):
        m, n = pos
        rel = multiply(pres, binv, w)
        if rel.shape != (n, m):
            return False
        prev = placed.get(pos, old.get(pos))
        return prev is None or prev == w

    def search(i, placed, cells):
        # cell (i, k - i); i runs from k down to 0
        if i < 0:
            out.append(SectorDiagram(d.base, k + 1, {**d.cells, **cells}))
            return
        j = k - i
        here = old[(i, j)]
        for lab in labels:
            up = mul_gen_inv(pres, here, lab.a)
            right = mul_gen(pres, here, lab.b)
            if not ok_vertex((i, j + 1), up, placed) or not ok_vertex((i + 1, j), right, placed):
                continue
            nxt = dict(placed)
            nxt[(i, j + 1)] = up
            nxt[(i + 1, j)] = right
            search(i - 1, nxt, {**cells, (i, j): lab})

    search(k, {}, {})
    return out


# Filling from walls.

def fill_layer(pres: TrianglePresentation, cells: dict, k: int, right, left) -> dict:
    """Cells of layer k (i + j = k) given all lower layers and the two wall cells.

    Right to left: the down triangle between new cells (i+1, k-1-i) and
    (i, k-i) is a chamber only if (b, a', c) is a triple, with c the top
    letter of the cell beneath, so b = third(a', c).  The L-vertex of the
    new cell (i, k-i) is then the line through its R-vertex and the top
    vertex of the old cell (i-1, k-i), both points of the residue at the
    cell's base.  The left wall cell must agree with the forced b.
    """
    new = {(k, 0): ChamberLabel(*right)}
    if k == 0:
        return new
    left = ChamberLabel(*left)
    for i in range(k - 1, -1, -1):
        a_right = new[(i + 1, k - 1 - i)].a
        c = third_label(pres, cells[(i, k - 1 - i)])
        b = pres.third(a_right, c)
        if b is None:
            raise FillContradiction(f"down triangle at {(i, k - 1 - i)} is not a chamber")
        if i == 0:
            if b != left.b:
                raise FillContradiction(f"left wall cell {tuple(left)} needs b = {b}")
            new[(0, k)] = left
            break
        c_left = third_label(pres, cells[(i - 1, k - i)])
        if c_left == b:
            raise FillContradiction(f"degenerate residue at {(i, k - i)}")
        new[(i, k - i)] = ChamberLabel(pres.line_through(b, c_left), b)
    return new


def fill_from_walls(pres: TrianglePresentation, base, right, left, base_vertex: NormalForm = IDENTITY) -> SectorDiagram:
    """The diagram whose right wall is ``[base] + right`` and left wall ``[base] + left``."""
    right, left = list(right), list(left)
    if len(right) != len(left):
        raise ValueError("walls must have equal length")
    base = ChamberLabel(*base)
    for wall, step, name in ((right, a_plus, "right"), (left, a_minus, "left")):
        prev = base
        for lab in wall:
            if ChamberLabel(*lab) not in step(pres, prev):
                raise InadmissibleWall(f"{name} wall step {tuple(prev)} -> {tuple(lab)}")
            prev = ChamberLabel(*lab)
    cells = {(0, 0): base}
    for k in range(1, len(right) + 1):
        cells.update(fill_layer(pres, cells, k, right[k - 1], left[k - 1]))
    d = SectorDiagram(base_vertex, len(right) + 1, cells)
    problems = diagram_problems(pres, d)
    if problems:
        raise FillContradiction("; ".join(problems))
    return d


def enumerate_extensions(pres: TrianglePresentation, d: SectorDiagram) -> list[SectorDiagram]:
    """All valid depth+1 diagrams extending d.

    Every pair of admissible wall cells is tried; pairs whose forced interior
    is inconsistent are dropped.
    """
    k = d.depth
    out = []
    for r in sorted(a_plus(pres, d.cells[(k - 1, 0)])):
        for l in sorted(a_minus(pres, d.cells[(0, k - 1)])):
            try:
                layer = fill_layer(pres, d.cells, k, r, l)
            except FillContradiction:
                continue
            e = SectorDiagram(d.base, k + 1, {**d.cells, **layer})
            problems = diagram_problems(pres, e)
            if problems:
                raise FillContradiction("; ".join(problems))
            out.append(e)
    return out


def wall_pair_outcomes(pres: TrianglePresentation, d: SectorDiagram):
    """Every admissible wall pair one layer up, with the fill outcome.

    Yields ``(right, left, diagram or None)``.
    """
    k = d.depth
    for r in sorted(a_plus(pres, d.cells[(k - 1, 0)])):
        for l in sorted(a_minus(pres, d.cells[(0, k - 1)])):
            try:
                layer = fill_layer(pres, d.cells, k, r, l)
            except FillContradiction:
                yield r, l, None
                continue
            yield r, l, SectorDiagram(d.base, k + 1, {**d.cells, **layer})


def all_diagrams(pres: TrianglePresentation, depth: int, base_label=None) -> list[SectorDiagram]:
    """All depth-k diagrams based at e, optionally with a fixed base label."""
    labels = [ChamberLabel(*base_label)] if base_label is not None else alphabet(pres)
    layer = [depth_one(lab) for lab in labels]
    for _ in range(depth - 1):
        layer = [e for d in layer for e in enumerate_extensions(pres, d)]
    return layer


def random_diagram(pres: TrianglePresentation, depth: int, rng, base_label=None) -> SectorDiagram:
    lab = base_label if base_label is not None else rng.choice(alphabet(pres))
    d = depth_one(lab)
    while d.depth < depth:
        d = random_extension(pres, d, rng)
    return d


def random_extension(pres, d: SectorDiagram, rng) -> SectorDiagram:
    """One uniformly chosen extension by a layer (no word-level check)."""
    k = d.depth
    options = []
    for r in sorted(a_plus(pres, d.cells[(k - 1, 0)])):
        for l in sorted(a_minus(pres, d.cells[(0, k - 1)])):
            try:
                options.append(fill_layer(pres, d.cells, k, r, l))
            except FillContradiction:
                pass
    return SectorDiagram(d.base, k + 1, {**d.cells, **rng.choice(options)})


def cylinder_contains(pres: TrianglePresentation, d: SectorDiagram, v: NormalForm) -> bool:
    """Whether the sector truncated by d passes through v."""
    rel = multiply(pres, inverse(pres, d.base), v)
    if rel.length > d.depth:
        raise DepthInsufficient(f"|v| = {rel.length} exceeds depth {d.depth}")
    n, m = rel.shape
    return vertices(pres, d).get((m, n)) == v


# JSON

def diagram_to_json(d: SectorDiagram) -> str:
    base = str(d.base)
    cells = [[i, j, lab.a, lab.b] for (i, j), lab in sorted(d.cells.items())]
    return json.dumps({"base": base, "depth": d.depth, "cells": cells}, separators=(", ", ": "))


def diagram_from_json(pres, text: str) -> SectorDiagram:
    data = json.loads(text)
    base = reduce(pres, parse_word(data.get("base", "e")))
    cells = {(c[0], c[1]): ChamberLabel(c[2], c[3]) for c in data["cells"]}
    return SectorDiagram(base, int(data["depth"]), cells)


# Moving sectors between base points.

def position(g: NormalForm) -> tuple[int, int]:
    """Lattice position (m, n) of g in the sector at e through it: m right, n left."""
    return (len(g.ys), len(g.xs))


def parallelogram_letters(pres: TrianglePresentation, w: NormalForm):
    """Edge letters of the convex hull of e and w, as two dicts.

    ``L[(m, n)]`` labels the edge (m, n) -> (m, n+1) (an inverse generator)
    and ``R[(m, n)]`` the edge (m, n) -> (m+1, n).  Rows are filled downward
    from the top row given by ``w``'s positive part: at the vertex
    (m-1, n+1) the two points R(m-1, n+1) and L(m-1, n) lie on the line
    through the vertex (m, n), which fixes both lower letters.
    """
    xs, ys = w.xs, w.ys
    big_m, big_n = len(ys), len(xs)
    L = {(0, n): xs[n] for n in range(big_n)}
    R = {(m, big_n): ys[m] for m in range(big_m)}
    for n in range(big_n - 1, -1, -1):
        for m in range(1, big_m + 1):
            rr = R[(m - 1, n + 1)]
            ll = L[(m - 1, n)]
            if rr == ll:
                raise FillContradiction(f"degenerate residue filling towards {w}")
            t = pres.line_through(rr, ll)
            R[(m - 1, n)] = pres.third(t, ll)
            L[(m, n)] = pres.third(t, rr)
    return L, R


@dataclass(frozen=True)
class Relocation:
    """The sector at e parallel to a given diagram, as far as it is determined."""

    diagram: SectorDiagram | None
    offset: tuple[int, int] | None
    members: int


def _members(pres, d: SectorDiagram):
    """Cells of d lying as the up-triangle at their own lattice position."""
    v = vertices(pres, d)
    out = []
    for (i, j) in d.cells:
        p = position(v[(i, j)])
        if position(v[(i, j + 1)]) == (p[0], p[1] + 1) and position(v[(i + 1, j)]) == (p[0] + 1, p[1]):
            out.append(((i, j), (p[0] - i, p[1] - j)))
    return out


def relocate_to_e(pres: TrianglePresentation, d: SectorDiagram) -> Relocation:
    """Truncation of the sector at e in the class of d, of maximal determined depth.

    A cell of d that retracts onto the up-triangle at its own position starts
    a subsector of the sector at e; every vertex above such a cell is
    therefore known in the e-frame, and the convex hulls of e with those
    vertices give the rest.
    """
    found = _members(pres, d)
    if not found:
        return Relocation(None, None, 0)
    offsets = {off for _, off in found}
    if len(offsets) != 1:
        raise FillContradiction(f"members disagree on the offset: {sorted(offsets)}")
    (dm, dn), = offsets
    v = vertices(pres, d)
    k = d.depth
    member_cells = {c for c, _ in found}
    # vertices lying above some member, in diagram coordinates
    above = set()
    for s in range(k + 1):
        for i in range(s + 1):
            j = s - i
            if (i, j) in member_cells or (i - 1, j) in above or (i, j - 1) in above:
                above.add((i, j))
    known = {(i + dm, j + dn): v[(i, j)] for (i, j) in above}
    for (m, n), w in known.items():
        if position(w) != (m, n):
            raise FillContradiction(f"vertex {w} sits at {(m, n)} but retracts to {position(w)}")
    # maximal elements suffice: each hull contains the hulls below it
    maximal = [p for p in known if (p[0] + 1, p[1]) not in known and (p[0], p[1] + 1) not in known]
    L, R = {}, {}
    for p in maximal:
        pl, pr = parallelogram_letters(pres, known[p])
        for src, dst in ((pl, L), (pr, R)):
            for key, val in src.items():
                if dst.setdefault(key, val) != val:
                    raise FillContradiction(f"hulls disagree on the edge at {key}")
    # depth: every lattice point with m + n <= D lies under a known vertex
    reach = {}
    for (m, n) in known:
        for mm in range(m + 1):
            reach[mm] = max(reach.get(mm, -1), n)
    depth = 0
    while all(reach.get(m, -1) >= depth + 1 - m for m in range(depth + 2)):
        depth += 1
    if depth == 0:
        return Relocation(None, (dm, dn), len(found))
    cells = {(m, n): ChamberLabel(L[(m, n)], R[(m, n)]) for m in range(depth) for n in range(depth - m)}
    e_diag = SectorDiagram(IDENTITY, depth, cells)
    ev = vertices(pres, e_diag)
    for p, w in known.items():
        if p in ev and ev[p] != w:
            raise FillContradiction(f"relocated sector misses the known vertex at {p}")
    return Relocation(e_diag, (dm, dn), len(found))


def translate(pres: TrianglePresentation, g: NormalForm, d: SectorDiagram, depth: int | None = None) -> SectorDiagram:
    """The diagram at e for g applied to the boundary point of d.

    By default the result has depth ``d.depth - |g|``; ``depth`` asks for
    another one.  Raises DepthInsufficient if that much is not determined.
    """
    if depth is None:
        depth = d.depth - g.length
    if depth < 1:
        raise DepthInsufficient(f"depth {d.depth} leaves nothing after moving by |g| = {g.length}")
    moved = d.rebase(multiply(pres, g, d.base))
    if moved.base == IDENTITY:
        if depth > d.depth:
            raise DepthInsufficient(f"requested depth {depth} > {d.depth}")
        return moved.truncate(depth)
    rel = relocate_to_e(pres, moved)
    if rel.diagram is None or rel.diagram.depth < depth:
        got = 0 if rel.diagram is None else rel.diagram.depth
        raise DepthInsufficient(f"only depth {got} is determined, {depth} requested")
    return rel.diagram.truncate(depth)


def translate_max(pres: TrianglePresentation, g: NormalForm, d: SectorDiagram) -> SectorDiagram | None:
    """Like :func:`translate` but returns the deepest determined truncation."""
    moved = d.rebase(multiply(pres, g, d.base))
    if moved.base == IDENTITY:
        return moved
    return relocate_to_e(pres, moved).diagram


# Witnesses that a translate lands in a given cylinder.

def hull_vertices(pres: TrianglePresentation, w: NormalForm) -> dict[tuple[int, int], NormalForm]:
    """Vertices of the convex hull of e and w, keyed by lattice position."""
    L, R = parallelogram_letters(pres, w)
    out = {}
    left = IDENTITY
    for n in range(len(w.xs) + 1):
        here = left
        out[(0, n)] = here
        for m in range(len(w.ys)):
            here = mul_gen(pres, here, R[(m, n)])
            out[(m + 1, n)] = here
        if n < len(w.xs):
            left = mul_gen_inv(pres, left, L[(0, n)])
    return out


def _fits(pres, k: NormalForm, source) -> bool:
    """Whether the chamber of type ``source`` at k lies as the up-triangle at k."""
    a, b = source
    m, n = position(k)
    return position(mul_gen(pres, k, b)) == (m + 1, n) and position(mul_gen_inv(pres, k, a)) == (m, n + 1)


def minimality_witness(pres: TrianglePresentation, v: NormalForm, source, max_extra: int = 4) -> NormalForm:
    """Some k with k Omega(source) inside the cylinder of sectors at e through v.

    First tries k = v a_z for the least z with b not on lam(z), z not on
    lam(y_m) (z != x_n when v has no positive part).  Those conditions do
    not always keep v a_z a_a^-1 geodesic, so each candidate must also carry
    the source chamber as the up-triangle at its own position.  If no
    single letter works, longer extensions k = v u are searched with v on
    the hull of e and k.
    """
    a, b = source
    for z in range(pres.n_points):
        if b in pres.lam_pts[z]:
            continue
        if v.ys and z in pres.lam_pts[v.ys[-1]]:
            continue
        if not v.ys and v.xs and z == v.xs[-1]:
            continue
        k = mul_gen(pres, v, z)
        if k.length == v.length + 1 and _fits(pres, k, source):
            return k
    layer = [v]
    for extra in range(1, max_extra + 1):
        nxt = []
        for u in layer:
            for x in range(pres.n_points):
                for k in (mul_gen(pres, u, x), mul_gen_inv(pres, u, x)):
                    if k.length == v.length + extra:
                        nxt.append(k)
        layer = sorted(set(nxt), key=lambda g: (len(g.xs), g))
        for k in layer:
            if _fits(pres, k, source) and hull_vertices(pres, k).get(position(v)) == v:
                return k
    raise AssertionError(f"no witness within |v| + {max_extra}")


def check_witness(pres: TrianglePresentation, v: NormalForm, source, k: NormalForm, depth: int | None = None):
    """Translate every diagram with base ``source`` by k and test that it passes v.

    Returns ``(checked, failures)``.  The default depth max(|v|, 1) is the
    least that decides whether v is on the translated sector.
    """
    if depth is None:
        depth = max(v.length, 1)
    checked = failures = 0
    for d in all_diagrams(pres, depth, source):
        moved = translate_max(pres, k, d)
        checked += 1
        if moved is None or moved.depth < v.length or not cylinder_contains(pres, moved, v):
            failures += 1
    return checked, failures


# Amenability overlaps.

def amenability_overlap(pres: TrianglePresentation, omega: SectorDiagram, s: NormalForm, i: int):
    """Exact overlap of the normalised indicator of the first i layers of the
    sector at e and of its image under s.

    Counts t in the sector at e with |t| < i whose translate s^-1 t lies in
    the first i layers of the sector at e for s^-1 omega.
    """
    if omega.base != IDENTITY:
        raise ValueError("omega must be based at e")
    if omega.depth < i:
        raise DepthInsufficient(f"depth {omega.depth} < i = {i}")
    sinv = inverse(pres, s)
    other = translate_max(pres, sinv, omega)
    if other is None or other.depth < i - 1:
        got = 0 if other is None else other.depth
        raise DepthInsufficient(f"sector at e for s^-1 omega determined only to depth {got}")
    mine = {w for (m, n), w in vertices(pres, omega).items() if m + n <= i - 1}
    theirs = {w for (m, n), w in vertices(pres, other).items() if m + n <= i - 1}
    hits = sum(1 for t in mine if multiply(pres, sinv, t) in theirs)
    return Fraction(hits, i * (i + 1) // 2)
