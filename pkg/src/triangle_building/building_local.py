"""Chambers, vertex residues, hexagons and galleries of the building."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .errors import ChamberOutsideBall
from .group_words import (
    IDENTITY,
    NormalForm,
    gen,
    gen_inv,
    inverse,
    mul_gen,
    mul_gen_inv,
    multiply,
)
from .presentation import TrianglePresentation


def vertex_type(g: NormalForm) -> int:
    n, m = g.shape
    return (m - n) % 3


@dataclass(frozen=True)
class Chamber:
    """The chamber {base, base*a_left^-1, base*a_right} with base of type 0."""

    base: NormalForm
    left: int
    right: int

    def vertices(self, pres: TrianglePresentation) -> frozenset[NormalForm]:
        return frozenset(
            (self.base, mul_gen_inv(pres, self.base, self.left), mul_gen(pres, self.base, self.right))
        )


def _letter_between(pres, u: NormalForm, v: NormalForm):
    """The single letter s with u*s = v, or None."""
    w = multiply(pres, inverse(pres, u), v)
    if w.length != 1:
        return None
    return (w.xs[0], -1) if w.xs else (w.ys[0], 1)


def chamber_from_vertices(pres: TrianglePresentation, vertices) -> Chamber:
    vs = list(vertices)
    if len(set(vs)) != 3:
        raise ValueError("a chamber has three distinct vertices")
    by_type = {vertex_type(v): v for v in vs}
    if sorted(by_type) != [0, 1, 2]:
        raise ValueError("vertices do not have three distinct types")
    base = by_type[0]
    lx = _letter_between(pres, base, by_type[2])
    ry = _letter_between(pres, base, by_type[1])
    if lx is None or ry is None or lx[1] != -1 or ry[1] != 1:
        raise ValueError("vertices are not pairwise adjacent")
    x, y = lx[0], ry[0]
    if pres.third(x, y) is None:
        raise ValueError("vertices do not span a chamber")
    return Chamber(base, x, y)


def chambers_at(pres: TrianglePresentation, g: NormalForm) -> list[Chamber]:
    """All chambers containing g, found with g in each of its three roles."""
    memo = pres.memo("chambers_at")
    if g in memo:
        return memo[g]
    seen = {}
    n = pres.n_points
    for x in range(n):
        for y in pres.lam_pts[x]:
            # g as h, as h*a_x^-1, and as h*a_y
            for h in (g, mul_gen(pres, g, x), mul_gen_inv(pres, g, y)):
                vs = frozenset((h, mul_gen_inv(pres, h, x), mul_gen(pres, h, y)))
                if g in vs and vs not in seen:
                    seen[vs] = chamber_from_vertices(pres, vs)
    out = sorted(seen.values(), key=lambda c: (c.base.length, c.base, c.left, c.right))
    memo[g] = out
    return out


@dataclass(frozen=True)
class ResidueGraph:
    center: NormalForm
    labels: tuple[str, ...]
    words: tuple[NormalForm, ...]
    edges: tuple[tuple[str, str], ...]

    def adjacency(self) -> dict[str, set[str]]:
        adj = {v: set() for v in self.labels}
        for u, w in self.edges:
            adj[u].add(w)
            adj[w].add(u)
        return adj


def residue_graph(pres: TrianglePresentation, g: NormalForm) -> ResidueGraph:
    """Neighbours g*a_x (label ``x``) and g*a_x^-1 (label ``x^-1``) with building adjacency."""
    n = pres.n_points
    labels = [f"{x}" for x in range(n)] + [f"{x}^-1" for x in range(n)]
    words = [mul_gen(pres, g, x) for x in range(n)] + [mul_gen_inv(pres, g, x) for x in range(n)]
    edges = []
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            if _letter_between(pres, words[i], words[j]) is not None:
                edges.append((labels[i], labels[j]))
    return ResidueGraph(g, tuple(labels), tuple(words), tuple(edges))


def hexagons(res: ResidueGraph) -> list[frozenset[str]]:
    """Distinct 6-cycles of the residue graph, as vertex sets."""
    adj = res.adjacency()
    order = {v: i for i, v in enumerate(res.labels)}
    found = set()

    def extend(path):
        last = path[-1]
        if len(path) == 6:
            if path[0] in adj[last]:
                found.add(frozenset(path))
            return
        for w in adj[last]:
            if order[w] > order[path[0]] and w not in path:
                extend(path + [w])

    for v in res.labels:
        extend([v])
    return sorted(found, key=lambda s: sorted(order[v] for v in s))


def hexagon_count(res: ResidueGraph) -> int:
    return len(hexagons(res))


def residue_to_dot(res: ResidueGraph) -> str:
    lines = ["graph residue {"]
    for v in res.labels:
        shape = "box" if v.endswith("^-1") else "ellipse"
        lines.append(f'  "{v}" [shape={shape}];')
    for u, w in res.edges:
        lines.append(f'  "{u}" -- "{w}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def chamber_label(c: Chamber) -> str:
    return f"{c.base}|{c.left}^-1|{c.right}"


def chamber_graph_to_dot(pres: TrianglePresentation, chambers) -> str:
    chambers = list(chambers)
    verts = [c.vertices(pres) for c in chambers]
    lines = ["graph chambers {"]
    for c in chambers:
        lines.append(f'  "{chamber_label(c)}";')
    for i in range(len(chambers)):
        for j in range(i + 1, len(chambers)):
            if len(verts[i] & verts[j]) == 2:
                lines.append(f'  "{chamber_label(chambers[i])}" -- "{chamber_label(chambers[j])}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


# Galleries

def chamber_neighbours(pres: TrianglePresentation, c: Chamber) -> list[Chamber]:
    """Chambers sharing an edge with c."""
    vs = c.vertices(pres)
    out = []
    for u in sorted(vs):
        for d in chambers_at(pres, u):
            dv = d.vertices(pres)
            if d != c and len(dv & vs) == 2 and d not in out:
                out.append(d)
    return out


def is_gallery(pres: TrianglePresentation, gallery) -> bool:
    for c, d in zip(gallery, gallery[1:]):
        if len(c.vertices(pres) & d.vertices(pres)) != 2:
            return False
    return True


def gallery_type(pres: TrianglePresentation, gallery) -> tuple[int, ...]:
    labels = []
    for c, d in zip(gallery, gallery[1:]):
        cv, dv = c.vertices(pres), d.vertices(pres)
        if len(cv & dv) != 2:
            raise ValueError("consecutive chambers do not share an edge")
        (u,) = cv - dv
        (w,) = dv - cv
        assert vertex_type(u) == vertex_type(w)
        labels.append(vertex_type(u))
    return tuple(labels)


def chamber_distance(pres, c: Chamber, d: Chamber, radius: int, cutoff: int | None = None):
    """Chamber-graph distance inside the ball of the given radius about e.

    Returns None if d is not reached within ``cutoff`` steps.
    """
    def inside(ch):
        return all(v.length <= radius for v in ch.vertices(pres))

    for ch in (c, d):
        if not inside(ch):
            raise ChamberOutsideBall(f"{chamber_label(ch)} leaves the ball of radius {radius}")
    dist = {c: 0}
    queue = deque([c])
    while queue:
        x = queue.popleft()
        if x == d:
            return dist[x]
        if cutoff is not None and dist[x] >= cutoff:
            continue
        for y in chamber_neighbours(pres, x):
            if y not in dist and inside(y):
                dist[y] = dist[x] + 1
                queue.append(y)
    return None


def is_stretched(pres: TrianglePresentation, gallery, radius: int | None = None) -> bool:
    """True when the gallery length equals the chamber distance between its ends."""
    if not is_gallery(pres, gallery):
        raise ValueError("not a gallery")
    steps = len(gallery) - 1
    if steps == 0:
        return True
    if radius is None:
        radius = max(v.length for c in gallery for v in c.vertices(pres)) + 2
    for c in gallery:
        if any(v.length > radius for v in c.vertices(pres)):
            raise ChamberOutsideBall(f"{chamber_label(c)} leaves the ball of radius {radius}")
    dist = chamber_distance(pres, gallery[0], gallery[-1], radius, cutoff=steps)
    return dist == steps


def base_chamber(pres, a: int, b: int) -> Chamber:
    """The chamber {e, a_a^-1, a_b}."""
    return chamber_from_vertices(pres, (IDENTITY, gen_inv(a), gen(b)))
