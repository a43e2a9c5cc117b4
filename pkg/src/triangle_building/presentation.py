"""Triangle presentations compatible with a point-line correspondence."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import SearchBudgetExceeded
from .projective_plane import ProjectivePlane, build_plane, join, line_index, meet


@dataclass(frozen=True)
class Report:
    ok: bool
    violations: list[str] = field(default_factory=list)


def canonical_rotation(t: tuple[int, int, int]) -> tuple[int, int, int]:
    x, y, z = t
    return min((x, y, z), (y, z, x), (z, x, y))


def rotations(t: tuple[int, int, int]):
    x, y, z = t
    return ((x, y, z), (y, z, x), (z, x, y))


class TrianglePresentation:
    """A plane, a bijection lam from points to lines, and a triple set T.

    ``lam[x]`` is a line index of ``plane``.  The constructor does not
    validate; call :func:`verify`.
    """

    def __init__(self, plane: ProjectivePlane, lam, triples):
        self.plane = plane
        self.q = plane.q
        self.lam = tuple(lam)
        self.triples = frozenset(tuple(t) for t in triples)
        self.lam_pts = tuple(plane.line_points[l] for l in self.lam)
        self.lam_inv = {l: x for x, l in enumerate(self.lam)}
        self._third = {}
        self._memo = {}
        for x, y, z in self.triples:
            self._third.setdefault((x, y), z)

    @property
    def n_points(self) -> int:
        return self.plane.size

    def third(self, x: int, y: int):
        return self._third.get((x, y))

    def memo(self, name: str) -> dict:
        """A named cache owned by this presentation."""
        return self._memo.setdefault(name, {})

    def meet_lam(self, x: int, y: int) -> int:
        """The point common to lam(x) and lam(y)."""
        return meet(self.plane, self.lam[x], self.lam[y])

    def line_through(self, p1: int, p2: int) -> int:
        """The point t whose line lam(t) contains both p1 and p2."""
        return self.lam_inv[join(self.plane, p1, p2)]

    def __eq__(self, other):
        return (
            isinstance(other, TrianglePresentation)
            and self.plane == other.plane
            and self.lam == other.lam
            and self.triples == other.triples
        )

    def __hash__(self):
        return hash((self.lam, self.triples))

    def __repr__(self):
        return f"TrianglePresentation(q={self.q}, |T|={len(self.triples)})"


def verify(pres: TrianglePresentation) -> Report:
    n = pres.n_points
    problems = []
    if sorted(pres.lam) != list(range(n)):
        problems.append("lambda is not a bijection")
        return Report(False, problems)
    # (i)
    for x in range(n):
        for y in range(n):
            has = any((x, y, z) in pres.triples for z in range(n))
            if has != (y in pres.lam_pts[x]):
                problems.append(f"(i) fails at pair ({x},{y})")
                break
        else:
            continue
        break
    # (ii)
    for t in sorted(pres.triples):
        x, y, z = t
        if (y, z, x) not in pres.triples:
            problems.append(f"(ii) fails: {t} present but {(y, z, x)} missing")
            break
    # (iii)
    seen = {}
    for x, y, z in sorted(pres.triples):
        if (x, y) in seen and seen[(x, y)] != z:
            problems.append(f"(iii) fails at pair ({x},{y}): z in {{{seen[(x, y)]},{z}}}")
            break
        seen[(x, y)] = z
    return Report(not problems, problems)


def canonical(q: int = 2) -> TrianglePresentation:
    """Built-in presentation for q = 2 or q = 3."""
    if q == 2:
        return canonical_q2()
    if q == 3:
        return canonical_q3()
    raise ValueError(f"no built-in presentation for q={q}")


def canonical_q2() -> TrianglePresentation:
    plane = build_plane(2)
    lam = [line_index(plane, {(i + 1) % 7, (i + 2) % 7, (i + 4) % 7}) for i in range(7)]
    triples = set()
    for i in range(7):
        triples.update(rotations((i, (i + 1) % 7, (i + 3) % 7)))
    return TrianglePresentation(plane, lam, triples)


def canonical_q3() -> TrianglePresentation:
    """First presentation found by :func:`enumerate_presentations` for q=3.

    lam(i) is the translate {i, i+1, i+3, i+9} of the built-in difference set.
    """
    plane = build_plane(3)
    lam = list(range(13))
    found, _ = enumerate_presentations(plane, lam, limit=1)
    return found[0]


def enumerate_presentations(plane: ProjectivePlane, lam, limit=None):
    """Backtracking search for all T compatible with lam.

    Returns ``(presentations, truncated)``.  Pairs are processed in
    lexicographic order and candidates z in increasing order.
    """
    lam = tuple(lam)
    n = plane.size
    lam_pts = [plane.line_points[l] for l in lam]
    pairs = [(x, y) for x in range(n) for y in range(n) if y in lam_pts[x]]
    assigned: dict[tuple[int, int], int] = {}
    out = []

    def place(x, y, z):
        added = []
        for a, b, c in rotations((x, y, z)):
            cur = assigned.get((a, b))
            if cur is None:
                assigned[(a, b)] = c
                added.append((a, b))
            elif cur != c:
                for key in added:
                    del assigned[key]
                return None
        return added

    def search(k):
        if limit is not None and len(out) >= limit:
            return True
        while k < len(pairs) and pairs[k] in assigned:
            k += 1
        if k == len(pairs):
            triples = [(a, b, c) for (a, b), c in assigned.items()]
            out.append(TrianglePresentation(plane, lam, triples))
            return limit is not None and len(out) >= limit
        x, y = pairs[k]
        for z in range(n):
            # rotations must land on incident pairs
            if z not in lam_pts[y] or x not in lam_pts[z]:
                continue
            added = place(x, y, z)
            if added is None:
                continue
            stop = search(k + 1)
            for key in added:
                del assigned[key]
            if stop:
                return True
        return False

    stopped = search(0)
    return out, bool(stopped)


def enumerate_or_raise(plane, lam, limit):
    found, truncated = enumerate_presentations(plane, lam, limit)
    if truncated:
        raise SearchBudgetExceeded(f"stopped after {limit} presentations", found)
    return found


def presentation_to_json(pres: TrianglePresentation) -> str:
    triples = sorted({canonical_rotation(t) for t in pres.triples})
    data = {
        "q": pres.q,
        "lines": [sorted(pts) for pts in pres.plane.line_points],
        "lambda": list(pres.lam),
        "triples": [list(t) for t in triples],
    }
    return json.dumps(data, separators=(", ", ": "))


def presentation_from_json(text: str) -> TrianglePresentation:
    data = json.loads(text)
    q = int(data["q"])
    if "lines" in data:
        plane = ProjectivePlane(q, tuple(frozenset(l) for l in data["lines"]))
    else:
        plane = build_plane(q)
    triples = set()
    for t in data["triples"]:
        triples.update(rotations(tuple(int(v) for v in t)))
    return TrianglePresentation(plane, data["lambda"], triples)
