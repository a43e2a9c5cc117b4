"""Finite projective planes built from cyclic difference sets.

Points and lines are both indexed by 0..q^2+q.  Line ``i`` is the translate
``D + i`` of the difference set ``D`` modulo ``q^2+q+1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations

from .errors import (
    EqualLines,
    EqualPoints,
    IndexOutOfRange,
    InvalidDifferenceSet,
    UnsupportedOrder,
)

BUILTIN_DIFFERENCE_SETS = {
    2: (1, 2, 4),
    3: (0, 1, 3, 9),
}


@dataclass(frozen=True)
class ProjectivePlane:
    q: int
    line_points: tuple[frozenset[int], ...]

    def __post_init__(self):
        n = len(self.line_points)
        lines_of = [set() for _ in range(n)]
        for l, pts in enumerate(self.line_points):
            for p in pts:
                lines_of[p].add(l)
        object.__setattr__(self, "point_lines", tuple(frozenset(s) for s in lines_of))

    @property
    def size(self) -> int:
        return len(self.line_points)

    @property
    def points(self) -> range:
        return range(self.size)

    @property
    def lines(self) -> range:
        return range(self.size)

    def to_json(self) -> str:
        return plane_to_json(self)


def _check_axioms(q: int, line_points) -> list[str]:
    n = q * q + q + 1
    problems = []
    if len(line_points) != n:
        problems.append(f"expected {n} lines, got {len(line_points)}")
        return problems
    for l, pts in enumerate(line_points):
        if len(pts) != q + 1:
            problems.append(f"line {l} has {len(pts)} points")
        if any(not 0 <= p < n for p in pts):
            problems.append(f"line {l} has a point out of range")
    if problems:
        return problems
    if len(set(line_points)) != n:
        problems.append("repeated line")
    for p1, p2 in combinations(range(n), 2):
        common = sum(1 for pts in line_points if p1 in pts and p2 in pts)
        if common != 1:
            problems.append(f"points {p1},{p2} lie on {common} common lines")
            break
    for l1, l2 in combinations(range(n), 2):
        common = len(line_points[l1] & line_points[l2])
        if common != 1:
            problems.append(f"lines {l1},{l2} meet in {common} points")
            break
    for p in range(n):
        deg = sum(1 for pts in line_points if p in pts)
        if deg != q + 1:
            problems.append(f"point {p} lies on {deg} lines")
            break
    return problems


def check_plane(plane: ProjectivePlane) -> list[str]:
    """Return a list of axiom violations (empty when the plane is valid)."""
    return _check_axioms(plane.q, plane.line_points)


def build_plane(q: int, difference_set=None) -> ProjectivePlane:
    if difference_set is None:
        if q not in BUILTIN_DIFFERENCE_SETS:
            raise UnsupportedOrder(f"no built-in difference set for q={q}")
        difference_set = BUILTIN_DIFFERENCE_SETS[q]
    n = q * q + q + 1
    base = sorted({d % n for d in difference_set})
    lines = tuple(frozenset((d + i) % n for d in base) for i in range(n))
    problems = _check_axioms(q, lines)
    if problems:
        raise InvalidDifferenceSet("; ".join(problems))
    return ProjectivePlane(q, lines)


def _check_index(plane: ProjectivePlane, i: int, what: str) -> None:
    if not 0 <= i < plane.size:
        raise IndexOutOfRange(f"{what} {i} not in [0, {plane.size})")


def incident(plane: ProjectivePlane, p: int, l: int) -> bool:
    _check_index(plane, p, "point")
    _check_index(plane, l, "line")
    return p in plane.line_points[l]


def meet(plane: ProjectivePlane, l1: int, l2: int) -> int:
    _check_index(plane, l1, "line")
    _check_index(plane, l2, "line")
    if l1 == l2:
        raise EqualLines(f"line {l1} given twice")
    (p,) = plane.line_points[l1] & plane.line_points[l2]
    return p


def join(plane: ProjectivePlane, p1: int, p2: int) -> int:
    _check_index(plane, p1, "point")
    _check_index(plane, p2, "point")
    if p1 == p2:
        raise EqualPoints(f"point {p1} given twice")
    (l,) = plane.point_lines[p1] & plane.point_lines[p2]
    return l


def line_index(plane: ProjectivePlane, points) -> int:
    """Index of the line with exactly the given point set."""
    target = frozenset(points)
    for l, pts in enumerate(plane.line_points):
        if pts == target:
            return l
    raise KeyError(f"no line {sorted(target)}")


# JSON: lines sorted lexicographically, each a sorted point list.
def plane_to_json(plane: ProjectivePlane) -> str:
    lines = sorted(sorted(pts) for pts in plane.line_points)
    return json.dumps({"q": plane.q, "lines": lines}, separators=(", ", ": "))


def plane_from_json(text: str) -> ProjectivePlane:
    data = json.loads(text)
    q = int(data["q"])
    lines = tuple(frozenset(int(p) for p in pts) for pts in data["lines"])
    problems = _check_axioms(q, lines)
    if problems:
        raise InvalidDifferenceSet("; ".join(problems))
    # canonical ordering makes the round trip byte-stable
    lines = tuple(frozenset(pts) for pts in sorted(sorted(pts) for pts in lines))
    return ProjectivePlane(q, lines)
