"""The boundary alphabet and its one-step transition sets."""

from __future__ import annotations

from typing import NamedTuple

from .presentation import TrianglePresentation


class ChamberLabel(NamedTuple):
    a: int
    b: int

    def __str__(self):
        return f"{self.a}^-1:{self.b}"


def alphabet(pres: TrianglePresentation) -> list[ChamberLabel]:
    return [ChamberLabel(a, b) for a in range(pres.n_points) for b in sorted(pres.lam_pts[a])]


def a_plus(pres: TrianglePresentation, label) -> frozenset[ChamberLabel]:
    """Labels that may follow ``label`` one step along a right wall."""
    a, b = label
    x = pres.third(a, b)
    out = set()
    for d in range(pres.n_points):
        if d in pres.lam_pts[b] or d == x:
            continue
        out.add(ChamberLabel(pres.line_through(x, d), d))
    return frozenset(out)


def a_minus(pres: TrianglePresentation, label) -> frozenset[ChamberLabel]:
    """Labels that may follow ``label`` one step along a left wall."""
    a, b = label
    x = pres.third(a, b)
    out = set()
    for c in range(pres.n_points):
        if a in pres.lam_pts[c] or c == x:
            continue
        out.add(ChamberLabel(c, pres.meet_lam(x, c)))
    return frozenset(out)
