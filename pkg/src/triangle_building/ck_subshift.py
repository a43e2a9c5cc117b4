"""Transition matrices of the boundary subshift and the symbolic partial
isometries built from them.

Operators are symbolic: a term ``word * sum_{l in support} p_l`` (or its
adjoint) is an :class:`IsometrySymbol`.  Products are only formed where an
explicit formula exists.
"""

from __future__ import annotations

import csv
import io
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import NotATransition, PreconditionFailed
from .group_words import IDENTITY, NormalForm, gen, gen_inv, inverse, multiply
from .labels import ChamberLabel, a_minus, a_plus, alphabet
from .presentation import TrianglePresentation
from .sector_geometry import (
    all_diagrams,
    brute_force_extensions,
    depth_one,
    translate,
)

__all__ = [
    "ChamberLabel", "alphabet", "a_plus", "a_minus", "TransitionMatrix", "matrices",
    "strongly_connected", "shift_plus", "shift_minus", "IsometrySymbol", "FormalSum",
    "s_plus", "s_minus", "compose_pm", "compose_mp", "decompose_generator",
    "weak_commutativity_check", "free_group_matrix", "geometric_binding",
    "admissible_quadruples", "projection", "matrix_from_csv", "report_to_jsonable",
]


@dataclass(frozen=True)
class TransitionMatrix:
    direction: str
    labels: tuple[ChamberLabel, ...]
    entries: np.ndarray = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def row(self, label) -> frozenset[ChamberLabel]:
        i = self.labels.index(ChamberLabel(*label))
        return frozenset(self.labels[j] for j in np.flatnonzero(self.entries[i]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.direction] + [str(l) for l in self.labels])
        for lab, row in zip(self.labels, self.entries):
            w.writerow([str(lab)] + [int(v) for v in row])
        return buf.getvalue()


def _matrix(pres, direction: str, rule) -> TransitionMatrix:
    labels = tuple(alphabet(pres))
    index = {l: i for i, l in enumerate(labels)}
    m = np.zeros((len(labels), len(labels)), dtype=np.int64)
    for l in labels:
        for nxt in rule(pres, l):
            m[index[l], index[nxt]] = 1
    return TransitionMatrix(direction, labels, m)


def matrices(pres: TrianglePresentation) -> tuple[TransitionMatrix, TransitionMatrix]:
    return _matrix(pres, "plus", a_plus), _matrix(pres, "minus", a_minus)


def strongly_connected(entries: np.ndarray) -> bool:
    """Every node reaches every other node along nonzero entries."""
    n = entries.shape[0]

    def reach(adj):
        seen = {0}
        todo = deque([0])
        while todo:
            i = todo.popleft()
            for j in np.flatnonzero(adj[i]):
                if j not in seen:
                    seen.add(int(j))
                    todo.append(int(j))
        return len(seen) == n

    return reach(entries) and reach(entries.T)


def matrix_from_csv(text: str) -> TransitionMatrix:
    rows = list(csv.reader(io.StringIO(text)))
    direction = rows[0][0]

    def parse(s):
        a, b = s.split(":")
        return ChamberLabel(int(a.replace("^-1", "")), int(b))

    labels = tuple(parse(s) for s in rows[0][1:])
    entries = np.array([[int(v) for v in r[1:]] for r in rows[1:]], dtype=np.int64)
    return TransitionMatrix(direction, labels, entries)


# Geometric meaning of the transition sets.

def _shift_check(pres, label, nxt, g: NormalForm, depths) -> int:
    checked = 0
    for k in depths:
        for d in all_diagrams(pres, k, nxt):
            moved = translate(pres, g, d)
            if moved.base_label != label:
                raise AssertionError(f"{tuple(nxt)} moved by {g} lands on {tuple(moved.base_label)}")
            checked += 1
    return checked


def shift_plus(pres: TrianglePresentation, label, nxt, depths=(3,)) -> int:
    """Check that a_b carries every diagram with base ``nxt`` to base ``label``.

    Returns the number of diagrams checked.
    """
    label, nxt = ChamberLabel(*label), ChamberLabel(*nxt)
    if nxt not in a_plus(pres, label):
        raise NotATransition(f"{tuple(nxt)} is not in A+ of {tuple(label)}")
    return _shift_check(pres, label, nxt, gen(label.b), depths)


def shift_minus(pres: TrianglePresentation, label, nxt, depths=(3,)) -> int:
    """Check that a_a^-1 carries every diagram with base ``nxt`` to base ``label``."""
    label, nxt = ChamberLabel(*label), ChamberLabel(*nxt)
    if nxt not in a_minus(pres, label):
        raise NotATransition(f"{tuple(nxt)} is not in A- of {tuple(label)}")
    return _shift_check(pres, label, nxt, gen_inv(label.a), depths)


def geometric_binding(pres: TrianglePresentation, depth: int = 3) -> dict:
    """Compare A+/A- rows with wall steps of brute-force enumerated diagrams.

    Diagrams are grown to ``depth`` by raw label search, independent of
    the transition sets.  Returns per-direction lists of mismatching labels
    and the number of diagrams seen.
    """
    right = {l: set() for l in alphabet(pres)}
    left = {l: set() for l in alphabet(pres)}
    seen = 0
    for lab in alphabet(pres):
        layer = [depth_one(lab)]
        for _ in range(depth - 1):
            layer = [e for d in layer for e in brute_force_extensions(pres, d)]
        seen += len(layer)
        for d in layer:
            for i in range(depth - 1):
                right[d.cells[(i, 0)]].add(d.cells[(i + 1, 0)])
                left[d.cells[(0, i)]].add(d.cells[(0, i + 1)])
    bad_plus = [l for l in alphabet(pres) if right[l] != set(a_plus(pres, l))]
    bad_minus = [l for l in alphabet(pres) if left[l] != set(a_minus(pres, l))]
    return {"plus_mismatch": bad_plus, "minus_mismatch": bad_minus, "diagrams": seen}


# Symbolic partial isometries.

@dataclass(frozen=True)
class IsometrySymbol:
    word: NormalForm
    support: frozenset
    starred: bool = False

    def __post_init__(self):
        if not self.support:
            raise ValueError("support must be nonempty")
        object.__setattr__(self, "support", frozenset(ChamberLabel(*l) for l in self.support))

    def adjoint(self) -> "IsometrySymbol":
        return IsometrySymbol(self.word, self.support, not self.starred)


def s_plus(pres, label) -> IsometrySymbol:
    a, b = label
    return IsometrySymbol(gen(b), a_plus(pres, label))


def s_minus(pres, label) -> IsometrySymbol:
    a, b = label
    return IsometrySymbol(gen_inv(a), a_minus(pres, label))


def projection(label) -> IsometrySymbol:
    return IsometrySymbol(IDENTITY, frozenset([ChamberLabel(*label)]))


class FormalSum:
    """Sum of symbols; unstarred terms with equal words merge by support union."""

    def __init__(self, terms=()):
        self.terms: dict[tuple[NormalForm, bool], frozenset] = {}
        for t in terms:
            self.add(t)

    def add(self, term: IsometrySymbol) -> None:
        key = (term.word, term.starred)
        old = self.terms.get(key)
        if old is None:
            self.terms[key] = term.support
            return
        if term.starred:
            raise ValueError("starred terms with equal words do not merge")
        if old & term.support:
            raise ValueError(f"overlapping supports for word {term.word}")
        self.terms[key] = old | term.support

    def normalized(self):
        return sorted((w, s, tuple(sorted(sup))) for (w, s), sup in self.terms.items())

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.normalized() == other.normalized()

    def to_json(self):
        return [
            {"word": str(w), "starred": s, "support": [str(l) for l in sup]}
            for w, s, sup in self.normalized()
        ]


def compose_pm(pres, plus_label, minus_label) -> IsometrySymbol | None:
    """s+ of (a,b) times s- of (c,d)."""
    a, b = plus_label
    c, d = minus_label
    if ChamberLabel(c, d) not in a_plus(pres, plus_label):
        return None
    return IsometrySymbol(multiply(pres, gen(b), gen_inv(c)), a_minus(pres, minus_label))


def compose_mp(pres, minus_label, plus_label) -> IsometrySymbol | None:
    """s- of (a,b) times s+ of (g,h)."""
    a, b = minus_label
    g, h = plus_label
    if ChamberLabel(g, h) not in a_minus(pres, minus_label):
        return None
    return IsometrySymbol(multiply(pres, gen_inv(a), gen(h)), a_plus(pres, plus_label))


def weak_commutativity_check(pres, a: int, b: int, c: int, h: int) -> dict:
    """Both sides of the commutation relation for s+ of (a,b) and s- of (a,b)."""
    lhs_word = multiply(pres, gen(b), gen_inv(c))
    rhs_word = multiply(pres, gen_inv(a), gen(h))
    if b not in pres.lam_pts[a] or lhs_word != rhs_word:
        raise PreconditionFailed(f"b c^-1 = {lhs_word} but a^-1 h = {rhs_word}")
    label = ChamberLabel(a, b)
    lhs_terms = [
        compose_pm(pres, label, (c, d)) for d in range(pres.n_points)
        if ChamberLabel(c, d) in a_plus(pres, label)
    ]
    rhs_terms = [
        compose_mp(pres, label, (g, h)) for g in range(pres.n_points)
        if ChamberLabel(g, h) in a_minus(pres, label)
    ]
    lhs, rhs = FormalSum(lhs_terms), FormalSum(rhs_terms)
    return {
        "quadruple": [a, b, c, h],
        "word": str(lhs_word),
        "lhs_terms": len(lhs_terms),
        "rhs_terms": len(rhs_terms),
        "lhs": lhs.to_json(),
        "rhs": rhs.to_json(),
        "equal": lhs == rhs,
    }


def admissible_quadruples(pres):
    """(a, b, c, h) with c a first coordinate in A+ of (a,b) and h forced."""
    out = []
    for a, b in alphabet(pres):
        for c in sorted({l.a for l in a_plus(pres, (a, b))}):
            w = multiply(pres, gen(b), gen_inv(c))
            if w.xs == (a,) and len(w.ys) == 1:
                out.append((a, b, c, w.ys[0]))
            else:
                raise AssertionError(f"b c^-1 = {w} does not start with a^-1")
    return out


def decompose_generator(pres: TrianglePresentation, b: int) -> dict:
    """The generator a_b as a sum of three families of partial isometries.

    A: s+ of (a,b) for b in lam(a).  B: adjoints of s- of (b,k), k in lam(b).
    C: s- of (t,f) times the adjoint of s+ of (h,s), over s in lam(b),
    t = third(b,s), h != b with s in lam(h), f != b with f in lam(t).

    The C terms are grouped: for fixed (h,s) their supports must partition
    A+ of (h,s), so the group has initial projection p of (h,s); for fixed
    (t,f) they must partition A- of (t,f), giving final projection p of (t,f).
    """
    n = pres.n_points
    bl = gen(b)
    fam_a, fam_b, fam_c = [], [], []
    for a in range(n):
        if b in pres.lam_pts[a]:
            sym = s_plus(pres, (a, b))
            fam_a.append({
                "label": [a, b], "word": str(sym.word), "word_ok": sym.word == bl,
                "initial": sorted(sym.support), "final": [ChamberLabel(a, b)],
            })
    for k in sorted(pres.lam_pts[b]):
        sym = s_minus(pres, (b, k))
        fam_b.append({
            "label": [b, k], "word": str(inverse(pres, sym.word)),
            "word_ok": inverse(pres, sym.word) == bl,
            "initial": [ChamberLabel(b, k)], "final": sorted(sym.support),
        })
    groups_init: dict = {}
    groups_final: dict = {}
    for s in sorted(pres.lam_pts[b]):
        t = pres.third(b, s)
        for h in range(n):
            if h == b or s not in pres.lam_pts[h]:
                continue
            for f in sorted(pres.lam_pts[t]):
                if f == b:
                    continue
                piece = a_minus(pres, (t, f)) & a_plus(pres, (h, s))
                word = multiply(pres, gen_inv(t), gen_inv(s))
                fam_c.append({
                    "quadruple": [s, t, h, f], "word": str(word), "word_ok": word == bl,
                    "support": sorted(piece),
                })
                groups_init.setdefault(ChamberLabel(h, s), []).append(piece)
                groups_final.setdefault(ChamberLabel(t, f), []).append(piece)

    def partitions(pieces, whole):
        total = sum(len(p) for p in pieces)
        union = frozenset().union(*pieces)
        return total == len(whole) and union == whole

    c_init_ok = all(partitions(ps, a_plus(pres, l)) for l, ps in groups_init.items())
    c_final_ok = all(partitions(ps, a_minus(pres, l)) for l, ps in groups_final.items())
    initial = [l for t in fam_a for l in t["initial"]] + [l for t in fam_b for l in t["initial"]] + sorted(groups_init)
    final = [l for t in fam_a for l in t["final"]] + [l for t in fam_b for l in t["final"]] + sorted(groups_final)
    alpha = sorted(alphabet(pres))
    return {
        "generator": b,
        "families": {"A": fam_a, "B": fam_b, "C": fam_c},
        "counts": {"A": len(fam_a), "B": len(fam_b), "C": len(fam_c)},
        "initial_projections": len(initial),
        "final_projections": len(final),
        "initial_partition_ok": sorted(initial) == alpha and c_init_ok,
        "final_partition_ok": sorted(final) == alpha and c_final_ok,
        "c_groups_ok": c_init_ok and c_final_ok,
        "words_ok": all(t["word_ok"] for fam in (fam_a, fam_b, fam_c) for t in fam),
    }


def report_to_jsonable(obj):
    """Replace labels by ``a^-1:b`` strings for JSON output."""
    if isinstance(obj, ChamberLabel):
        return str(obj)
    if isinstance(obj, dict):
        return {k: report_to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [report_to_jsonable(v) for v in obj]
    return obj


def free_group_matrix(r: int) -> np.ndarray:
    """Transition matrix of reduced words in a free group of rank r.

    Order a1, a1^-1, a2, a2^-1, ...; entry (x, y) is 1 unless y = x^-1.
    """
    if r < 1:
        raise ValueError("rank must be positive")
    m = np.ones((2 * r, 2 * r), dtype=np.int64)
    for i in range(r):
        m[2 * i, 2 * i + 1] = 0
        m[2 * i + 1, 2 * i] = 0
    return m
