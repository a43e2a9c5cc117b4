"""Words in the triangle group and their left normal forms.

An element is stored as ``NormalForm(xs, ys)`` meaning
``a_{x1}^-1 ... a_{xn}^-1 a_{y1} ... a_{ym}``.  A letter is a pair
``(x, sign)`` with ``sign`` in ``{+1, -1}``.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from itertools import product

from .errors import BudgetExceeded
from .presentation import TrianglePresentation

POS, NEG = 1, -1


@dataclass(frozen=True, order=True)
class NormalForm:
    xs: tuple[int, ...] = ()
    ys: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.xs) + len(self.ys)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.xs), len(self.ys))

    def letters(self) -> list[tuple[int, int]]:
        return [(x, NEG) for x in self.xs] + [(y, POS) for y in self.ys]

    def __str__(self):
        return render(self.letters())


IDENTITY = NormalForm()


def gen(x: int) -> NormalForm:
    return NormalForm((), (x,))


def gen_inv(x: int) -> NormalForm:
    return NormalForm((x,), ())


def parse_word(text: str) -> list[tuple[int, int]]:
    """Parse ``"3 0^-1 4"`` into letters.  ``e`` or an empty string is the identity."""
    letters = []
    for tok in text.replace(",", " ").split():
        if tok in ("e", "1_"):
            continue
        if tok.endswith("^-1"):
            letters.append((int(tok[:-3]), NEG))
        else:
            letters.append((int(tok), POS))
    return letters


def render(letters) -> str:
    if not letters:
        return "e"
    return " ".join(f"{x}^-1" if s == NEG else f"{x}" for x, s in letters)


def is_normal(pres: TrianglePresentation, nf: NormalForm) -> bool:
    xs, ys = nf.xs, nf.ys
    for i in range(len(xs) - 1):
        if xs[i] in pres.lam_pts[xs[i + 1]]:
            return False
    for j in range(len(ys) - 1):
        if ys[j + 1] in pres.lam_pts[ys[j]]:
            return False
    if xs and ys and xs[-1] == ys[0]:
        return False
    return True


def mul_gen(pres: TrianglePresentation, g: NormalForm, p: int) -> NormalForm:
    """g * a_p."""
    xs, ys = g.xs, g.ys
    if ys:
        y = ys[-1]
        if p in pres.lam_pts[y]:
            # a_y a_p = a_z^-1
            return mul_gen_inv(pres, NormalForm(xs, ys[:-1]), pres.third(y, p))
        return NormalForm(xs, ys + (p,))
    if xs and xs[-1] == p:
        return NormalForm(xs[:-1], ())
    return NormalForm(xs, (p,))


def mul_gen_inv(pres: TrianglePresentation, g: NormalForm, p: int) -> NormalForm:
    """g * a_p^-1."""
    xs, ys = g.xs, g.ys
    if ys:
        y = ys[-1]
        if y == p:
            return NormalForm(xs, ys[:-1])
        # a_y a_p^-1 = a_e^-1 a_d
        c = pres.meet_lam(p, y)
        d = pres.third(p, c)
        e = pres.third(y, c)
        h = mul_gen_inv(pres, NormalForm(xs, ys[:-1]), e)
        return mul_gen(pres, h, d)
    if xs and xs[-1] in pres.lam_pts[p]:
        # a_x^-1 a_p^-1 = a_z with (p, x, z) in T
        return mul_gen(pres, NormalForm(xs[:-1], ()), pres.third(p, xs[-1]))
    return NormalForm(xs + (p,), ())


def mul_letter(pres, g: NormalForm, letter) -> NormalForm:
    x, s = letter
    return mul_gen(pres, g, x) if s == POS else mul_gen_inv(pres, g, x)


def reduce(pres: TrianglePresentation, word) -> NormalForm:
    g = IDENTITY
    for letter in word:
        g = mul_letter(pres, g, letter)
    return g


def multiply(pres: TrianglePresentation, g: NormalForm, h: NormalForm) -> NormalForm:
    for letter in h.letters():
        g = mul_letter(pres, g, letter)
    return g


def inverse(pres: TrianglePresentation, g: NormalForm) -> NormalForm:
    return NormalForm(tuple(reversed(g.ys)), tuple(reversed(g.xs)))


def length(g: NormalForm) -> int:
    return g.length


def shape(g: NormalForm) -> tuple[int, int]:
    return g.shape


def from_word(pres, text: str) -> NormalForm:
    return reduce(pres, parse_word(text))


# Independent rewriting by local rules, used as a cross-check of ``reduce``.

def _rewrites(pres, w):
    out = []
    for i in range(len(w) - 1):
        (x, s), (y, t) = w[i], w[i + 1]
        if x == y and s != t:
            out.append((i, []))
        elif s == POS and t == POS:
            z = pres.third(x, y)
            if z is not None:
                out.append((i, [(z, NEG)]))
        elif s == NEG and t == NEG:
            z = pres.third(y, x)
            if z is not None:
                out.append((i, [(z, POS)]))
        elif s == POS and t == NEG:
            c = pres.meet_lam(y, x)
            d = pres.third(y, c)
            e = pres.third(x, c)
            out.append((i, [(e, NEG), (d, POS)]))
    return out


def rewrite(pres: TrianglePresentation, word, rng: random.Random | None = None):
    """Apply the local rules until none applies.

    With ``rng`` the rule site is picked at random, otherwise leftmost.
    Returns the irreducible word as a list of letters.
    """
    w = list(word)
    while True:
        sites = _rewrites(pres, w)
        if not sites:
            return w
        i, rep = rng.choice(sites) if rng is not None else sites[0]
        w[i:i + 2] = rep


def word_to_normal_form(w) -> NormalForm:
    """Read an irreducible word as a normal form (negative letters must come first)."""
    signs = [s for _, s in w]
    k = signs.count(NEG)
    if signs != [NEG] * k + [POS] * (len(w) - k):
        raise ValueError("word is not of the form x^-1 ... y ...")
    return NormalForm(tuple(x for x, _ in w[:k]), tuple(x for x, _ in w[k:]))


def all_letters(pres) -> list[tuple[int, int]]:
    n = pres.n_points
    return [(x, POS) for x in range(n)] + [(x, NEG) for x in range(n)]


@dataclass
class Ball:
    radius: int
    distance: dict[NormalForm, int]

    def census(self) -> Counter:
        return Counter(g.shape for g in self.distance)

    def spheres(self) -> list[int]:
        sizes = Counter(self.distance.values())
        return [sizes[k] for k in range(self.radius + 1)]

    def elements(self):
        return iter(sorted(self.distance, key=lambda g: (g.length, g)))


def ball(pres: TrianglePresentation, radius: int, budget: int | None = None) -> Ball:
    """Breadth-first search over normal forms by right multiplication."""
    letters = all_letters(pres)
    dist = {IDENTITY: 0}
    frontier = deque([IDENTITY])
    while frontier:
        g = frontier.popleft()
        k = dist[g]
        if k == radius:
            continue
        for letter in letters:
            h = mul_letter(pres, g, letter)
            if h not in dist:
                dist[h] = k + 1
                if budget is not None and len(dist) > budget:
                    raise BudgetExceeded(f"ball exceeds {budget} elements")
                frontier.append(h)
    return Ball(radius, dist)


def census_formula(q: int, n: int, m: int) -> int:
    p = q * q + q + 1
    if n == 0 and m == 0:
        return 1
    if n == 0 or m == 0:
        return p * q ** (2 * (n + m - 1))
    return p * (q * q + q) * q ** (2 * (n + m - 2))


def enumerate_normal_forms(pres, n: int, m: int):
    """All label sequences of shape (n, m) obeying the normal-form constraints."""
    pts = range(pres.n_points)
    for xs in product(pts, repeat=n):
        if any(xs[i] in pres.lam_pts[xs[i + 1]] for i in range(n - 1)):
            continue
        for ys in product(pts, repeat=m):
            if any(ys[j + 1] in pres.lam_pts[ys[j]] for j in range(m - 1)):
                continue
            if xs and ys and xs[-1] == ys[0]:
                continue
            yield NormalForm(xs, ys)
