"""The aggregated invariant suite behind ``verify all``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .building_local import hexagon_count, residue_graph
from .ck_subshift import (
    admissible_quadruples,
    decompose_generator,
    geometric_binding,
    matrices,
    strongly_connected,
    weak_commutativity_check,
)
from .group_words import (
    IDENTITY,
    all_letters,
    ball,
    census_formula,
    enumerate_normal_forms,
    mul_letter,
    reduce,
)
from .labels import alphabet
from .presentation import TrianglePresentation, verify
from .projective_plane import check_plane
from .sector_geometry import (
    all_diagrams,
    amenability_overlap,
    brute_force_extensions,
    check_witness,
    minimality_witness,
    random_diagram,
    wall_pair_outcomes,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} {self.name}: {self.detail}"


def check_plane_axioms(pres) -> CheckResult:
    problems = check_plane(pres.plane)
    return CheckResult("plane axioms", not problems, "; ".join(problems) or f"{pres.n_points} points, {pres.n_points} lines")


def check_presentation(pres) -> CheckResult:
    rep = verify(pres)
    want = (pres.q + 1) * pres.n_points
    ok = rep.ok and len(pres.triples) == want
    return CheckResult("presentation axioms", ok, "; ".join(rep.violations) or f"|T| = {len(pres.triples)} (expected {want})")


def check_relators(pres) -> CheckResult:
    bad = [t for t in sorted(pres.triples) if reduce(pres, [(x, 1) for x in t]) != IDENTITY]
    return CheckResult("relator products", not bad, f"{len(pres.triples) - len(bad)}/{len(pres.triples)} reduce to e")


def check_census(pres, radius: int) -> CheckResult:
    b = ball(pres, radius)
    census = b.census()
    bad = []
    for s in range(radius + 1):
        for n in range(s + 1):
            m = s - n
            formula = census_formula(pres.q, n, m)
            brute = sum(1 for _ in enumerate_normal_forms(pres, n, m))
            if not census[(n, m)] == formula == brute:
                bad.append(f"shape {(n, m)}: bfs {census[(n, m)]}, formula {formula}, enumeration {brute}")
    return CheckResult("ball census", not bad, "; ".join(bad) or f"spheres {b.spheres()[1:]}")


def check_hexagons(pres) -> CheckResult:
    q = pres.q
    want = pres.n_points * (q * q + q) * q * q // 6
    got = hexagon_count(residue_graph(pres, IDENTITY))
    return CheckResult("hexagons in the residue of e", got == want, f"{got} (expected {want})")


def check_matrices(pres) -> CheckResult:
    plus, minus = matrices(pres)
    q2 = pres.q ** 2
    sums = {int(s) for m in (plus, minus) for s in m.entries.sum(axis=1)}
    connected = strongly_connected(plus.entries) and strongly_connected(minus.entries)
    ok = sums == {q2} and connected
    return CheckResult("A+/A- rows", ok, f"{plus.dim} labels, row sums {sorted(sums)}, strongly connected {connected}")


def check_binding(pres, depth: int = 3) -> CheckResult:
    res = geometric_binding(pres, depth)
    bad = len(res["plus_mismatch"]) + len(res["minus_mismatch"])
    return CheckResult("geometric binding", bad == 0, f"{res['diagrams']} depth-{depth} diagrams, {bad} mismatching rows")


def check_decompositions(pres) -> CheckResult:
    q = pres.q
    want = {"A": q + 1, "B": q + 1, "C": q * q * (q + 1)}
    bad = []
    for b in range(pres.n_points):
        r = decompose_generator(pres, b)
        flags = (r["initial_partition_ok"], r["final_partition_ok"], r["c_groups_ok"], r["words_ok"])
        if r["counts"] != want or not all(flags):
            bad.append(str(b))
    detail = f"counts {want} for all {pres.n_points} generators"
    return CheckResult("generator decompositions", not bad, f"failing generators {', '.join(bad)}" if bad else detail)


def check_weak_commutativity(pres) -> CheckResult:
    quads = admissible_quadruples(pres)
    bad = []
    for quad in quads:
        r = weak_commutativity_check(pres, *quad)
        if not (r["equal"] and r["lhs_terms"] == r["rhs_terms"] == pres.q):
            bad.append(quad)
    return CheckResult("weak commutativity", not bad, f"{len(quads) - len(bad)}/{len(quads)} quadruples")


def check_walls(pres, depth: int = 2) -> CheckResult:
    """Each wall pair either fills uniquely or contradicts; fills are exactly the extensions."""
    q3 = pres.q ** 3
    bad = 0
    filled = pairs = 0
    for k in range(1, depth + 1):
        for d in all_diagrams(pres, k):
            outcomes = [e for _, _, e in wall_pair_outcomes(pres, d) if e is not None]
            pairs += pres.q ** 4
            filled += len(outcomes)
            if len(outcomes) != q3 or set(outcomes) != set(brute_force_extensions(pres, d)):
                bad += 1
    return CheckResult("wall determinism", bad == 0, f"{filled}/{pairs} wall pairs fill, {q3} extensions per layer")


def check_minimality(pres, max_length: int) -> CheckResult:
    checked = failures = 0
    for v in ball(pres, max_length).elements():
        for lab in alphabet(pres):
            k = minimality_witness(pres, v, lab)
            c, f = check_witness(pres, v, lab, k)
            checked += c
            failures += f
    return CheckResult(f"minimality witnesses |v| <= {max_length}", failures == 0, f"{checked} translated diagrams, {failures} failures")


def overlap_bound(s_length: int, i: int) -> Fraction:
    r = max(i - 3 * s_length, 0)
    return Fraction(r * (r + 1), i * (i + 1))


def check_overlaps(pres, samples: int, seed: int, sizes=(10, 20)) -> CheckResult:
    rng = random.Random(seed)
    shifts = [IDENTITY] + [mul_letter(pres, IDENTITY, l) for l in all_letters(pres)]
    bad = []
    count = 0
    for _ in range(samples):
        omega = random_diagram(pres, max(sizes) + 2, rng)
        for s in shifts:
            for i in sizes:
                val = amenability_overlap(pres, omega, s, i)
                count += 1
                ok = val == 1 if s == IDENTITY else overlap_bound(s.length, i) <= val <= 1
                if not ok:
                    bad.append(f"s={s} i={i}: {val}")
    return CheckResult("overlap bounds |s| <= 1", not bad, "; ".join(bad[:3]) or f"{count} overlaps in range")


def run_all(pres: TrianglePresentation, seed: int = 0) -> list[CheckResult]:
    small = pres.q == 2
    return [
        check_plane_axioms(pres),
        check_presentation(pres),
        check_relators(pres),
        check_census(pres, 4 if small else 2),
        check_hexagons(pres),
        check_matrices(pres),
        check_binding(pres, 3 if small else 2),
        check_decompositions(pres),
        check_weak_commutativity(pres),
        check_walls(pres, 2 if small else 1),
        check_minimality(pres, 2 if small else 1),
        check_overlaps(pres, 20 if small else 2, seed),
    ]
