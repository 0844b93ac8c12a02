"""Acceptance run: one test per criterion, each printing a single PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or through pytest, where the
lines appear in the terminal summary.  Known misprints in the source constants
are checked separately as strict xfails and named on the criterion line.
"""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from golden import D_ENDPOINT_THM54, PRINTED_BOUNDS, PRINTED_ENERGIES, PRINTED_ERRATA, PRINTED_PHI_TILDE, PRINTED_W
from treenergy.charpoly import cut_edge_identity_check, matching_counts_by_deletion, phi_tilde, subdiv_phi_tilde_sequence
from treenergy.energy import (
    THM31_CASE1,
    THM32_BOUND,
    classify_dominance,
    d_sequence_at,
    energy,
    energy_diff_coulson,
)
from treenergy.enumeration import FREE_TREE_COUNTS, enumerate_trees, labeled_tree_total, prufer_classes, random_tree
from treenergy.extremal import s_n_order, verify_theorem
from treenergy.graph import Path, Starlike, build, canonical_code, parse_forest, subdivide
from treenergy.poly import MIXED, POSITIVE_EVERYWHERE, ExactPoly, poly_product
from treenergy.quasiorder import Relation, compare, quasiorder_implies_energy
from treenergy.ranking import rank_by_energy

P = ExactPoly.from_text
X = ExactPoly.x()

# (G, edge of G, H, edge of H): the family pairs behind the printed w and bounds
QUARTETS = {
    "thm3.3": ("T(10;2,2|2,2)", (0, 1), "S(10;2,6,1)", (0, 9)),
    "lemma4.4": ("T(11;3,2|2,2)", (0, 2), "T(11;2,2|2,2)", (0, 1)),
    "thm5.3": ("S(9;2,2,2,2)", (0, 7), "S(9;2,1,5)", (0, 4)),
    "thm5.4": ("T(22;2,2|2,2)", (0, 1), "S(22;2,1,18)", (0, 4)),
    "thm5.5": ("S(31;4,4,22)", (0, 9), "S(31;2,7,21)", (0, 10)),
}
# whose printed factor list multiplies to something other than w
FACTOR_ERRATA = {"thm5.3"}


class Criterion:
    def __init__(self, number: int, title: str) -> None:
        self.number, self.title = number, title
        self.failures: list[str] = []
        self.notes: list[str] = []
        self.checks = 0
        self.start = time.perf_counter()

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    def finish(self) -> str:
        elapsed = time.perf_counter() - self.start
        status = "PASS" if not self.failures else "FAIL"
        line = f"CRITERION {self.number} {self.title}: {status} ({self.checks} checks, {elapsed:.1f}s)"
        if self.notes:
            line += "; " + "; ".join(self.notes)
        if self.failures:
            line += "; failed: " + "; ".join(self.failures[:5])
        ACCEPTANCE_LINES[self.number] = line
        print(line)
        return line


def _quartet_polys(key):
    g, e, h, f = QUARTETS[key]
    g, h = parse_forest(g), parse_forest(h)
    return g, e, h, f


# ---------------------------------------------------------------------------


def criterion_1() -> Criterion:
    c = Criterion(1, "polynomial golden set")
    for spec, text in PRINTED_PHI_TILDE.items():
        computed = phi_tilde(parse_forest(spec))
        if spec in PRINTED_ERRATA:
            # the printed form drops the constant term; the tree has exactly one perfect matching
            c.check(computed - P(text) == ExactPoly([1]), f"{spec} erratum shape")
            continue
        c.check(computed == P(text), spec)
    # the degree-23 pair is the once-subdivided Thm 5.4 family
    g, e, h, f = _quartet_polys("thm5.4")
    c.check(phi_tilde(subdivide(g, e, 1)) == P(PRINTED_PHI_TILDE["T(23;2,2|2,2)"]), "G(1) of the n=22 pair")
    c.check(phi_tilde(subdivide(h, f, 1)) == P(PRINTED_PHI_TILDE["S(23;2,1,19)"]), "H(1) of the n=22 pair")
    c.notes.append("printed erratum: " + ", ".join(sorted(PRINTED_ERRATA)) + " lacks its +1 constant term")
    return c


def criterion_2() -> Criterion:
    c = Criterion(2, "energy golden set")
    for spec, printed in PRINTED_ENERGIES.items():
        e = energy(parse_forest(spec), 1e-12)
        c.check(abs(e.midpoint - printed) <= 1e-5, f"E({spec})={e.midpoint:.7f} vs {printed}")
    target = 6 + 2 * math.sqrt(5)
    for spec in ("S(9;2,1,5)", "S(9;2,2,2,2)"):
        e = energy(parse_forest(spec), 1e-13)
        c.check(abs(e.midpoint - target) <= 1e-10, f"E({spec}) vs 6+2sqrt5")
    return c


def criterion_3() -> Criterion:
    c = Criterion(3, "sign and factorization set")
    expected_kind = {
        "thm3.3": POSITIVE_EVERYWHERE,
        "thm5.3": POSITIVE_EVERYWHERE,
        "thm5.5": POSITIVE_EVERYWHERE,
        "lemma4.4": MIXED,
        "thm5.4": MIXED,
    }
    for key, (literal, factors) in PRINTED_W.items():
        g, e, h, f = _quartet_polys(key)
        g0, g1 = phi_tilde(g), phi_tilde(subdivide(g, e, 1))
        h0, h1 = phi_tilde(h), phi_tilde(subdivide(h, f, 1))
        w = h1 * g0 - h0 * g1
        if literal is not None:
            c.check(w == P(literal), f"{key} w literal")
        if factors is not None:
            product = poly_product(P(t) for t in factors)
            if key in FACTOR_ERRATA:
                # w = h1 g0 - h0 g1 only has odd powers here, the printed product only even ones
                c.check(w == X * product, f"{key} w = x * printed factors")
                c.notes.append(f"printed erratum: {key} factor list omits x")
            else:
                c.check(w == product, f"{key} w = printed factors")
        r = classify_dominance(g, e, h, f)
        c.check(r.profile is not None and r.profile.kind == expected_kind[key], f"{key} sign kind")
        if key == "lemma4.4":
            c.check(len(r.D) == 1 and r.D[0].lo == 0 and abs(r.D[0].hi - 1) <= 1e-12, "lemma4.4 D=(0,1)")
            c.check(w.eval_rational(1) == 0, "lemma4.4 w(1)=0")
        if key == "thm5.4":
            ok = len(r.D) == 1 and r.D[0].lo == 0 and abs(r.D[0].hi - D_ENDPOINT_THM54) <= 1e-5
            c.check(ok, "thm5.4 D=(0,r)")
    return c


def criterion_4() -> Criterion:
    c = Criterion(4, "integral-bound set")
    for key, printed in PRINTED_BOUNDS.items():
        g, e, h, f = _quartet_polys(key)
        r = classify_dominance(g, e, h, f)
        value = r.base_gap if key in ("thm3.3", "thm5.5") else r.lower_bound_on_gap
        c.check(abs(value.midpoint - printed) <= 5e-5, f"{key} {value.midpoint:.6f} vs {printed}")
        c.check(r.lower_bound_on_gap.positive(), f"{key} bound separated from zero")
        c.check(r.case == (THM31_CASE1 if key in ("thm3.3", "thm5.5") else THM32_BOUND), f"{key} case")
    c.check(time.perf_counter() - c.start < 60, "runtime under a minute")
    return c


def criterion_5() -> Criterion:
    c = Criterion(5, "brute-force ranking and large-n substitutes")
    for n in (10, 12, 14, 16):
        entries = rank_by_energy(n, top=4, jobs=4)
        c.check(entries[0].code == canonical_code(build(Path(n))), f"rank 1 at n={n}")
        c.check(entries[3].code == canonical_code(build(Starlike(n, (2, 6, n - 9)))), f"rank 4 at n={n}")
        c.check(len({e.tie_group for e in entries}) == 4, f"no ties in the top 4 at n={n}")
    for n in range(1, 13):
        trees = list(enumerate_trees(n))
        c.check(len(trees) == FREE_TREE_COUNTS[n - 1], f"count at n={n}")
        c.check(len({canonical_code(t) for t in trees}) == len(trees), f"distinct at n={n}")
        # orbit counting over all n^(n-2) labelled trees (Cayley / Pruefer)
        c.check(n < 2 or labeled_tree_total(trees) == n ** (n - 2), f"labelled total at n={n}")
        if n <= 7:
            c.check(set(prufer_classes(n)) == {canonical_code(t) for t in trees}, f"Pruefer buckets at n={n}")
    c.notes.append("Pruefer bucketing explicit for n<=7, orbit-counted for 8<=n<=12")
    for n in (31, 32):
        order = s_n_order(n)
        for a, b in zip(order, order[1:]):
            c.check(compare(phi_tilde(build(a)), phi_tilde(build(b))).relation is Relation.STRICTLY_GREATER, f"{a}>{b}")
    tasks = [(key, n) for n in range(31, 36) for key in ("thm5.2", "thm5.3", "thm5.4", "thm5.5")]
    tasks.append(("thm5.6", 31))
    with ProcessPoolExecutor(max_workers=4) as pool:
        reports = list(pool.map(verify_theorem, [k for k, _ in tasks], [n for _, n in tasks]))
    for (key, n), rep in zip(tasks, reports):
        c.check(rep.passed, f"{key} at n={n}")
    return c


def criterion_6() -> Criterion:
    c = Criterion(6, "property suites")
    rng = random.Random(6)
    # cut-edge identity, every edge of every tree up to 12 vertices
    for n in range(2, 13):
        for t in enumerate_trees(n):
            for e in t.edge_list():
                c.check(cut_edge_identity_check(t, e), f"cut edge {canonical_code(t)} {e}")
    # subdivision recurrence against direct construction
    for _ in range(200):
        t = random_tree(rng.randint(2, 14), rng)
        e = rng.choice(t.edge_list())
        k = rng.randint(0, 12)
        seq = subdiv_phi_tilde_sequence(t, e, k)
        c.check(seq[k] == phi_tilde(subdivide(t, e, k)), "recurrence")
    # sandwich property in exact rationals
    for _ in range(100):
        n = rng.randint(3, 12)
        g, h = random_tree(n, rng), random_tree(n, rng)
        e, f = rng.choice(g.edge_list()), rng.choice(h.edge_list())
        g0, g1 = phi_tilde(g), phi_tilde(subdivide(g, e, 1))
        h0, h1 = phi_tilde(h), phi_tilde(subdivide(h, f, 1))
        for _ in range(3):
            x = Fraction(rng.randint(1, 500), rng.randint(1, 100))
            d0, d1 = d_sequence_at(g0, g1, h0, h1, 0, x), d_sequence_at(g0, g1, h0, h1, 1, x)
            lo, hi = min(d0, d1), max(d0, d1)
            for k in range(2, 25):
                dk = d_sequence_at(g0, g1, h0, h1, k, x)
                c.check(lo <= dk <= hi and (d0 == d1) == (dk == d0), "sandwich")
    # quasi-order implies energy order, all comparable pairs up to 12 vertices
    for n in range(2, 13):
        data = [(phi_tilde(t), energy(t, 1e-12)) for t in enumerate_trees(n)]
        for i, (p, ep) in enumerate(data):
            for q, eq in data[i + 1 :]:
                v = compare(p, q)
                if v.relation is not Relation.INCOMPARABLE:
                    c.check(quasiorder_implies_energy(v, ep, eq), f"quasi-order vs energy at n={n}")
    # path energies against the closed-form spectrum
    for n in range(1, 65):
        exact = sum(abs(2 * math.cos(k * math.pi / (n + 1))) for k in range(1, n + 1))
        c.check(abs(energy(build(Path(n)), 1e-12).midpoint - exact) <= 1e-10, f"path n={n}")
    # integral formula against root-based differences
    for _ in range(200):
        n = rng.randint(2, 16)
        a, b = random_tree(n, rng), random_tree(n, rng)
        d = energy_diff_coulson(phi_tilde(a), phi_tilde(b), 1e-9)
        direct = energy(a, 1e-12) - energy(b, 1e-12)
        c.check(abs(d.midpoint - direct.midpoint) <= 1e-6, "integral vs roots")
    return c


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6]


@pytest.mark.parametrize("run", CRITERIA, ids=[f"criterion{i}" for i in range(1, 7)])
def test_criterion(run):
    c = run()
    c.finish()
    assert not c.failures, c.failures


# literal comparisons with the misprinted constants


@pytest.mark.xfail(strict=True, reason="printed polynomial lacks its constant term")
@pytest.mark.parametrize("spec", sorted(PRINTED_ERRATA))
def test_printed_erratum_polynomial_literal(spec):
    assert phi_tilde(parse_forest(spec)) == P(PRINTED_PHI_TILDE[spec])


@pytest.mark.xfail(strict=True, reason="printed factor list omits a factor x")
@pytest.mark.parametrize("key", sorted(FACTOR_ERRATA))
def test_printed_erratum_factorization_literal(key):
    g, e, h, f = _quartet_polys(key)
    w = phi_tilde(subdivide(h, f, 1)) * phi_tilde(g) - phi_tilde(h) * phi_tilde(subdivide(g, e, 1))
    assert w == poly_product(P(t) for t in PRINTED_W[key][1])


def test_misprinted_tree_has_one_perfect_matching():
    # the constant term counts perfect matchings; the deletion recursion is independent of the DP
    t = parse_forest("T(12;3,2|2,2)")
    assert matching_counts_by_deletion(t)[6] == 1


if __name__ == "__main__":
    results = []
    for run in CRITERIA:
        results.append(run())
        results[-1].finish()
    raise SystemExit(1 if any(c.failures for c in results) else 0)
