import random

import pytest
from hypothesis import given, settings

from conftest import trees
from treenergy.charpoly import phi_tilde
from treenergy.energy import energy
from treenergy.enumeration import enumerate_trees, random_tree
from treenergy.errors import DegreeMismatch, NegativeCoefficient, NotMonic, OrderMismatch
from treenergy.graph import (
    DoubleBroom,
    Starlike,
    build,
    canonical_code,
    from_canonical_code,
    is_isomorphic,
    parse_forest,
)
from treenergy.poly import ExactPoly
from treenergy.quasiorder import (
    FamilyDominanceCertificate,
    Inconclusive,
    QuasiOrderVerdict,
    Relation,
    compare,
    compare_forests,
    family_compare_double,
    family_compare_single,
    quasiorder_implies_energy,
    subdivide_two,
)

P = ExactPoly.from_text


def pt(text):
    return phi_tilde(parse_forest(text))


def test_lemma43_base_pair():
    v = compare(pt("T(12;3,2|2,2)"), pt("T(12;2,2|2,2)"))
    assert v.relation is Relation.STRICTLY_LESS
    assert v.verify(pt("T(12;3,2|2,2)"), pt("T(12;2,2|2,2)"))


def test_equal_and_incomparable():
    p = pt("S(11;2,2,6)")
    assert compare(p, p) == QuasiOrderVerdict(Relation.EQUAL)
    a, b = pt("S(11;2,2,2,4)"), pt("S(11;2,1,7)")
    v = compare(a, b)
    assert v.relation is Relation.INCOMPARABLE
    i, j = v.witness
    assert a.coeff(i) < b.coeff(i) and a.coeff(j) > b.coeff(j)


def test_cospectral_energy_pair_is_incomparable():
    # equal energies at n = 9 but different matching counts
    v = compare(pt("S(9;2,1,5)"), pt("S(9;2,2,2,2)"))
    assert v.relation is Relation.INCOMPARABLE


def test_input_validation():
    with pytest.raises(DegreeMismatch):
        compare(P("x^2+1"), P("x^3+x"))
    with pytest.raises(NotMonic):
        compare(P("2x^2+1"), P("x^2+1"))
    with pytest.raises(NegativeCoefficient):
        compare(P("x^2-1"), P("x^2+1"))
    with pytest.raises(OrderMismatch):
        compare_forests(parse_forest("P(4)"), parse_forest("P(5)"))


@given(trees(6, 9), trees(6, 9), trees(6, 9))
@settings(max_examples=120, deadline=None)
def test_partial_order_laws(a, b, c):
    if not (a.n == b.n == c.n):
        return
    pa, pb, pc = phi_tilde(a), phi_tilde(b), phi_tilde(c)
    ab, ba = compare(pa, pb), compare(pb, pa)
    assert ab.relation.flipped() is ba.relation
    if ab.relation is Relation.EQUAL:
        assert pa == pb
    if ab.is_le and compare(pb, pc).is_le:
        assert compare(pa, pc).is_le
    assert ab.verify(pa, pb)


def test_same_family_gives_equal_certificate():
    g = parse_forest("S(10;2,3,4)")
    cert = family_compare_single(g, (0, 1), g, (0, 1))
    assert isinstance(cert, FamilyDominanceCertificate)
    assert cert.relation is Relation.EQUAL and not cert.strict_at(5)


def test_incomparable_base_gives_inconclusive():
    g, h = parse_forest("S(11;2,2,2,4)"), parse_forest("S(11;2,1,7)")
    res = family_compare_single(g, (0, 1), h, (0, 1))
    assert isinstance(res, Inconclusive)
    assert "Incomparable" in res.reason


def _lemma43():
    g = build(DoubleBroom(12, 3, 2, 2, 2))
    h = build(DoubleBroom(12, 2, 2, 2, 2))
    return g, ((0, 3), (1, 2)), h, ((0, 1), (1, 2))


def test_lemma43_double_certificate():
    g, (e1, e2), h, (f1, f2) = _lemma43()
    cert = family_compare_double(g, e1, e2, h, f1, f2)
    assert isinstance(cert, FamilyDominanceCertificate)
    assert cert.relation is Relation.STRICTLY_LESS
    assert cert.replay()
    assert all(b.verdict.relation is Relation.STRICTLY_LESS for b in cert.bases)
    assert cert.strict_for_large_index
    assert cert.spot_check(g, (e1, e2), h, (f1, f2), [(0, 0), (1, 3), (4, 2), (7, 7)])
    # the family realises T_n(a,2|2,2) against T_n(2,2|2,2)
    for n, a in [(14, 3), (15, 5), (18, 9)]:
        l, k = a - 3, n - 9 - a
        assert is_isomorphic(subdivide_two(g, e1, e2, l, k), build(DoubleBroom(n, a, 2, 2, 2)))
        assert is_isomorphic(subdivide_two(h, f1, f2, l, k), build(DoubleBroom(n, 2, 2, 2, 2)))


def test_certificate_text_round_trip():
    g, (e1, e2), h, (f1, f2) = _lemma43()
    cert = family_compare_double(g, e1, e2, h, f1, f2)
    back = FamilyDominanceCertificate.from_text(cert.to_text())
    assert back == cert and back.replay()


def test_tampered_certificate_fails_replay():
    g, (e1, e2), h, (f1, f2) = _lemma43()
    cert = family_compare_double(g, e1, e2, h, f1, f2)
    text = cert.to_text().replace("StrictlyLess", "StrictlyGreater")
    assert not FamilyDominanceCertificate.from_text(text).replay()


def test_strictness_with_equal_first_base():
    # same tree, two different edges: base 0 is Equal, base 1 strict
    g = build(Starlike(8, (1, 2, 4)))
    found = False
    for e in g.edge_list():
        for f in g.edge_list():
            cert = family_compare_single(g, e, g, f)
            if isinstance(cert, FamilyDominanceCertificate) and cert.relation is not Relation.EQUAL:
                found = True
                assert not cert.strict_at(0)
                assert cert.strict_at(1) and cert.strict_at(6)
                assert cert.spot_check(g, e, g, f, [0, 1, 2, 6, 11])
    assert found


@pytest.mark.parametrize("seed", range(12))
def test_single_family_spot_checks(seed):
    rng = random.Random(seed)
    for _ in range(50):
        n = rng.randint(5, 10)
        g, h = random_tree(n, rng), random_tree(n, rng)
        e, f = rng.choice(g.edge_list()), rng.choice(h.edge_list())
        res = family_compare_single(g, e, h, f)
        if isinstance(res, FamilyDominanceCertificate):
            ks = rng.sample(range(21), 10)
            assert res.spot_check(g, e, h, f, ks)
            assert res.replay()
            return
    pytest.skip("no comparable family drawn")


def test_thm51_pair_at_twelve():
    a, b = build(Starlike(12, (2, 4, 5))), build(Starlike(12, (2, 2, 7)))
    v = compare_forests(a, b)
    assert v.relation is Relation.STRICTLY_LESS
    assert quasiorder_implies_energy(v, energy(a), energy(b))
    assert (energy(b) - energy(a)).positive()


def test_equal_verdict_energy_overlap():
    a = parse_forest("S(10;2,6,1)")
    b = from_canonical_code(canonical_code(a))
    v = compare_forests(a, b)
    assert v.relation is Relation.EQUAL
    assert quasiorder_implies_energy(v, energy(a), energy(b))


@pytest.mark.parametrize("n", range(4, 11))
def test_quasiorder_implies_energy_exhaustive(n):
    data = [(phi_tilde(t), energy(t, 1e-12)) for t in enumerate_trees(n)]
    for i, (p, ep) in enumerate(data):
        for q, eq in data[i + 1 :]:
            v = compare(p, q)
            if v.relation is not Relation.INCOMPARABLE:
                assert quasiorder_implies_energy(v, ep, eq)
