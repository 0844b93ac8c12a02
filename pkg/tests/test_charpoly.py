import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import tree_and_edge, trees
from treenergy.charpoly import (
    char_poly_pair,
    cut_edge_identity_check,
    matching_counts,
    matching_counts_by_deletion,
    phi,
    phi_from_tilde,
    phi_tilde,
    subdiv_phi_tilde_sequence,
)
from treenergy.graph import DoubleBroom, Path, Starlike, build, parse_forest, subdivide
from treenergy.poly import ExactPoly

P = ExactPoly.from_text
X = ExactPoly.x()


def test_matching_count_examples():
    assert matching_counts(build(Path(4))) == [1, 3, 1]
    assert matching_counts(build(Starlike(10, (2, 6, 1)))) == [1, 9, 27, 31, 12, 1]
    assert matching_counts(build(Path(1))) == [1]


def test_p2_pair():
    pair = char_poly_pair(build(Path(2)))
    assert pair.phi == P("x^2-1") and pair.phi_tilde == P("x^2+1")


def test_printed_examples():
    assert phi_tilde(build(DoubleBroom(12, 2, 2, 2, 2))) == P("x^12+11x^10+43x^8+74x^6+59x^4+19x^2+1")
    counts = [1, 30, 405, 3252, 17296, 64220, 170943, 329768, 460696, 460851, 322620, 152131, 45426, 7738, 619, 15]
    assert matching_counts(build(Starlike(31, (2, 7, 21)))) == counts


def test_cut_edge_identity_small():
    assert cut_edge_identity_check(build(Path(3)), (1, 2))
    assert cut_edge_identity_check(build(Path(2)), (0, 1))
    assert phi(build(Path(3))) == X * (X**2 - 1) - X


def test_recurrence_on_p2():
    assert subdiv_phi_tilde_sequence(build(Path(2)), (0, 1), 2) == [P("x^2+1"), P("x^3+2x"), P("x^4+3x^2+1")]


def test_recurrence_lemma44_entry_one():
    g = build(DoubleBroom(11, 2, 2, 2, 2))
    seq = subdiv_phi_tilde_sequence(g, (0, 1), 1)
    assert seq[1] == P("x^12+11x^10+43x^8+74x^6+59x^4+19x^2+1")


def test_phi_matches_numpy_determinant():
    t = parse_forest("T(13;3,2|2,2)")
    a = np.zeros((t.n, t.n))
    for u, v in t.edges:
        a[u, v] = a[v, u] = 1
    ref = np.round(np.poly(a)).astype(int)
    assert list(reversed(phi(t).coeffs)) == list(ref)


@given(trees(1, 14))
@settings(max_examples=120, deadline=None)
def test_phi_structure(t):
    p, pt = phi(t), phi_tilde(t)
    assert p.degree == t.n and pt.degree == t.n
    for i in range(t.n + 1):
        if i % 2:
            assert p.coeff(t.n - i) == 0
        else:
            assert pt.coeff(t.n - i) == (-1) ** (i // 2) * p.coeff(t.n - i) >= 0
    assert phi_from_tilde(pt) == p
    assert matching_counts(t) == matching_counts_by_deletion(t)


@given(tree_and_edge(2, 14))
@settings(max_examples=100, deadline=None)
def test_cut_edge_identity_random(te):
    t, e = te
    assert cut_edge_identity_check(t, e)


@given(tree_and_edge(2, 12), st.integers(0, 10))
@settings(max_examples=100, deadline=None)
def test_subdivision_recurrences(te, k):
    t, e = te
    f0, f1, f2 = (subdivide(t, e, k + i) for i in range(3))
    assert phi(f2) == X * phi(f1) - phi(f0)
    assert phi_tilde(f2) == X * phi_tilde(f1) + phi_tilde(f0)


@given(trees(1, 10), trees(1, 10))
@settings(max_examples=60, deadline=None)
def test_components_multiply(a, b):
    assert phi_tilde(a.disjoint_union(b)) == phi_tilde(a) * phi_tilde(b)


def test_sequence_validation_detects_nothing_on_good_input():
    g = build(Starlike(9, (2, 1, 5)))
    seq = subdiv_phi_tilde_sequence(g, (0, 4), 9, validate=True)
    assert len(seq) == 10


def test_sequence_rejects_negative_kmax():
    with pytest.raises(ValueError):
        subdiv_phi_tilde_sequence(build(Path(3)), (0, 1), -1)
