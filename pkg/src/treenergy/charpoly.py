"""Characteristic and matching polynomials of forests.

For a forest the coefficients of ``phi(G, x)`` are signed matching counts,
``phi(G, x) = sum_i (-1)^i m(G, i) x^(n-2i)``, and ``phi_tilde`` drops the
signs.  ``phi_tilde`` is the primary object; ``phi`` is derived from it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .graph import Forest, canonical_code, subdivide
from .poly import ExactPoly


def _mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _add(a: list[int], b: list[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] += y
    return out


def _tree_matchings(adj: Sequence[Sequence[int]], root: int) -> list[int]:
    # two-state DP: unmatched[v] counts matchings of the subtree with v free,
    # total[v] counts all matchings of the subtree
    parent = {root: -1}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    unmatched: dict[int, list[int]] = {}
    total: dict[int, list[int]] = {}
    for v in reversed(order):
        u_acc = [1]
        m_acc = [0]
        for c in adj[v]:
            if c == parent[v]:
                continue
            tc, uc = total[c], unmatched[c]
            m_acc = _add(_mul(m_acc, tc), [0] + _mul(u_acc, uc))
            u_acc = _mul(u_acc, tc)
            del total[c], unmatched[c]
        unmatched[v] = u_acc
        total[v] = _add(u_acc, m_acc)
    out = total[root]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def matching_counts(f: Forest) -> list[int]:
    """``[m(G,0), m(G,1), ..., m(G, floor(n/2))]`` (trailing zeros kept to ``floor(n/2)``)."""
    counts = [1]
    for comp in f.components:
        counts = _mul(counts, _tree_matchings(f.adjacency, comp[0]))
    size = f.n // 2 + 1
    counts = counts[:size]
    return counts + [0] * (size - len(counts))


@lru_cache(maxsize=None)
def _deletion_by_code(code: str) -> tuple[int, ...]:
    from .graph import from_canonical_code  # local: only the oracle needs it

    parts = code.split("+")
    if len(parts) > 1:
        out = [1]
        for part in parts:
            out = _mul(out, list(_deletion_by_code(part)))
        return tuple(out)
    tree = from_canonical_code(code)
    if not tree.edges:
        return (1,)
    leaf = next(v for v in range(tree.n) if tree.degree(v) == 1)
    nbr = tree.adjacency[leaf][0]
    without_edge = tree.remove_edge(leaf, nbr)
    a = list(_deletion_by_code(canonical_code(without_edge)))
    if tree.n == 2:
        b = [1]
    else:
        b = list(_deletion_by_code(canonical_code(tree.remove_vertices([leaf, nbr]))))
    return tuple(_add(a, [0] + b))


def matching_counts_by_deletion(f: Forest) -> list[int]:
    """Independent oracle: ``m(G,i) = m(G-e,i) + m(G-u-v,i-1)`` with memoisation."""
    counts = list(_deletion_by_code(canonical_code(f)))
    size = f.n // 2 + 1
    counts = counts[:size]
    return counts + [0] * (size - len(counts))


def phi_tilde_from_counts(n: int, counts: Sequence[int]) -> ExactPoly:
    coeffs = [0] * (n + 1)
    for i, m in enumerate(counts):
        coeffs[n - 2 * i] = m
    return ExactPoly(coeffs)


def phi_from_counts(n: int, counts: Sequence[int]) -> ExactPoly:
    coeffs = [0] * (n + 1)
    for i, m in enumerate(counts):
        coeffs[n - 2 * i] = -m if i % 2 else m
    return ExactPoly(coeffs)


def phi_from_tilde(pt: ExactPoly) -> ExactPoly:
    """Restore the alternating signs of a bipartite characteristic polynomial."""
    n = pt.degree
    return ExactPoly(c if ((n - i) // 2) % 2 == 0 else -c for i, c in enumerate(pt.coeffs))


@dataclass(frozen=True)
class CharPolyPair:
    phi: ExactPoly
    phi_tilde: ExactPoly
    n: int


def char_poly_pair(f: Forest) -> CharPolyPair:
    counts = matching_counts(f)
    return CharPolyPair(phi_from_counts(f.n, counts), phi_tilde_from_counts(f.n, counts), f.n)


def phi_tilde(f: Forest) -> ExactPoly:
    return phi_tilde_from_counts(f.n, matching_counts(f))


def phi(f: Forest) -> ExactPoly:
    return phi_from_counts(f.n, matching_counts(f))


def cut_edge_identity_check(g: Forest, uv: Sequence[int]) -> bool:
    """Check ``phi(G) == phi(G - uv) - phi(G - u - v)`` exactly."""
    u, v = g.check_edge(uv)
    lhs = phi(g)
    minus_edge = phi(g.remove_edge(u, v))
    minus_ends = phi(g.remove_vertices([u, v])) if g.n > 2 else ExactPoly([1])
    return lhs == minus_edge - minus_ends


def subdiv_phi_tilde_sequence(
    g: Forest, e: Sequence[int], kmax: int, validate: bool = False
) -> list[ExactPoly]:
    """``[phi_tilde(G(0)), ..., phi_tilde(G(kmax))]`` via the three-term recurrence.

    Entries 0 and 1 come from the constructed graphs; with ``validate`` the last
    entry is also rebuilt directly and compared.
    """
    g.check_edge(e)
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    seq = [phi_tilde(g)]
    if kmax >= 1:
        seq.append(phi_tilde(subdivide(g, e, 1)))
    x = ExactPoly.x()
    for _ in range(2, kmax + 1):
        seq.append(x * seq[-1] + seq[-2])
    if validate and kmax >= 2:
        direct = phi_tilde(subdivide(g, e, kmax))
        if direct != seq[-1]:
            raise AssertionError(
                f"recurrence disagrees with direct construction at k={kmax}: "
                f"{seq[-1]} != {direct}"
            )
    return seq
