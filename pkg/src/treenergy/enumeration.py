"""Free-tree enumeration and the oracles used to cross-check it."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from typing import Iterator, Sequence

from .errors import CapExceeded
from .graph import Forest, canonical_code, centroids, from_canonical_code

DEFAULT_CAP = 20

# number of free trees on n vertices, n = 1..20
FREE_TREE_COUNTS = (
    1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301, 3159, 7741, 19320,
    48629, 123867, 317955, 823065,
)


def _split_tree(layout: Sequence[int]) -> tuple[list[int], list[int]]:
    # left: the first subtree of the root, rest: the root with its other subtrees
    m = len(layout)
    seen = False
    for i, level in enumerate(layout):
        if level == 1:
            if seen:
                m = i
                break
            seen = True
    left = [layout[i] - 1 for i in range(1, m)]
    rest = [0] + list(layout[m:])
    return left, rest


def _next_rooted_tree(pred: Sequence[int], p: int | None = None) -> list[int] | None:
    if p is None:
        p = len(pred) - 1
        while pred[p] == 1:
            p -= 1
    if p == 0:
        return None
    q = p - 1
    while pred[q] != pred[p] - 1:
        q -= 1
    out = list(pred)
    for i in range(p, len(out)):
        out[i] = out[i - p + q]
    return out


def _next_tree(candidate: list[int]) -> list[int] | None:
    left, rest = _split_tree(candidate)
    lh, rh = max(left), max(rest)
    valid = rh >= lh
    if valid and rh == lh:
        if len(left) > len(rest) or (len(left) == len(rest) and left > rest):
            valid = False
    if valid:
        return candidate
    p = len(left)
    nxt = _next_rooted_tree(candidate, p)
    if nxt is None:
        return None
    if candidate[p] > 2:
        new_left, _ = _split_tree(nxt)
        suffix = list(range(1, max(new_left) + 2))
        nxt[-len(suffix):] = suffix
    return nxt


def level_sequences(n: int) -> Iterator[list[int]]:
    """Canonical level sequences of free trees (Wright-Richmond-Odlyzko-McKay)."""
    if n <= 2:
        yield list(range(n))
        return
    layout: list[int] | None = list(range(n // 2 + 1)) + list(range(1, (n + 1) // 2))
    while layout is not None:
        layout = _next_tree(layout)
        if layout is not None:
            yield layout
            layout = _next_rooted_tree(layout)


def forest_from_levels(layout: Sequence[int]) -> Forest:
    edges = []
    stack: list[int] = []
    for i, level in enumerate(layout):
        while stack and layout[stack[-1]] >= level:
            stack.pop()
        if stack:
            edges.append((stack[-1], i))
        stack.append(i)
    return Forest.from_edges(len(layout), edges)


def enumerate_trees(n: int, cap: int = DEFAULT_CAP) -> Iterator[Forest]:
    """One tree per isomorphism class, in a fixed order."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    for layout in level_sequences(n):
        yield forest_from_levels(layout)


# ---------------------------------------------------------------------------
# Oracles


def prufer_decode(seq: Sequence[int], n: int) -> Forest:
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (i for i in range(n) if degree[i] == 1)
    edges.append((u, w))
    return Forest.from_edges(n, edges)


def prufer_classes(n: int) -> Counter:
    """Labeled trees on ``n`` vertices bucketed by canonical code."""
    if n <= 2:
        return Counter({canonical_code(Forest.from_edges(n, [(0, 1)] if n == 2 else [])): 1})
    out: Counter = Counter()
    for seq in itertools.product(range(n), repeat=n - 2):
        out[canonical_code(prufer_decode(seq, n))] += 1
    return out


def leaf_growth_codes(n: int) -> set[str]:
    """Every tree on ``n`` vertices, grown from smaller ones one leaf at a time."""
    layer = {canonical_code(Forest.from_edges(1, []))}
    for m in range(1, n):
        nxt = set()
        for code in layer:
            t = from_canonical_code(code)
            for v in range(m):
                nxt.add(canonical_code(Forest(m + 1, t.edges | {(v, m)})))
        layer = nxt
    return layer


def _rooted_code_aut(adj: Sequence[Sequence[int]], root: int, banned: int = -1) -> tuple[str, int]:
    parent = {root: banned}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    kids: dict[int, list[tuple[str, int]]] = {u: [] for u in order}
    code, aut = "", 1
    for u in reversed(order):
        children = kids[u]
        aut = 1
        for _, a in children:
            aut *= a
        for mult in Counter(c for c, _ in children).values():
            aut *= math.factorial(mult)
        code = "(" + "".join(sorted(c for c, _ in children)) + ")"
        if u != root:
            kids[parent[u]].append((code, aut))
    return code, aut


def automorphism_count(tree: Forest) -> int:
    adj = tree.adjacency
    cs = centroids(tree)
    if len(cs) == 1:
        return _rooted_code_aut(adj, cs[0])[1]
    c1, c2 = cs
    code1, a1 = _rooted_code_aut(adj, c1, c2)
    code2, a2 = _rooted_code_aut(adj, c2, c1)
    return a1 * a2 * (2 if code1 == code2 else 1)


def labeled_tree_total(trees: Sequence[Forest]) -> int:
    """``sum n!/|Aut(T)|``; equals ``n^(n-2)`` exactly when every class occurs once."""
    n = trees[0].n
    return sum(math.factorial(n) // automorphism_count(t) for t in trees)


def random_tree(n: int, rng: random.Random) -> Forest:
    if n <= 2:
        return Forest.from_edges(n, [(0, 1)] if n == 2 else [])
    return prufer_decode([rng.randrange(n) for _ in range(n - 2)], n)


def partitions(total: int, min_parts: int = 1, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    """Non-increasing tuples of positive integers summing to ``total``."""
    if max_part is None:
        max_part = total

    def rec(rest: int, cap: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    for p in rec(total, max_part):
        if len(p) >= min_parts:
            yield p
