"""Forests, named tree families, subdivision and grafting.

Vertex labels are always ``0..n-1``.  Every constructor below emits a fixed
labeling so that edges can be named reproducibly:

* ``P(n)``            path ``0-1-...-(n-1)``
* ``S(n;a1,...,ak)``  center ``0``; arm ``i`` uses the next ``a_i`` labels,
                      ordered outward from the center
* ``T(n;a,b|c,d)``    central path ``0..m-1`` with ``m = n-a-b-c-d``; arms
                      ``a, b`` hang off ``0`` and ``c, d`` off ``m-1``, labelled
                      after the central path in the order ``a, b, c, d``
* ``subdivide``       new vertices get labels ``n, n+1, ...`` from ``u`` to ``v``
* grafting            new path vertices are appended outward from the anchor
"""

from __future__ import annotations

import enum
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence, Union

from .errors import (
    EdgeNotPresent,
    InvalidSpec,
    NotAForest,
    NotConnected,
    SameVertex,
    VertexNotPresent,
)

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Forest:
    """Labelled simple acyclic graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise NotAForest(f"a forest needs at least one vertex, got n={self.n}")
        normed = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise NotAForest(f"self-loop at {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise NotAForest(f"edge {e} out of range for n={self.n}")
            key = _norm(u, v)
            if key in normed:
                raise NotAForest(f"duplicate edge {key}")
            normed.add(key)
        object.__setattr__(self, "edges", frozenset(normed))
        # union-find cycle check
        parent = list(range(self.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v in normed:
            ru, rv = find(u), find(v)
            if ru == rv:
                raise NotAForest(f"edge {(u, v)} closes a cycle")
            parent[ru] = rv

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Forest":
        normed = [_norm(int(u), int(v)) for u, v in edges]
        if len(set(normed)) != len(normed):
            raise NotAForest(f"duplicate edge in {normed}")
        return cls(n, frozenset(normed))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in sorted(self.edges):
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self.adjacency)

    @property
    def n3(self) -> int:
        """Number of vertices of degree at least 3."""
        return sum(1 for a in self.adjacency if len(a) >= 3)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise VertexNotPresent(f"vertex {v} not in forest of order {self.n}")

    def check_edge(self, e: Sequence[int]) -> Edge:
        u, v = e
        key = _norm(u, v)
        if key not in self.edges:
            raise EdgeNotPresent(f"edge {u}-{v} not in forest")
        return key

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @property
    def is_tree(self) -> bool:
        return len(self.components) == 1

    def bipartition(self) -> tuple[frozenset[int], frozenset[int]]:
        colour = [-1] * self.n
        for comp in self.components:
            colour[comp[0]] = 0
            queue = deque([comp[0]])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if colour[w] < 0:
                        colour[w] = 1 - colour[u]
                        queue.append(w)
        return (
            frozenset(v for v in range(self.n) if colour[v] == 0),
            frozenset(v for v in range(self.n) if colour[v] == 1),
        )

    def remove_edge(self, u: int, v: int) -> "Forest":
        key = self.check_edge((u, v))
        return Forest(self.n, self.edges - {key})

    def remove_vertices(self, vertices: Iterable[int]) -> "Forest":
        """Delete vertices and relabel the survivors in increasing order.

        Removing every vertex is not representable (``n >= 1``); callers that
        need the empty graph handle it themselves.
        """
        drop = set(vertices)
        for v in drop:
            self.check_vertex(v)
        keep = [v for v in range(self.n) if v not in drop]
        relabel = {v: i for i, v in enumerate(keep)}
        edges = [
            (relabel[u], relabel[v])
            for u, v in self.edges
            if u not in drop and v not in drop
        ]
        return Forest.from_edges(len(keep), edges)

    def disjoint_union(self, other: "Forest") -> "Forest":
        shifted = [(u + self.n, v + self.n) for u, v in other.edges]
        return Forest(self.n + other.n, self.edges | frozenset(shifted))

    def edge_list(self) -> list[Edge]:
        return sorted(self.edges)


# ---------------------------------------------------------------------------
# Tree specifications


@dataclass(frozen=True)
class Path:
    n: int

    def __str__(self) -> str:
        return f"P({self.n})"


@dataclass(frozen=True)
class Starlike:
    n: int
    arms: tuple[int, ...]

    def __str__(self) -> str:
        return f"S({self.n};{','.join(map(str, self.arms))})"


@dataclass(frozen=True)
class DoubleBroom:
    n: int
    a: int
    b: int
    c: int
    d: int

    @property
    def spine(self) -> int:
        """Number of vertices on the central path."""
        return self.n - self.a - self.b - self.c - self.d

    def __str__(self) -> str:
        return f"T({self.n};{self.a},{self.b}|{self.c},{self.d})"


@dataclass(frozen=True)
class Explicit:
    n: int
    edges: tuple[Edge, ...]

    def __str__(self) -> str:
        return f"E({self.n};{','.join(f'{u}-{v}' for u, v in self.edges)})"


TreeSpec = Union[Path, Starlike, DoubleBroom, Explicit]


def path(n: int) -> Path:
    return Path(n)


def starlike(n: int, *arms: int) -> Starlike:
    return Starlike(n, tuple(arms))


def double_broom(n: int, a: int, b: int, c: int, d: int) -> DoubleBroom:
    return DoubleBroom(n, a, b, c, d)


def _validate(spec: TreeSpec) -> None:
    if spec.n < 1:
        raise InvalidSpec(f"{spec}: order must be positive")
    if isinstance(spec, Starlike):
        if not spec.arms:
            raise InvalidSpec(f"{spec}: needs at least one arm")
        if any(a < 1 for a in spec.arms):
            raise InvalidSpec(f"{spec}: arm lengths must be positive")
        if sum(spec.arms) != spec.n - 1:
            raise InvalidSpec(
                f"{spec}: arm lengths sum to {sum(spec.arms)}, expected n-1={spec.n - 1}"
            )
    elif isinstance(spec, DoubleBroom):
        if min(spec.a, spec.b, spec.c, spec.d) < 1:
            raise InvalidSpec(f"{spec}: arm lengths must be positive")
        if spec.spine < 2:
            raise InvalidSpec(f"{spec}: need a+b+c+d <= n-2")


def build(spec: TreeSpec) -> Forest:
    _validate(spec)
    if isinstance(spec, Path):
        return Forest.from_edges(spec.n, [(i, i + 1) for i in range(spec.n - 1)])
    if isinstance(spec, Starlike):
        edges = []
        nxt = 1
        for a in spec.arms:
            prev = 0
            for _ in range(a):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
        return Forest.from_edges(spec.n, edges)
    if isinstance(spec, DoubleBroom):
        m = spec.spine
        edges = [(i, i + 1) for i in range(m - 1)]
        nxt = m
        for anchor, length in ((0, spec.a), (0, spec.b), (m - 1, spec.c), (m - 1, spec.d)):
            prev = anchor
            for _ in range(length):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
        return Forest.from_edges(spec.n, edges)
    if isinstance(spec, Explicit):
        try:
            return Forest.from_edges(spec.n, spec.edges)
        except NotAForest as exc:
            raise InvalidSpec(f"{spec}: {exc}") from exc
    raise InvalidSpec(f"unknown spec {spec!r}")


def arm_edge(spec: Starlike | DoubleBroom, arm: int) -> Edge:
    """Edge joining arm ``arm`` (0-based, declared order) to its anchor."""
    if isinstance(spec, Starlike):
        if not 0 <= arm < len(spec.arms):
            raise InvalidSpec(f"{spec} has no arm {arm}")
        return (0, 1 + sum(spec.arms[:arm]))
    lengths = (spec.a, spec.b, spec.c, spec.d)
    if not 0 <= arm < 4:
        raise InvalidSpec(f"{spec} has no arm {arm}")
    anchor = 0 if arm < 2 else spec.spine - 1
    return (anchor, spec.spine + sum(lengths[:arm]))


def spine_edge(spec: DoubleBroom, i: int) -> Edge:
    """The ``i``-th edge of the central path of a double broom."""
    if not 0 <= i < spec.spine - 1:
        raise InvalidSpec(f"{spec} has no spine edge {i}")
    return (i, i + 1)


# ---------------------------------------------------------------------------
# Mini-language

_SPEC_RE = re.compile(r"^\s*([PSTE])\s*\((.*)\)\s*$", re.DOTALL)


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InvalidSpec(f"bad integer list in {what}: {text!r}") from exc


def parse_spec(text: str) -> TreeSpec:
    m = _SPEC_RE.match(text)
    if not m:
        raise InvalidSpec(f"not a tree spec: {text!r}")
    kind, body = m.group(1), m.group(2)
    if kind == "P":
        vals = _ints(body, text)
        if len(vals) != 1:
            raise InvalidSpec(f"P takes one argument: {text!r}")
        spec: TreeSpec = Path(vals[0])
    else:
        if ";" not in body:
            raise InvalidSpec(f"missing ';' in {text!r}")
        head, rest = body.split(";", 1)
        n = _ints(head, text)
        if len(n) != 1:
            raise InvalidSpec(f"bad order in {text!r}")
        if kind == "S":
            spec = Starlike(n[0], tuple(_ints(rest, text)))
        elif kind == "T":
            if rest.count("|") != 1:
                raise InvalidSpec(f"T needs 'a,b|c,d': {text!r}")
            left, right = rest.split("|")
            ab, cd = _ints(left, text), _ints(right, text)
            if len(ab) != 2 or len(cd) != 2:
                raise InvalidSpec(f"T needs exactly two arms per side: {text!r}")
            spec = DoubleBroom(n[0], ab[0], ab[1], cd[0], cd[1])
        else:
            edges = []
            for tok in rest.split(","):
                tok = tok.strip()
                if not tok:
                    continue
                parts = tok.split("-")
                if len(parts) != 2:
                    raise InvalidSpec(f"bad edge {tok!r} in {text!r}")
                try:
                    edges.append((int(parts[0]), int(parts[1])))
                except ValueError as exc:
                    raise InvalidSpec(f"bad edge {tok!r} in {text!r}") from exc
            spec = Explicit(n[0], tuple(edges))
    _validate(spec)
    return spec


def parse_forest(text: str) -> Forest:
    """Parse a mini-language spec or a graph6 string."""
    text = text.strip()
    if "(" in text:
        return build(parse_spec(text))
    return from_graph6(text)


# ---------------------------------------------------------------------------
# graph6


def from_graph6(text: str) -> Forest:
    data = text.strip()
    if data.startswith(">>graph6<<"):
        data = data[10:]
    try:
        vals = [ord(ch) - 63 for ch in data]
    except TypeError as exc:  # pragma: no cover - str input always has ord
        raise InvalidSpec(f"bad graph6 {text!r}") from exc
    if not vals or any(v < 0 or v > 63 for v in vals):
        raise InvalidSpec(f"bad graph6 {text!r}")
    if vals[0] == 63:
        if len(vals) < 4 or vals[1] == 63:
            raise InvalidSpec(f"unsupported graph6 size field in {text!r}")
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        body = vals[4:]
    else:
        n = vals[0]
        body = vals[1:]
    need = n * (n - 1) // 2
    if len(body) != (need + 5) // 6:
        raise InvalidSpec(f"graph6 body length mismatch in {text!r}")
    bits = []
    for v in body:
        bits.extend((v >> s) & 1 for s in range(5, -1, -1))
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    try:
        return Forest.from_edges(n, edges)
    except NotAForest as exc:
        raise InvalidSpec(f"graph6 input is not a forest: {exc}") from exc


def to_graph6(forest: Forest) -> str:
    n = forest.n
    if n <= 62:
        out = [n + 63]
    else:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    bits = []
    for j in range(1, n):
        for i in range(j):
            bits.append(1 if (i, j) in forest.edges else 0)
    while len(bits) % 6:
        bits.append(0)
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k : k + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    return "".join(map(chr, out))


# ---------------------------------------------------------------------------
# Subdivision and grafting


def subdivide(forest: Forest, e: Sequence[int], k: int) -> Forest:
    """Replace edge ``e`` by a path of length ``k+1`` (``k`` new vertices)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    u, v = e
    forest.check_edge((u, v))
    if k == 0:
        return forest
    n = forest.n
    chain = [u] + list(range(n, n + k)) + [v]
    edges = set(forest.edges - {_norm(u, v)})
    edges.update(_norm(a, b) for a, b in zip(chain, chain[1:]))
    return Forest(n + k, frozenset(edges))


def _attach_path(n: int, edges: set[Edge], anchor: int, length: int) -> int:
    prev = anchor
    for _ in range(length):
        edges.add(_norm(prev, n))
        prev = n
        n += 1
    return n


def graft_pair(g: Forest, u: int, a: int, b: int) -> Forest:
    """``G_u(a, b)``: two new pendant paths of lengths ``a`` and ``b`` at ``u``."""
    g.check_vertex(u)
    if a < 0 or b < 0:
        raise ValueError("path lengths must be nonnegative")
    edges = set(g.edges)
    n = _attach_path(g.n, edges, u, a)
    n = _attach_path(n, edges, u, b)
    return Forest(n, frozenset(edges))


def graft_two_vertices(g: Forest, u: int, v: int, a: int, b: int) -> Forest:
    """``G_{u,v}(a, b)``: a pendant path of length ``a`` at ``u``, ``b`` at ``v``."""
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        raise SameVertex(f"graft_two_vertices needs distinct vertices, got {u} twice")
    if a < 0 or b < 0:
        raise ValueError("path lengths must be nonnegative")
    edges = set(g.edges)
    n = _attach_path(g.n, edges, u, a)
    n = _attach_path(n, edges, v, b)
    return Forest(n, frozenset(edges))


# ---------------------------------------------------------------------------
# Canonical forms (AHU on the centroid)


def _rooted_code(adj: Sequence[Sequence[int]], root: int, banned: int = -1) -> str:
    parent = {root: banned}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    codes: dict[int, list[str]] = {u: [] for u in order}
    out = ""
    for u in reversed(order):
        out = "(" + "".join(sorted(codes[u])) + ")"
        if u != root:
            codes[parent[u]].append(out)
    return out


def centroids(forest: Forest, component: Sequence[int] | None = None) -> list[int]:
    comp = list(component) if component is not None else list(forest.components[0])
    adj = forest.adjacency
    root = comp[0]
    size = len(comp)
    parent = {root: -1}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w != parent[u]:
                parent[w] = u
                order.append(w)
    sub = {u: 1 for u in order}
    for u in reversed(order[1:]):
        sub[parent[u]] += sub[u]
    best = []
    for u in order:
        heaviest = size - sub[u]
        for w in adj[u]:
            if w != parent[u]:
                heaviest = max(heaviest, sub[w])
        if 2 * heaviest <= size:
            best.append(u)
    return sorted(best)


def tree_code(forest: Forest, component: Sequence[int] | None = None) -> str:
    comp = component if component is not None else forest.components[0]
    return min(_rooted_code(forest.adjacency, c) for c in centroids(forest, comp))


def canonical_code(forest: Forest) -> str:
    """Isomorphism-invariant string; equal iff the forests are isomorphic."""
    return "+".join(sorted(tree_code(forest, comp) for comp in forest.components))


def is_isomorphic(f1: Forest, f2: Forest) -> bool:
    return f1.n == f2.n and len(f1.edges) == len(f2.edges) and canonical_code(f1) == canonical_code(f2)


def from_canonical_code(code: str) -> Forest:
    """Rebuild a tree from a ``tree_code`` string (inverse up to labelling)."""
    edges = []
    stack: list[int] = []
    n = 0
    for ch in code:
        if ch == "(":
            if stack:
                edges.append((stack[-1], n))
            stack.append(n)
            n += 1
        elif ch == ")":
            stack.pop()
        else:
            raise InvalidSpec(f"bad canonical code character {ch!r}")
    return Forest.from_edges(n, edges)


# ---------------------------------------------------------------------------
# Classification


class TreeClass(enum.Enum):
    C1 = "C1"  # path
    C2 = "C2"  # P_n(2, a, b)
    C3 = "C3"  # starlike, max degree 3, not in C2
    C4 = "C4"  # starlike, max degree >= 4
    C5 = "C5"  # at least two branching vertices


class Classification(NamedTuple):
    cls: TreeClass
    n3: int
    max_degree: int


def pendant_arms(tree: Forest, center: int) -> list[int] | None:
    """Lengths of the paths leaving ``center`` if all of them are pendant paths."""
    adj = tree.adjacency
    lengths = []
    for start in adj[center]:
        prev, cur, length = center, start, 1
        while True:
            nbrs = adj[cur]
            if len(nbrs) == 1:
                break
            if len(nbrs) != 2:
                return None
            nxt = nbrs[0] if nbrs[1] == prev else nbrs[1]
            prev, cur = cur, nxt
            length += 1
        lengths.append(length)
    return lengths


def classify(tree: Forest) -> Classification:
    if not tree.is_tree:
        raise NotConnected("classify needs a tree")
    n3 = tree.n3
    delta = tree.max_degree if tree.n > 1 else 0
    if n3 == 0:
        cls = TreeClass.C1
    elif n3 >= 2:
        cls = TreeClass.C5
    elif delta >= 4:
        cls = TreeClass.C4
    else:
        center = next(v for v in range(tree.n) if tree.degree(v) >= 3)
        arms = pendant_arms(tree, center)
        assert arms is not None
        cls = TreeClass.C2 if 2 in arms else TreeClass.C3
    return Classification(cls, n3, delta)


def recognize(tree: Forest) -> TreeSpec | None:
    """Name a tree as ``P``, ``S`` or ``T`` when it has one of those shapes.

    Arms are normalised: starlike arms sorted ascending, double-broom sides
    sorted and the lexicographically smaller side first.
    """
    if not tree.is_tree:
        return None
    n = tree.n
    branch = [v for v in range(n) if tree.degree(v) >= 3]
    if not branch:
        return Path(n)
    if len(branch) == 1:
        arms = pendant_arms(tree, branch[0])
        assert arms is not None
        return Starlike(n, tuple(sorted(arms)))
    if len(branch) == 2 and all(tree.degree(v) == 3 for v in branch):
        sides = []
        for v in branch:
            lengths = []
            for start in tree.adjacency[v]:
                prev, cur, length = v, start, 1
                while tree.degree(cur) == 2:
                    nbrs = tree.adjacency[cur]
                    prev, cur = cur, (nbrs[0] if nbrs[1] == prev else nbrs[1])
                    length += 1
                if tree.degree(cur) == 1:
                    lengths.append(length)
            if len(lengths) != 2:
                return None
            sides.append(tuple(sorted(lengths)))
        (a, b), (c, d) = sorted(sides)
        return DoubleBroom(n, a, b, c, d)
    return None
