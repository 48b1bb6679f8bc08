"""Rooted DAG taxonomy: construction, validation, queries and level computation.

A taxonomy is a directed acyclic graph whose edges point from a parent
(more general) class to a child (more specific) class.  All downstream
corrections process nodes by *max-distance levels*: the level of a node is
the length of the longest root-to-node path, which guarantees that every
ancestor of a node sits on a strictly smaller level.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    CycleError,
    DagError,
    DuplicateEdgeError,
    EmptyGraphError,
    SelfLoopError,
    UnknownNodeError,
)

SYNTHETIC_ROOT = "__ROOT__"

_RELATION_KINDS = ("children", "parents", "ancestors", "descendants")


class Dag:
    """Immutable rooted DAG over string class identifiers.

    Do not instantiate directly; use :func:`build_dag`, which validates the
    edge set and adds a synthetic root when the input has several roots.
    Node order is the first-appearance order in the (possibly augmented)
    edge list and is used everywhere determinism matters.
    """

    __slots__ = (
        "nodes", "edges", "root", "synthetic_root_flag",
        "_index", "_children", "_parents", "_anc_cache", "_desc_cache",
    )

    def __init__(self, nodes, edges, root, synthetic_root_flag):
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.root = root
        self.synthetic_root_flag = synthetic_root_flag
        self._index = {n: i for i, n in enumerate(self.nodes)}
        children = {n: [] for n in self.nodes}
        parents = {n: [] for n in self.nodes}
        for p, c in self.edges:
            children[p].append(c)
            parents[c].append(p)
        self._children = {n: tuple(v) for n, v in children.items()}
        self._parents = {n: tuple(v) for n, v in parents.items()}
        self._anc_cache = {}
        self._desc_cache = {}

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node):
        return node in self._index

    def __eq__(self, other):
        if not isinstance(other, Dag):
            return NotImplemented
        return (self.nodes == other.nodes and self.edges == other.edges
                and self.root == other.root
                and self.synthetic_root_flag == other.synthetic_root_flag)

    def __hash__(self):
        return hash((self.nodes, self.edges, self.root))

    def __repr__(self):
        return (f"Dag({len(self.nodes)} nodes, {len(self.edges)} edges, "
                f"root={self.root!r})")

    def index(self, node):
        try:
            return self._index[node]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node!r}") from None

    def children(self, node):
        self.index(node)
        return self._children[node]

    def parents(self, node):
        self.index(node)
        return self._parents[node]

    def ancestors(self, node):
        """All nodes reachable from `node` against edge direction, excluding itself."""
        return self._reach(node, self._parents, self._anc_cache)

    def descendants(self, node):
        """All nodes reachable from `node` along edge direction, excluding itself."""
        return self._reach(node, self._children, self._desc_cache)

    def _reach(self, node, adjacency, cache):
        self.index(node)
        hit = cache.get(node)
        if hit is not None:
            return hit
        seen = {}
        stack = list(adjacency[node])[::-1]
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen[n] = True
            stack.extend(adjacency[n][::-1])
        # deterministic: global node order
        result = tuple(sorted(seen, key=self._index.__getitem__))
        cache[node] = result
        return result

    def topological_order(self):
        """Node indices in a topological order (parents before children)."""
        indeg = {n: len(self._parents[n]) for n in self.nodes}
        ready = [n for n in self.nodes if indeg[n] == 0]
        order = []
        while ready:
            n = ready.pop(0)
            order.append(n)
            for c in self._children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
        return order


@dataclass(frozen=True)
class LevelMap:
    """Max distance from the root for every node, grouped into levels.

    `dist[n]` is the length (edge count) of the longest root-to-`n` path;
    `levels[d]` lists the nodes at distance `d` in node order.  Keeps a
    reference to the Dag it was computed from so consumers can assert
    provenance instead of recomputing.
    """

    dag: Dag
    dist: dict = field(compare=False)
    levels: dict = field(compare=False)
    max_level: int = 0


def relatives(dag: Dag, node: str, kind: str):
    """Return the requested relation set of `node` as an ordered tuple.

    `kind` is one of "children", "parents", "ancestors", "descendants".
    The node itself is never a member of any of the four sets.
    """
    if kind not in _RELATION_KINDS:
        raise ValueError(f"kind must be one of {_RELATION_KINDS}, got {kind!r}")
    return getattr(dag, kind)(node)


def build_dag(edges, dedup: bool = False) -> Dag:
    """Build and validate a rooted Dag from (parent, child) identifier pairs.

    If several nodes have in-degree 0, a synthetic root named "__ROOT__" is
    added with one edge to each of them (flagged on the result).  The name
    "__ROOT__" is reserved: it may appear in the input only as the unique
    root of an already-augmented edge list, so serialization round-trips.

    With `dedup` repeated edges are silently collapsed; otherwise they raise.
    """
    edges = list(edges)
    if not edges:
        raise EmptyGraphError("edge list is empty")

    seen = set()
    clean = []
    for k, (p, c) in enumerate(edges):
        if not isinstance(p, str) or not isinstance(c, str) or not p or not c:
            raise DagError(f"edge #{k + 1}: identifiers must be non-empty strings")
        if p == c:
            raise SelfLoopError(f"self-loop on node {p!r}")
        if (p, c) in seen:
            if dedup:
                continue
            raise DuplicateEdgeError(f"duplicate edge ({p!r}, {c!r})")
        seen.add((p, c))
        clean.append((p, c))
    edges = clean

    nodes = []
    index = {}
    for p, c in edges:
        for n in (p, c):
            if n not in index:
                index[n] = len(nodes)
                nodes.append(n)

    has_parent = {c for _, c in edges}
    roots = [n for n in nodes if n not in has_parent]

    synthetic = False
    if not roots:
        raise CycleError(_find_cycle(nodes, edges))
    if len(roots) > 1:
        if SYNTHETIC_ROOT in index:
            raise DagError(
                f"node {SYNTHETIC_ROOT!r} is reserved for the synthetic root "
                "but appears in a multi-root edge list")
        for r in roots:
            edges.append((SYNTHETIC_ROOT, r))
        index[SYNTHETIC_ROOT] = len(nodes)
        nodes.append(SYNTHETIC_ROOT)
        root = SYNTHETIC_ROOT
        synthetic = True
    else:
        root = roots[0]
        if SYNTHETIC_ROOT in index:
            if root != SYNTHETIC_ROOT:
                raise DagError(
                    f"node {SYNTHETIC_ROOT!r} is reserved for the synthetic root")
            # round-trip of a previously augmented graph
            synthetic = True

    cycle = _check_acyclic(nodes, edges)
    if cycle is not None:
        raise CycleError(cycle)

    return Dag(nodes, edges, root, synthetic)


def _check_acyclic(nodes, edges):
    """Kahn pass; returns one cycle (list of ids, first == last) or None."""
    indeg = {n: 0 for n in nodes}
    children = {n: [] for n in nodes}
    for p, c in edges:
        indeg[c] += 1
        children[p].append(c)
    ready = [n for n in nodes if indeg[n] == 0]
    done = 0
    while ready:
        n = ready.pop()
        done += 1
        for c in children[n]:
            indeg[c] -= 1
            if indeg[c] == 0:
                ready.append(c)
    if done == len(nodes):
        return None
    remaining = [n for n in nodes if indeg[n] > 0]
    return _find_cycle(remaining, [(p, c) for p, c in edges
                                   if indeg.get(p, 0) > 0 and indeg[c] > 0])


def _find_cycle(nodes, edges):
    """Locate one directed cycle in a subgraph known to contain one."""
    children = {n: [] for n in nodes}
    for p, c in edges:
        children[p].append(c)
    color = dict.fromkeys(nodes, 0)  # 0 white, 1 on stack, 2 done
    parent_on_path = {}
    for start in nodes:
        if color[start]:
            continue
        stack = [(start, iter(children[start]))]
        color[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 1:
                    cycle = [nxt]
                    cur = node
                    while cur != nxt:
                        cycle.append(cur)
                        cur = parent_on_path[cur]
                    cycle.append(nxt)
                    cycle.reverse()
                    return cycle
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent_on_path[nxt] = node
                    stack.append((nxt, iter(children[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                stack.pop()
    raise AssertionError("no cycle found in subgraph reported cyclic")


def compute_levels(dag: Dag) -> LevelMap:
    """Longest-path distance from the root for every node.

    Dynamic programming over a topological order: dist(root) = 0 and
    dist(n) = 1 + max over parents of dist(parent).  Equivalent to running
    Bellman-Ford on negated edge weights, in linear instead of quadratic time.
    """
    dist = {}
    for n in dag.topological_order():
        ps = dag.parents(n)
        dist[n] = 1 + max(dist[p] for p in ps) if ps else 0
    levels = {}
    for n in dag.nodes:  # node order within each level
        levels.setdefault(dist[n], []).append(n)
    levels = {d: tuple(v) for d, v in levels.items()}
    return LevelMap(dag=dag, dist=dist, levels=levels, max_level=max(levels))


def read_edge_list(path) -> list:
    """Parse a TSV edge-list file into (parent, child) pairs.

    One `parent<TAB>child` pair per line; `#` comment lines and blank
    lines are ignored.
    """
    from .errors import ParseError

    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise ParseError("expected 'parent<TAB>child'", line=lineno)
            pairs.append((parts[0], parts[1]))
    if not pairs:
        raise EmptyGraphError(f"no edges found in {path}")
    return pairs


def write_edge_list(dag: Dag, path) -> None:
    """Write the Dag's edges in insertion order (round-trips node order)."""
    with open(path, "w", encoding="utf-8") as fh:
        for p, c in dag.edges:
            fh.write(f"{p}\t{c}\n")
