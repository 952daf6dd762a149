"""Structural parameters of superstructure graphs.

Provides spanning forests and the feedback edge number, the localized
feedback measure used by the record-based solver (per vertex: how many
non-tree edges route their tree path through it), and nice tree
decompositions for the bag-based solver.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .instances import Superstructure

DEFAULT_TREE_BUDGET = 20000


@dataclass(frozen=True)
class SpanningForest:
    """A rooted spanning forest of a superstructure.

    parent[v] is None for component roots; tree_edges/feedback_edges
    partition the graph's edge set.
    """

    n: int
    parent: tuple[Optional[int], ...]
    roots: tuple[int, ...]
    tree_edges: frozenset[tuple[int, int]]
    feedback_edges: frozenset[tuple[int, int]]

    def children_lists(self) -> dict[int, list[int]]:
        ch: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for v, p in enumerate(self.parent):
            if p is not None:
                ch[p].append(v)
        for v in ch:
            ch[v].sort()
        return ch

    def depths(self) -> list[int]:
        d = [-1] * self.n
        for r in self.roots:
            d[r] = 0
            stack = [r]
            ch = self.children_lists()
            while stack:
                v = stack.pop()
                for w in ch[v]:
                    d[w] = d[v] + 1
                    stack.append(w)
        return d

    def tree_path(self, u: int, w: int) -> list[int]:
        """Vertices on the unique tree path between u and w (inclusive)."""
        au, aw = [], []
        x, y = u, w
        du, dw = self._depth_cache()[u], self._depth_cache()[w]
        while du > dw:
            au.append(x)
            x = self.parent[x]
            du -= 1
        while dw > du:
            aw.append(y)
            y = self.parent[y]
            dw -= 1
        while x != y:
            au.append(x)
            aw.append(y)
            x = self.parent[x]
            y = self.parent[y]
            if x is None or y is None:
                raise ValueError(f"{u} and {w} are in different components")
        return au + [x] + aw[::-1]

    def _depth_cache(self) -> list[int]:
        cache = getattr(self, "_depths", None)
        if cache is None:
            cache = self.depths()
            object.__setattr__(self, "_depths", cache)
        return cache


@dataclass(frozen=True)
class LfenWitness:
    """A spanning forest with per-vertex counts of locally interfering
    non-tree edges; value is the maximum count."""

    forest: SpanningForest
    local_counts: tuple[int, ...]
    value: int
    exact: bool = False


def _norm(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def forest_from_edges(
    g: Superstructure, tree_edges: frozenset[tuple[int, int]]
) -> SpanningForest:
    """Root the given spanning edge set (BFS from the smallest vertex per
    component) and classify the remaining edges as feedback edges."""
    adj: dict[int, list[int]] = {v: [] for v in range(g.n)}
    for a, b in tree_edges:
        if _norm(a, b) not in g.edges:
            raise ValueError(f"tree edge ({a},{b}) not in the graph")
        adj[a].append(b)
        adj[b].append(a)
    parent: list[Optional[int]] = [None] * g.n
    seen = [False] * g.n
    roots = []
    from collections import deque

    for s in range(g.n):
        if seen[s]:
            continue
        roots.append(s)
        seen[s] = True
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    dq.append(w)
    tset = frozenset(_norm(a, b) for a, b in tree_edges)
    comps = {}
    for v in range(g.n):
        r = v
        while parent[r] is not None:
            r = parent[r]
        comps[v] = r
    for a, b in g.edges:
        if comps[a] != comps[b]:
            raise ValueError("edge set does not span every component")
    feedback = frozenset(e for e in g.edges if e not in tset)
    return SpanningForest(g.n, tuple(parent), tuple(roots), tset, feedback)


def feedback_edge_set(g: Superstructure) -> SpanningForest:
    """BFS spanning forest; the non-tree edges form a minimum feedback edge
    set, of size |E| - n + #components."""
    tree = set()
    seen = [False] * g.n
    from collections import deque

    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        dq = deque([s])
        while dq:
            v = dq.popleft()
            for w in sorted(g.adj[v]):
                if not seen[w]:
                    seen[w] = True
                    tree.add(_norm(v, w))
                    dq.append(w)
    return forest_from_edges(g, frozenset(tree))


def lfen_of_tree(g: Superstructure, forest: SpanningForest) -> LfenWitness:
    """Count, per vertex, the non-tree edges whose tree path crosses it
    (path endpoints included)."""
    counts = [0] * g.n
    for u, w in sorted(forest.feedback_edges):
        for v in forest.tree_path(u, w):
            counts[v] += 1
    value = max(counts, default=0)
    return LfenWitness(forest, tuple(counts), value)


def _component_subgraph(g: Superstructure, comp: list[int]):
    idx = {v: i for i, v in enumerate(comp)}
    edges = [
        (idx[a], idx[b]) for a, b in sorted(g.edges) if a in idx and b in idx
    ]
    return Superstructure(len(comp), edges), idx


def _spanning_trees(g: Superstructure, budget: int):
    """Yield spanning trees (edge frozensets) of a connected graph by
    branching on each edge: contract it into the tree or delete it.  Raises
    StopIteration-like budget exhaustion via a sentinel."""
    edges = sorted(g.edges)
    m, n = len(edges), g.n
    yielded = 0

    def connected_with(available: list[bool], union: list[int]) -> bool:
        # can the remaining edges still span everything merged so far?
        parent = union[:]

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        comps = len({find(v) for v in range(n)})
        for i, (a, b) in enumerate(edges):
            if not available[i]:
                continue
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
                comps -= 1
                if comps == 1:
                    return True
        return comps == 1

    def rec(i: int, chosen: list[int], union: list[int], count: int):
        nonlocal yielded
        if count == n - 1:
            yielded += 1
            if yielded > budget:
                raise _BudgetExceeded
            yield frozenset(edges[j] for j in chosen)
            return
        if i == m:
            return

        def find(par, x):
            while par[x] != x:
                par[x] = par[par[x]]
                x = par[x]
            return x

        a, b = edges[i]
        ra, rb = find(union, a), find(union, b)
        if ra != rb:
            u2 = union[:]
            u2[ra] = rb
            chosen.append(i)
            yield from rec(i + 1, chosen, u2, count + 1)
            chosen.pop()
        # deletion branch: only if the rest can still connect
        avail = [j > i for j in range(m)]
        if connected_with(avail, union):
            yield from rec(i + 1, chosen, union, count)

    yield from rec(0, [], list(range(n)), 0)


class _BudgetExceeded(Exception):
    pass


def _local_counts_for_tree(
    g: Superstructure, tree: frozenset[tuple[int, int]]
) -> tuple[int, tuple[int, ...]]:
    forest = forest_from_edges(g, tree)
    w = lfen_of_tree(g, forest)
    return w.value, w.local_counts


def lfen_search(
    g: Superstructure,
    budget: int = DEFAULT_TREE_BUDGET,
    restarts: int = 4,
) -> LfenWitness:
    """Best witness tree found for the localized feedback measure.

    Per component: enumerate all spanning trees when their number fits the
    budget (result flagged exact), otherwise improve a BFS tree by edge
    swaps (add one non-tree edge, drop one tree edge on its cycle) accepting
    strict improvements, restarting from different BFS roots.  The global
    value is the maximum over components.
    """
    best_edges: set[tuple[int, int]] = set()
    exact_all = True
    for comp in superstructure_components(g):
        sub, idx = _component_subgraph(g, comp)
        back = {i: v for v, i in idx.items()}
        tree, exact = _component_lfen_tree(sub, budget, restarts)
        exact_all = exact_all and exact
        best_edges.update(_norm(back[a], back[b]) for a, b in tree)
    forest = forest_from_edges(g, frozenset(best_edges))
    w = lfen_of_tree(g, forest)
    return LfenWitness(forest, w.local_counts, w.value, exact_all)


def superstructure_components(g: Superstructure) -> list[list[int]]:
    return g.components()


def _component_lfen_tree(g: Superstructure, budget: int, restarts: int):
    """(tree edge set, exact flag) for a connected graph."""
    if g.edge_count() == g.n - 1:
        return frozenset(g.edges), True
    best_tree = None
    best_key = None
    try:
        for tree in _spanning_trees(g, budget):
            value, _ = _local_counts_for_tree(g, tree)
            key = (value, tuple(sorted(tree)))
            if best_key is None or key < best_key:
                best_key = key
                best_tree = tree
        return best_tree, True
    except _BudgetExceeded:
        pass
    # local search fallback
    best_tree = None
    best_key = None
    roots = list(range(min(g.n, max(1, restarts))))
    for root in roots:
        tree = _bfs_tree(g, root)
        value, counts = _local_counts_for_tree(g, tree)
        improved = True
        while improved:
            improved = False
            swap_best = None
            for e in sorted(g.edges - tree):
                forest = forest_from_edges(g, tree)
                path = forest.tree_path(*e)
                path_edges = sorted(
                    _norm(path[i], path[i + 1]) for i in range(len(path) - 1)
                )
                for f in path_edges:
                    cand = (tree - {f}) | {e}
                    cval, _ = _local_counts_for_tree(g, cand)
                    if cval < value and (
                        swap_best is None or (cval, e, f) < swap_best[:3]
                    ):
                        swap_best = (cval, e, f, cand)
            if swap_best is not None:
                value = swap_best[0]
                tree = swap_best[3]
                improved = True
        key = (value, tuple(sorted(tree)))
        if best_key is None or key < best_key:
            best_key = key
            best_tree = tree
    return best_tree, False


def _bfs_tree(g: Superstructure, root: int) -> frozenset[tuple[int, int]]:
    from collections import deque

    seen = [False] * g.n
    seen[root] = True
    tree = set()
    dq = deque([root])
    while dq:
        v = dq.popleft()
        for w in sorted(g.adj[v]):
            if not seen[w]:
                seen[w] = True
                tree.add(_norm(v, w))
                dq.append(w)
    return frozenset(tree)


# ---------------------------------------------------------------------------
# tree decompositions


@dataclass
class TDNode:
    bag: frozenset[int]
    kind: str  # leaf | introduce | forget | join
    children: list[int]


@dataclass
class NiceTreeDecomposition:
    """Rooted nice decomposition: singleton leaf bags, empty root bag,
    introduce/forget steps change one vertex, join children copy the bag."""

    nodes: list[TDNode]
    root: int
    width: int

    def __iter__(self):
        return iter(range(len(self.nodes)))

    def postorder(self) -> list[int]:
        order, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                order.append(t)
            else:
                stack.append((t, True))
                for c in self.nodes[t].children:
                    stack.append((c, False))
        return order


def check_nice(td: NiceTreeDecomposition, g: Superstructure) -> list[str]:
    """All violated decomposition invariants (empty list when valid)."""
    problems = []
    nodes = td.nodes
    if nodes[td.root].bag:
        problems.append("root bag not empty")
    seen_children = set()
    for t, node in enumerate(nodes):
        for c in node.children:
            if c in seen_children:
                problems.append(f"node {c} has two parents")
            seen_children.add(c)
        kids = node.children
        if node.kind == "leaf":
            if kids:
                problems.append(f"leaf {t} has children")
            if len(node.bag) != 1 and g.n > 0:
                problems.append(f"leaf {t} bag size {len(node.bag)}")
        elif node.kind in ("introduce", "forget"):
            if len(kids) != 1:
                problems.append(f"{node.kind} {t} has {len(kids)} children")
            else:
                child = nodes[kids[0]].bag
                diff = node.bag ^ child
                if len(diff) != 1:
                    problems.append(f"{node.kind} {t} changes {len(diff)} vertices")
                elif node.kind == "introduce" and not diff <= node.bag:
                    problems.append(f"introduce {t} removed a vertex")
                elif node.kind == "forget" and not diff <= child:
                    problems.append(f"forget {t} added a vertex")
        elif node.kind == "join":
            if len(kids) != 2 or any(nodes[c].bag != node.bag for c in kids):
                problems.append(f"join {t} children don't copy the bag")
        else:
            problems.append(f"unknown kind {node.kind}")
    # edge coverage
    for a, b in g.edges:
        if not any({a, b} <= node.bag for node in nodes):
            problems.append(f"edge ({a},{b}) not covered")
    # subtree (connectedness) property per vertex
    parent = {c: t for t, node in enumerate(nodes) for c in node.children}
    for v in range(g.n):
        holding = [t for t, node in enumerate(nodes) if v in node.bag]
        if not holding and any(v in e for e in g.edges):
            problems.append(f"vertex {v} in no bag")
            continue
        if not holding:
            continue
        hold = set(holding)
        top = holding[0]
        for t in holding:
            # walk towards root while staying in holding set
            x = t
            while x in parent and parent[x] in hold:
                x = parent[x]
            top = x
        for t in holding:
            x = t
            while x != top:
                if x not in parent or x not in hold:
                    problems.append(f"vertex {v} occurrence not connected")
                    break
                x = parent[x]
    return problems


def _min_fill_order(g: Superstructure) -> list[int]:
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    remaining = set(range(g.n))
    while remaining:
        best_v, best_fill = None, None
        for v in sorted(remaining):
            nbrs = adj[v]
            fill = 0
            nl = sorted(nbrs)
            for i in range(len(nl)):
                for j in range(i + 1, len(nl)):
                    if nl[j] not in adj[nl[i]]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_fill, best_v = fill, v
        v = best_v
        nbrs = sorted(adj[v])
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                adj[nbrs[i]].add(nbrs[j])
                adj[nbrs[j]].add(nbrs[i])
        for w in nbrs:
            adj[w].discard(v)
        del adj[v]
        remaining.remove(v)
        order.append(v)
    return order


def _exact_order(g: Superstructure) -> list[int]:
    """Optimal elimination order by dynamic programming over vertex subsets
    (feasible up to ~n=12; used for test-grade exact widths)."""
    n = g.n
    if n > 14:
        raise ValueError("exact width mode is limited to small graphs")
    verts = list(range(n))

    def q(mask: int, v: int) -> int:
        # vertices outside mask|{v} reachable from v through mask
        seen = 1 << v
        stack = [v]
        out = 0
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                bit = 1 << y
                if seen & bit:
                    continue
                seen |= bit
                if mask & bit:
                    stack.append(y)
                else:
                    out += 1
        return out

    full = (1 << n) - 1
    opt = {0: -1}
    choice = {}
    masks = sorted(range(full + 1), key=lambda m: bin(m).count("1"))
    for mask in masks:
        if mask == 0:
            continue
        best, bestv = None, None
        for v in verts:
            bit = 1 << v
            if not mask & bit:
                continue
            prev = mask ^ bit
            val = max(opt[prev], q(prev, v))
            if best is None or val < best:
                best, bestv = val, v
        opt[mask] = best
        choice[mask] = bestv
    order = []
    mask = full
    while mask:
        v = choice[mask]
        order.append(v)
        mask ^= 1 << v
    order.reverse()
    return order


def _bags_from_order(g: Superstructure, order: list[int]):
    """Raw decomposition bags and tree from an elimination order."""
    pos = {v: i for i, v in enumerate(order)}
    adj = {v: set(g.adj[v]) for v in range(g.n)}
    bags = {}
    succ = {}
    for v in order:
        later = {w for w in adj[v] if pos[w] > pos[v]}
        bags[v] = frozenset({v} | later)
        for a in later:
            for b in later:
                if a != b:
                    adj[a].add(b)
        for w in later:
            adj[w].discard(v)
        if later:
            succ[v] = min(later, key=lambda w: pos[w])
    parent = {}
    for v in order:
        if v in succ:
            parent[v] = succ[v]
    return bags, parent


def tree_decomposition(g: Superstructure, exact: bool = False) -> NiceTreeDecomposition:
    """Nice decomposition from a min-fill elimination order (or the exact
    optimal order when `exact`); components meet under a shared empty root."""
    if g.n == 0:
        node = TDNode(frozenset(), "leaf", [])
        return NiceTreeDecomposition([node], 0, -1)
    order = _exact_order(g) if exact else _min_fill_order(g)
    bags, parent = _bags_from_order(g, order)
    return nice_from_raw(bags, parent)


def nice_from_raw(bags: dict, parent: dict) -> NiceTreeDecomposition:
    """Nice decomposition from raw bags and a parent map over bag keys
    (roots omitted from `parent`); bag contents are morphed stepwise along
    each raw edge and components joined under a shared empty root."""
    nodes: list[TDNode] = []

    def add(bag, kind, children) -> int:
        nodes.append(TDNode(frozenset(bag), kind, list(children)))
        return len(nodes) - 1

    children_of: dict[int, list[int]] = {v: [] for v in bags}
    for v, p in parent.items():
        children_of[p].append(v)
    comp_roots = [v for v in bags if v not in parent]

    def build(v: int) -> int:
        """Nice subtree whose top node has bag bags[v]; returns node id."""
        bag = bags[v]
        kids = sorted(children_of[v])
        sub_tops = []
        for c in kids:
            top = build(c)
            # morph child's bag into this bag: forget extras, introduce missing
            cur_bag = bags[c]
            cur = top
            for x in sorted(cur_bag - bag):
                cur_bag = cur_bag - {x}
                cur = add(cur_bag, "forget", [cur])
            for x in sorted(bag - cur_bag):
                cur_bag = cur_bag | {x}
                cur = add(cur_bag, "introduce", [cur])
            sub_tops.append(cur)
        if not sub_tops:
            # build the bag from a singleton leaf
            vs = sorted(bag)
            cur = add({vs[0]}, "leaf", [])
            cur_bag = {vs[0]}
            for x in vs[1:]:
                cur_bag.add(x)
                cur = add(cur_bag, "introduce", [cur])
            return cur
        while len(sub_tops) > 1:
            b = sub_tops.pop()
            a = sub_tops.pop()
            sub_tops.append(add(bag, "join", [a, b]))
        return sub_tops[0]

    tops = []
    for r in sorted(comp_roots):
        top = build(r)
        cur_bag = bags[r]
        for x in sorted(cur_bag):
            cur_bag = cur_bag - {x}
            top = add(cur_bag, "forget", [top])
        tops.append(top)
    while len(tops) > 1:
        b = tops.pop()
        a = tops.pop()
        tops.append(add(frozenset(), "join", [a, b]))
    root = tops[0]
    width = max(len(node.bag) for node in nodes) - 1
    return NiceTreeDecomposition(nodes, root, width)
