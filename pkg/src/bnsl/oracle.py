"""Exhaustive reference solvers.

Desk-scale brute force only; every other solver in the package is checked
against these.  Parent sets are handled as bitmasks throughout.
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional

from .instances import (
    AdditiveInstance,
    Instance,
    Network,
    NonZeroInstance,
    Superstructure,
    superstructure,
)


class OracleLimitError(ValueError):
    """Instance too large for the exhaustive solver."""


def _nonzero_tables(instance: NonZeroInstance):
    """Per-vertex dict mask -> score for listed parent sets (plus empty)."""
    tables = []
    for v in range(instance.n):
        table = {0: instance.score(v, frozenset())}
        for parents, s in instance.entries.get(v, {}).items():
            mask = 0
            for p in parents:
                mask |= 1 << p
            table[mask] = s
        tables.append(table)
    return tables


def exact_bnsl(instance: Instance) -> tuple[int, Network]:
    """Optimal acyclic network by sink-ordering dynamic programming over
    vertex subsets: best(W) = max_v best_local(v, W-v) + best(W-v)."""
    n = instance.n
    if n > 20:
        raise OracleLimitError(f"subset DP limited to 20 variables, got {n}")
    g = superstructure(instance)
    nbr_mask = [0] * n
    for v in range(n):
        for w in g.adj[v]:
            nbr_mask[v] |= 1 << w

    if isinstance(instance, NonZeroInstance):
        tables = _nonzero_tables(instance)
        q = None

        def best_local(v: int, allowed: int) -> tuple[int, int]:
            best, best_mask = -1, 0
            for mask, s in tables[v].items():
                if mask & ~allowed:
                    continue
                if s > best or (s == best and mask < best_mask):
                    best, best_mask = s, mask
            return best, best_mask

    else:
        q = instance.max_in_degree
        in_arcs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (u, v), s in instance.arc_scores.items():
            in_arcs[v].append((s, u))
        for v in range(n):
            in_arcs[v].sort(key=lambda t: (-t[0], t[1]))

        def best_local(v: int, allowed: int) -> tuple[int, int]:
            total, mask, taken = 0, 0, 0
            for s, u in in_arcs[v]:
                if q is not None and taken >= q:
                    break
                if allowed & (1 << u):
                    total += s
                    mask |= 1 << u
                    taken += 1
            return total, mask

    memo: dict[tuple[int, int], tuple[int, int]] = {}

    def local(v: int, allowed: int) -> tuple[int, int]:
        key = (v, allowed & nbr_mask[v])
        got = memo.get(key)
        if got is None:
            got = best_local(v, key[1])
            memo[key] = got
        return got

    full = (1 << n) - 1
    best = [0] * (full + 1)
    choice: list[Optional[tuple[int, int]]] = [None] * (full + 1)
    for w_mask in range(1, full + 1):
        best_val, best_choice = -1, None
        rest = w_mask
        while rest:
            bit = rest & -rest
            v = bit.bit_length() - 1
            rest ^= bit
            sub = w_mask ^ bit
            s, pmask = local(v, sub)
            val = s + best[sub]
            if val > best_val:
                best_val, best_choice = val, (v, pmask)
        best[w_mask] = best_val
        choice[w_mask] = best_choice

    arcs = set()
    w_mask = full
    while w_mask:
        v, pmask = choice[w_mask]
        while pmask:
            bit = pmask & -pmask
            arcs.add((bit.bit_length() - 1, v))
            pmask ^= bit
        w_mask ^= 1 << v
    return best[full], Network(n, frozenset(arcs))


def exact_pl(instance: Instance, q: Optional[int] = None) -> tuple[int, Network]:
    """Optimal polytree by exhaustive orientation of skeleton-forest edge
    subsets of the superstructure, filtered by the in-degree bound."""
    n = instance.n
    g = superstructure(instance)
    edges = sorted(g.edges)
    m = len(edges)
    if m > 16:
        raise OracleLimitError(f"polytree search limited to 16 edges, got {m}")
    if q is None and isinstance(instance, AdditiveInstance):
        q = instance.max_in_degree

    if isinstance(instance, NonZeroInstance):
        tables = _nonzero_tables(instance)

        def gain(v: int, old_mask: int, new_mask: int) -> int:
            t = tables[v]
            return t.get(new_mask, 0) - t.get(old_mask, 0)

    else:

        def gain(v: int, old_mask: int, new_mask: int) -> int:
            added = new_mask & ~old_mask
            u = added.bit_length() - 1
            return instance.arc(u, v)

    best_score = -1
    best_arcs: set[tuple[int, int]] = set()
    arcs: list[tuple[int, int]] = []
    pmask = [0] * n
    indeg = [0] * n

    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def rec(i: int, parent: list[int], score: int):
        nonlocal best_score, best_arcs
        if i == m:
            if score > best_score:
                best_score = score
                best_arcs = set(arcs)
            return
        a, b = edges[i]
        rec(i + 1, parent, score)  # skip the edge
        ra, rb = find(parent, a), find(parent, b)
        if ra == rb:
            return  # a skeleton cycle either way
        merged = parent[:]
        merged[ra] = rb
        for u, v in ((a, b), (b, a)):  # orient u -> v
            if q is not None and indeg[v] >= q:
                continue
            old = pmask[v]
            pmask[v] = old | (1 << u)
            indeg[v] += 1
            arcs.append((u, v))
            rec(i + 1, merged, score + gain(v, old, pmask[v]))
            arcs.pop()
            indeg[v] -= 1
            pmask[v] = old

    # empty configuration baseline: explicit empty-set scores still count
    base = 0
    if isinstance(instance, NonZeroInstance):
        base = sum(instance.score(v, frozenset()) for v in range(n))
        # gain() above is relative to the all-empty assignment
    rec(0, list(range(n)), 0)
    return base + best_score, Network(n, frozenset(best_arcs))


def exact_lfen(
    g: Superstructure, budget: int = 2_000_000
) -> tuple[int, frozenset[tuple[int, int]]]:
    """Minimum over all spanning trees of the per-vertex local feedback
    count; returns (value, witness tree edges).  Enumeration by edge
    combinations, independent of the search in the graphs module."""
    total_value = 0
    witness: set[tuple[int, int]] = set()
    checked = 0
    for comp in g.components():
        idx = {v: i for i, v in enumerate(comp)}
        back = {i: v for v, i in idx.items()}
        cedges = [
            (idx[a], idx[b]) for a, b in sorted(g.edges) if a in idx and b in idx
        ]
        nc = len(comp)
        best_val, best_tree = None, None
        for combo in combinations(range(len(cedges)), nc - 1):
            checked += 1
            if checked > budget:
                raise OracleLimitError("spanning tree enumeration budget exceeded")
            parent = list(range(nc))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            ok = True
            for j in combo:
                a, b = cedges[j]
                ra, rb = find(a), find(b)
                if ra == rb:
                    ok = False
                    break
                parent[ra] = rb
            if not ok:
                continue
            tree = [cedges[j] for j in combo]
            val = _tree_local_value(nc, tree, [e for e in cedges if e not in set(tree)])
            key = (val, tuple(sorted(tree)))
            if best_val is None or key < (best_val, tuple(sorted(best_tree))):
                best_val, best_tree = val, tree
        if best_val is None:  # single-vertex component
            best_val, best_tree = 0, []
        total_value = max(total_value, best_val)
        witness.update(
            (min(back[a], back[b]), max(back[a], back[b])) for a, b in best_tree
        )
    return total_value, frozenset(witness)


def _tree_local_value(n, tree_edges, extra_edges) -> int:
    """max over vertices of the number of extra edges whose tree path
    contains the vertex (BFS per extra edge)."""
    from collections import deque

    adj: dict[int, list[int]] = {v: [] for v in range(n)}
    for a, b in tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    counts = [0] * n
    for u, w in extra_edges:
        prev = {u: None}
        dq = deque([u])
        while dq:
            x = dq.popleft()
            if x == w:
                break
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    dq.append(y)
        x = w
        while x is not None:
            counts[x] += 1
            x = prev[x]
    return max(counts, default=0)


def exact_common_independent(
    elements, oracles, per_cardinality: bool = False
):
    """Best common independent subset(s) by full subset scan.

    `oracles` must expose graphic_independent(list) and
    partition_independent(list).  With per_cardinality, returns a dict
    cardinality -> (weight, subset); otherwise (weight, subset).
    """
    items = list(elements)
    if len(items) > 14:
        raise OracleLimitError("subset scan limited to 14 ground elements")
    best: dict[int, tuple[int, tuple]] = {}
    overall = (0, ())
    for mask in range(1 << len(items)):
        subset = [items[i] for i in range(len(items)) if mask & (1 << i)]
        if not oracles.graphic_independent(subset):
            continue
        if not oracles.partition_independent(subset):
            continue
        weight = sum(e.weight for e in subset)
        k = len(subset)
        if k not in best or weight > best[k][0]:
            best[k] = (weight, tuple(subset))
        if weight > overall[0]:
            overall = (weight, tuple(subset))
    return best if per_cardinality else overall
