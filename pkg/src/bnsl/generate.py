"""Reproducible random instances.

Graphs are grown as a random tree plus a chosen number of extra edges, so
the number of feedback edges is planted exactly.  Subdividing edges then
creates the long degree-2 paths the reduction rules act on without changing
the feedback count.  All draws come from one `random.Random`.
"""

from __future__ import annotations

import random
from typing import Optional

from .instances import AdditiveInstance, Network, NonZeroInstance, Superstructure


def _rng(seed_or_rng) -> random.Random:
    if isinstance(seed_or_rng, random.Random):
        return seed_or_rng
    return random.Random(seed_or_rng)


def random_graph(
    seed_or_rng,
    n: int,
    extra_edges: int = 0,
    max_degree: Optional[int] = None,
    connected: bool = True,
    exact_fen: bool = True,
) -> Superstructure:
    """Random tree (or forest) on n vertices plus `extra_edges` non-tree
    edges; the minimum feedback edge set has exactly that size.  With
    exact_fen=False a shortfall of plantable edges is tolerated."""
    rng = _rng(seed_or_rng)
    deg = [0] * n
    edges = set()
    for v in range(1, n):
        if not connected and rng.random() < 0.15:
            continue
        cands = [u for u in range(v) if max_degree is None or deg[u] < max_degree]
        if not cands:
            cands = list(range(v))
        u = rng.choice(cands)
        edges.add((u, v))
        deg[u] += 1
        deg[v] += 1
    comp_ok = _components_of(n, edges)
    pool = [
        (a, b)
        for a in range(n)
        for b in range(a + 1, n)
        if (a, b) not in edges
        and comp_ok[a] == comp_ok[b]
        and (max_degree is None or (deg[a] < max_degree and deg[b] < max_degree))
    ]
    rng.shuffle(pool)
    added = 0
    for a, b in pool:
        if added == extra_edges:
            break
        if max_degree is not None and (deg[a] >= max_degree or deg[b] >= max_degree):
            continue
        edges.add((a, b))
        deg[a] += 1
        deg[b] += 1
        added += 1
    if added < extra_edges and exact_fen:
        raise ValueError(f"could only plant {added} of {extra_edges} extra edges")
    return Superstructure(n, edges)


def _components_of(n, edges):
    comp = list(range(n))

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            comp[ra] = rb
    return [find(v) for v in range(n)]


def subdivide(seed_or_rng, g: Superstructure, times: int) -> Superstructure:
    """Split random edges with fresh degree-2 vertices (feedback count is
    preserved); grows long induced paths for the reduction rules."""
    rng = _rng(seed_or_rng)
    n = g.n
    edges = set(g.edges)
    if times and not edges:
        raise ValueError("cannot subdivide an edgeless graph")
    for _ in range(times):
        e = rng.choice(sorted(edges))
        edges.remove(e)
        a, b = e
        edges.add((min(a, n), max(a, n)))
        edges.add((min(b, n), max(b, n)))
        n += 1
    return Superstructure(n, edges)


def scores_for_graph(
    seed_or_rng,
    g: Superstructure,
    max_score: int = 8,
    extra_sets: float = 0.7,
    empty_prob: float = 0.15,
) -> NonZeroInstance:
    """Random explicit score family whose superstructure is exactly g.

    Every edge is covered by a singleton entry on one side; extra entries
    draw larger subsets of the neighbourhood; a few vertices get an
    explicit empty-set score.
    """
    rng = _rng(seed_or_rng)
    entries: dict[int, dict[frozenset[int], int]] = {v: {} for v in range(g.n)}
    for a, b in sorted(g.edges):
        child, parent = (b, a) if rng.random() < 0.5 else (a, b)
        entries[child][frozenset([parent])] = rng.randint(1, max_score)
    for v in range(g.n):
        nbrs = sorted(g.adj[v])
        attempts = int(extra_sets * len(nbrs)) + (1 if rng.random() < extra_sets else 0)
        for _ in range(attempts):
            k = rng.randint(1, min(3, len(nbrs))) if nbrs else 0
            if not k:
                continue
            subset = frozenset(rng.sample(nbrs, k))
            if subset not in entries[v]:
                entries[v][subset] = rng.randint(1, max_score)
        if rng.random() < empty_prob:
            entries[v][frozenset()] = rng.randint(1, max_score)
    entries = {v: sets for v, sets in entries.items() if sets}
    names = tuple(f"x{i}" for i in range(g.n))
    return NonZeroInstance(g.n, names, entries)


def additive_for_graph(
    seed_or_rng,
    g: Superstructure,
    max_score: int = 8,
    q: Optional[int] = None,
    both_prob: float = 0.5,
) -> AdditiveInstance:
    """Random additive scores whose superstructure is exactly g."""
    rng = _rng(seed_or_rng)
    arcs: dict[tuple[int, int], int] = {}
    for a, b in sorted(g.edges):
        first = (a, b) if rng.random() < 0.5 else (b, a)
        arcs[first] = rng.randint(1, max_score)
        if rng.random() < both_prob:
            u, v = first
            arcs[(v, u)] = rng.randint(1, max_score)
    names = tuple(f"x{i}" for i in range(g.n))
    return AdditiveInstance(g.n, names, arcs, max_in_degree=q)


def random_nonzero(
    seed_or_rng,
    n: int,
    fen: int = 0,
    max_score: int = 8,
    max_degree: Optional[int] = None,
    subdivisions: int = 0,
    connected: bool = True,
    exact_fen: bool = True,
    extra_sets: float = 0.7,
) -> NonZeroInstance:
    rng = _rng(seed_or_rng)
    base = max(1, n - subdivisions)
    g = random_graph(rng, base, fen, max_degree=max_degree, connected=connected,
                     exact_fen=exact_fen)
    if subdivisions:
        g = subdivide(rng, g, subdivisions)
    return scores_for_graph(rng, g, max_score, extra_sets=extra_sets)


def random_additive(
    seed_or_rng,
    n: int,
    fen: int = 0,
    max_score: int = 8,
    q: Optional[int] = None,
    max_degree: Optional[int] = None,
    connected: bool = True,
    exact_fen: bool = True,
) -> AdditiveInstance:
    rng = _rng(seed_or_rng)
    g = random_graph(rng, n, fen, max_degree=max_degree, connected=connected,
                     exact_fen=exact_fen)
    return additive_for_graph(rng, g, max_score, q)


def random_limited_dependents(
    seed_or_rng,
    n: int,
    dependents: int,
    max_score: int = 8,
    empty_prob: float = 0.2,
) -> NonZeroInstance:
    """Instance where only a chosen few vertices have candidate parents.

    Every superstructure edge must point into a dependent vertex, so the
    others attach to the dependent core only.
    """
    rng = _rng(seed_or_rng)
    dependents = min(dependents, n)
    dep = sorted(rng.sample(range(n), dependents))
    entries: dict[int, dict[frozenset[int], int]] = {x: {} for x in dep}
    others = [v for v in range(n) if v not in entries]
    for v in others:
        hubs = rng.sample(dep, rng.randint(1, min(2, len(dep)))) if dep else []
        for x in hubs:
            entries[x][frozenset([v])] = rng.randint(1, max_score)
    for i, x in enumerate(dep):
        for y in dep[i + 1:]:
            if rng.random() < 0.5:
                child, par = (x, y) if rng.random() < 0.5 else (y, x)
                entries[child][frozenset([par])] = rng.randint(1, max_score)
    for x in dep:
        nbrs = sorted({u for s in entries[x] for u in s})
        for _ in range(rng.randint(0, 2)):
            if len(nbrs) >= 2:
                subset = frozenset(rng.sample(nbrs, rng.randint(2, min(3, len(nbrs)))))
                if subset not in entries[x]:
                    entries[x][subset] = rng.randint(1, max_score)
    names = tuple(f"x{i}" for i in range(n))
    inst_entries = {v: sets for v, sets in entries.items() if sets}
    for v in range(n):
        if rng.random() < empty_prob:
            inst_entries.setdefault(v, {})[frozenset()] = rng.randint(1, max_score)
    inst_entries = {v: s for v, s in inst_entries.items() if s}
    return NonZeroInstance(n, names, inst_entries)


def random_network(seed_or_rng, instance, arc_prob: float = 0.35) -> Network:
    """A random acyclic network over the instance's superstructure arcs
    (random vertex order, forward arcs only)."""
    from .instances import superstructure as ss

    rng = _rng(seed_or_rng)
    g = ss(instance)
    order = list(range(instance.n))
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    arcs = set()
    for a, b in sorted(g.edges):
        if rng.random() < arc_prob:
            if pos[a] < pos[b]:
                arcs.add((a, b))
            else:
                arcs.add((b, a))
    return Network(instance.n, frozenset(arcs))
