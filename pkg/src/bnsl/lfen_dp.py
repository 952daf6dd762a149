"""Record dynamic programs over a witness spanning tree.

Processes a rooted spanning tree leaf-to-root.  The state at a tree vertex
v summarizes, for the partial solutions living on v's subtree (arcs may
enter the subtree from outside, never leave it), exactly what the rest of
the graph can observe: for acyclic networks a strict-reachability relation
on the boundary delta(v), for polytrees the connected components of the
inner boundary plus the arcs entering the subtree.  Per state only the best
score is kept; boundaries stay small when few non-tree edges interfere
locally, which is what makes this fast on near-tree superstructures.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphs import LfenWitness, SpanningForest, lfen_of_tree, lfen_search
from .instances import Instance, Network, NonZeroInstance, Superstructure, superstructure


@dataclass(frozen=True)
class Boundary:
    """Endpoints of edges with exactly one endpoint inside v's subtree."""

    vertex: int
    delta: tuple[int, ...]
    delta_in: tuple[int, ...]
    delta_out: tuple[int, ...]
    open_children: tuple[int, ...]
    closed_children: tuple[int, ...]


def boundaries(g: Superstructure, forest: SpanningForest) -> list[Boundary]:
    """Per-vertex boundary data for a rooted spanning forest of g.

    A child w is closed when delta(w) is just {w, parent}; every deeper
    connection of a closed subtree runs through that single tree edge.
    """
    n = g.n
    children = forest.children_lists()
    subtree = [0] * n
    for v in _postorder(forest):
        mask = 1 << v
        for c in children[v]:
            mask |= subtree[c]
        subtree[v] = mask
    deltas: list[tuple[int, ...]] = [()] * n
    for v in range(n):
        mask = subtree[v]
        d = set()
        for a, b in g.edges:
            ina = bool(mask >> a & 1)
            inb = bool(mask >> b & 1)
            if ina != inb:
                d.add(a)
                d.add(b)
        deltas[v] = tuple(sorted(d))
    bound = 2 * lfen_of_tree(g, forest).value + 2
    out = []
    for v in range(n):
        mask = subtree[v]
        din = tuple(x for x in deltas[v] if mask >> x & 1)
        dout = tuple(x for x in deltas[v] if not mask >> x & 1)
        opens, closeds = [], []
        for c in children[v]:
            if len(deltas[c]) <= 2:
                closeds.append(c)
            else:
                opens.append(c)
        assert len(deltas[v]) <= bound, "boundary exceeds 2k+2"
        out.append(Boundary(v, deltas[v], din, dout, tuple(opens), tuple(closeds)))
    return out


def _postorder(forest: SpanningForest) -> list[int]:
    children = forest.children_lists()
    order = []
    for r in forest.roots:
        stack = [(r, False)]
        while stack:
            v, done = stack.pop()
            if done:
                order.append(v)
            else:
                stack.append((v, True))
                for c in children[v]:
                    stack.append((c, False))
    return order


# ---------------------------------------------------------------------------
# bit-matrix relations over a dense local index


def _trcl(rows: list[int]) -> list[int]:
    rows = rows[:]
    d = len(rows)
    for k in range(d):
        col = 1 << k
        rk = rows[k]
        for i in range(d):
            if rows[i] & col:
                rows[i] |= rk
    return rows


def _irreflexive(rows: list[int]) -> bool:
    return all(not rows[i] >> i & 1 for i in range(len(rows)))


def _restrict(rows: list[int], keep_mask: int) -> list[int]:
    return [rows[i] & keep_mask if keep_mask >> i & 1 else 0 for i in range(len(rows))]


class _BnslEngine:
    """Shared context for the acyclic-network record DP."""

    def __init__(self, instance: NonZeroInstance, g: Superstructure, forest: SpanningForest):
        self.instance = instance
        self.g = g
        self.forest = forest
        self.bounds = boundaries(g, forest)
        self.children = forest.children_lists()
        # tables[v]: dict delta-relation key -> (score, backptr)
        self.tables: list[Optional[dict]] = [None] * g.n

    # -- keys are tuples of row bitmasks over the sorted delta of the vertex

    def delta_key(self, v: int, pairs) -> tuple[int, ...]:
        delta = self.bounds[v].delta
        idx = {x: i for i, x in enumerate(delta)}
        rows = [0] * len(delta)
        for x, y in pairs:
            rows[idx[x]] |= 1 << idx[y]
        return tuple(rows)

    def key_pairs(self, v: int, key: tuple[int, ...]) -> frozenset:
        delta = self.bounds[v].delta
        out = set()
        for i, row in enumerate(key):
            for j in range(len(delta)):
                if row >> j & 1:
                    out.add((delta[i], delta[j]))
        return frozenset(out)

    def leaf_records(self, v: int) -> dict:
        inst = self.instance
        table: dict = {}
        for parents in inst.parent_sets(v):
            assert all(p in self.g.adj[v] for p in parents), "parent outside superstructure"
            key = self.delta_key(v, [(p, v) for p in sorted(parents)])
            score = inst.score(v, parents)
            cur = table.get(key)
            if cur is None or score > cur[0]:
                table[key] = (score, (parents, (), ()))
        return table

    def combine_records(self, v: int) -> dict:
        inst = self.instance
        b = self.bounds[v]
        opens, closeds = b.open_children, b.closed_children

        closed_info = []
        for c in closeds:
            ct = self.tables[c]
            empty_key = self.delta_key(c, [])
            arc_key = self.delta_key(c, [(self.bounds[c].delta_out[0], c)]) if self.bounds[c].delta_out else None
            s_empty = ct.get(empty_key)
            s_arc = ct.get(arc_key) if arc_key is not None else None
            closed_info.append((c, s_empty[0] if s_empty else None, s_arc[0] if s_arc else None))

        # dense local index over everything the combination can mention
        ground = {v}
        ground.update(self.g.adj[v])
        for c in opens:
            ground.update(self.bounds[c].delta)
        ground = sorted(ground)
        gidx = {x: i for i, x in enumerate(ground)}
        d = len(ground)

        def child_rows(c: int, key: tuple[int, ...]) -> list[int]:
            delta = self.bounds[c].delta
            rows = [0] * d
            for i, row in enumerate(key):
                gi = gidx[delta[i]]
                for j in range(len(delta)):
                    if row >> j & 1:
                        rows[gi] |= 1 << gidx[delta[j]]
            return rows

        delta_mask = 0
        for x in b.delta:
            delta_mask |= 1 << gidx[x]

        frontier_after = []
        acc = delta_mask
        for c in reversed(opens):
            frontier_after.append(acc)
            for x in self.bounds[c].delta:
                acc |= 1 << gidx[x]
        frontier_after.reverse()  # frontier_after[i]: mask kept after folding opens[i]

        table: dict = {}
        for parents in inst.parent_sets(v):
            assert all(p in self.g.adj[v] for p in parents), "parent outside superstructure"
            base = inst.score(v, parents)
            closed_choice = []
            feasible = True
            for c, s_empty, s_arc in closed_info:
                if c in parents:
                    if s_empty is None:
                        feasible = False
                        break
                    base += s_empty
                    closed_choice.append((c, False))
                else:
                    if s_arc is not None and (s_empty is None or s_arc > s_empty):
                        base += s_arc
                        closed_choice.append((c, True))
                    else:
                        base += s_empty
                        closed_choice.append((c, False))
            if not feasible:
                continue
            rows0 = [0] * d
            vi = gidx[v]
            for p in parents:
                rows0[gidx[p]] |= 1 << vi
            # fold the open children one by one, deduplicating on the
            # closure restricted to what later steps can still observe
            states = {tuple(rows0): (base, tuple(closed_choice), ())}
            for ci, c in enumerate(opens):
                keep = frontier_after[ci]
                nxt: dict = {}
                ctable = self.tables[c]
                for rows_key, (score, cc, chain) in states.items():
                    rows_list = list(rows_key)
                    for ckey in sorted(ctable):
                        cscore, _ = ctable[ckey]
                        merged = rows_list[:]
                        crows = child_rows(c, ckey)
                        for i in range(d):
                            merged[i] |= crows[i]
                        merged = _trcl(merged)
                        if not _irreflexive(merged):
                            continue
                        merged = _restrict(merged, keep)
                        mkey = tuple(merged)
                        val = score + cscore
                        cur = nxt.get(mkey)
                        if cur is None or val > cur[0]:
                            nxt[mkey] = (val, cc, chain + ((c, ckey),))
                states = nxt
            for rows_key, (score, cc, chain) in states.items():
                final = _restrict(_trcl(list(rows_key)), delta_mask)
                key = tuple(
                    _project_row(final[gidx[x]], ground, b.delta) for x in b.delta
                )
                cur = table.get(key)
                if cur is None or score > cur[0]:
                    table[key] = (score, (parents, cc, chain))
        return table

    def run(self) -> tuple[int, Network]:
        for v in _postorder(self.forest):
            if not self.children[v]:
                self.tables[v] = self.leaf_records(v)
            else:
                self.tables[v] = self.combine_records(v)
        total = 0
        arcs: set[tuple[int, int]] = set()
        for r in self.forest.roots:
            table = self.tables[r]
            assert len(table) == 1 and next(iter(table)) == tuple(
                [0] * len(self.bounds[r].delta)
            ), "root must have the single empty record"
            (score, _) = next(iter(table.values()))
            total += score
            self._collect(r, next(iter(table)), arcs)
        return total, Network(self.instance.n, frozenset(arcs))

    def _collect(self, v: int, key, arcs: set):
        score, back = self.tables[v][key]
        parents, closed_choice, chain = back
        for p in parents:
            arcs.add((p, v))
        for c, take_arc in closed_choice:
            if take_arc:
                ckey = self.delta_key(c, [(v, c)])
            else:
                ckey = self.delta_key(c, [])
            self._collect(c, ckey, arcs)
        for c, ckey in chain:
            self._collect(c, ckey, arcs)


def _project_row(row: int, ground: list[int], delta: tuple[int, ...]) -> int:
    gpos = {x: i for i, x in enumerate(ground)}
    out = 0
    for j, x in enumerate(delta):
        if row >> gpos[x] & 1:
            out |= 1 << j
    return out


def leaf_records(instance: NonZeroInstance, v: int, forest: Optional[SpanningForest] = None):
    """Record set of a leaf as {reachability pair set: best score}."""
    g = superstructure(instance)
    forest = forest or lfen_search(g).forest
    eng = _BnslEngine(instance, g, forest)
    table = eng.leaf_records(v)
    return {eng.key_pairs(v, key): sc for key, (sc, _) in table.items()}


def combine_records(
    instance: NonZeroInstance,
    v: int,
    forest: Optional[SpanningForest] = None,
):
    """Record set of an inner vertex, computing all descendants first."""
    g = superstructure(instance)
    forest = forest or lfen_search(g).forest
    eng = _BnslEngine(instance, g, forest)
    for u in _postorder(forest):
        if not eng.children[u]:
            eng.tables[u] = eng.leaf_records(u)
        else:
            eng.tables[u] = eng.combine_records(u)
        if u == v:
            break
    table = eng.tables[v]
    return {eng.key_pairs(v, key): sc for key, (sc, _) in table.items()}


def solve_bnsl_lfen(
    instance: NonZeroInstance,
    forest: Optional[SpanningForest] = None,
    tree_budget: Optional[int] = None,
) -> tuple[int, Network]:
    """Optimal acyclic network via the record DP on a witness tree."""
    g = superstructure(instance)
    if forest is None:
        kwargs = {} if tree_budget is None else {"budget": tree_budget}
        forest = lfen_search(g, **kwargs).forest
    return _BnslEngine(instance, g, forest).run()


def record_tables(
    instance: NonZeroInstance, forest: Optional[SpanningForest] = None
):
    """All per-vertex record tables as {vertex: {pair set: score}} (for the
    record-semantics verification tests)."""
    g = superstructure(instance)
    forest = forest or lfen_search(g).forest
    eng = _BnslEngine(instance, g, forest)
    for u in _postorder(forest):
        if not eng.children[u]:
            eng.tables[u] = eng.leaf_records(u)
        else:
            eng.tables[u] = eng.combine_records(u)
    return {
        v: {eng.key_pairs(v, key): sc for key, (sc, _) in eng.tables[v].items()}
        for v in range(instance.n)
    }, eng


# ---------------------------------------------------------------------------
# polytree variant


class _PlEngine:
    """Record DP for polytrees: per vertex an equivalence on the inner
    boundary (components of the partial skeleton inside the subtree) plus
    the set of arcs entering the subtree from outside."""

    def __init__(self, instance: NonZeroInstance, g: Superstructure, forest: SpanningForest):
        self.instance = instance
        self.g = g
        self.forest = forest
        self.bounds = boundaries(g, forest)
        self.children = forest.children_lists()
        self.subtree = [0] * g.n
        for v in _postorder(forest):
            mask = 1 << v
            for c in self.children[v]:
                mask |= self.subtree[c]
            self.subtree[v] = mask
        self.tables: list[Optional[dict]] = [None] * g.n

    @staticmethod
    def _canon_partition(classes) -> tuple:
        return tuple(sorted(tuple(sorted(c)) for c in classes))

    def leaf_records(self, v: int) -> dict:
        inst = self.instance
        table: dict = {}
        part = self._canon_partition([[v]]) if self.bounds[v].delta_in else ()
        for parents in inst.parent_sets(v):
            arcs = frozenset((p, v) for p in parents)
            key = (part, arcs)
            score = inst.score(v, parents)
            cur = table.get(key)
            if cur is None or score > cur[0]:
                table[key] = (score, (parents, (), ()))
        return table

    def combine_records(self, v: int) -> dict:
        inst = self.instance
        b = self.bounds[v]
        opens, closeds = b.open_children, b.closed_children
        vmask = self.subtree[v]

        closed_info = []
        for c in closeds:
            ct = self.tables[c]
            part = ((c,),)
            s_empty = ct.get((part, frozenset()))
            s_arc = ct.get((part, frozenset([(v, c)])))
            closed_info.append(
                (c, s_empty[0] if s_empty else None, s_arc[0] if s_arc else None)
            )

        din = set(b.delta_in)
        closed_set = set(closeds)
        table: dict = {}

        def branch(parents, open_choice, score, closed_choice):
            # gather the glued arcs; closed children attach by a single
            # edge and cannot close a skeleton cycle, so their glue arcs
            # stay out of the union-find
            all_arcs: list[tuple[int, int]] = [
                (p, v) for p in sorted(parents) if p not in closed_set
            ]
            class_of: dict[int, object] = {}
            groups: list[list[int]] = [[v]]
            class_of[v] = 0
            for c, ckey in open_choice:
                part, arcs = ckey
                for cls in part:
                    gi = len(groups)
                    groups.append(list(cls))
                    for x in cls:
                        class_of[x] = gi
                all_arcs.extend(arcs)
            # union-find over: component groups, plus outside glue vertices
            parent_uf: dict[object, object] = {}

            def find(x):
                while parent_uf.get(x, x) != x:
                    parent_uf[x] = parent_uf.get(parent_uf[x], parent_uf[x])
                    x = parent_uf[x]
                return x

            def node_of(x: int):
                if x in class_of:
                    return ("g", class_of[x])
                if vmask >> x & 1:
                    raise AssertionError("inside vertex missing from classes")
                return ("y", x)

            inner_pairs = []
            ok = True
            for (x, y) in all_arcs:
                nx, ny = node_of(x), node_of(y)
                rx, ry = find(nx), find(ny)
                if rx == ry:
                    ok = False
                    break
                parent_uf[rx] = ry
                if vmask >> x & 1 or x == v:
                    inner_pairs.append((nx, ny))
            if not ok:
                return
            # components of the subgraph induced on the subtree: only arcs
            # with both endpoints inside count
            uf2: dict[object, object] = {}

            def find2(x):
                while uf2.get(x, x) != x:
                    uf2[x] = uf2.get(uf2[x], uf2[x])
                    x = uf2[x]
                return x

            for nx, ny in inner_pairs:
                rx, ry = find2(nx), find2(ny)
                if rx != ry:
                    uf2[rx] = ry
            cls_map: dict[object, list[int]] = {}
            for x in sorted(din):
                root = find2(node_of(x))
                cls_map.setdefault(root, []).append(x)
            part_key = self._canon_partition(cls_map.values())
            a_v = frozenset((x, y) for x, y in all_arcs if not vmask >> x & 1)
            key = (part_key, a_v)
            cur = table.get(key)
            if cur is None or score > cur[0]:
                table[key] = (score, (parents, closed_choice, open_choice))

        for parents in inst.parent_sets(v):
            assert all(p in self.g.adj[v] for p in parents), "parent outside superstructure"
            base = inst.score(v, parents)
            closed_choice = []
            feasible = True
            for c, s_empty, s_arc in closed_info:
                if c in parents:
                    if s_empty is None:
                        feasible = False
                        break
                    base += s_empty
                    closed_choice.append((c, False))
                else:
                    if s_arc is not None and (s_empty is None or s_arc > s_empty):
                        base += s_arc
                        closed_choice.append((c, True))
                    else:
                        base += s_empty
                        closed_choice.append((c, False))
            if not feasible:
                continue
            closed_choice = tuple(closed_choice)

            def product(i, chosen, score):
                if i == len(opens):
                    branch(parents, tuple(chosen), score, closed_choice)
                    return
                c = opens[i]
                for ckey in sorted(
                    self.tables[c], key=lambda k: (k[0], tuple(sorted(k[1])))
                ):
                    cscore, _ = self.tables[c][ckey]
                    chosen.append((c, ckey))
                    product(i + 1, chosen, score + cscore)
                    chosen.pop()

            product(0, [], base)
        return table

    def run(self) -> tuple[int, Network]:
        for v in _postorder(self.forest):
            if not self.children[v]:
                self.tables[v] = self.leaf_records(v)
            else:
                self.tables[v] = self.combine_records(v)
        total = 0
        arcs: set[tuple[int, int]] = set()
        for r in self.forest.roots:
            table = self.tables[r]
            assert len(table) == 1, "root must have a single record"
            key = next(iter(table))
            assert key == ((), frozenset()), "root record must be empty"
            score, _ = table[key]
            total += score
            self._collect(r, key, arcs)
        return total, Network(self.instance.n, frozenset(arcs))

    def _collect(self, v: int, key, arcs: set):
        score, back = self.tables[v][key]
        parents, closed_choice, open_choice = back
        for p in parents:
            arcs.add((p, v))
        for c, take_arc in closed_choice:
            part = ((c,),)
            ckey = (part, frozenset([(v, c)] if take_arc else []))
            self._collect(c, ckey, arcs)
        for c, ckey in open_choice:
            self._collect(c, ckey, arcs)


def solve_pl_lfen(
    instance: NonZeroInstance,
    forest: Optional[SpanningForest] = None,
    tree_budget: Optional[int] = None,
) -> tuple[int, Network]:
    """Optimal polytree via the component-counting record DP."""
    g = superstructure(instance)
    if forest is None:
        kwargs = {} if tree_budget is None else {"budget": tree_budget}
        forest = lfen_search(g, **kwargs).forest
    return _PlEngine(instance, g, forest).run()


def combine_records_pl(
    instance: NonZeroInstance,
    v: int,
    forest: Optional[SpanningForest] = None,
):
    """Polytree record set of a vertex: {(partition, entering arcs): score}."""
    g = superstructure(instance)
    forest = forest or lfen_search(g).forest
    eng = _PlEngine(instance, g, forest)
    for u in _postorder(forest):
        if not eng.children[u]:
            eng.tables[u] = eng.leaf_records(u)
        else:
            eng.tables[u] = eng.combine_records(u)
        if u == v:
            break
    return {key: sc for key, (sc, _) in eng.tables[v].items()}


def pl_record_tables(
    instance: NonZeroInstance, forest: Optional[SpanningForest] = None
):
    g = superstructure(instance)
    forest = forest or lfen_search(g).forest
    eng = _PlEngine(instance, g, forest)
    for u in _postorder(forest):
        if not eng.children[u]:
            eng.tables[u] = eng.leaf_records(u)
        else:
            eng.tables[u] = eng.combine_records(u)
    return {
        v: {key: sc for key, (sc, _) in eng.tables[v].items()}
        for v in range(instance.n)
    }, eng
