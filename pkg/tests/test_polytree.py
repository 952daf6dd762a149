import random

import pytest

from bnsl import generate, oracle, polytree, tw_dp
from bnsl.instances import AdditiveInstance, score_of, superstructure, validate


def test_mst_triangle():
    inst = AdditiveInstance(
        3, ("a", "b", "c"), {(0, 1): 3, (0, 2): 2, (2, 1): 1}
    )
    # edge weights: ab=3, ac=2, bc=1 -> forest {ab, ac}
    s, net = polytree.solve_pl_additive_mst(inst)
    assert s == 5
    assert net.arcs == frozenset({(0, 1), (0, 2)})


def test_mst_empty():
    inst = AdditiveInstance(4, tuple("abcd"), {})
    s, net = polytree.solve_pl_additive_mst(inst)
    assert s == 0 and net.arcs == frozenset()


def test_mst_matches_oracle_random():
    for seed in range(200):
        rng = random.Random(seed)
        n = rng.randint(2, 8)
        inst = generate.random_additive(rng, n, rng.randint(0, 3),
                                        connected=(seed % 4 != 0), exact_fen=False)
        if superstructure(inst).edge_count() > 13:
            continue
        so, _ = oracle.exact_pl(inst)
        sm, net = polytree.solve_pl_additive_mst(inst)
        assert so == sm
        assert validate(net, "polytree").ok and score_of(inst, net) == sm


def test_mst_output_always_polytree():
    for seed in range(50):
        rng = random.Random(700 + seed)
        inst = generate.random_additive(rng, rng.randint(2, 10), rng.randint(0, 4),
                                        connected=False, exact_fen=False)
        _, net = polytree.solve_pl_additive_mst(inst)
        assert validate(net, "polytree").ok


def random_elements(rng, n, count):
    els = []
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    rng.shuffle(pairs)
    for a, b in pairs[:count]:
        els.append(polytree.GroundElement((a, b), rng.randint(1, 9),
                                          frozenset((a, b))))
    return els


def test_intersection_single_element():
    oracles = polytree.MatroidOracles(2, 1)
    e = polytree.GroundElement((0, 1), 4, frozenset((0, 1)))
    assert polytree.weighted_matroid_intersection([e], oracles) == [e]


def test_intersection_parallel_orientations():
    oracles = polytree.MatroidOracles(2, 2)
    e1 = polytree.GroundElement((0, 1), 2, frozenset((0, 1)))
    e2 = polytree.GroundElement((1, 0), 3, frozenset((0, 1)))
    got = polytree.weighted_matroid_intersection([e1, e2], oracles)
    assert got == [e2]


def test_intersection_matches_subset_oracle():
    for seed in range(120):
        rng = random.Random(3000 + seed)
        n = rng.randint(2, 6)
        q = rng.choice([1, 2, None])
        els = random_elements(rng, n, rng.randint(0, 12))
        oracles = polytree.MatroidOracles(n, q)
        got = polytree.weighted_matroid_intersection(els, oracles)
        assert oracles.graphic_independent(got)
        assert oracles.partition_independent(got)
        w_best, _ = oracle.exact_common_independent(els, oracles)
        assert sum(e.weight for e in got) == w_best


def test_intersection_stagewise_extremal():
    # the classical invariant: after augmenting to size k the set is
    # max-weight among all common independent sets of size k
    for seed in range(40):
        rng = random.Random(4000 + seed)
        n = rng.randint(2, 5)
        els = random_elements(rng, n, rng.randint(0, 10))
        oracles = polytree.MatroidOracles(n, 2)
        per = oracle.exact_common_independent(els, oracles, per_cardinality=True)
        got = polytree.weighted_matroid_intersection(els, oracles)
        w = sum(e.weight for e in got)
        assert w == max((v for v, _ in per.values()), default=0)


def test_matroid_axioms_spot_check():
    rng = random.Random(99)
    for _ in range(200):
        n = rng.randint(2, 6)
        els = random_elements(rng, n, rng.randint(0, 10))
        oracles = polytree.MatroidOracles(n, 2)
        for test in (oracles.graphic_independent, oracles.partition_independent):
            k = rng.randint(0, len(els))
            sub = rng.sample(els, k)
            if not test(sub):
                continue
            # downward closure
            if sub:
                smaller = rng.sample(sub, len(sub) - 1)
                assert test(smaller)
            # exchange: a larger independent set lends an element
            k2 = min(len(els), len(sub) + 1)
            for _ in range(20):
                cand = rng.sample(els, k2)
                if test(cand) and len(cand) > len(sub):
                    assert any(
                        test(sub + [x]) for x in cand if x not in sub
                    )
                    break


def test_bounded_matches_oracle_and_bag_dp():
    for seed in range(200):
        rng = random.Random(5000 + seed)
        n = rng.randint(2, 8)
        q = rng.choice([1, 2, 3])
        inst = generate.random_additive(rng, n, rng.randint(0, 3), q=q,
                                        connected=(seed % 4 != 0), exact_fen=False)
        if superstructure(inst).edge_count() > 13:
            continue
        so, _ = oracle.exact_pl(inst)
        sb, net = polytree.solve_pl_additive_bounded(inst)
        st, _ = tw_dp.solve_pl_additive_tw(inst)
        assert so == sb == st
        assert validate(net, "polytree", q=q).ok and score_of(inst, net) == sb


def test_bounded_q1_star():
    # all leaves point at the hub, but in-degree 1 admits only the best one;
    # the hub can still feed every other leaf
    arcs = {(1, 0): 5, (2, 0): 7, (3, 0): 6,
            (0, 1): 1, (0, 2): 2, (0, 3): 3}
    inst = AdditiveInstance(4, ("h", "x", "y", "z"), arcs, max_in_degree=1)
    s, net = polytree.solve_pl_additive_bounded(inst)
    so, _ = oracle.exact_pl(inst)
    assert s == so == 7 + 1 + 3  # y -> h, h -> x, h -> z
    assert validate(net, "polytree", q=1).ok


def test_bounded_large_q_agrees_with_mst():
    for seed in range(60):
        rng = random.Random(6000 + seed)
        n = rng.randint(2, 8)
        inst0 = generate.random_additive(rng, n, rng.randint(0, 3),
                                         exact_fen=False)
        inst = AdditiveInstance(inst0.n, inst0.names, inst0.arc_scores,
                                max_in_degree=max(1, n - 1))
        sm, _ = polytree.solve_pl_additive_mst(inst0)
        sb, _ = polytree.solve_pl_additive_bounded(inst)
        assert sm == sb


def test_bounded_requires_q():
    inst = AdditiveInstance(2, ("a", "b"), {(0, 1): 1})
    with pytest.raises(ValueError):
        polytree.solve_pl_additive_bounded(inst)
