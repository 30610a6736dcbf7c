from __future__ import annotations

import itertools
from math import comb

import networkx as nx
import pytest

from joinwidth.decomposition import evaluate, linear_from_order
from joinwidth.engines import exact_joinwidth
from joinwidth.errors import LimitExceeded
from joinwidth.generators import (
    FAMILIES,
    GeneratorSpec,
    gen_agm,
    gen_bw_reduction,
    gen_chain,
    gen_complete_hypergraph,
    gen_functional_chain,
    gen_identity,
    gen_random,
    gen_star,
    gen_tree_complete,
    gen_triangle,
    generate,
    random_corpus,
    solve_chain_by_propagation,
)
from joinwidth.io import instance_to_text
from joinwidth.oracle import brute_force_branchwidth, brute_force_joinwidth, enumerate_solutions
from joinwidth.relational import Instance, hypergraph, max_tuples


@pytest.fixture(scope="module")
def agm():
    return gen_agm(1)


@pytest.mark.parametrize("N", [1, 2, 3, 5])
def test_triangle_sizes(N):
    inst = gen_triangle(N)
    assert max_tuples(inst) == 2 * N - 1
    assert [c.scope for c in inst.constraints] == [("a", "b"), ("b", "c"), ("a", "c")]


def test_triangle_small_cases():
    assert gen_triangle(1).constraints[0].tuples() == {(0, 0)}
    assert exact_joinwidth(gen_triangle(2)).width == 1.0
    with pytest.raises(ValueError):
        gen_triangle(0)


def test_star():
    inst = gen_star(4)
    assert inst.variables == ("x", "v1", "v2", "v3", "v4")
    assert all(c.tuples() == {(0, 0), (0, 1)} for c in inst.constraints)
    assert len(gen_star(1).constraints) == 1
    naive = evaluate(linear_from_order(range(4)), inst, "naive")
    assert naive.root.count == 16 and naive.root.width == 4.0


def test_tree_complete():
    path = [("1", "2"), ("2", "3"), ("3", "4")]
    inst = gen_tree_complete(path, 2)
    assert all(len(c) == 4 for c in inst.constraints)
    assert exact_joinwidth(inst).peak_count == 4
    assert exact_joinwidth(gen_tree_complete([("1", "2")], 2)).width == 0.0
    with pytest.raises(ValueError, match="not a tree"):
        gen_tree_complete([("1", "2"), ("2", "3"), ("3", "1")], 2)
    with pytest.raises(ValueError):
        gen_tree_complete(path, 1)


def test_spider_agrees_with_both_oracles():
    legs = [("0", "1"), ("1", "2"), ("0", "3"), ("3", "4"), ("0", "5"), ("5", "6")]
    inst = gen_tree_complete(legs[:5], 2)
    bw = brute_force_branchwidth(hypergraph(inst))
    assert brute_force_joinwidth(inst).peak_count == 2 ** bw == exact_joinwidth(inst).peak_count


def test_complete_hypergraph_rejects_repeated_vertex():
    with pytest.raises(ValueError):
        gen_complete_hypergraph([("a", "a")], 2)


def test_bw_reduction_structure():
    edges = [("1", "2"), ("2", "3"), ("3", "1")]
    inst = gen_bw_reduction(edges, 2)
    n = 3
    assert inst.variables == ("a", "v1", "v2", "v3", "b")
    assert len(inst.domain) == n + 2
    assert [len(c) for c in inst.constraints] == [n + 2] * 3 + [n + 2]
    c = inst.constraints[0].reorder(("a", "v1", "v2"))
    for a, x, y in c.tuples():
        assert x == (x if a == 0 else 0) and y == (y if a == 1 else 0)
        assert x <= 1 and y <= 1


def test_bw_reduction_isolated_vertices_widen_domain():
    inst = gen_bw_reduction([("1", "2")], 1, vertices=["1", "2", "3"])
    assert len(inst.domain) == 4
    assert "v3" not in inst.variables
    with pytest.raises(ValueError):
        gen_bw_reduction([], 1)
    with pytest.raises(ValueError):
        gen_bw_reduction([("1", "1")], 1)


def test_agm_structure(agm):
    m = 5
    n = comb(2 * m, m)
    assert len(agm.variables) == n == 252
    assert len(agm.constraints) == 2 * m
    assert all(len(c.scope) == comb(2 * m - 1, m - 1) == 126 for c in agm.constraints)
    degree = {v: 0 for v in agm.variables}
    for c in agm.constraints:
        for v in c.scope:
            degree[v] += 1
    assert set(degree.values()) == {m}
    scopes = [set(c.scope) for c in agm.constraints]
    for k in range(1, m + 1):
        for picked in itertools.combinations(scopes, k):
            assert set().union(*picked) != set(agm.variables)


def test_agm_tuple_count(agm):
    n = 252
    k = 126
    # star-shaped relations: one free position per tuple, the rest pinned to the first value
    assert k * n == n * n // 2 == 31752
    assert max_tuples(agm) == k * (n - 1) + 1 == 31627


def test_agm_guard():
    with pytest.raises(LimitExceeded):
        gen_agm(2)


def test_identity():
    inst = gen_identity(4)
    assert len(inst.constraints) == 1
    assert sorted(inst.constraints[0].tuples()) == sorted(
        tuple(int(i == j) for j in range(4)) for i in range(4))


def test_chain_scaled_and_guard():
    inst = gen_chain(1, n=6)
    assert len(enumerate_solutions(inst)) == 1
    res = solve_chain_by_propagation(inst)
    assert res.assignment == {f"x{i}": str(i) for i in range(1, 7)}
    assert solve_chain_by_propagation(gen_chain(1, n=2)).assignment == {"x1": "1", "x2": "2"}
    with pytest.raises(LimitExceeded):
        gen_chain(2)


def test_chain_links_alone():
    inst = gen_chain(1, n=4)
    links = Instance(inst.variables, inst.domain, inst.constraints[:3])
    assert enumerate_solutions(links).tuples() == {(0, 1, 2, 3)}


def test_functional_chain_is_deterministic():
    a = gen_functional_chain(5, 3, seed=2)
    assert instance_to_text(a) == instance_to_text(gen_functional_chain(5, 3, seed=2))


def test_random_is_reproducible():
    a = gen_random(1, 4, 2, 3, density=0.5)
    assert instance_to_text(a) == instance_to_text(gen_random(1, 4, 2, 3, density=0.5))
    full = gen_random(1, 4, 2, 3, density=1.0)
    assert all(len(c) == 2 ** len(c.scope) for c in full.constraints)
    empty = gen_random(1, 4, 2, 3, density=0.0)
    assert len(enumerate_solutions(empty)) == 0


@pytest.mark.parametrize("kwargs", [
    dict(seed=0, n_vars=3, domain_size=2, n_constraints=1, arity=(4, 4)),
    dict(seed=0, n_vars=5, domain_size=2, n_constraints=1, arity=(2, 2)),
    dict(seed=0, n_vars=3, domain_size=2, n_constraints=2, density=1.5),
])
def test_random_rejects_infeasible(kwargs):
    with pytest.raises(ValueError):
        gen_random(**kwargs)


def test_corpus_covers_every_variable():
    for inst in random_corpus(50, seed=8):
        assert {v for c in inst.constraints for v in c.scope} == set(inst.variables)


def test_generate_dispatch():
    assert set(FAMILIES) >= {"triangle", "star", "bw-reduction", "agm", "chain", "random"}
    inst = generate(GeneratorSpec("triangle", {"N": 3}))
    assert instance_to_text(inst) == instance_to_text(gen_triangle(3))
    with pytest.raises(ValueError, match="unknown family"):
        generate(GeneratorSpec("nope"))


def test_all_small_trees_are_accepted():
    for order in range(2, 7):
        for t in nx.nonisomorphic_trees(order):
            gen_tree_complete([(str(u), str(v)) for u, v in t.edges()], 2)
