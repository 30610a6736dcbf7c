from __future__ import annotations

import numpy as np
import pytest

from conftest import as_set, random_tree
from joinwidth.decomposition import evaluate
from joinwidth.engines import (
    Verdict,
    constraint_dp_table,
    exact_joinwidth,
    extract_witness,
    find_decomposition_dp,
    solve_variable_dp,
    solve_with_decomposition,
    variable_dp_table,
)
from joinwidth.errors import DegenerateInstance, LimitExceeded
from joinwidth.generators import gen_complete_hypergraph, gen_random, gen_star, random_corpus
from joinwidth.oracle import enumerate_solutions
from joinwidth.relational import Constraint, Instance, induced_subinstance, project
from joinwidth.width import count_cap, fits, width_base


def _xyz_instance() -> Instance:
    # UNSAT through two binary constraints that a careless cover never checks
    cons = (
        Constraint.from_tuples(("x",), [(0,), (1,)]),
        Constraint.from_tuples(("y",), [(0,), (1,)]),
        Constraint.from_tuples(("x", "y"), [(0, 0), (1, 1)]),
        Constraint.from_tuples(("x", "y"), [(0, 1), (1, 0)]),
        Constraint.from_tuples(("z",), [(0,)]),
    )
    return Instance(("x", "y", "z"), ("1", "2"), cons)


def test_search_on_triangle(triangle3):
    out = find_decomposition_dp(triangle3, 1)
    assert out.found and out.peak_count == 5 and out.width == pytest.approx(1.0)
    assert evaluate(out.decomposition, triangle3).peak == 5
    assert not find_decomposition_dp(triangle3, 0.5).found


def test_search_on_star():
    out = find_decomposition_dp(gen_star(3), 1)
    assert out.found and out.width == 0.0


@pytest.mark.parametrize("inst", random_corpus(60, seed=21), ids=lambda i: repr(i)[:24])
def test_search_found_iff_exact_fits(inst):
    exact = exact_joinwidth(inst)
    base = width_base(inst)
    assert evaluate(exact.decomposition, inst).peak == exact.peak_count
    for omega in (0, 0.5, 1, 1.5, 2):
        out = find_decomposition_dp(inst, omega)
        assert out.found == fits(exact.peak_count, base, omega)
        if out.found:
            peak = evaluate(out.decomposition, inst).peak
            assert peak == out.peak_count and peak <= count_cap(base, omega)


@pytest.mark.parametrize("inst", random_corpus(40, seed=22), ids=lambda i: repr(i)[:24])
def test_constraint_table_holds_projected_solutions(inst):
    table = constraint_dp_table(inst, 2)
    for mask, alpha in table.alpha.items():
        members = [i for i in range(len(inst.constraints)) if mask >> i & 1]
        vars_in = {v for i in members for v in inst.constraints[i].scope}
        sol = enumerate_solutions(induced_subinstance(inst, vars_in))
        assert as_set(alpha) == as_set(project(sol, table.boundary[mask]))


@pytest.mark.parametrize("inst", random_corpus(40, seed=23), ids=lambda i: repr(i)[:24])
def test_variable_table_holds_projected_solutions(inst):
    table = variable_dp_table(inst, len(inst.variables))
    for mask, alpha in table.alpha.items():
        vs = inst.vars_of_mask(mask)
        shared = inst.vars_of_mask(int(table.boundary[mask]))
        sol = enumerate_solutions(induced_subinstance(inst, vs))
        assert as_set(alpha) == as_set(project(sol, shared))


def test_variable_dp_on_cover_counterexample():
    inst = _xyz_instance()
    assert enumerate_solutions(inst).rows.shape[0] == 0
    assert solve_variable_dp(inst, 3).verdict is Verdict.UNSAT


@pytest.mark.parametrize("inst", random_corpus(80, seed=24, max_vars=7, max_constraints=6),
                         ids=lambda i: repr(i)[:24])
def test_variable_dp_settles_at_exact_width(inst):
    exact = exact_joinwidth(inst)
    truth = Verdict.SAT if len(enumerate_solutions(inst)) else Verdict.UNSAT
    assert solve_variable_dp(inst, exact.width + 1e-9).verdict is truth


def test_variable_dp_reports_width_exceeded():
    # two triangles sharing c: every route to the full set passes a 2-variable cut
    inst = gen_complete_hypergraph([("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "e"), ("e", "c")], 2)
    assert solve_variable_dp(inst, 0).verdict is Verdict.WIDTH_EXCEEDED
    assert solve_variable_dp(inst, 0.5).verdict is Verdict.SAT


def test_variable_dp_scope_subsets_are_uncapped(triangle3):
    assert solve_variable_dp(triangle3, 0).verdict is Verdict.SAT


def test_exact_on_triangle(triangle3):
    res = exact_joinwidth(triangle3)
    assert res.peak_count == 5 and res.width == 1.0


def test_solve_with_any_tree_agrees(small_corpus):
    rng = np.random.default_rng(0)
    for inst in small_corpus[:60]:
        truth = len(enumerate_solutions(inst)) > 0
        dec = random_tree(len(inst.constraints), rng)
        assert (solve_with_decomposition(inst, dec).verdict is Verdict.SAT) == truth


def test_extract_witness(small_corpus):
    for inst in small_corpus[:50]:
        witness = extract_witness(inst)
        sols = enumerate_solutions(inst)
        if len(sols) == 0:
            assert witness is None
            continue
        point = tuple(inst.domain.index(witness[v]) for v in inst.variables)
        assert point in sols.tuples()


def test_witness_on_triangle(triangle3):
    assert extract_witness(triangle3) == {"a": "1", "b": "1", "c": "1"}


def test_limits_and_degenerate():
    inst = gen_random(0, 6, 2, 6)
    with pytest.raises(LimitExceeded) as exc:
        find_decomposition_dp(inst, 1, max_constraints=5)
    assert exc.value.limit == "constraints"
    with pytest.raises(LimitExceeded):
        solve_variable_dp(inst, 1, max_variables=5)
    with pytest.raises(DegenerateInstance):
        exact_joinwidth(Instance((), ("0",), ()))


def test_limit_from_environment(monkeypatch):
    monkeypatch.setenv("JOINWIDTH_MAX_CONSTRAINTS", "3")
    with pytest.raises(LimitExceeded):
        exact_joinwidth(gen_random(0, 4, 2, 4))


def test_search_counters(triangle3):
    out = find_decomposition_dp(triangle3, 1)
    assert out.subsets_expanded == 7
    assert out.peak_relation_size >= out.peak_count
    assert out.relations_materialized > 0
