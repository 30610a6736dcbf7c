from __future__ import annotations

import numpy as np
import pytest

from joinwidth.decomposition import JoinDecomposition, from_shape, join, leaf
from joinwidth.generators import gen_triangle, random_corpus
from joinwidth.relational import Constraint

_ACCEPTANCE: list[tuple[int, str, str, str]] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        _ACCEPTANCE.append((marker.args[0], marker.args[1], "PASS" if rep.passed else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, status, detail in sorted(_ACCEPTANCE):
        line = f"{status}  criterion {number:>2}: {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))


def as_set(c: Constraint) -> set[frozenset]:
    """Tuples as variable-value maps, so column order does not matter."""
    return {frozenset(zip(c.scope, row)) for row in c.rows.tolist()}


def random_tree(m: int, rng: np.random.Generator) -> JoinDecomposition:
    """A uniformly shaped random binary tree over leaves 0..m-1."""
    nodes = [leaf(int(i)) for i in rng.permutation(m)]
    while len(nodes) > 1:
        i, j = sorted(rng.choice(len(nodes), size=2, replace=False))
        b = nodes.pop(j)
        a = nodes.pop(i)
        nodes.append(join(a, b))
    return JoinDecomposition(nodes[0])


@pytest.fixture(scope="session")
def triangle3():
    return gen_triangle(3)


@pytest.fixture(scope="session")
def tri_tree():
    # x = (a,b) and y = (b,c) joined first, then z = (a,c)
    return from_shape(((0, 1), 2))


@pytest.fixture(scope="session")
def small_corpus():
    return random_corpus(120, seed=7)
