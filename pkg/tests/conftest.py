import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from homotransfer import linalg
from homotransfer.coalgebra import LInftyAlgebra, LInftyMorphism
from homotransfer.corpus import corpus
from homotransfer.graded import (ANTISYMMETRIC, GradedSpace, LinearMap, MultiMap, Permutation,
                                 canonical_keys)

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

degrees = st.integers(min_value=-2, max_value=3)


@st.composite
def permutations(draw, n=None):
    n = n or draw(st.integers(1, 6))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


@st.composite
def perm_with_degrees(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    sigma = draw(permutations(n))
    return sigma, draw(st.lists(degrees, min_size=n, max_size=n))


def small_space(degs=(-1, 0, 0, 1, 1, 2)):
    return GradedSpace(tuple((f"e{i}", d) for i, d in enumerate(degs)))


def random_map(rng, space, arity, lin_degree, flavor, density=0.6, target=None):
    target = target or space
    entries = []
    for key in canonical_keys(space, arity, flavor):
        deg = sum(space.degrees[i] for i in key) + lin_degree
        for t in range(target.dim):
            if target.degrees[t] == deg and rng.random() < density:
                entries.append((key, t, Fraction(rng.randint(-3, 3), rng.randint(1, 2))))
    return MultiMap.from_entries(space, target, arity, lin_degree, flavor, entries)


def random_invertible(rng, space, cap):
    n = space.dim
    while True:
        by = space.by_degree
        rows = [[Fraction(0)] * n for _ in range(n)]
        for idx in by.values():
            for i in idx:
                for j in idx:
                    rows[i][j] = Fraction(rng.randint(-2, 2))
        if linalg.rank(rows) == n:
            break
    lin = LinearMap.from_matrix(space, space, 0, rows)
    A = LInftyAlgebra(space, cap)
    comps = {1: MultiMap(space, space, 1, 0, ANTISYMMETRIC,
                         {(j,): c for j, c in enumerate(lin.columns) if c}, check=False)}
    for m in range(2, cap + 1):
        comps[m] = random_map(rng, space, m, 1 - m, ANTISYMMETRIC, 0.4)
    return LInftyMorphism(A, A, cap, comps), lin


@pytest.fixture(scope="session")
def split_corpus():
    """Small reproducible corpus shared by the slower transfer tests."""
    return corpus(11, 14, max_dim=5)


@pytest.fixture
def rng():
    return random.Random(20240611)


# acceptance lines are printed after the run, whatever the capture mode
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=_criterion_key):
            terminalreporter.write_line(line)


def _criterion_key(line):
    num = line.split("criterion ", 1)[1].split(" ", 1)[0].rstrip(":")
    return int(num)
