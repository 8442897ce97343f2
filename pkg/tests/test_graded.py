import itertools
import random
from fractions import Fraction
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from homotransfer.graded import (ANTISYMMETRIC, PLAIN, SYMMETRIC, GradedSpace, LinearMap,
                                 MultiMap, Permutation, apply_alpha, canonicalize, chi_sign,
                                 compose_multimap, decalage_down, decalage_up, epsilon_sign, fmt,
                                 scalar, shuffles)

from conftest import perm_with_degrees, permutations, random_map, small_space


def folded_epsilon(sigma, degs):
    """Bubble-sort sigma's images; every adjacent swap of x, y costs (-1)^{|x||y|}."""
    sign = 1
    im = list(sigma.images)
    for a in range(len(im)):
        for b in range(len(im) - 1 - a):
            if im[b] > im[b + 1]:
                sign *= (-1) ** (degs[im[b] - 1] * degs[im[b + 1] - 1])
                im[b], im[b + 1] = im[b + 1], im[b]
    return sign


def test_scalars():
    assert scalar("3/6") == Fraction(1, 2)
    assert scalar(4) == 4
    assert fmt(Fraction(-2, 4)) == "-1/2"
    assert fmt(3) == "3/1"
    with pytest.raises(ValueError):
        scalar("x/2")
    with pytest.raises(TypeError):
        scalar(0.5)


def test_epsilon_small_cases():
    assert epsilon_sign(Permutation.identity(3), [1, 1, 1]) == 1
    assert epsilon_sign(Permutation((2, 1)), [1, 1]) == -1
    assert epsilon_sign(Permutation((2, 1)), [1, 2]) == 1
    assert chi_sign(Permutation.identity(4), [0, 1, 2, 3]) == 1
    assert chi_sign(Permutation((2, 1)), [0, 0]) == -1
    with pytest.raises(ValueError):
        epsilon_sign(Permutation((2, 1)), [1])


@given(perm_with_degrees())
def test_epsilon_is_folded_transpositions(data):
    sigma, degs = data
    assert epsilon_sign(sigma, degs) == folded_epsilon(sigma, degs)


@given(st.integers(1, 5).flatmap(
    lambda n: st.tuples(permutations(n), permutations(n),
                        st.lists(st.integers(-2, 3), min_size=n, max_size=n))))
def test_sign_actions_compose(data):
    sigma, tau, degs = data
    # x_{(στ)(i)} = y_{τ(i)} with y_j = x_{σ(j)}: the sign of στ is ε(σ, degs)·ε(τ, σ·degs)
    moved = list(sigma.apply(degs))
    for sign in (epsilon_sign, chi_sign):
        assert sign(sigma * tau, degs) == sign(sigma, degs) * sign(tau, moved)


@given(perm_with_degrees())
def test_chi_epsilon_relation(data):
    """χ(σ; a) = (-1)^{Σ_{i<n} (n-i)(a_i + a_σ(i))} ε(σ; ↓a), ↓ lowering degrees by one."""
    sigma, degs = data
    n = sigma.size
    e = sum((n - i) * (degs[i - 1] + degs[sigma(i) - 1]) for i in range(1, n))
    shifted = [d - 1 for d in degs]
    assert chi_sign(sigma, degs) == (-1) ** (e % 2) * epsilon_sign(sigma, shifted)


def test_shuffles():
    assert len(shuffles(1, 2)) == 2
    assert len(shuffles(2, 3)) == 3
    assert shuffles(0, 4) == [Permutation.identity(4)]
    for k, n in [(2, 5), (3, 6)]:
        sh = shuffles(k, n)
        assert len(sh) == comb(n, k) == len(set(sh))
        assert all(s.is_shuffle(k) for s in sh)
    with pytest.raises(ValueError):
        shuffles(3, 2)


@pytest.mark.parametrize("flavor", [SYMMETRIC, ANTISYMMETRIC])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_full_symmetrization_is_n_factorial(flavor, n):
    rng = random.Random(n)
    sp = small_space((0, 1, 1, 2))
    phi = random_map(rng, sp, n, 0, flavor)
    # through the PLAIN route the canonical projection of α_n phi is n!·phi
    plain = phi.to_plain()
    alpha = apply_alpha(MultiMap(sp, sp, n, 0, PLAIN, plain.coeffs, check=False), n,
                        "epsilon" if flavor == SYMMETRIC else "chi")
    assert alpha == phi.scale(factorial(n))


def test_alpha_one_two_by_hand():
    sp = GradedSpace((("a", 1), ("b", 0), ("c", 1)))
    b = MultiMap.from_entries(sp, sp, 2, 0, PLAIN, [((0, 1), 0, 1), ((1, 0), 2, 3)])
    got = apply_alpha(b, 1, "epsilon")
    # α_{1,2} = id + (1 2): (x, y) ↦ b(x, y) + (-1)^{|x||y|} b(y, x)
    for i, j in itertools.product(range(3), repeat=2):
        want = dict(b(i, j))
        for t, c in b(j, i).items():
            want[t] = want.get(t, 0) + (-1) ** (sp.degrees[i] * sp.degrees[j]) * c
        assert got(i, j) == {t: c for t, c in want.items() if c}


def test_alpha_arity_one_is_identity():
    sp = small_space()
    m = random_map(random.Random(0), sp, 1, 1, ANTISYMMETRIC)
    assert apply_alpha(m, 1) == m


@given(st.integers(1, 5), st.integers(0, 10 ** 6))
def test_decalage_round_trip(n, seed):
    rng = random.Random(seed)
    sp = small_space((0, 1, 1, 2)) if n > 3 else small_space()
    mu = random_map(rng, sp, n, 2 - n, ANTISYMMETRIC, density=0.4)
    q = decalage_down(mu)
    assert q.flavor == SYMMETRIC and q.lin_degree == 1
    assert decalage_up(q, sp, sp) == mu


def test_decalage_signs_low_arity():
    sp = GradedSpace((("x", 1), ("y", 1), ("z", 2)))
    d = MultiMap.from_entries(sp, sp, 1, 1, ANTISYMMETRIC, [((0,), 2, 1)])
    assert decalage_down(d).coeffs == {(0,): {2: Fraction(1)}}
    br = MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, [((0, 1), 2, 1)])
    # (-1)^{1} from n(n-1)/2 and (-1)^{|↓x|} = +1 from moving the second ↑ past ↓x
    assert decalage_down(br).coeffs == {(0, 1): {2: Fraction(-1)}}


@given(st.integers(0, 10 ** 6))
def test_evaluation_invariant_under_resorting(seed):
    rng = random.Random(seed)
    sp = small_space()
    for flavor, sign in ((SYMMETRIC, epsilon_sign), (ANTISYMMETRIC, chi_sign)):
        phi = random_map(rng, sp, 3, 0, flavor)
        key = tuple(rng.randrange(sp.dim) for _ in range(3))
        sigma = Permutation(tuple(rng.sample([1, 2, 3], 3)))
        degs = [sp.degrees[i] for i in key]
        lhs = phi(*sigma.apply(key))
        rhs = {t: sign(sigma, degs) * c for t, c in phi(*key).items()}
        assert lhs == rhs


def test_canonical_keys_rules():
    degs = (0, 1)
    assert canonicalize((0, 0), degs, ANTISYMMETRIC) == (0, None)
    assert canonicalize((1, 1), degs, ANTISYMMETRIC) == (1, (1, 1))
    assert canonicalize((1, 1), degs, SYMMETRIC) == (0, None)
    assert canonicalize((1, 0), degs, ANTISYMMETRIC) == (-1, (0, 1))


def test_compose_multimap():
    sp = GradedSpace((("a", 1), ("b", 1), ("c", 2), ("d", 3)))
    ident = LinearMap.identity(sp).as_multimap()
    outer = MultiMap.from_entries(sp, sp, 2, 0, PLAIN, [((0, 1), 2, 1), ((0, 2), 3, 2)])
    assert compose_multimap(outer, 1, ident) == outer
    assert compose_multimap(outer, 2, ident) == outer
    # odd inner at slot 2 passes the odd a: sign -1
    inner = MultiMap.from_entries(sp, sp, 1, 1, PLAIN, [((1,), 2, 1)])
    got = compose_multimap(outer, 2, inner)
    assert got(0, 1) == {3: Fraction(-2)}
    # degree-0 outer in slot 1: no sign
    got1 = compose_multimap(outer, 1, inner)
    assert got1(1, 1) == {}
    inner0 = MultiMap.from_entries(sp, sp, 1, 0, PLAIN, [((1,), 0, 1)])
    assert compose_multimap(outer, 1, inner0)(1, 1) == {2: Fraction(1)}


def test_linear_map_degree_check():
    sp = GradedSpace((("a", 0), ("b", 1)))
    with pytest.raises(ValueError):
        LinearMap.from_entries(sp, sp, 1, [(1, 0, 1)])
    d = LinearMap.from_entries(sp, sp, 1, [(0, 1, 2)])
    assert d({0: Fraction(1)}) == {1: Fraction(2)}


def test_multimap_rejects_bad_degree():
    sp = GradedSpace((("a", 0), ("b", 1)))
    with pytest.raises(ValueError):
        MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, [((0, 1), 0, 1)])
    with pytest.raises(ValueError):
        MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, [((0, 0), 0, 1)])
