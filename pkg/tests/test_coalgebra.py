import random

import pytest
from hypothesis import given, strategies as st

from homotransfer import linalg
from homotransfer.coalgebra import (Coderivation, LInftyAlgebra, LInftyMorphism,
                                    apply_through_compositions_naive, apply_through_partitions,
                                    coder_bracket, complete_direct_sum, compose,
                                    compose_coderivations, direct_sum, direct_sum_morphism,
                                    inverse_by_recursion, is_codifferential, is_identity,
                                    jacobi_check, lada_markl_residuals, left_inverse,
                                    morphism_check, set_partitions)
from homotransfer.corpus import random_dgla
from homotransfer.graded import (ANTISYMMETRIC, SYMMETRIC, GradedSpace, LinearMap, MultiMap,
                                 shift_linear)
from homotransfer.transfer import CORRECTED, embed_g, hodge, transfer_f

from conftest import random_invertible, random_map, small_space

BELL = [1, 1, 2, 5, 15, 52, 203]


def random_coderivation(rng, space, cap, degree, density=0.5):
    return Coderivation(space, cap, degree,
                        {n: random_map(rng, space, n, degree, SYMMETRIC, density)
                         for n in range(1, cap + 1)})


def test_set_partitions_are_bell_numbers():
    assert [len(set_partitions(n)) for n in range(7)] == BELL


@given(st.integers(0, 10 ** 6), st.integers(1, 4))
def test_partition_sum_matches_naive_compositions(seed, n):
    rng = random.Random(seed)
    sp = small_space((0, 1, 1, 2))
    tgt = GradedSpace((("t0", -1), ("t1", 0), ("t2", 1), ("t3", 2), ("t4", 3)))
    comps = {m: random_map(rng, sp, m, 0, SYMMETRIC, 0.5, target=tgt) for m in range(1, n + 1)}
    outer = {k: random_map(rng, tgt, k, 1, SYMMETRIC, 0.3) for k in range(1, n + 1)}
    key = tuple(sorted(rng.randrange(sp.dim) for _ in range(n)))
    degs = sp.degrees
    assert (apply_through_partitions(outer, comps, key, degs)
            == apply_through_compositions_naive(outer, comps, key, degs))


@given(st.integers(0, 10 ** 6))
def test_coderivation_bracket_antisymmetry(seed):
    rng = random.Random(seed)
    sp = small_space((-1, 0, 1))
    Q = random_coderivation(rng, sp, 3, rng.choice([0, 1]))
    q = random_coderivation(rng, sp, 3, rng.choice([0, 1, 2]))
    lhs = coder_bracket(Q, q)
    rhs = coder_bracket(q, Q)
    s = -1 if (Q.degree * q.degree) % 2 else 1
    for n in range(1, 4):
        assert lhs.component(n) == rhs.component(n).scale(-s)


@given(st.integers(0, 10 ** 6))
def test_coderivation_bracket_jacobi(seed):
    rng = random.Random(seed)
    sp = small_space((0, 1))
    A, B, C = (random_coderivation(rng, sp, 3, d, 0.4) for d in rng.sample([0, 1, 1, 2], 3))

    def br(x, y):
        return coder_bracket(x, y)

    # [A,[B,C]] = [[A,B],C] + (-1)^{|A||B|}[B,[A,C]]
    s = -1 if (A.degree * B.degree) % 2 else 1
    for n in range(1, 4):
        lhs = br(A, br(B, C)).component(n)
        rhs = br(br(A, B), C).component(n) + br(B, br(A, C)).component(n).scale(s)
        assert lhs == rhs


def test_odd_self_bracket_is_twice_the_square():
    rng = random.Random(2)
    sp = small_space((0, 1, 2))
    Q = random_coderivation(rng, sp, 3, 1)
    QQ = coder_bracket(Q, Q)
    for n in range(1, 4):
        assert QQ.component(n) == compose_coderivations(Q, Q, n).scale(2)


def test_codifferential_basics():
    sp = small_space((0, 1))
    assert is_codifferential(Coderivation(sp, 3, 1))
    with pytest.raises(ValueError):
        is_codifferential(random_coderivation(random.Random(0), sp, 2, 0))
    d = LinearMap.from_entries(sp, sp, 1, [(0, 1, 2)])
    Q = LInftyAlgebra.from_dgla(sp, d, MultiMap.zero(sp, sp, 2, 0, ANTISYMMETRIC), 3).coderivation()
    assert coder_bracket(Q, Q).is_zero()


def test_dgla_codifferential_iff_axioms():
    rng = random.Random(8)
    for _ in range(6):
        L = random_dgla(rng)
        assert is_codifferential(L.linfty(3).coderivation())
    sp = GradedSpace((("a", 0), ("b", 0), ("c", 0)))
    # a bracket violating Jacobi: [a,b] = a, [b,c] = b, [a,c] = c
    bad = MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC,
                                [((0, 1), 0, 1), ((1, 2), 1, 1), ((0, 2), 2, 1)])
    A = LInftyAlgebra.from_dgla(sp, LinearMap.zero(sp, sp, 1), bad, 3)
    v = is_codifferential(A.coderivation())
    assert not v and set(v.residuals) == {3}
    # d² ≠ 0 shows up at arity 1
    sp2 = GradedSpace((("a", 0), ("b", 1), ("c", 2)))
    d = LinearMap.from_entries(sp2, sp2, 1, [(0, 1, 1), (1, 2, 1)])
    v = jacobi_check(LInftyAlgebra.from_dgla(sp2, d, MultiMap.zero(sp2, sp2, 2, 0, ANTISYMMETRIC), 2))
    assert not v and 1 in v.residuals


def test_jacobi_routes_agree_on_random_brackets():
    rng = random.Random(9)
    for _ in range(5):
        L = random_dgla(rng, max_dim=5)
        A = L.linfty(4)
        mu3 = random_map(rng, L.space, 3, -1, ANTISYMMETRIC, 0.3)
        if mu3.is_zero():
            continue
        B = LInftyAlgebra(L.space, 4, {**A.mu, 3: mu3})
        direct = lada_markl_residuals(B)
        shifted = is_codifferential(B.coderivation())
        assert set(direct) == set(shifted.residuals)
        assert jacobi_check(A)


def test_identity_and_perturbed_morphisms():
    rng = random.Random(10)
    L = random_dgla(rng, "two_step")
    A = L.linfty(3)
    I = LInftyMorphism.identity(A)
    assert morphism_check(I) and is_identity(I)
    f2 = random_map(rng, L.space, 2, -1, ANTISYMMETRIC, 0.8)
    while f2.is_zero():
        f2 = random_map(rng, L.space, 2, -1, ANTISYMMETRIC, 0.8)
    F = LInftyMorphism(A, A, 3, {1: I.f[1], 2: f2})
    assert not morphism_check(F)


def test_transfer_morphisms_pass_both_routes(split_corpus):
    for L, split in split_corpus[:5]:
        hd = hodge(L, split)
        f = transfer_f(L, split, 3, CORRECTED, hd)
        assert morphism_check(f)


@given(st.integers(0, 10 ** 6))
def test_left_inverse_is_two_sided(seed):
    rng = random.Random(seed)
    sp = small_space((0, 1, 1, 2))
    F, lin = random_invertible(rng, sp, 4)
    g1 = LinearMap.from_matrix(sp, sp, 0, linalg.inverse(lin.matrix()))
    G = left_inverse(F, g1)
    assert is_identity(compose(G, F))
    assert is_identity(compose(F, G))


def test_left_inverse_second_component():
    rng = random.Random(12)
    sp = small_space((0, 1, 1, 2))
    F, lin = random_invertible(rng, sp, 3)
    g1 = LinearMap.from_matrix(sp, sp, 0, linalg.inverse(lin.matrix()))
    G = left_inverse(F, g1)
    g1s = shift_linear(g1)
    F2 = F.coalgebra().component(2)
    want = F2.restrict(g1s).postcompose(g1s).scale(-1)
    assert G.coalgebra().component(2) == want


def test_left_inverse_rejects_wrong_g1():
    rng = random.Random(13)
    sp = small_space((0, 1, 1, 2))
    F, lin = random_invertible(rng, sp, 2)
    with pytest.raises(ValueError):
        left_inverse(F, LinearMap.identity(sp).scale(3))


def test_printed_recursion_gives_a_right_inverse():
    rng = random.Random(14)
    sp = small_space((0, 1, 1, 2))
    F, lin = random_invertible(rng, sp, 4)
    g1 = LinearMap.from_matrix(sp, sp, 0, linalg.inverse(lin.matrix()))
    G = inverse_by_recursion(F, g1)
    assert is_identity(compose(F, G))


def test_compose_strict_and_associative():
    rng = random.Random(15)
    sp = small_space((0, 1, 1, 2))
    F, _ = random_invertible(rng, sp, 3)
    G, _ = random_invertible(rng, sp, 3)
    H, _ = random_invertible(rng, sp, 3)
    I = LInftyMorphism.identity(F.source)
    assert compose(F, I).f == F.f and compose(I, F).f == F.f
    left = compose(compose(F, G), H)
    right = compose(F, compose(G, H))
    assert all(left.component(n) == right.component(n) for n in range(1, 4))
    S1 = LInftyMorphism(F.source, F.target, 3, {1: F.f[1]})
    S2 = LInftyMorphism(G.source, G.target, 3, {1: G.f[1]})
    S = compose(S1, S2)
    assert set(S.f) == {1}
    assert S.linear_part() == S1.linear_part().compose(S2.linear_part())


def test_direct_sum_blocks():
    rng = random.Random(16)
    L = random_dgla(rng, "two_step")
    A = L.linfty(3)
    Z = LInftyAlgebra(GradedSpace((("z", 0),)), 3)
    S = direct_sum(A, Z)
    assert all(m.source.dim == L.dim + 1 for m in S.mu.values())
    for n, m in S.mu.items():
        assert all(L.dim not in k for k in m.coeffs)
        assert all(L.dim not in v for v in m.coeffs.values())
    with pytest.raises(ValueError):
        direct_sum(A, A)


def test_plain_direct_sum_needs_vanishing_mixed_brackets():
    """f ⊕ g, zero on mixed inputs, is a morphism only when [H, F] = 0;
    the completed sum solves for the mixed components."""
    sp = GradedSpace((("x", 1), ("u", 1), ("v", 2), ("w", 2)))
    d = LinearMap.from_entries(sp, sp, 1, [(1, 2, 1)])
    br = MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, [((0, 0), 2, 1), ((0, 1), 3, 1)])
    from homotransfer.transfer import DGLA, build_splitting
    L = DGLA(sp, d, br)
    split = build_splitting(L)
    hd = hodge(L, split)
    f = transfer_f(L, split, 3, CORRECTED, hd)
    g = embed_g(L, split, 3, CORRECTED, hd)
    plain = direct_sum_morphism(f, g)
    v = morphism_check(plain)
    assert not v and set(v.residuals) == {2}
    full = complete_direct_sum(f, g)
    assert morphism_check(full)
    off = hd.H.dim
    for n, m in full.f.items():
        pure = {k: val for k, val in m.coeffs.items() if not (k[0] < off <= k[-1])}
        assert pure == plain.component(n).coeffs


def test_completed_sum_on_corpus(split_corpus):
    for L, split in split_corpus[:8]:
        hd = hodge(L, split)
        f = transfer_f(L, split, 3, CORRECTED, hd)
        g = embed_g(L, split, 3, CORRECTED, hd)
        assert morphism_check(complete_direct_sum(f, g))
