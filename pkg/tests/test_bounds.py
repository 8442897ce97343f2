import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homotransfer import bounds as B
from homotransfer.coalgebra import Coderivation, coder_bracket
from homotransfer.corpus import corpus
from homotransfer.graded import ANTISYMMETRIC, SYMMETRIC, GradedSpace, LinearMap, MultiMap
from homotransfer.transfer import hodge
from homotransfer.trees import enumerate_ot, node_paths, parse_tree

from conftest import random_invertible, random_map, small_space


def random_weights(rng, n):
    return [Fraction(rng.randint(1, 4), rng.randint(1, 3)) for _ in range(n)]


def test_model_validation():
    sp = small_space((0, 1))
    with pytest.raises(ValueError):
        B.NormModel.banach(sp, [1, 0])
    with pytest.raises(ValueError):
        B.NormModel.scaled(sp, [1, 1], [0, -1])
    with pytest.raises(ValueError):
        B.op_norm0(LinearMap.identity(sp), B.NormModel.banach(sp), eps=1)


@given(st.integers(0, 10 ** 6))
def test_norms_are_monotone_in_lambda(seed):
    rng = random.Random(seed)
    sp = small_space((0, 1, 1, 2))
    m = B.NormModel.scaled(sp, random_weights(rng, 4), [rng.randint(0, 3) for _ in range(4)])
    v = {i: Fraction(rng.randint(-5, 5)) for i in range(4)}
    lams = sorted(Fraction(rng.randint(1, 99), 100) for _ in range(3))
    vals = [m.norm(v, lam) for lam in lams]
    assert vals == sorted(vals)


def test_operator_norm_basics():
    sp = small_space((0, 0, 1))
    m = B.NormModel.banach(sp)
    assert B.op_norm0(MultiMap.zero(sp, sp, 2, 0, SYMMETRIC), m) == 0
    assert B.op_norm0(LinearMap.identity(sp), m) == 1
    assert B.op_norm1(LinearMap.identity(sp), m) == 1
    w = B.NormModel.banach(sp, [2, 1, 3])
    assert B.op_norm0(LinearMap.identity(sp), w) == 1


@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_op_norm0_matches_extreme_points(seed, arity):
    rng = random.Random(seed)
    sp = small_space((0, 0, 1))
    m = B.NormModel.banach(sp, random_weights(rng, 3))
    phi = random_map(rng, sp, arity, 0, rng.choice([SYMMETRIC, ANTISYMMETRIC]), 0.7)
    assert B.op_norm0(phi, m) == B.extreme_point_norm0(phi, m)


@given(st.integers(0, 10 ** 6), st.integers(1, 4), st.sampled_from([Fraction(1, 2), Fraction(1, 3)]))
def test_banach_norm1_is_eps_power_times_norm0(seed, arity, eps):
    rng = random.Random(seed)
    sp = small_space((0, 0, 2))
    m = B.NormModel.banach(sp, random_weights(rng, 3))
    phi = random_map(rng, sp, arity, 0, SYMMETRIC, 0.6)
    assert B.op_norm1(phi, m, eps) == eps ** (arity - 1) * B.op_norm0(phi, m, eps)


def test_arity_three_half_window():
    rng = random.Random(3)
    sp = small_space((0, 0))
    m = B.NormModel.banach(sp)
    phi = random_map(rng, sp, 3, 0, SYMMETRIC, 1.0)
    assert B.op_norm1(phi, m) == B.op_norm0(phi, m) / 4


def test_scaled_norm0_dominates_sampled_values(rng):
    sp = small_space((0, 1, 1))
    for _ in range(20):
        m = B.NormModel.scaled(sp, random_weights(rng, 3), [rng.randint(0, 2) for _ in range(3)])
        phi = random_map(rng, sp, 2, 0, SYMMETRIC, 0.8)
        top = B.op_norm0(phi, m)
        for lam in (Fraction(1, 2), Fraction(3, 4), Fraction(99, 100)):
            for i in range(3):
                for j in range(3):
                    x = {i: 1 / m.norm({i: Fraction(1)}, lam)}
                    y = {j: 1 / m.norm({j: Fraction(1)}, lam)}
                    assert m.norm(phi.apply([x, y]), lam) <= top


def test_tree_bound_examples():
    assert B.tree_bound(parse_tree("(..)"), [5], [7]) == (5, 7)
    t4 = enumerate_ot(4)[0]
    assert B.tree_bound(t4, [1, 1, 1], [1, 1, 1]) == (1, 27)
    with pytest.raises(ValueError):
        B.tree_bound(t4, [1], [1, 1, 1])


def test_measured_tree_norms_obey_the_lemma(rng):
    sp = small_space((0, 0, 1, 2))
    checked = 0
    for n in range(2, 5):
        for t in enumerate_ot(n):
            for _ in range(3):
                m = B.NormModel.banach(sp, random_weights(rng, 4))
                fam = {p: random_map(rng, sp, 2, 0, ANTISYMMETRIC, 0.7) for p in node_paths(t)}
                got = B.tree_norms(t, fam, m)
                order = sorted(fam)
                b = [B.op_norm0(fam[p], m) for p in order]
                c = [B.op_norm1(fam[p], m) for p in order]
                b0, b1 = B.tree_bound(t, b, c)
                assert got.norm0 <= b0 and got.norm1 <= b1
                checked += 1
    assert checked == 3 * (1 + 2 + 5)


def test_mu_bound_formulas():
    assert B.mu_bounds(3, 5, 7, 2) == (4 * 5, 4 * 7)
    b1, b0 = B.mu_bounds(Fraction(1, 2), 1, 1, 4)
    assert b1 == 24 * 27 * 8 * Fraction(1, 4)
    assert b0 == 8 * 24 * Fraction(1, 4)
    with pytest.raises(ValueError):
        B.mu_bounds(1, 1, 1, 1)


def test_adapted_frames_keep_the_structure(split_corpus):
    for L, split in split_corpus:
        La, sa = B.adapted(L, split)
        assert B.is_adapted(La, sa)
        ha, h = hodge(La, sa), hodge(L, split)
        assert ha.betti() == h.betti()


def test_measured_mu_norms_obey_the_theorem(rng):
    rows = 0
    for L, split in corpus(5, 20, max_dim=6):
        La, sa = B.adapted(L, split)
        model = B.NormModel.banach(La.space, random_weights(rng, La.dim))
        table = B.measure_mu_bounds(La, sa, model, 4)
        assert table.ok, [(r.n, r.measured1, r.bound1, r.measured0, r.bound0) for r in table.rows]
        rows += len(table.rows)
    assert rows == 60


def test_gamma_coefficients():
    g = B.gamma(20)
    assert g[0] == Fraction(1, 4) and g[1] == Fraction(1, 8) and g[2] == Fraction(1, 32)
    assert g.positive()
    assert g.convolution_ok(8, 8)
    # the series really is ½ - ¼√(1-t): square it back
    s = [Fraction(1, 2) - g[0]] + [-g[p] for p in range(1, 21)]
    sq = [sum(s[i] * s[p - i] for i in range(p + 1)) for p in range(21)]
    assert sq[0] == Fraction(1, 16) and sq[1] == Fraction(-1, 16)
    assert all(x == 0 for x in sq[2:])


def test_convolution_counts_compositions():
    g = B.Majorant([Fraction(1)] * 10)
    # Σ over compositions of 6 into 3 positive parts of 1 = C(5, 2)
    assert g.convolution(3, 6) == 10


def test_certificate_for_a_strict_morphism():
    cert = B.certify_inverse_convergence({}, 1, 4, g_norms={1: 1})
    assert cert.ok and cert.C == 0
    assert all(m >= 0 for m in cert.margins.values())


def test_certificate_with_only_a_quadratic_term():
    f2 = Fraction(1, 3)
    cert = B.certify_inverse_convergence({2: f2}, 1, 2)
    maj = B.gamma(2)
    C = f2 / 2 / maj[2]
    assert cert.C == C
    # closed form: γ_2 C' R · ||g_1|| · C R ≤ 1 with R = 1
    limit = 1 / (maj[2] * C)
    assert cert.Cp <= limit and cert.Cp > limit / 2
    assert cert.Rp == 1 / (maj[1] * cert.Cp)


def test_certificate_reports_failure_without_raising():
    cert = B.certify_inverse_convergence({2: 1}, 0, 2)
    assert not cert.ok and cert.reason
    bad = B.certify_inverse_convergence({2: 1}, 1, 2, g_norms={2: 10 ** 9})
    assert not bad.ok and "violates" in bad.reason


def test_certificates_hold_for_computed_inverses(rng):
    sp = small_space((0, 1, 1, 2))
    for _ in range(6):
        F, _ = random_invertible(rng, sp, 4)
        m = B.NormModel.banach(sp, random_weights(rng, 4))
        cert, G = B.certify_morphism_inverse(F, m, m)
        assert cert.ok, cert.reason
        for q, comp in G.f.items():
            a = B.op_norm0(comp, m) / math.factorial(q)
            assert a <= B.gamma(4)[q] * cert.Cp * cert.Rp ** q


def test_e_enclosure_and_stirling():
    lo, hi = B.e_enclosure(20)
    assert lo < hi and hi - lo < Fraction(1, 10 ** 18)
    assert float(lo) <= math.e <= float(hi)
    assert B.stirling_factor(1) == 1 and B.stirling_factor(2) == 2
    assert B.stirling_factor(3) == 8
    assert B.stirling_check(30)


def test_bracket_closure_bound_trivial_cases():
    Q = {1: Fraction(1), 2: Fraction(2)}
    assert all(v == 0 for v in B.bracket_closure_bound(Q, {}, 4).values())
    out = B.bracket_closure_bound({1: 1}, {1: 1}, 2)
    assert out[1] == 2 and out[2] == 0


def test_bracket_closure_bound_dominates_measured(rng):
    sp = small_space((0, 1))
    m = B.NormModel.banach(sp)
    for _ in range(8):
        Q = Coderivation(sp, 4, 1, {n: random_map(rng, sp, n, 1, SYMMETRIC, 0.6)
                                     for n in range(1, 5)})
        q = Coderivation(sp, 4, 0, {n: random_map(rng, sp, n, 0, SYMMETRIC, 0.6)
                                     for n in range(1, 5)})
        Qn = {n: B.op_norm1(Q.component(n), m) for n in range(1, 5)}
        qn = {n: B.op_norm1(q.component(n), m) for n in range(1, 5)}
        bound = B.bracket_closure_bound(Qn, qn, 4)
        br = coder_bracket(Q, q)
        for n in range(1, 5):
            assert B.op_norm1(br.component(n), m) <= bound[n]


def test_remark_chain_on_even_degrees(rng):
    sp = small_space((0, 0, 2))
    for p in range(1, 5):
        for _ in range(4):
            m = B.NormModel.banach(sp, random_weights(rng, 3))
            phi = random_map(rng, sp, p, 0, SYMMETRIC, 0.7)
            chk = B.remark_chain(phi, m)
            assert chk.ok, (p, chk)


def test_remark_chain_fails_on_odd_inputs():
    """On odd inputs a symmetric map is numerically alternating, so φ̃ = 0 while φ ≠ 0."""
    sp = GradedSpace((("a", 1), ("b", 1), ("c", 2)))
    phi = MultiMap.from_entries(sp, sp, 2, 0, SYMMETRIC, [((0, 1), 2, 1)])
    chk = B.remark_chain(phi, B.NormModel.banach(sp))
    assert chk.poly_lower == 0 and chk.multi > 0
    assert chk.first and not chk.second
