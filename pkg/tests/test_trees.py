import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homotransfer.graded import PLAIN, GradedSpace, MultiMap, Permutation, chi_sign, vscale
from homotransfer.trees import (BETA, TAU, add_trees, catalan, compose_trees, composition_sign,
                                e_sign, enumerate_ot, evaluate, graft_compose, graft_decompose,
                                graft_triples, graft_tuples, leaf_paths, leaves_before, node_paths,
                                ones_count, parse_tree, s_leaf, serialize, subtract, subtree,
                                w_leaf, w_node, wiwo_sign)

LEFT3 = parse_tree("((..).)")
RIGHT3 = parse_tree("(.(..))")

SPACE = GradedSpace(tuple((f"e{d}", d) for d in range(-2, 3)))


def random_bilinear(rng, degree, density=0.8):
    degs = SPACE.degrees
    entries = [((i, j), t, Fraction(rng.randint(1, 3)))
               for i in range(SPACE.dim) for j in range(SPACE.dim) for t in range(SPACE.dim)
               if degs[t] == degs[i] + degs[j] + degree and rng.random() < density]
    return MultiMap.from_entries(SPACE, SPACE, 2, degree, PLAIN, entries)


def unit(i):
    return {i: Fraction(1)}


def value(t, B, vecs):
    return vecs[0] if t.is_leaf else evaluate(t, B).apply(vecs)


trees_upto = st.integers(1, 6).flatmap(lambda n: st.sampled_from(enumerate_ot(n)))


def test_counts_are_catalan():
    assert [len(enumerate_ot(n)) for n in range(1, 8)] == [1, 1, 2, 5, 14, 42, 132]
    assert len(enumerate_ot(10)) == 4862 == catalan(9)
    # the strict bound needs n ≥ 2: Ot(1) has 1 = 4^0 elements
    assert len(enumerate_ot(1)) == 4 ** 0
    for n in range(2, 11):
        assert catalan(n - 1) < 4 ** (n - 1)
    assert enumerate_ot(2) == [BETA]
    with pytest.raises(ValueError):
        enumerate_ot(0)


def test_enumeration_has_no_duplicates():
    for n in range(1, 8):
        ts = enumerate_ot(n)
        assert len(set(ts)) == len(ts)
        assert all(t.n_leaves == n for t in ts)


def test_serialization_grammar():
    assert serialize(TAU) == "."
    assert serialize(BETA) == "(..)"
    for t in enumerate_ot(5):
        assert parse_tree(serialize(t)) == t
    for bad in ("", "(.)", "(...)", "(..", "x"):
        with pytest.raises(ValueError):
            parse_tree(bad)


def test_leaf_paths():
    assert leaf_paths(TAU) == [()]
    assert leaf_paths(BETA) == [(1,), (2,)]
    assert leaf_paths(LEFT3) == [(1, 1), (1, 2), (2,)]


def test_w_on_beta():
    assert (s_leaf(BETA, 1), w_leaf(BETA, 1)) == (1, 1)
    assert (s_leaf(BETA, 2), w_leaf(BETA, 2)) == (1, 0)
    with pytest.raises(ValueError):
        w_leaf(BETA, 3)
    with pytest.raises(ValueError):
        w_leaf(TAU, 1)


def test_w_brute_force_against_sorting():
    """s(i) by sorting all vertices by their paths, prefixes first."""
    for n in range(2, 6):
        for t in enumerate_ot(n):
            vertices = sorted([(p, "node") for p in node_paths(t)] +
                              [(p, "leaf") for p in leaf_paths(t)])
            seen = 0
            leaf = 0
            for _, kind in vertices:
                if kind == "node":
                    seen += 1
                else:
                    leaf += 1
                    assert w_leaf(t, leaf) == seen - (leaf - 1)


def test_w_count_of_ones_cross_check():
    for n in range(2, 7):
        for t in enumerate_ot(n):
            for p in node_paths(t)[1:]:
                assert w_node(t, p) == ones_count(p)
            for i, lp in enumerate(leaf_paths(t), 1):
                assert w_leaf(t, i) == ones_count(lp)


def test_e_fixtures():
    assert e_sign(TAU) == 1
    assert e_sign(BETA) == -1
    assert e_sign(LEFT3) == -1
    assert e_sign(RIGHT3) == 1


def test_e_of_sum_identity():
    """The sign of a + b against e(a)e(b).

    The naive rule e(a+b) = -e(a)e(b) does not hold in general; the rule that
    holds is e(a+b) = -(-1)^{p-1} e(a) e(b), p the leaf count of a.
    """
    small = [t for n in range(1, 5) for t in enumerate_ot(n)]
    naive_failures = 0
    for a, b in itertools.product(small, repeat=2):
        got = e_sign(a + b)
        if got != -e_sign(a) * e_sign(b):
            naive_failures += 1
        p = a.n_leaves
        assert got == -(-1) ** (p - 1) * e_sign(a) * e_sign(b)
    assert naive_failures == 54


def test_addition():
    assert TAU + TAU == BETA
    assert add_trees(BETA, TAU) != add_trees(TAU, BETA)
    for a, b in itertools.product(enumerate_ot(3), enumerate_ot(2)):
        assert (a + b).n_leaves == 5


def test_subtraction():
    assert subtract(BETA, ()) == TAU
    assert subtract(LEFT3, (1,)) == BETA
    for n in range(2, 7):
        for t in enumerate_ot(n):
            for p in node_paths(t):
                assert subtract(t, p).n_leaves == n - subtree(t, p).n_leaves + 1
    with pytest.raises(ValueError):
        subtract(BETA, (1,))


def test_composition_of_trees():
    for t in enumerate_ot(4):
        assert compose_trees(t, [TAU] * 4) == t
        assert compose_trees(TAU, [t]) == t
    assert compose_trees(BETA, [BETA, TAU]) == LEFT3
    with pytest.raises(ValueError):
        compose_trees(BETA, [TAU])


def test_evaluate_small_cases():
    rng = random.Random(3)
    b0, b1 = random_bilinear(rng, 0), random_bilinear(rng, 1)
    assert evaluate(BETA, {(): b0}) == b0.as_flavor(PLAIN)
    left = evaluate(LEFT3, {(): b0, (1,): b1})
    for key in itertools.product(range(SPACE.dim), repeat=3):
        want = b0.apply([b1(key[0], key[1]), unit(key[2])])
        assert left(*key) == want
    with pytest.raises(ValueError):
        evaluate(LEFT3, {(): b0})


def test_evaluate_degree_zero_is_nested_composition():
    rng = random.Random(5)
    t = parse_tree("((..)(..))")
    B = {p: random_bilinear(rng, 0) for p in node_paths(t)}
    ev = evaluate(t, B)
    for key in itertools.product(range(SPACE.dim), repeat=4):
        left = B[(1,)](key[0], key[1])
        right = B[(2,)](key[2], key[3])
        assert ev(*key) == B[()].apply([left, right])


def _composition_check(rng, outer, inners, trials=25):
    comp = compose_trees(outer, inners)
    bdeg = {p: rng.randint(-1, 1) for p in node_paths(comp)}
    B = {p: random_bilinear(rng, bdeg[p], 0.7) for p in bdeg}
    full = evaluate(comp, B)
    outer_B = {p: B[p] for p in node_paths(outer)}
    inner_ev = [None if t.is_leaf else evaluate(t, {q: B[lp + q] for q in node_paths(t)})
                for lp, t in zip(leaf_paths(outer), inners)]
    s = composition_sign(outer, inners, bdeg)
    degs = SPACE.degrees
    checked = 0
    for _ in range(trials):
        key = tuple(rng.randrange(SPACE.dim) for _ in range(comp.n_leaves))
        e, passed, vals, pos = 0, 0, [], 0
        for t, ev in zip(inners, inner_ev):
            sub = key[pos:pos + t.n_leaves]
            pos += t.n_leaves
            if ev is None:
                vals.append(unit(sub[0]))
            else:
                vals.append(ev(*sub))
                e += ev.lin_degree * passed
            passed += sum(degs[i] for i in sub)
        rhs = vscale((-1) ** (e % 2), value(outer, outer_B, vals))
        lhs = full(*key)
        assert lhs == vscale(s, rhs)
        checked += bool(lhs)
    return checked


def test_composition_sign_by_direct_evaluation():
    rng = random.Random(1)
    inner_choices = enumerate_ot(1) + enumerate_ot(2) + enumerate_ot(3)
    nonzero = 0
    for n_out in (2, 3):
        for outer in enumerate_ot(n_out):
            for inners in itertools.product(inner_choices, repeat=n_out):
                if sum(t.n_leaves for t in inners) > 4:
                    continue
                nonzero += _composition_check(rng, outer, list(inners))
    assert nonzero > 50


def test_composition_sign_trivial_cases():
    outer = LEFT3
    assert composition_sign(outer, [TAU] * 3, {p: 1 for p in node_paths(outer)}) == 1
    comp = compose_trees(BETA, [BETA, BETA])
    assert composition_sign(BETA, [BETA, BETA], {p: 2 for p in node_paths(comp)}) == 1


def test_graft_bijection_counts():
    assert len(graft_triples(3)) == len(graft_tuples(3)) == 12
    assert len(graft_triples(4)) == len(graft_tuples(4)) == 240


@pytest.mark.parametrize("n", [3, 4])
def test_graft_round_trips(n):
    tuples = graft_tuples(n)
    decomposed = set()
    for Phi, K, sigma in graft_triples(n):
        data = graft_decompose(Phi, K, sigma)
        assert graft_compose(data) == (Phi, K, sigma)
        decomposed.add(data)
    assert decomposed == set(tuples)
    for data in tuples:
        assert graft_decompose(*graft_compose(data)) == data


def test_graft_example():
    data = graft_decompose(LEFT3, (1,), Permutation.identity(3))
    ident2 = Permutation.identity(2)
    assert (data.k, data.phi, data.psi) == (2, BETA, BETA)
    assert (data.rho, data.gamma, data.delta) == (Permutation.identity(3), ident2, ident2)


def test_graft_errors():
    with pytest.raises(ValueError):
        graft_decompose(LEFT3, (), Permutation.identity(3))
    with pytest.raises(ValueError):
        graft_decompose(LEFT3, (2,), Permutation.identity(3))


def test_wiwo_trivial_cases():
    for Phi, K, sigma in graft_triples(3):
        r = leaves_before(Phi, K)
        even = {p: 2 for p in node_paths(Phi)}
        first, second = wiwo_sign(Phi, K, sigma, even)
        assert first == second
        if r == 0:
            assert first == 1


def _wiwo_three_way(rng, Phi, K, sigma):
    """Evaluates ψ(B')∘γ∘(φ(B'')∘δ ⊗ 1)∘ρ, ψ(B')∘(1^r ⊗ φ(B'') ⊗ 1)∘σ and Φ(B)∘σ."""
    degs = SPACE.degrees
    b = {p: rng.randint(-1, 1) for p in node_paths(Phi)}
    B = {p: random_bilinear(rng, b[p]) for p in b}
    data = graft_decompose(Phi, K, sigma)
    phi, psi, rho, gam, dl, k = data.phi, data.psi, data.rho, data.gamma, data.delta, data.k
    Bpp = {q: B[K + q] for q in node_paths(phi)}
    Bp = {p: B[p] for p in node_paths(psi)}
    b2 = sum(b[K + q] for q in node_paths(phi))
    r = leaves_before(Phi, K)
    first, second = wiwo_sign(Phi, K, sigma, b)
    n = Phi.n_leaves
    hits = 0
    for _ in range(6):
        a = [rng.randrange(SPACE.dim) for _ in range(n)]
        ad = [degs[i] for i in a]
        ar = rho.apply(a)
        c = chi_sign(rho, ad) * chi_sign(dl, [degs[i] for i in ar[:k]])
        u = [value(phi, Bpp, [unit(i) for i in dl.apply(ar[:k])])] + [unit(i) for i in ar[k:]]
        ud = [b2 + sum(degs[i] for i in ar[:k])] + [degs[i] for i in ar[k:]]
        c *= chi_sign(gam, ud)
        lhs = vscale(c, value(psi, Bp, list(gam.apply(u))))
        asg = sigma.apply(a)
        cs = chi_sign(sigma, ad)
        koszul = b2 * sum(degs[i] for i in asg[:r])
        mid_args = ([unit(i) for i in asg[:r]]
                    + [value(phi, Bpp, [unit(i) for i in asg[r:r + k]])]
                    + [unit(i) for i in asg[r + k:]])
        mid = vscale(cs * (-1) ** (koszul % 2), value(psi, Bp, mid_args))
        full = vscale(cs, evaluate(Phi, B).apply([unit(i) for i in asg]))
        assert lhs == vscale(first, mid)
        assert lhs == vscale(second, full)
        hits += bool(lhs)
    return hits


def test_wiwo_signs_by_direct_evaluation():
    rng = random.Random(4)
    triples = graft_triples(3) + rng.sample(graft_triples(4), 120)
    hits = sum(_wiwo_three_way(rng, *t) for t in triples)
    assert hits > 100


@given(trees_upto)
def test_nodes_and_leaves_interleave(t):
    assert len(node_paths(t)) == t.n_leaves - 1
    assert len(leaf_paths(t)) == t.n_leaves
    assert leaf_paths(t) == sorted(leaf_paths(t))
