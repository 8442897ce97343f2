"""Random small DGLAs over Q for property tests and verification scripts."""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .graded import ANTISYMMETRIC, GradedSpace, LinearMap, MultiMap
from .transfer import DGLA, random_splitting


def _rand(rng: random.Random, spread: int = 2) -> Fraction:
    return Fraction(rng.randint(-spread, spread))


def two_step(rng: random.Random, n1: int = 2, n2: int = 2, density: float = 0.8,
             rank: int | None = None) -> DGLA:
    """L¹ ⊕ L² with arbitrary d: L¹ -> L² and symmetric [L¹, L¹] -> L²; all axioms are automatic."""
    basis = [(f"x{i}", 1) for i in range(n1)] + [(f"y{i}", 2) for i in range(n2)]
    sp = GradedSpace(tuple(basis))
    # a low-rank d keeps both H¹ and H² nonzero, which is where higher brackets live
    rank = rng.randint(min(1, min(n1, n2) - 1), max(0, min(n1, n2) - 1)) if rank is None else rank
    dm = [[Fraction(0)] * n1 for _ in range(n2)]
    for _ in range(rank):
        u = [_rand(rng) for _ in range(n2)]
        w = [_rand(rng) for _ in range(n1)]
        for a in range(n2):
            for b in range(n1):
                dm[a][b] += u[a] * w[b]
    d_entries = [(i, n1 + j, dm[j][i]) for i in range(n1) for j in range(n2) if dm[j][i]]
    br_entries = [((i, j), n1 + k, _rand(rng)) for i in range(n1) for j in range(i, n1)
                  for k in range(n2) if rng.random() < density]
    return DGLA(sp, LinearMap.from_entries(sp, sp, 1, d_entries),
                MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, br_entries))


def weighted_two_step(rng: random.Random, n1: int = 2, n2: int = 2) -> DGLA:
    """A two-step DGLA with a central-charge element z of degree 0 acting by weights.

    Weights are additive under the bracket and preserved by d, so ad z is a
    derivation commuting with d.
    """
    w1 = [rng.randint(1, 2) for _ in range(n1)]
    basis = [("z", 0)] + [(f"x{i}", 1) for i in range(n1)] + [(f"y{i}", 2) for i in range(n2)]
    # weights of L² are drawn from the sums appearing among L¹ and L¹ weights
    pool = sorted({a + b for a in w1 for b in w1} | set(w1))
    w2 = [rng.choice(pool) for _ in range(n2)]
    sp = GradedSpace(tuple(basis))
    x0, y0 = 1, 1 + n1
    d_entries = [(x0 + i, y0 + j, _rand(rng)) for i in range(n1) for j in range(n2)
                 if w1[i] == w2[j]]
    br = [((0, x0 + i), x0 + i, Fraction(w1[i])) for i in range(n1)]
    br += [((0, y0 + j), y0 + j, Fraction(w2[j])) for j in range(n2)]
    br += [((x0 + i, x0 + j), y0 + k, _rand(rng)) for i in range(n1) for j in range(i, n1)
           for k in range(n2) if w1[i] + w1[j] == w2[k]]
    return DGLA(sp, LinearMap.from_entries(sp, sp, 1, d_entries),
                MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, br))


# small Lie algebras: name -> (dim, structure constants [(i, j, k, c)] meaning [e_i, e_j] = c e_k)
LIE_ALGEBRAS = {
    "abelian1": (1, []),
    "abelian2": (2, []),
    "aff": (2, [(0, 1, 1, 1)]),                       # [x, y] = y
    "heisenberg": (3, [(0, 1, 2, 1)]),                # [p, q] = z
    "sl2": (3, [(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]),  # basis h, e, f
}


def _representations(name: str, rng: random.Random):
    """Matrices ρ(e_i) for a few representations (lists of row lists)."""
    dim, consts = LIE_ALGEBRAS[name]
    ad = []
    for i in range(dim):
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for a, b, k, c in consts:
            if a == i:
                m[k][b] += c
            if b == i:
                m[k][a] -= c
        ad.append(m)
    reps = {"adjoint": ad}
    if name == "aff":
        lam = Fraction(rng.randint(-2, 2))
        reps["two"] = [[[lam + 1, 0], [0, lam]], [[0, 1], [0, 0]]]
        reps["one"] = [[[lam]], [[0]]]
    if name in ("abelian1", "abelian2"):
        reps["one"] = [[[Fraction(rng.randint(-2, 2))]] for _ in range(dim)]
    if name == "heisenberg":
        reps["one"] = [[[Fraction(rng.randint(-2, 2))]], [[Fraction(rng.randint(-2, 2))]], [[0]]]
    return reps


def lie_module(rng: random.Random, name: str | None = None, rep: str | None = None) -> DGLA:
    """g in degree 0 acting on a module V in degree 1, with d a coboundary g -> V.

    [V, V] = 0, so the only axiom beyond the Lie/module ones is the cocycle
    condition for d, which holds for d(x) = ρ(x) v₀.
    """
    name = name or rng.choice(sorted(LIE_ALGEBRAS))
    reps = _representations(name, rng)
    rep = rep or rng.choice(sorted(reps))
    rho = reps[rep]
    dim, consts = LIE_ALGEBRAS[name]
    m = len(rho[0])
    basis = [(f"g{i}", 0) for i in range(dim)] + [(f"v{j}", 1) for j in range(m)]
    sp = GradedSpace(tuple(basis))
    br = [((i, j), k, Fraction(c)) for i, j, k, c in consts]
    for i in range(dim):
        for r in range(m):
            for s in range(m):
                if rho[i][r][s]:
                    br.append(((i, dim + s), dim + r, rho[i][r][s]))
    v0 = [_rand(rng) for _ in range(m)]
    d = []
    for i in range(dim):
        for r in range(m):
            c = sum(rho[i][r][s] * v0[s] for s in range(m))
            if c:
                d.append((i, dim + r, c))
    return DGLA(sp, LinearMap.from_entries(sp, sp, 1, d),
                MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, br))


def direct_sum_dgla(A: DGLA, B: DGLA) -> DGLA:
    sp = A.space.direct_sum(B.space)
    off = A.dim
    d = [(j, i, c) for j, col in enumerate(A.d.columns) for i, c in col.items()]
    d += [(j + off, i + off, c) for j, col in enumerate(B.d.columns) for i, c in col.items()]
    br = [(k, t, c) for k, v in A.bracket.coeffs.items() for t, c in v.items()]
    br += [(tuple(i + off for i in k), t + off, c) for k, v in B.bracket.coeffs.items()
           for t, c in v.items()]
    return DGLA(sp, LinearMap.from_entries(sp, sp, 1, d),
                MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, br))


def change_of_basis(L: DGLA, rng: random.Random) -> DGLA:
    """Conjugate by a random degree-preserving invertible matrix T: new structure T⁻¹(·)T."""
    n = L.dim
    while True:
        T = [[Fraction(0)] * n for _ in range(n)]
        for idx in L.space.by_degree.values():
            for a in idx:
                for b in idx:
                    T[a][b] = Fraction(rng.randint(-1, 1)) + (1 if a == b else 0)
        try:
            Tinv = linalg.inverse(T)
            break
        except ValueError:
            continue
    sp = L.space
    cols_T = [{i: T[i][j] for i in range(n) if T[i][j]} for j in range(n)]
    Tm = LinearMap(sp, sp, 0, cols_T)
    Ti = LinearMap.from_matrix(sp, sp, 0, Tinv)
    d = Ti.compose(L.d).compose(Tm)
    br = L.bracket.restrict(Tm).postcompose(Ti)
    return DGLA(sp, d, br)


# small commutative DGAs: name -> (basis [(name, degree)], d [(i, j, c)], product [(i, j, k, c)])
# each is ℚ·1 ⊕ (acyclic part), unit at index 0
CDGAS = {
    "dual0": ([("1", 0), ("s", 0), ("ds", 1)], [(1, 2, 1)],
              [(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1)]),
    "dual1": ([("1", 0), ("s", 1), ("ds", 2)], [(1, 2, 1)],
              [(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1)]),
    # ℚ[s]/(s³) with ds = ξ and s²ξ = 0
    "trunc3": ([("1", 0), ("s", 0), ("s2", 0), ("ds", 1), ("sds", 1)], [(1, 3, 1), (2, 4, 2)],
               [(0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1), (0, 4, 4, 1),
                (1, 1, 2, 1), (1, 3, 4, 1)]),
}


def _cdga_product(name):
    basis, _, prod = CDGAS[name]
    degs = [d for _, d in basis]
    table = {}
    for i, j, k, c in prod:
        table[(i, j)] = (k, Fraction(c))
        if i != j:
            table[(j, i)] = (k, Fraction(c) * (-1) ** ((degs[i] * degs[j]) % 2))
    return table


def tensor_dgla(A: str, g: DGLA) -> DGLA:
    """A ⊗ g for a commutative DGA A and a DGLA g.

    [a⊗x, b⊗y] = (-1)^{|x||b|} ab ⊗ [x,y],  d(a⊗x) = da⊗x + (-1)^{|a|} a⊗dx.
    """
    abasis, ad, _ = CDGAS[A]
    prod = _cdga_product(A)
    gn, gd = g.space.names, g.space.degrees
    m = g.dim
    basis = [(f"{an}*{gn[x]}", adeg + gd[x]) for an, adeg in abasis for x in range(m)]
    sp = GradedSpace(tuple(basis))
    adeg = [d for _, d in abasis]
    d = []
    for i, j, c in ad:
        for x in range(m):
            d.append((i * m + x, j * m + x, Fraction(c)))
    for a in range(len(abasis)):
        for x, col in enumerate(g.d.columns):
            for y, c in col.items():
                d.append((a * m + x, a * m + y, c * (-1) ** (adeg[a] % 2)))
    br = {}
    for (a, b), (k, c) in prod.items():
        for key, val in g.bracket.coeffs.items():
            x, y = key
            for z, cz in val.items():
                s = c * cz * (-1) ** ((gd[x] * adeg[b]) % 2)
                br_key = (a * m + x, b * m + y)
                br.setdefault(br_key, {})
                br[br_key][k * m + z] = br[br_key].get(k * m + z, 0) + s
    entries = []
    for key, val in br.items():
        for t, c in val.items():
            if c:
                entries.append((key, t, c))
    dd: dict = {}
    for j, i, c in d:
        dd[(j, i)] = dd.get((j, i), 0) + c
    return DGLA(sp, LinearMap.from_entries(sp, sp, 1, [(j, i, c) for (j, i), c in dd.items() if c]),
                MultiMap.from_function(sp, sp, 2, 0, ANTISYMMETRIC,
                                       lambda k: _bracket_value(k, br, sp), check=True))


def _bracket_value(key, table, sp):
    i, j = key
    if (i, j) in table:
        return {t: c for t, c in table[(i, j)].items() if c}
    if (j, i) in table:
        s = -(-1) ** ((sp.degrees[i] * sp.degrees[j]) % 2)
        return {t: s * c for t, c in table[(j, i)].items() if c}
    return {}


def lie_dgla(name: str) -> DGLA:
    dim, consts = LIE_ALGEBRAS[name]
    sp = GradedSpace(tuple((f"e{i}", 0) for i in range(dim)))
    br = [((i, j), k, Fraction(c)) for i, j, k, c in consts]
    return DGLA(sp, LinearMap.zero(sp, sp, 1), MultiMap.from_entries(sp, sp, 2, 0, ANTISYMMETRIC, br))


def tensor_family(rng: random.Random, max_dim: int = 6) -> DGLA:
    """A ⊗ g with dim ≤ max_dim; falls back to the abelian line when nothing bigger fits."""
    gs = ["aff", "heisenberg", "sl2", "two_step", "abelian1"]
    dims = {"two_step": 2}
    fits = [(A, g) for A in sorted(CDGAS) for g in gs
            if len(CDGAS[A][0]) * dims.get(g, LIE_ALGEBRAS.get(g, (0,))[0]) <= max_dim]
    if not fits:
        raise ValueError(f"no tensor DGLA of dimension <= {max_dim}")
    nontrivial = [p for p in fits if p[1] != "abelian1"]
    A, g = rng.choice(nontrivial or fits)
    return tensor_dgla(A, two_step(rng, 1, 1, rank=0) if g == "two_step" else lie_dgla(g))


FAMILIES = ("two_step", "weighted", "lie_module", "sum", "tensor")
# two-step algebras are the main source of nonzero higher brackets, so the
# reproducible corpus visits them more often
CYCLE = ("two_step", "weighted", "two_step", "lie_module", "two_step", "sum", "tensor")


def random_dgla(rng: random.Random, family: str | None = None, max_dim: int = 6) -> DGLA:
    family = family or rng.choice(FAMILIES)
    if family == "two_step":
        n1 = rng.randint(2, 3)
        n2 = rng.randint(2, min(3, max_dim - n1))
        L = two_step(rng, n1, n2)
    elif family == "weighted":
        n1 = rng.randint(1, 3)
        n2 = rng.randint(1, min(2, max_dim - 1 - n1))
        L = weighted_two_step(rng, n1, n2)
    elif family == "lie_module":
        while True:
            L = lie_module(rng)
            if L.dim <= max_dim:
                break
    elif family == "sum":
        A = two_step(rng, rng.randint(1, 2), 1)
        while True:
            B = lie_module(rng, rng.choice(["aff", "abelian1", "abelian2"]))
            if A.dim + B.dim <= max_dim:
                break
        L = direct_sum_dgla(A, B)
    elif family == "tensor":
        L = tensor_family(rng, max_dim)
    else:
        raise ValueError(f"unknown family {family!r}")
    if rng.random() < 0.7:
        L = change_of_basis(L, rng)
    return L


def random_split_dgla(rng: random.Random, family: str | None = None,
                      max_dim: int = 6) -> tuple:
    L = random_dgla(rng, family, max_dim)
    return L, random_splitting(L, rng)


def corpus(seed: int, count: int, max_dim: int = 6) -> list:
    """A reproducible list of (DGLA, Splitting) pairs cycling through ``CYCLE``."""
    rng = random.Random(seed)
    return [random_split_dgla(rng, CYCLE[i % len(CYCLE)], max_dim) for i in range(count)]
