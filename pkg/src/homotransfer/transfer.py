"""
Split DGLAs and the explicit transfer: the minimal L∞-structure μ on H,
the quasi-isomorphism f: H -> L, the morphism g: F -> L, the decomposition
isomorphism f ⊕ g and the Kuranishi map.

Independent oracles live here as well: an order-by-order solver for the
coalgebra morphism equation and an order-by-order Maurer-Cartan lift.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Sequence

from . import linalg
from .coalgebra import (CoalgMorphism, LInftyAlgebra, LInftyMorphism, Verdict, complete_direct_sum,
                        compose, direct_sum_morphism, insert_first, is_identity, jacobi_check,
                        left_inverse, morphism_check)
from .graded import (ANTISYMMETRIC, SYMMETRIC, GradedSpace, LinearMap, MultiMap, axpy,
                     decalage_down, decalage_up, graded_commutator, shift_linear, vscale)
from .trees import AlternatingTreeEvaluator, e_sign, enumerate_ot

RAW = "raw"
FACTORIAL = "factorial"
# raw α_n, every tree sign e(φ) replaced by (-1)^n e(φ) in μ_n and f_n, and
# g_n scaled by (-1)^{n-1}/n! instead of (-1/2)^{n-1}.  Found by fitting the
# morphism equation; the printed scalars fail it at odd n (μ, f) and n ≥ 3 (g).
CORRECTED = "corrected"
NORMALIZATIONS = (RAW, FACTORIAL, CORRECTED)


# -- DGLAs ------------------------------------------------------------------

@dataclass
class DGLA:
    space: GradedSpace
    d: LinearMap
    bracket: MultiMap

    def __post_init__(self):
        if self.d.source != self.space or self.d.target != self.space:
            raise ValueError("d must be an endomorphism of the space")
        if not self.d.is_zero() and self.d.degree != 1:
            raise ValueError("d must have degree +1")
        b = self.bracket
        if b.arity != 2 or b.flavor != ANTISYMMETRIC:
            raise ValueError("the bracket is an antisymmetric bilinear map")
        if b.source != self.space or b.target != self.space:
            raise ValueError("the bracket lives on the wrong space")
        if b.coeffs and b.lin_degree != 0:
            raise ValueError("the bracket must have degree 0")

    @property
    def dim(self) -> int:
        return self.space.dim

    def linfty(self, cap: int) -> LInftyAlgebra:
        return LInftyAlgebra.from_dgla(self.space, self.d, self.bracket, cap)

    def scaled(self, lam) -> "DGLA":
        return DGLA(self.space, self.d, self.bracket.scale(lam))


@dataclass
class DglaVerdict:
    ok: bool
    violations: list  # (axiom, witness names)

    def __bool__(self):
        return self.ok


def validate_dgla(L: DGLA) -> DglaVerdict:
    """Checks d² = 0, Leibniz and Jacobi on basis elements; lists witnesses."""
    sp, d, br = L.space, L.d, L.bracket
    names, degs = sp.names, sp.degrees
    n = sp.dim
    bad = []
    for i in range(n):
        if d(d.columns[i]):
            bad.append(("d squared", (names[i],)))
    for i in range(n):
        for j in range(n):
            lhs = d(br(i, j))
            rhs = br.apply([d.columns[i], {j: Fraction(1)}])
            axpy(rhs, (-1) ** (degs[i] % 2), br.apply([{i: Fraction(1)}, d.columns[j]]))
            if lhs != rhs:
                bad.append(("Leibniz", (names[i], names[j])))
    for i in range(n):
        for j in range(n):
            for k in range(n):
                a = br.apply([{i: Fraction(1)}, br(j, k)])
                b = br.apply([br(i, j), {k: Fraction(1)}])
                axpy(b, (-1) ** ((degs[i] * degs[j]) % 2), br.apply([{j: Fraction(1)}, br(i, k)]))
                if a != b:
                    bad.append(("Jacobi", (names[i], names[j], names[k])))
    return DglaVerdict(not bad, bad)


# -- splittings -------------------------------------------------------------

@dataclass
class Splitting:
    eta: LinearMap


def _dense(lm: LinearMap) -> list:
    return lm.matrix()


def _col(v: Sequence, dim: int) -> dict:
    return {i: Fraction(x) for i, x in enumerate(v) if x}


def _vec(v: dict, dim: int) -> list:
    out = [Fraction(0)] * dim
    for i, x in v.items():
        out[i] = x
    return out


def splitting_identities(L: DGLA, eta: LinearMap) -> dict:
    d = L.d
    return {
        "d eta d = d": d.compose(eta).compose(d) == d,
        "eta eta = 0": eta.compose(eta).is_zero(),
        "eta d eta = eta": eta.compose(d).compose(eta) == eta,
    }


def _kernel_in_degree(L: DGLA, deg: int) -> list:
    """Kernel of d on L^deg as full-length vectors."""
    idx = L.space.by_degree.get(deg, [])
    dim = L.dim
    if not idx:
        return []
    rows = [[L.d.columns[j].get(i, Fraction(0)) for j in idx] for i in range(dim)]
    rows = [r for r in rows if any(r)]
    null = linalg.nullspace(rows, len(idx))
    out = []
    for v in null:
        full = [Fraction(0)] * dim
        for a, j in enumerate(idx):
            full[j] = v[a]
        out.append(full)
    return out


def _unit_vectors(L, deg):
    dim = L.dim
    return [[Fraction(int(i == j)) for i in range(dim)] for j in L.space.by_degree.get(deg, [])]


def _random_vectors(L, deg, rng, count, spread=3):
    dim = L.dim
    idx = L.space.by_degree.get(deg, [])
    out = []
    for _ in range(count):
        v = [Fraction(0)] * dim
        for j in idx:
            v[j] = Fraction(rng.randint(-spread, spread))
        out.append(v)
    return out


def _assemble_eta(L: DGLA, C: dict, H: dict) -> LinearMap:
    """η = (d|_C)^{-1} on im d, zero on H ⊕ C; C, H are per-degree vector lists."""
    dim = L.dim
    cols, images = [], []
    for deg in sorted(L.space.by_degree):
        for c in C.get(deg, []):
            dc = _vec(L.d(_col(c, dim)), dim)
            cols.append(dc)
            images.append(c)
    for deg in sorted(L.space.by_degree):
        for v in H.get(deg, []) + C.get(deg, []):
            cols.append(list(v))
            images.append([Fraction(0)] * dim)
    if len(cols) != dim:
        raise AssertionError("complement data does not span the space")
    M = linalg.transpose(cols)
    Minv = linalg.inverse(M)
    N = linalg.transpose(images)
    E = linalg.matmul(N, Minv)
    return LinearMap.from_matrix(L.space, L.space, -1, E)


def _complements(L: DGLA, rng: random.Random | None):
    """Per degree: C (complement of ker d) and H (complement of im d in ker d)."""
    C, H = {}, {}
    dim = L.dim
    for deg in sorted(L.space.by_degree):
        ker = _kernel_in_degree(L, deg)
        n_deg = len(L.space.by_degree[deg])
        cands = (_unit_vectors(L, deg) if rng is None else
                 _random_vectors(L, deg, rng, 4 * n_deg + 4) + _unit_vectors(L, deg))
        C[deg] = linalg.complement_basis(ker, dim, cands)
    for deg in sorted(L.space.by_degree):
        im = [_vec(L.d(_col(c, dim)), dim) for c in C.get(deg - 1, [])]
        ker = _kernel_in_degree(L, deg)
        if rng is None:
            cands = ker
        else:
            cands = []
            for _ in range(4 * len(ker) + 4):
                v = [Fraction(0)] * dim
                for kv in ker:
                    c = rng.randint(-2, 2)
                    if c:
                        v = [a + c * b for a, b in zip(v, kv)]
                cands.append(v)
            cands += ker
        H[deg] = linalg.complement_basis(im, dim, cands)
    return C, H


def build_splitting(L: DGLA) -> Splitting:
    """Splitting from canonical complements L = H ⊕ im d ⊕ C."""
    C, H = _complements(L, None)
    eta = _assemble_eta(L, C, H)
    return Splitting(eta)


def random_splitting(L: DGLA, rng: random.Random) -> Splitting:
    """Splitting from randomly chosen complements."""
    C, H = _complements(L, rng)
    return Splitting(_assemble_eta(L, C, H))


def normalize_splitting(L: DGLA, eta0: LinearMap) -> Splitting:
    """Rebuild a splitting with η² = 0 and ηdη = η from any η0 with dη0d = d.

    C := im(η0 d) complements ker d and H := ker d ∩ ker(d η0) complements
    im d inside ker d; η0 itself is returned when it is already normalized.
    """
    d = L.d
    if eta0.source != L.space or eta0.target != L.space:
        raise ValueError("eta0 must be an endomorphism of the space")
    if not eta0.is_zero() and eta0.degree != -1:
        raise ValueError("eta0 must have degree -1")
    if d.compose(eta0).compose(d) != d:
        raise ValueError("eta0 does not satisfy d eta d = d")
    dim = L.dim
    eta0d = eta0.compose(d)
    deta0 = d.compose(eta0)
    C, H = {}, {}
    for deg, idx in L.space.by_degree.items():
        vecs = [_vec(eta0d.columns[j], dim) for j in idx]
        C[deg] = linalg.column_space(vecs, dim)
        rows = [list(r) for r in linalg.transpose([_vec(d.columns[j], dim) for j in idx])]
        rows += [list(r) for r in linalg.transpose([_vec(deta0.columns[j], dim) for j in idx])]
        rows = [r for r in rows if any(r)]
        null = linalg.nullspace(rows, len(idx))
        Hd = []
        for v in null:
            full = [Fraction(0)] * dim
            for a, j in enumerate(idx):
                full[j] = v[a]
            Hd.append(full)
        H[deg] = Hd
    return Splitting(_assemble_eta(L, C, H))


# -- Hodge data -------------------------------------------------------------

@dataclass
class HodgeData:
    """H = ker d ∩ ker η and F = im [d, η] with echelon bases and projectors."""

    L: DGLA
    eta: LinearMap
    proj_H: LinearMap
    proj_F: LinearMap
    H: GradedSpace
    F: GradedSpace
    H_basis: list  # sparse vectors in L
    F_basis: list
    H_pivots: list
    F_pivots: list

    @property
    def incl_H(self) -> LinearMap:
        return LinearMap(self.H, self.L.space, 0, self.H_basis, check=False)

    @property
    def incl_F(self) -> LinearMap:
        return LinearMap(self.F, self.L.space, 0, self.F_basis, check=False)

    def coords_H(self, v: dict) -> dict:
        """H-coordinates of π_H v."""
        w = self.proj_H(v)
        return {j: w[p] for j, p in enumerate(self.H_pivots) if w.get(p)}

    def coords_F(self, v: dict) -> dict:
        w = self.proj_F(v)
        return {j: w[p] for j, p in enumerate(self.F_pivots) if w.get(p)}

    @property
    def to_H(self) -> LinearMap:
        return LinearMap(self.L.space, self.H, 0,
                         [self.coords_H({i: Fraction(1)}) for i in range(self.L.dim)], check=False)

    @property
    def to_F(self) -> LinearMap:
        return LinearMap(self.L.space, self.F, 0,
                         [self.coords_F({i: Fraction(1)}) for i in range(self.L.dim)], check=False)

    def F_algebra(self, cap: int) -> LInftyAlgebra:
        """(F, d|_F) as a linear L∞-algebra."""
        d = self.L.d
        cols = [self.coords_F(d(v)) for v in self.F_basis]
        dF = LinearMap(self.F, self.F, 1, cols)
        return LInftyAlgebra.from_dgla(self.F, dF, MultiMap.zero(self.F, self.F, 2, 0, ANTISYMMETRIC), cap)

    def betti(self) -> dict:
        out: dict = {}
        for _, deg in self.H.basis:
            out[deg] = out.get(deg, 0) + 1
        return out


def _echelon_subspace(space: GradedSpace, proj: LinearMap, prefix: str):
    dim = space.dim
    basis, pivots, names = [], [], []
    for deg in sorted(space.by_degree):
        idx = space.by_degree[deg]
        vecs = [_vec(proj.columns[j], dim) for j in idx]
        for v in linalg.column_space(vecs, dim):
            p = linalg.pivot_of(v)
            basis.append(_col(v, dim))
            pivots.append(p)
            names.append((f"{prefix}[{space.names[p]}]", deg))
    return GradedSpace(tuple(names)), basis, pivots


def hodge(L: DGLA, split: Splitting | LinearMap) -> HodgeData:
    eta = split.eta if isinstance(split, Splitting) else split
    bad = [k for k, ok in splitting_identities(L, eta).items() if not ok]
    if bad:
        raise ValueError(f"splitting identities fail: {', '.join(bad)}")
    ident = LinearMap.identity(L.space)
    dn = graded_commutator(L.d, eta) if not (L.d.is_zero() or eta.is_zero()) else \
        LinearMap.zero(L.space, L.space, 0)
    pF = LinearMap(L.space, L.space, 0, dn.columns, check=False)
    pH = ident - pF
    H, Hb, Hp = _echelon_subspace(L.space, pH, "h")
    F, Fb, Fp = _echelon_subspace(L.space, pF, "f")
    return HodgeData(L, eta, pH, pF, H, F, Hb, Fb, Hp, Fp)


# -- the tree formulas ------------------------------------------------------

def _scale_factor(n: int, normalization: str, signed: bool = True) -> Fraction:
    """Scalar in front of the tree sum; ``signed`` marks sums weighted by e(φ)."""
    c = Fraction(-1, 2) ** (n - 1)
    if normalization == FACTORIAL:
        c /= factorial(n)
    elif normalization == CORRECTED:
        c = c * (-1) ** n if signed else Fraction((-1) ** (n - 1), factorial(n))
    elif normalization != RAW:
        raise ValueError(f"unknown normalization {normalization!r}")
    return c


def _node_maps(hd: HodgeData):
    br = hd.L.bracket
    g = br.postcompose(hd.eta)
    proot = br.postcompose(hd.proj_H)
    return br, g, proot


def tree_sum(hd: HodgeData, n: int, inputs, degrees, root, other, leaf_map, signed=True):
    """Σ_φ e(φ) φ(root, other, …)∘(leaf maps)∘α_n as a function on input-index tuples."""
    evaluators = []
    for t in enumerate_ot(n):
        ev = AlternatingTreeEvaluator(t, lambda p: root if not p else other, leaf_map,
                                      inputs, degrees)
        evaluators.append((e_sign(t) if signed else 1, ev))

    def fn(key):
        acc: dict = {}
        for s, ev in evaluators:
            axpy(acc, s, ev(key))
        return acc

    return fn


def transfer_mu(L: DGLA, split: Splitting, cap: int, normalization: str = RAW,
                hd: HodgeData | None = None) -> LInftyAlgebra:
    """μ_n = (-1/2)^{n-1} Σ_φ e(φ) φ((1-[d,η])[,], g, …, g) ∘ α_n on H, g = η[,]."""
    hd = hd or hodge(L, split)
    H = hd.H
    _, g, proot = _node_maps(hd)
    inputs = hd.H_basis
    degs = H.degrees
    mu = {}
    for n in range(2, cap + 1):
        c = _scale_factor(n, normalization)
        fn = tree_sum(hd, n, inputs, degs, proot, g, lambda i: None)
        m = MultiMap.from_function(H, H, n, 2 - n, ANTISYMMETRIC,
                                   lambda key: vscale(c, hd.coords_H(fn(key))))
        if not m.is_zero():
            mu[n] = m
    return LInftyAlgebra(H, cap, mu)


def transfer_f(L: DGLA, split: Splitting, cap: int, normalization: str = RAW,
               hd: HodgeData | None = None, mu: LInftyAlgebra | None = None) -> LInftyMorphism:
    """f_1 = inclusion, f_n = -(-1/2)^{n-1} Σ_φ e(φ) φ(g, …, g) ∘ α_n."""
    hd = hd or hodge(L, split)
    mu = mu or transfer_mu(L, split, cap, normalization, hd)
    H = hd.H
    _, g, _ = _node_maps(hd)
    comps = {1: MultiMap(H, L.space, 1, 0, ANTISYMMETRIC,
                         {(j,): v for j, v in enumerate(hd.H_basis)}, check=False)}
    for n in range(2, cap + 1):
        c = -_scale_factor(n, normalization)
        fn = tree_sum(hd, n, hd.H_basis, H.degrees, g, g, lambda i: None)
        m = MultiMap.from_function(H, L.space, n, 1 - n, ANTISYMMETRIC,
                                   lambda key: vscale(c, fn(key)))
        if not m.is_zero():
            comps[n] = m
    return LInftyMorphism(mu, L.linfty(cap), cap, comps)


def embed_g(L: DGLA, split: Splitting, cap: int, normalization: str = RAW,
            hd: HodgeData | None = None) -> LInftyMorphism:
    """g_1 = inclusion, g_n = (-1/2)^{n-1} Σ_φ Φ ∘ (η^{⊗n-1} ⊗ 1) ∘ α_n, Φ = φ([,],…,[,])."""
    hd = hd or hodge(L, split)
    F = hd.F
    br = L.bracket
    eta = hd.eta
    comps = {1: MultiMap(F, L.space, 1, 0, ANTISYMMETRIC,
                         {(j,): v for j, v in enumerate(hd.F_basis)}, check=False)}
    for n in range(2, cap + 1):
        c = _scale_factor(n, normalization, signed=False)
        fn = tree_sum(hd, n, hd.F_basis, F.degrees, br, br,
                      lambda i, n=n: eta if i < n else None, signed=False)
        m = MultiMap.from_function(F, L.space, n, 1 - n, ANTISYMMETRIC,
                                   lambda key: vscale(c, fn(key)))
        if not m.is_zero():
            comps[n] = m
    return LInftyMorphism(hd.F_algebra(cap), L.linfty(cap), cap, comps)


@dataclass
class TransferResult:
    hodge: HodgeData
    mu: LInftyAlgebra
    f: LInftyMorphism
    g: LInftyMorphism
    normalization: str
    jacobi: Verdict
    f_check: Verdict
    g_check: Verdict
    probed: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.jacobi) and bool(self.f_check) and bool(self.g_check)


def transfer(L: DGLA, split: Splitting, cap: int, probe: bool = False) -> TransferResult:
    """Runs all three constructions and verifies them.

    Readings are tried in the order of NORMALIZATIONS, starting with the
    printed one, until one verifies; ``probe`` evaluates all of them.
    ``probed`` records the verdict of every reading that was evaluated.
    """
    hd = hodge(L, split)
    results = {}
    for norm in NORMALIZATIONS:
        if results and not probe and any(r.ok for r in results.values()):
            break
        mu = transfer_mu(L, split, cap, norm, hd)
        f = transfer_f(L, split, cap, norm, hd, mu)
        g = embed_g(L, split, cap, norm, hd)
        results[norm] = TransferResult(hd, mu, f, g, norm, jacobi_check(mu),
                                       morphism_check(f), morphism_check(g))
    chosen = next((r for r in results.values() if r.ok), results[RAW])
    chosen.probed = {k: r.ok for k, r in results.items()}
    return chosen


# -- decomposition ----------------------------------------------------------

def decompose(L: DGLA, split: Splitting, cap: int, hd: HodgeData | None = None,
              f: LInftyMorphism | None = None, g: LInftyMorphism | None = None,
              complete: bool = False):
    """(iso, inverse) with iso = f ⊕ g and inverse its left inverse.

    The plain f ⊕ g vanishes on mixed inputs and fails the morphism
    condition as soon as [H, F] ≠ 0; ``complete`` solves for its mixed
    components instead, leaving the pure ones equal to f and g.
    """
    hd = hd or hodge(L, split)
    f = f or transfer_f(L, split, cap, CORRECTED, hd)
    g = g or embed_g(L, split, cap, CORRECTED, hd)
    iso = complete_direct_sum(f, g) if complete else direct_sum_morphism(f, g)
    lin = iso.linear_part()
    inv1 = LinearMap.from_matrix(L.space, iso.source.space, 0, linalg.inverse(lin.matrix()))
    inverse = left_inverse(iso, inv1)
    return iso, inverse


def round_trip(iso: LInftyMorphism, inverse: LInftyMorphism) -> dict:
    return {"inverse o iso": is_identity(compose(inverse, iso)),
            "iso o inverse": is_identity(compose(iso, inverse))}


# -- Kuranishi --------------------------------------------------------------

REMARK = "remark"
MC = "mc"


def _kuranishi_sign(n: int, convention: str) -> int:
    if convention == REMARK:
        return 1
    if convention == MC:
        return (-1) ** ((n - 1) * (n - 2) // 2)
    raise ValueError(f"unknown convention {convention!r}")


def kuranishi_series(A: LInftyAlgebra, x: dict, cap: int | None = None,
                     convention: str = REMARK) -> dict:
    """Coefficients of t^n in the Kuranishi map at t·x.

    REMARK is Σ (1/n!) μ_n(x, …, x).  MC inserts (-1)^{(n-1)(n-2)/2}, the
    sign with which μ_n enters the Maurer-Cartan equation when the DGLA
    equation is dy + ½[y, y] = 0; that series equals the obstructions of the
    order-by-order lift exactly.
    """
    cap = cap or A.cap
    if A.space.vector_degree(x) not in (None, 1):
        raise ValueError("the Kuranishi map is defined on degree-1 elements")
    out = {}
    for n in range(2, cap + 1):
        m = A.mu.get(n)
        c = Fraction(_kuranishi_sign(n, convention), factorial(n))
        out[n] = vscale(c, m.apply([x] * n)) if m is not None and x else {}
    return out


def kuranishi(A: LInftyAlgebra, x: dict, cap: int | None = None,
              convention: str = REMARK) -> dict:
    """Σ_{n=2}^{cap} ± (1/n!) μ_n(x, …, x) for x of degree 1."""
    acc: dict = {}
    for v in kuranishi_series(A, x, cap, convention).values():
        axpy(acc, 1, v)
    return acc


@dataclass
class MCLift:
    y: dict          # order -> element of L^1
    obstruction: dict  # order -> H-coordinates of π_H o_m
    residual: dict   # order -> coefficient of dy + ½[y,y]


def mc_lift(L: DGLA, hd: HodgeData, x_H: dict, order: int) -> MCLift:
    """Order-by-order solution of y = x - ½η[y,y] and the resulting obstructions.

    o_m = ½ Σ_{i+j=m} [y_i, y_j],  y_m = -η o_m  (m ≥ 2).
    """
    br, eta, d = L.bracket, hd.eta, L.d
    y = {1: hd.incl_H(x_H)}
    obst, resid = {}, {}
    resid[1] = d(y[1])
    for m in range(2, order + 1):
        o: dict = {}
        for i in range(1, m):
            if y[i] and y[m - i]:
                axpy(o, Fraction(1, 2), br.apply([y[i], y[m - i]]))
        y[m] = vscale(-1, eta(o))
        obst[m] = hd.coords_H(o)
        r = d(y[m])
        axpy(r, 1, o)
        resid[m] = r
    return MCLift(y, obst, resid)


# -- order-by-order oracle --------------------------------------------------

def recursion_oracle(L: DGLA, hd: HodgeData, cap: int):
    """Solves the coalgebra morphism equation H -> L arity by arity.

    With F_n in the image of η and Q^H_n valued in H, the equation at arity n
    reads D F_n - F_1 Q^H_n + E_n = 0, where E_n collects the lower terms;
    hence Q^H_n = π_H E_n and F_n = -η E_n.  Returns (μ, f) unshifted.
    """
    Hs, Ls = hd.H.shift(), L.space.shift()
    target = L.linfty(cap).coderivation()
    to_H = shift_linear(hd.to_H)
    eta_s = shift_linear(hd.eta)
    F = {1: decalage_down(MultiMap(hd.H, L.space, 1, 0, ANTISYMMETRIC,
                                   {(j,): v for j, v in enumerate(hd.H_basis)}, check=False))}
    Q: dict = {}
    for n in range(2, cap + 1):
        FF = CoalgMorphism(Hs, Ls, n, dict(F))
        lhs = FF.composite({k: q for k, q in target.components.items() if k <= n}, n)
        rhs = MultiMap.zero(Hs, Ls, n, 1, SYMMETRIC)
        for k in range(2, n):
            l = n + 1 - k
            if l in F and k in Q:
                rhs = rhs + insert_first(F[l], Q[k])
        E = lhs - rhs
        q = E.postcompose(to_H)
        fn = E.postcompose(eta_s).scale(-1)
        if not q.is_zero():
            Q[n] = q
        if not fn.is_zero():
            F[n] = fn
    mu = LInftyAlgebra(hd.H, cap, {n: decalage_up(q, hd.H, hd.H) for n, q in Q.items()})
    f = LInftyMorphism(mu, L.linfty(cap), cap,
                       {n: decalage_up(m, hd.H, L.space) for n, m in F.items()})
    return mu, f


def lift_agreement(L: DGLA, hd: HodgeData, A: LInftyAlgebra, x_H: dict, order: int) -> dict:
    """Per order m: does the MC-convention Kuranishi coefficient equal π_H o_m of the lift?"""
    series = kuranishi_series(A, x_H, order, MC)
    lift = mc_lift(L, hd, x_H, order)
    return {m: series[m] == lift.obstruction[m] for m in range(2, order + 1)}
