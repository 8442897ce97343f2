"""
Finite-dimensional normed models and the analytic estimates.

A model puts an ℓ1 norm ||x||_λ = Σ |x_i| w_i λ^{p_i} on a graded space.
In Banach mode all p_i vanish.  Multilinear operator norms over ℓ1 balls are
attained at (scaled) basis tuples, so every norm here is an exact rational.
Polynomial norms ||φ̃|| are not computed exactly; the code uses the
multilinear norm |φ| as an upper bound and polarization points as a lower
bound, which is enough to certify each inequality in the direction needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Sequence

from . import linalg
from .coalgebra import LInftyMorphism, left_inverse
from .graded import ANTISYMMETRIC, GradedSpace, LinearMap, MultiMap, scalar
from .trees import OrientedTree, evaluate

HALF = Fraction(1, 2)
BANACH = "banach"
SCALED = "scaled"


# -- models -----------------------------------------------------------------

@dataclass(frozen=True)
class NormModel:
    space: GradedSpace
    weights: tuple
    exponents: tuple | None = None  # None: Banach mode

    def __post_init__(self):
        if len(self.weights) != self.space.dim:
            raise ValueError("one weight per basis element is required")
        if any(scalar(w) <= 0 for w in self.weights):
            raise ValueError("weights must be positive")
        if self.exponents is not None:
            if len(self.exponents) != self.space.dim:
                raise ValueError("one exponent per basis element is required")
            if any(int(p) != p or p < 0 for p in self.exponents):
                raise ValueError("exponents must be nonnegative integers")
        object.__setattr__(self, "weights", tuple(Fraction(w) for w in self.weights))

    @classmethod
    def banach(cls, space: GradedSpace, weights: Sequence | None = None) -> "NormModel":
        return cls(space, tuple(weights) if weights is not None else (Fraction(1),) * space.dim)

    @classmethod
    def scaled(cls, space: GradedSpace, weights: Sequence, exponents: Sequence) -> "NormModel":
        return cls(space, tuple(weights), tuple(int(p) for p in exponents))

    @property
    def mode(self) -> str:
        return BANACH if self.exponents is None else SCALED

    def exponent(self, i: int) -> int:
        return 0 if self.exponents is None else self.exponents[i]

    def norm(self, v: dict, lam=1) -> Fraction:
        lam = Fraction(lam)
        return sum((abs(c) * self.weights[i] * lam ** self.exponent(i) for i, c in v.items()),
                   Fraction(0))

    def sub(self, indices: Sequence[int], space: GradedSpace) -> "NormModel":
        """The model restricted to a coordinate subspace (basis ``indices`` of self.space)."""
        w = tuple(self.weights[i] for i in indices)
        p = None if self.exponents is None else tuple(self.exponents[i] for i in indices)
        return NormModel(space, w, p)


@dataclass
class MapNorms:
    norm0: Fraction
    norm1: Fraction


def _check_eps(eps) -> Fraction:
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return eps


def _keys(phi: MultiMap, allowed: Callable[[int], bool] | None):
    for key, val in phi.coeffs.items():
        if allowed is None or all(allowed(i) for i in key):
            yield key, val


def op_norm0(phi: MultiMap | LinearMap, src: NormModel, eps=HALF, tgt: NormModel | None = None,
             allowed: Callable[[int], bool] | None = None) -> Fraction:
    """|φ|^{0,ε}: sup of ||φ(x_1..x_p)||_λ over ||x_i||_λ ≤ 1, 1-ε ≤ λ < 1.

    ``allowed`` restricts the inputs to a coordinate subspace.  In scaled mode
    each basis tuple gives Σ_t a_t λ^{d_t}; the per-term maxima over the window
    are summed, which is an upper bound (exact when all d_t have one sign).
    """
    eps = _check_eps(eps)
    if isinstance(phi, LinearMap):
        phi = phi.as_multimap()
    tgt = tgt or src
    if phi.source != src.space or phi.target != tgt.space:
        raise ValueError("models do not match the map")
    lo = 1 - eps
    best = Fraction(0)
    for key, val in _keys(phi, allowed):
        wsrc = Fraction(1)
        psrc = 0
        for i in key:
            wsrc *= src.weights[i]
            psrc += src.exponent(i)
        total = Fraction(0)
        for t, c in val.items():
            d = tgt.exponent(t) - psrc
            total += abs(c) * tgt.weights[t] * max(Fraction(1), lo ** d)
        best = max(best, total / wsrc)
    return best


def op_norm1(phi: MultiMap | LinearMap, src: NormModel, eps=HALF, tgt: NormModel | None = None,
             allowed: Callable[[int], bool] | None = None) -> Fraction:
    """|φ|^{1,ε}: sup of (λ'-λ)^{p-1} ||φ(x)||_λ over ||x_i||_{λ'} ≤ 1.

    Banach mode: exactly ε^{p-1} |φ|^{0,ε}.  Scaled mode: bound (λ'-λ) by ε,
    ||e_t||_λ by ||e_t||_1 and ||e_i||_{λ'} from below by its value at 1-ε.
    """
    eps = _check_eps(eps)
    if isinstance(phi, LinearMap):
        phi = phi.as_multimap()
    tgt = tgt or src
    p = phi.arity
    if src.mode == BANACH and tgt.mode == BANACH:
        return eps ** (p - 1) * op_norm0(phi, src, eps, tgt, allowed)
    lo = 1 - eps
    best = Fraction(0)
    for key, val in _keys(phi, allowed):
        denom = Fraction(1)
        for i in key:
            denom *= src.weights[i] * lo ** src.exponent(i)
        total = sum((abs(c) * tgt.weights[t] for t, c in val.items()), Fraction(0))
        best = max(best, total / denom)
    return eps ** (p - 1) * best


def map_norms(phi, src: NormModel, eps=HALF, tgt: NormModel | None = None,
              allowed=None) -> MapNorms:
    return MapNorms(op_norm0(phi, src, eps, tgt, allowed), op_norm1(phi, src, eps, tgt, allowed))


def extreme_point_norm0(phi: MultiMap, model: NormModel, tgt: NormModel | None = None) -> Fraction:
    """Brute-force Banach |φ|^0 over all tuples of ± scaled basis vectors (an oracle)."""
    tgt = tgt or model
    pts = [{i: s / model.weights[i]} for i in range(model.space.dim) for s in (1, -1)]
    best = Fraction(0)
    for tup in itertools.product(pts, repeat=phi.arity):
        best = max(best, tgt.norm(phi.apply(list(tup))))
    return best


# -- polynomial norms and the polarization remark ---------------------------

def polynomial_value(phi: MultiMap, x: dict) -> dict:
    return phi.apply([x] * phi.arity)


def poly_norm_lower(phi: MultiMap, model: NormModel, tgt: NormModel | None = None) -> Fraction:
    """A lower bound for the Banach ||φ̃||^0 from the polarization points.

    The points are (Σ_j s_j e_{i_j}/w_{i_j})/p over basis tuples and signs;
    they lie in the unit ball, and polarization over exactly these points
    bounds |φ|^0 by (p^p/p!) times their maximum.
    """
    if model.mode != BANACH:
        raise ValueError("polarization bounds are implemented in Banach mode")
    tgt = tgt or model
    p = phi.arity
    n = model.space.dim
    best = Fraction(0)
    for key in itertools.combinations_with_replacement(range(n), p):
        for signs in itertools.product((1, -1), repeat=p - 1):
            x: dict = {}
            for s, i in zip((1,) + signs, key):
                x[i] = x.get(i, Fraction(0)) + Fraction(s) / (p * model.weights[i])
            x = {i: c for i, c in x.items() if c}
            if x:
                best = max(best, tgt.norm(polynomial_value(phi, x)))
    return best


@dataclass
class RemarkCheck:
    poly_lower: Fraction   # certified ≤ ||φ̃||^{1,ε}
    multi: Fraction        # |φ|^{1,ε}
    constant: Fraction     # p^p/p!

    @property
    def first(self) -> bool:
        """||φ̃|| ≤ |φ|, via the lower bound (the upper bound is |φ| itself)."""
        return self.poly_lower <= self.multi

    @property
    def second(self) -> bool:
        """|φ| ≤ (p^p/p!)||φ̃||, certified through the lower bound."""
        return self.multi <= self.constant * self.poly_lower

    @property
    def ok(self) -> bool:
        return self.first and self.second


def remark_chain(phi: MultiMap, model: NormModel, eps=HALF) -> RemarkCheck:
    """||φ̃||^{1,ε} ≤ |φ|^{1,ε} ≤ (p^p/p!)||φ̃||^{1,ε} for symmetric φ, Banach mode.

    On odd-degree inputs a graded symmetric map is numerically alternating,
    so φ̃ can vanish while φ does not; the chain needs even degrees.
    """
    eps = _check_eps(eps)
    p = phi.arity
    scale = eps ** (p - 1)
    return RemarkCheck(scale * poly_norm_lower(phi, model), op_norm1(phi, model, eps),
                       Fraction(p ** p, factorial(p)))


# -- trees and the μ estimate ----------------------------------------------

def tree_bound(t: OrientedTree, b_norms: Sequence, c_norms: Sequence) -> tuple:
    """(b_1⋯b_{n-1}, (n-1)^{n-1} c_1⋯c_{n-1}) for a tree with n leaves."""
    n = t.n_leaves
    if len(b_norms) != n - 1 or len(c_norms) != n - 1:
        raise ValueError(f"a tree with {n} leaves needs {n - 1} norms of each kind")
    b = Fraction(1)
    c = Fraction(1)
    for x in b_norms:
        b *= Fraction(x)
    for x in c_norms:
        c *= Fraction(x)
    return b, (n - 1) ** (n - 1) * c


def tree_norms(t: OrientedTree, B: dict, model: NormModel, eps=HALF) -> MapNorms:
    """Measured |t(B)|^{0,ε} and |t(B)|^{1,ε}."""
    return map_norms(evaluate(t, B), model, eps)


def mu_bounds(c, k, kappa, n: int) -> tuple:
    """(n!(n-1)^{n-1}(2k)^{n-1}c^{n-2},  2^{n-1} n! κ^{n-1} c^{n-2})."""
    if n < 2:
        raise ValueError("the estimate is stated for n ≥ 2")
    c, k, kappa = Fraction(c), Fraction(k), Fraction(kappa)
    b1 = factorial(n) * (n - 1) ** (n - 1) * (2 * k) ** (n - 1) * c ** (n - 2)
    b0 = 2 ** (n - 1) * factorial(n) * kappa ** (n - 1) * c ** (n - 2)
    return b1, b0


@dataclass
class MuBoundRow:
    n: int
    measured1: Fraction
    bound1: Fraction
    measured0: Fraction
    bound0: Fraction

    @property
    def ok(self) -> bool:
        return self.measured1 <= self.bound1 and self.measured0 <= self.bound0

    @property
    def margin1(self) -> Fraction:
        return self.bound1 - self.measured1

    @property
    def margin0(self) -> Fraction:
        return self.bound0 - self.measured0


@dataclass
class MuBoundTable:
    c: Fraction
    k: Fraction
    kappa: Fraction
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)


def adapted(L, split):
    """Conjugate L so that the H and F bases of the splitting become basis vectors.

    With an ℓ1 model on the adapted basis, the projector onto H has norm ≤ 1
    and H carries the ℓ1 norm of its own coordinates.
    """
    from .transfer import DGLA, Splitting, hodge

    hd = hodge(L, split)
    frame = hd.H_basis + hd.F_basis
    n = L.dim
    order = sorted(range(n), key=lambda j: L.space.degrees[linalg.pivot_of(
        [frame[j].get(i, 0) for i in range(n)])])
    frame = [frame[j] for j in order]
    names = []
    for v in frame:
        p = linalg.pivot_of([v.get(i, 0) for i in range(n)])
        tag = "h" if v in hd.H_basis else "f"
        names.append((f"{tag}[{L.space.names[p]}]", L.space.degrees[p]))
    sp = GradedSpace(tuple(names))
    T = [[frame[j].get(i, Fraction(0)) for j in range(n)] for i in range(n)]
    Ti = linalg.inverse(T)
    Tm = LinearMap(sp, L.space, 0, [dict(v) for v in frame])
    Tinv = LinearMap.from_matrix(L.space, sp, 0, Ti)
    d = Tinv.compose(L.d).compose(Tm)
    br = L.bracket.restrict(Tm).postcompose(Tinv)
    eta = Tinv.compose(split.eta).compose(Tm)
    return DGLA(sp, d, br), Splitting(eta)


def measure_mu_bounds(L, split, model: NormModel, cap: int = 4, eps=HALF,
                      normalization: str | None = None) -> MuBoundTable:
    """Compares transferred μ_n norms with the μ estimate for 2 ≤ n ≤ cap.

    c = |η|^{0,ε}, k = |[,]|^{1,ε}, κ = |[,] on L^{≥1}⊗L^{≥1}|^{0,ε};
    the measured ||μ̃_n|| are bounded above by the multilinear norms, with the
    0-norm taken on H^{≥1} (the shifted M^{≥0}).
    """
    from .transfer import CORRECTED, hodge, transfer_mu

    eps = _check_eps(eps)
    hd = hodge(L, split)
    degs = L.space.degrees
    c = op_norm0(split.eta, model, eps)
    k = op_norm1(L.bracket, model, eps)
    kappa = op_norm0(L.bracket, model, eps, allowed=lambda i: degs[i] >= 1)
    mu = transfer_mu(L, split, cap, normalization or CORRECTED, hd)
    Hmodel = model.sub(hd.H_pivots, hd.H)
    Hdeg = hd.H.degrees
    table = MuBoundTable(c, k, kappa)
    for n in range(2, cap + 1):
        m = mu.mu.get(n) or MultiMap.zero(hd.H, hd.H, n, 2 - n, ANTISYMMETRIC)
        b1, b0 = mu_bounds(c, k, kappa, n)
        m1 = op_norm1(m, Hmodel, eps)
        m0 = op_norm0(m, Hmodel, eps, allowed=lambda i: Hdeg[i] >= 1)
        table.rows.append(MuBoundRow(n, m1, b1, m0, b0))
    return table


def is_adapted(L, split) -> bool:
    from .transfer import hodge

    hd = hodge(L, split)
    return all(len(v) == 1 and next(iter(v.values())) == 1 for v in hd.H_basis + hd.F_basis)


# -- the majorant -----------------------------------------------------------

@dataclass
class Majorant:
    gammas: list

    def __getitem__(self, p: int) -> Fraction:
        return self.gammas[p]

    def positive(self) -> bool:
        return all(g > 0 for g in self.gammas)

    def convolution(self, p: int, q: int, start: int = 1) -> Fraction:
        """Σ_{i_1+…+i_p = q, i_j ≥ start} γ_{i_1}⋯γ_{i_p}."""
        # dynamic programming over the number of factors
        row = {0: Fraction(1)}
        for _ in range(p):
            nxt: dict = {}
            for s, v in row.items():
                for i in range(start, q - s + 1):
                    nxt[s + i] = nxt.get(s + i, Fraction(0)) + v * self.gammas[i]
            row = nxt
        return row.get(q, Fraction(0))

    def convolution_ok(self, pmax: int, qmax: int, start: int = 1) -> bool:
        return all(self.convolution(p, q, start) <= self.gammas[q]
                   for p in range(1, pmax + 1) for q in range(1, qmax + 1))


def _half_binomial(p: int) -> Fraction:
    """binom(1/2, p)."""
    out = Fraction(1)
    for j in range(p):
        out *= (HALF - j) / (j + 1)
    return out


def gamma(pmax: int) -> Majorant:
    """Taylor coefficients of ½ - ¼√(1-t) up to t^pmax."""
    if pmax < 0:
        raise ValueError("pmax must be nonnegative")
    gs = [Fraction(1, 4)]
    for p in range(1, pmax + 1):
        gs.append(-Fraction(1, 4) * _half_binomial(p) * (-1) ** p)
    maj = Majorant(gs)
    if not maj.positive():
        raise AssertionError("majorant coefficients must be positive")
    return maj


@dataclass
class Certificate:
    ok: bool
    C: Fraction | None = None
    R: Fraction | None = None
    Cp: Fraction | None = None
    Rp: Fraction | None = None
    margins: dict = field(default_factory=dict)  # q -> γ_q C' R'^q - a_q
    reason: str = ""


def _condition(maj: Majorant, Cp, R, C, g1, cap) -> Fraction:
    s = sum((maj[p] * (Cp * R) ** (p - 1) for p in range(2, cap + 1)), Fraction(0))
    return s * g1 * C * R


def certify_inverse_convergence(f_norms: dict, g1_norm, cap: int,
                                g_norms: dict | None = None, budget: int = 60) -> Certificate:
    """Constants for the inverse function estimate of a morphism truncated at ``cap``.

    ``f_norms[p]`` is |f_p|^{0,ε} for 2 ≤ p ≤ cap (missing means zero) and
    ``g1_norm`` is ||g_1||^{0,ε}.  With R = 1 and C the least constant with
    |f_p|/p! ≤ γ_p C R^p, C' is found by exact bisection so that
    (Σ_{p≥2} γ_p (C'R)^{p-1}) ||g_1|| C R ≤ 1, and R' = ||g_1||/(γ_1 C').
    When ``g_norms`` is given the claimed bounds (1/q!)|g_q| ≤ γ_q C' R'^q are
    re-checked and returned as margins.
    """
    maj = gamma(max(cap, 1))
    g1 = Fraction(g1_norm)
    if g1 <= 0:
        return Certificate(False, reason="g_1 must have positive norm")
    R = Fraction(1)
    ratios = [Fraction(f_norms.get(p, 0)) / factorial(p) / maj[p] for p in range(2, cap + 1)]
    C = max(ratios + [Fraction(0)])
    if C == 0:
        Cp = Fraction(1)
    else:
        Cp = Fraction(1)
        # bracket the largest admissible C' by doubling or halving, then bisect
        steps = 0
        while _condition(maj, Cp, R, C, g1, cap) > 1:
            Cp /= 2
            steps += 1
            if steps > budget:
                return Certificate(False, C=C, R=R, reason="no admissible C' within budget")
        while steps <= budget and _condition(maj, Cp * 2, R, C, g1, cap) <= 1:
            Cp *= 2
            steps += 1
        lo, hi = Cp, Cp * 2
        for _ in range(20):
            mid = (lo + hi) / 2
            if _condition(maj, mid, R, C, g1, cap) <= 1:
                lo = mid
            else:
                hi = mid
        Cp = lo
    Rp = g1 / (maj[1] * Cp)
    cert = Certificate(True, C, R, Cp, Rp)
    if g_norms is not None:
        for q in range(1, cap + 1):
            a = Fraction(g_norms.get(q, 0)) / factorial(q)
            cert.margins[q] = maj[q] * Cp * Rp ** q - a
        cert.ok = all(m >= 0 for m in cert.margins.values())
        if not cert.ok:
            cert.reason = "computed inverse violates the certified bound"
    return cert


def certify_morphism_inverse(F: LInftyMorphism, model_src: NormModel, model_tgt: NormModel,
                             eps=HALF) -> tuple:
    """Computes the inverse of F with the left-inverse recursion and certifies it.

    Returns (certificate, inverse).  All norms are multilinear |·|^{0,ε}.
    """
    f1 = F.linear_part()
    g1 = LinearMap.from_matrix(F.target.space, F.source.space, 0, linalg.inverse(f1.matrix()))
    G = left_inverse(F, g1)
    f_norms = {p: op_norm0(F.f[p], model_src, eps, model_tgt) for p in F.f if p >= 2}
    g1n = op_norm0(g1, model_tgt, eps, model_src)
    g_norms = {q: op_norm0(m, model_tgt, eps, model_src) for q, m in G.f.items()}
    return certify_inverse_convergence(f_norms, g1n, F.cap, g_norms), G


# -- closure of convergent coderivations ------------------------------------

def stirling_factor(n: int) -> Fraction:
    """2^{n-1}(n-1)^{n-1}/(n-1)!."""
    if n < 1:
        raise ValueError("n ≥ 1")
    m = n - 1
    return Fraction(2 ** m * m ** m, factorial(m))


def e_enclosure(terms: int = 20) -> tuple:
    """Rational lo < e < hi from Σ_{j≤N} 1/j! and the tail bound 1/(N!·N)."""
    lo = sum((Fraction(1, factorial(j)) for j in range(terms + 1)), Fraction(0))
    return lo, lo + Fraction(1, factorial(terms) * terms)


def stirling_check(nmax: int, terms: int = 20) -> bool:
    """2^{n-1}(n-1)^{n-1}/(n-1)! ≤ (2e)^{n-1} for n ≤ nmax, using the lower end of e."""
    lo, _ = e_enclosure(terms)
    return all(stirling_factor(n) <= (2 * lo) ** (n - 1) for n in range(1, nmax + 1))


def bracket_closure_bound(Q_norms: dict, q_norms: dict, cap: int) -> dict:
    """Per arity, factor(n)·Σ_{k+l=n+1} (||Q_l|| ||q_k|| + ||q_l|| ||Q_k||)."""
    out = {}
    for n in range(1, cap + 1):
        s = Fraction(0)
        for k in range(1, n + 1):
            l = n + 1 - k
            s += Fraction(Q_norms.get(l, 0)) * Fraction(q_norms.get(k, 0))
            s += Fraction(q_norms.get(l, 0)) * Fraction(Q_norms.get(k, 0))
        out[n] = stirling_factor(n) * s
    return out

