"""
Exact graded linear algebra over Q.

Everything here is built on :class:`fractions.Fraction`.  Vectors are sparse
dicts ``{basis_index: Fraction}``; maps store only nonzero structure
constants.  Koszul signs follow the rule

    (f ⊗ g)(a ⊗ b) = (-1)^{|g||a|} f(a) ⊗ g(b).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Callable, Iterator, Sequence

Scalar = Fraction
Vector = dict  # {index: Fraction}

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
PLAIN = "plain"
FLAVORS = (SYMMETRIC, ANTISYMMETRIC, PLAIN)

# sign actions of the symmetric group on tensors
EPSILON = "epsilon"
CHI = "chi"


def scalar(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ValueError(f"not a rational number: {x!r}") from None
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fmt(x: Fraction) -> str:
    """Serialize a rational as ``"p/q"`` (always with a denominator)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- sparse vectors ---------------------------------------------------------

def axpy(acc: dict, c, v: dict) -> dict:
    """acc += c * v, in place; zero entries are dropped."""
    if not c:
        return acc
    for i, x in v.items():
        y = acc.get(i, 0) + c * x
        if y:
            acc[i] = y
        else:
            acc.pop(i, None)
    return acc


def vscale(c, v: dict) -> dict:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vadd(*vs: dict) -> dict:
    acc: dict = {}
    for v in vs:
        axpy(acc, 1, v)
    return acc


def clean(v: dict) -> dict:
    return {i: Fraction(x) for i, x in v.items() if x}


# -- graded spaces ----------------------------------------------------------

@dataclass(frozen=True)
class GradedSpace:
    """A finite graded vector space with an ordered named basis."""

    basis: tuple

    def __post_init__(self):
        basis = tuple((str(n), int(d)) for n, d in self.basis)
        object.__setattr__(self, "basis", basis)
        names = [n for n, _ in basis]
        if len(set(names)) != len(names):
            raise ValueError("basis names must be unique")

    @classmethod
    def of(cls, *pairs) -> "GradedSpace":
        return cls(tuple(pairs))

    @cached_property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.basis)

    @cached_property
    def degrees(self) -> tuple:
        return tuple(d for _, d in self.basis)

    @cached_property
    def _index(self) -> dict:
        return {n: i for i, n in enumerate(self.names)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ValueError(f"unknown basis element {name!r}") from None

    def degree(self, i: int) -> int:
        return self.degrees[i]

    @cached_property
    def by_degree(self) -> dict:
        out: dict = {}
        for i, d in enumerate(self.degrees):
            out.setdefault(d, []).append(i)
        return out

    def shift(self) -> "GradedSpace":
        """The suspension L[1]: same basis, every degree lowered by one."""
        return GradedSpace(tuple((f"↓{n}", d - 1) for n, d in self.basis))

    def direct_sum(self, other: "GradedSpace") -> "GradedSpace":
        return GradedSpace(self.basis + other.basis)

    def vector_degree(self, v: dict):
        """Degree of a homogeneous nonzero vector, None for zero; raises otherwise."""
        degs = {self.degrees[i] for i in v}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous")
        return degs.pop()

    def basis_vector(self, i: int) -> dict:
        return {i: Fraction(1)}

    def __repr__(self):
        inner = ", ".join(f"{n}:{d}" for n, d in self.basis)
        return f"GradedSpace({inner})"


# -- linear maps ------------------------------------------------------------

class LinearMap:
    """A homogeneous linear map, stored column by column."""

    __slots__ = ("source", "target", "degree", "columns")

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 columns: Sequence[dict], check: bool = True):
        if len(columns) != source.dim:
            raise ValueError("one column per source basis element is required")
        cols = tuple(clean(c) for c in columns)
        if check:
            for j, col in enumerate(cols):
                for i in col:
                    if not 0 <= i < target.dim:
                        raise ValueError(f"target index {i} out of range")
                    if target.degrees[i] - source.degrees[j] != degree:
                        raise ValueError(
                            f"entry {target.names[i]}<-{source.names[j]} "
                            f"violates degree {degree}")
        self.source = source
        self.target = target
        self.degree = degree
        self.columns = cols

    @classmethod
    def identity(cls, space: GradedSpace) -> "LinearMap":
        return cls(space, space, 0, [{i: Fraction(1)} for i in range(space.dim)],
                   check=False)

    @classmethod
    def zero(cls, source, target, degree=0) -> "LinearMap":
        return cls(source, target, degree, [{} for _ in range(source.dim)], check=False)

    @classmethod
    def from_entries(cls, source, target, degree, entries) -> "LinearMap":
        """Build from ``(source_index, target_index, coefficient)`` triples."""
        cols = [dict() for _ in range(source.dim)]
        for j, i, c in entries:
            axpy(cols[j], 1, {i: scalar(c)})
        return cls(source, target, degree, cols)

    @classmethod
    def from_matrix(cls, source, target, degree, rows) -> "LinearMap":
        cols = [dict() for _ in range(source.dim)]
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x:
                    cols[j][i] = scalar(x)
        return cls(source, target, degree, cols)

    def matrix(self) -> list:
        m = [[Fraction(0)] * self.source.dim for _ in range(self.target.dim)]
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                m[i][j] = x
        return m

    def __call__(self, v: dict) -> dict:
        acc: dict = {}
        for j, x in v.items():
            axpy(acc, x, self.columns[j])
        return acc

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self ∘ other."""
        if other.target != self.source:
            raise ValueError("cannot compose: space mismatch")
        return LinearMap(other.source, self.target, self.degree + other.degree,
                         [self(c) for c in other.columns], check=False)

    __matmul__ = compose

    def _combine(self, other, c):
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("space mismatch")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValueError("cannot add maps of different degree")
        deg = self.degree if not self.is_zero() else other.degree
        return LinearMap(self.source, self.target, deg,
                         [vadd(a, vscale(c, b)) for a, b in zip(self.columns, other.columns)],
                         check=False)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "LinearMap":
        c = scalar(c)
        return LinearMap(self.source, self.target, self.degree,
                         [vscale(c, col) for col in self.columns], check=False)

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.source == other.source and self.target == other.target
                and self.columns == other.columns
                and (self.degree == other.degree or self.is_zero()))

    def __hash__(self):
        return hash((self.source, self.target, self.columns.__len__()))

    def as_multimap(self) -> "MultiMap":
        coeffs = {(j,): dict(col) for j, col in enumerate(self.columns) if col}
        return MultiMap(self.source, self.target, 1, self.degree, SYMMETRIC
                        if self.source == self.target else PLAIN, coeffs, check=False)

    def __repr__(self):
        return f"LinearMap(deg={self.degree}, {self.source.dim}->{self.target.dim})"


def graded_commutator(a: LinearMap, b: LinearMap) -> LinearMap:
    """[a, b] = ab - (-1)^{|a||b|} ba."""
    s = -1 if (a.degree * b.degree) % 2 else 1
    return a.compose(b) - b.compose(a).scale(s)


# -- permutations and signs -------------------------------------------------

@dataclass(frozen=True)
class Permutation:
    """A permutation of {1..n}, given by its images (1-based)."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a permutation: {imgs}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def all(cls, n: int) -> list:
        return [cls(p) for p in itertools.permutations(range(1, n + 1))]

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """(self * other)(i) = self(other(i))."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(self(other(i)) for i in range(1, self.size + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, j in enumerate(self.images, 1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def sign(self) -> int:
        inv = sum(1 for a in range(self.size) for b in range(a + 1, self.size)
                  if self.images[a] > self.images[b])
        return -1 if inv % 2 else 1

    def is_shuffle(self, k: int) -> bool:
        im = self.images
        return (all(im[i] < im[i + 1] for i in range(k - 1))
                and all(im[i] < im[i + 1] for i in range(k, self.size - 1)))

    def apply(self, seq: Sequence) -> tuple:
        """(x_σ(1), ..., x_σ(n))."""
        return tuple(seq[i - 1] for i in self.images)


def _koszul_exponent(images: Sequence[int], degrees: Sequence[int]) -> int:
    e = 0
    n = len(images)
    for a in range(n):
        da = degrees[images[a] - 1]
        if not da % 2:
            continue
        for b in range(a + 1, n):
            if images[a] > images[b] and degrees[images[b] - 1] % 2:
                e += 1
    return e


def _check_size(sigma: Permutation, degrees: Sequence[int]):
    if len(degrees) != sigma.size:
        raise ValueError(f"need {sigma.size} degrees, got {len(degrees)}")


def epsilon_sign(sigma: Permutation, degrees: Sequence[int]) -> int:
    """Koszul sign ε with m_σ(1)⊙…⊙m_σ(n) = ε m_1⊙…⊙m_n."""
    _check_size(sigma, degrees)
    return -1 if _koszul_exponent(sigma.images, degrees) % 2 else 1


def chi_sign(sigma: Permutation, degrees: Sequence[int]) -> int:
    """Sign χ with a_σ(1)∧…∧a_σ(n) = χ a_1∧…∧a_n."""
    _check_size(sigma, degrees)
    return sigma.sign() * epsilon_sign(sigma, degrees)


def action_sign(action: str, sigma: Permutation, degrees: Sequence[int]) -> int:
    if action == EPSILON:
        return epsilon_sign(sigma, degrees)
    if action == CHI:
        return chi_sign(sigma, degrees)
    raise ValueError(f"unknown action {action!r}")


def shuffles(k: int, n: int) -> list:
    """All (k, n-k)-shuffles, in lexicographic order of their first block."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    out = []
    for first in itertools.combinations(range(1, n + 1), k):
        rest = [i for i in range(1, n + 1) if i not in first]
        out.append(Permutation(first + tuple(rest)))
    return out


def _shuffle_positions(n: int, k: int):
    """(first-block positions, rest, parity of the underlying permutation), 0-based."""
    key = (n, k)
    hit = _SHUFFLE_CACHE.get(key)
    if hit is None:
        hit = []
        for first in itertools.combinations(range(n), k):
            fs = set(first)
            rest = tuple(i for i in range(n) if i not in fs)
            inv = sum(1 for a in first for b in rest if b < a)
            hit.append((first, rest, inv))
        _SHUFFLE_CACHE[key] = hit
    return hit


_SHUFFLE_CACHE: dict = {}


def shuffle_sign(action: str, first: Sequence[int], rest: Sequence[int],
                 degrees: Sequence[int]) -> int:
    """Sign of the shuffle moving ``first`` (0-based positions) in front of ``rest``."""
    e = 0
    n_swaps = 0
    for a in first:
        for b in rest:
            if b < a:
                n_swaps += 1
                if degrees[a] % 2 and degrees[b] % 2:
                    e += 1
    if action == CHI:
        e += n_swaps
    return -1 if e % 2 else 1


# -- multilinear maps -------------------------------------------------------

def canonicalize(idx: Sequence[int], degrees: Sequence[int], flavor: str):
    """Sort an index tuple; return (sign, canonical tuple) or (0, None).

    For SYMMETRIC maps an odd basis element may not repeat, for
    ANTISYMMETRIC maps an even one may not.
    """
    if flavor == PLAIN:
        return 1, tuple(idx)
    lst = list(idx)
    e = 0
    odd_swap = 1 if flavor == ANTISYMMETRIC else 0
    # insertion sort, accumulating the sign of each adjacent swap
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            a, b = lst[j - 1], lst[j]
            e += (degrees[a] * degrees[b]) % 2 + odd_swap
            lst[j - 1], lst[j] = b, a
            j -= 1
    banned = 1 if flavor == SYMMETRIC else 0
    for i in range(1, len(lst)):
        if lst[i] == lst[i - 1] and degrees[lst[i]] % 2 == banned:
            return 0, None
    return (-1 if e % 2 else 1), tuple(lst)


def canonical_keys(space: GradedSpace, arity: int, flavor: str) -> Iterator[tuple]:
    n = space.dim
    if flavor == PLAIN:
        yield from itertools.product(range(n), repeat=arity)
        return
    banned = 1 if flavor == SYMMETRIC else 0
    for key in itertools.combinations_with_replacement(range(n), arity):
        if any(key[i] == key[i - 1] and space.degrees[key[i]] % 2 == banned
               for i in range(1, arity)):
            continue
        yield key


class MultiMap:
    """A homogeneous n-linear map ``source^{⊗n} -> target`` with exact coefficients.

    ``flavor`` selects the storage: SYMMETRIC and ANTISYMMETRIC maps keep
    values on canonical (sorted) index tuples only and recover the rest with
    the ε resp. χ sign; PLAIN maps store every tuple.
    """

    __slots__ = ("source", "target", "arity", "lin_degree", "flavor", "coeffs")

    def __init__(self, source: GradedSpace, target: GradedSpace, arity: int,
                 lin_degree: int, flavor: str, coeffs: dict, check: bool = True):
        if flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        if arity < 1:
            raise ValueError("arity must be positive")
        self.source = source
        self.target = target
        self.arity = arity
        self.lin_degree = lin_degree
        self.flavor = flavor
        self.coeffs = {k: v for k, v in ((tuple(k), clean(v)) for k, v in coeffs.items()) if v}
        if check:
            self._validate()

    def _validate(self):
        sdeg, tdeg = self.source.degrees, self.target.degrees
        for key, val in self.coeffs.items():
            if len(key) != self.arity:
                raise ValueError(f"key {key} has wrong arity")
            sign, canon = canonicalize(key, sdeg, self.flavor)
            if canon != key:
                raise ValueError(f"key {key} is not canonical for {self.flavor}")
            total = sum(sdeg[i] for i in key) + self.lin_degree
            for t in val:
                if tdeg[t] != total:
                    raise ValueError(f"value at {key} violates linear degree")

    # construction
    @classmethod
    def zero(cls, source, target, arity, lin_degree, flavor) -> "MultiMap":
        return cls(source, target, arity, lin_degree, flavor, {}, check=False)

    @classmethod
    def from_function(cls, source, target, arity, lin_degree, flavor,
                      fn: Callable[[tuple], dict], check: bool = True) -> "MultiMap":
        """Tabulate ``fn`` on canonical basis tuples whose output degree exists."""
        tdegs = set(target.degrees)
        sdeg = source.degrees
        coeffs = {}
        for key in canonical_keys(source, arity, flavor):
            if sum(sdeg[i] for i in key) + lin_degree not in tdegs:
                continue
            val = fn(key)
            if val:
                coeffs[key] = val
        return cls(source, target, arity, lin_degree, flavor, coeffs, check=check)

    @classmethod
    def from_entries(cls, source, target, arity, lin_degree, flavor, entries) -> "MultiMap":
        """Build from ``(index_tuple, target_index, coefficient)`` triples.

        Non-canonical tuples are sorted, absorbing the flavor sign.
        """
        coeffs: dict = {}
        for idx, t, c in entries:
            sign, key = canonicalize(tuple(idx), source.degrees, flavor)
            if not sign:
                if scalar(c):
                    raise ValueError(f"{idx} is forced to vanish by {flavor} symmetry")
                continue
            coeffs.setdefault(key, {})
            axpy(coeffs[key], sign * scalar(c), {t: Fraction(1)})
        return cls(source, target, arity, lin_degree, flavor, coeffs)

    # evaluation
    def __call__(self, *idx: int) -> dict:
        if len(idx) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        sign, key = canonicalize(idx, self.source.degrees, self.flavor)
        if not sign:
            return {}
        val = self.coeffs.get(key)
        if not val:
            return {}
        return val if sign == 1 else vscale(-1, val)

    def value(self, idx: tuple) -> dict:
        return self(*idx)

    def apply(self, vectors: Sequence[dict]) -> dict:
        """Multilinear extension to sparse vectors (no Koszul signs: plain evaluation)."""
        if len(vectors) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        acc: dict = {}
        items = [list(v.items()) for v in vectors]
        if any(not it for it in items):
            return acc
        for combo in itertools.product(*items):
            c = Fraction(1)
            idx = []
            for i, x in combo:
                c *= x
                idx.append(i)
            axpy(acc, c, self(*idx))
        return acc

    # algebra
    def _check_compatible(self, other: "MultiMap"):
        if (self.source, self.target, self.arity, self.flavor) != \
                (other.source, other.target, other.arity, other.flavor):
            raise ValueError("incompatible multilinear maps")

    def __add__(self, other: "MultiMap") -> "MultiMap":
        self._check_compatible(other)
        coeffs = {k: dict(v) for k, v in self.coeffs.items()}
        for k, v in other.coeffs.items():
            axpy(coeffs.setdefault(k, {}), 1, v)
        deg = self.lin_degree if self.coeffs or not other.coeffs else other.lin_degree
        return MultiMap(self.source, self.target, self.arity, deg, self.flavor,
                        coeffs, check=False)

    def __neg__(self) -> "MultiMap":
        return self.scale(-1)

    def __sub__(self, other: "MultiMap") -> "MultiMap":
        return self + other.scale(-1)

    def scale(self, c) -> "MultiMap":
        c = scalar(c)
        return MultiMap(self.source, self.target, self.arity, self.lin_degree,
                        self.flavor, {k: vscale(c, v) for k, v in self.coeffs.items()},
                        check=False)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, MultiMap):
            return NotImplemented
        if (self.source, self.target, self.arity) != (other.source, other.target, other.arity):
            return False
        if self.flavor != other.flavor:
            return self.to_plain().coeffs == other.to_plain().coeffs
        return self.coeffs == other.coeffs

    __hash__ = None

    def to_plain(self) -> "MultiMap":
        if self.flavor == PLAIN:
            return self
        return MultiMap.from_function(self.source, self.target, self.arity,
                                      self.lin_degree, PLAIN, self.value, check=False)

    def as_flavor(self, flavor: str) -> "MultiMap":
        """Reinterpret values on canonical tuples (caller asserts the symmetry)."""
        if flavor == self.flavor:
            return self
        return MultiMap.from_function(self.source, self.target, self.arity,
                                      self.lin_degree, flavor, self.value, check=False)

    def has_symmetry(self, flavor: str) -> bool:
        """Whether the map is invariant under the ε (SYMMETRIC) or χ (ANTISYMMETRIC) action."""
        plain = self.to_plain()
        degs = self.source.degrees
        for idx in itertools.product(range(self.source.dim), repeat=self.arity):
            sign, key = canonicalize(idx, degs, flavor)
            lhs = plain.coeffs.get(idx, {})
            rhs = plain.coeffs.get(key, {}) if sign else {}
            if lhs != (rhs if sign >= 0 else vscale(-1, rhs)):
                return False
        return True

    def postcompose(self, lin: LinearMap) -> "MultiMap":
        """lin ∘ self."""
        if lin.source != self.target:
            raise ValueError("space mismatch")
        return MultiMap(self.source, lin.target, self.arity, self.lin_degree + lin.degree,
                        self.flavor, {k: lin(v) for k, v in self.coeffs.items()},
                        check=False)

    def restrict(self, inc: LinearMap, flavor: str | None = None) -> "MultiMap":
        """self ∘ (inc ⊗ … ⊗ inc) for a degree-0 map ``inc`` into ``self.source``."""
        if inc.degree != 0 or inc.target != self.source:
            raise ValueError("restriction needs a degree-0 map into the source")
        cols = inc.columns
        flavor = flavor or self.flavor
        return MultiMap.from_function(
            inc.source, self.target, self.arity, self.lin_degree, flavor,
            lambda key: self.apply([cols[i] for i in key]), check=False)

    def __repr__(self):
        return (f"MultiMap(arity={self.arity}, deg={self.lin_degree}, {self.flavor}, "
                f"{len(self.coeffs)} nonzero)")


def tensor_apply(maps: Sequence[LinearMap], vectors: Sequence[dict],
                 degrees: Sequence[int]) -> tuple:
    """(f_1 ⊗ … ⊗ f_n)(x_1 ⊗ … ⊗ x_n) for homogeneous x_i of the given degrees.

    Returns (sign, images).
    """
    e = 0
    passed = 0
    for f, d in zip(maps, degrees):
        e += f.degree * passed
        passed += d
    return (-1 if e % 2 else 1), [f(x) for f, x in zip(maps, vectors)]


# -- (anti)symmetrization ---------------------------------------------------

def _default_action(phi: MultiMap) -> str:
    return EPSILON if phi.flavor == SYMMETRIC else CHI


def apply_alpha(phi: MultiMap, k: int, action: str | None = None) -> MultiMap:
    """phi ∘ α_{k,n}, the sum over (k, n-k)-shuffles acting with ε or χ.

    ``k == n`` is the full (anti)symmetrization α_n = Σ_{σ∈Σ_n} σ.
    """
    n = phi.arity
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n}")
    action = action or _default_action(phi)
    if phi.flavor != PLAIN and action == _default_action(phi):
        # phi is invariant under each σ, so every shuffle contributes phi itself
        count = comb(n, k) if k < n else _factorial(n)
        return phi.scale(count)
    degs = phi.source.degrees
    perms = Permutation.all(n) if k == n else shuffles(k, n)
    plain = phi.to_plain()

    def fn(key):
        acc: dict = {}
        kd = [degs[i] for i in key]
        for s in perms:
            axpy(acc, action_sign(action, s, kd), plain.value(s.apply(key)))
        return acc

    if k == n or n == 1:
        flavor = SYMMETRIC if action == EPSILON else ANTISYMMETRIC
    else:
        flavor = PLAIN
    return MultiMap.from_function(phi.source, phi.target, n, phi.lin_degree, flavor, fn)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# -- décalage ---------------------------------------------------------------

def shift_vector(v: dict) -> dict:
    """↓ and ↑ act as the identity on coordinates; only degrees change."""
    return v


def decalage_down(mu: MultiMap) -> MultiMap:
    """Q_n = (-1)^{n(n-1)/2} ↓ ∘ μ_n ∘ ↑^{⊗n}, a symmetric map on the shifted spaces."""
    if mu.flavor != ANTISYMMETRIC:
        raise ValueError("decalage_down needs an antisymmetric map")
    n = mu.arity
    src, tgt = mu.source.shift(), mu.target.shift()
    base = -1 if (n * (n - 1) // 2) % 2 else 1
    sdeg = src.degrees

    def fn(key):
        # ↑^{⊗n}: the j-th ↑ (degree +1) passes the j-1 earlier shifted arguments
        e = 0
        passed = 0
        for i in key:
            e += passed
            passed += sdeg[i]
        sign = base * (-1 if e % 2 else 1)
        return vscale(sign, mu(*key))

    return MultiMap.from_function(src, tgt, n, mu.lin_degree + n - 1, SYMMETRIC, fn)


def decalage_up(q: MultiMap, source: GradedSpace, target: GradedSpace) -> MultiMap:
    """Inverse of :func:`decalage_down`: μ_n = ↑ ∘ Q_n ∘ ↓^{⊗n}.

    ``↓^{⊗n}`` is the inverse of ``(-1)^{n(n-1)/2} ↑^{⊗n}``.
    """
    if q.flavor != SYMMETRIC:
        raise ValueError("decalage_up needs a symmetric map")
    if q.source != source.shift() or q.target != target.shift():
        raise ValueError("spaces do not match the shifted ones")
    n = q.arity
    degs = source.degrees

    def fn(key):
        # the j-th ↓ (degree -1) passes the j-1 earlier unshifted arguments
        e = 0
        passed = 0
        for i in key:
            e += passed
            passed += degs[i]
        return vscale(-1 if e % 2 else 1, q(*key))

    return MultiMap.from_function(source, target, n, q.lin_degree - n + 1, ANTISYMMETRIC, fn)


def shift_linear(f: LinearMap) -> LinearMap:
    """↓ ∘ f ∘ ↑ on the shifted spaces (no sign: composition, not tensoring)."""
    return LinearMap(f.source.shift(), f.target.shift(), f.degree, f.columns, check=False)


# -- partial composition ----------------------------------------------------

def compose_multimap(outer: MultiMap, slot: int, inner: MultiMap) -> MultiMap:
    """outer ∘ (1^{⊗slot-1} ⊗ inner ⊗ 1^{⊗…}), a PLAIN map of arity m + k - 1.

    The Koszul sign (-1)^{|inner|(a_1+…+a_{slot-1})} comes from moving
    ``inner`` past the preceding arguments.
    """
    if inner.target != outer.source or inner.source != outer.source:
        raise ValueError("compose_multimap needs inner: S^k -> S and outer on S")
    m, k = outer.arity, inner.arity
    if not 1 <= slot <= m:
        raise ValueError(f"slot must be in 1..{m}")
    degs = outer.source.degrees
    s0 = slot - 1

    def fn(key):
        before = key[:s0]
        e = inner.lin_degree * sum(degs[i] for i in before)
        val = inner(*key[s0:s0 + k])
        if not val:
            return {}
        args = [{i: Fraction(1)} for i in before] + [val] + \
               [{i: Fraction(1)} for i in key[s0 + k:]]
        return vscale(-1 if e % 2 else 1, outer.apply(args))

    return MultiMap.from_function(outer.source, outer.target, m + k - 1,
                                  outer.lin_degree + inner.lin_degree, PLAIN, fn)
