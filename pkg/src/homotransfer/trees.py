"""
Oriented binary trees.

Orientation is child order: the first child of a node is the ``1`` branch,
the second the ``2`` branch.  Nodes and leaves are addressed by paths, words
over {1, 2} read from the root.  Lexicographic order on paths (a prefix is
smaller) is the natural ordering of ramifications and leaves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Mapping, Sequence

from .graded import (CHI, PLAIN, MultiMap, Permutation, _shuffle_positions, axpy, shuffle_sign,
                     vscale)

RamPath = tuple


@dataclass(frozen=True)
class OrientedTree:
    """A full binary tree; ``children`` is empty for the leaf, else a pair."""

    children: tuple = ()

    def __post_init__(self):
        if len(self.children) not in (0, 2):
            raise ValueError("a node has exactly two children")

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def first(self) -> "OrientedTree":
        return self.children[0]

    @property
    def second(self) -> "OrientedTree":
        return self.children[1]

    @cached_property
    def n_leaves(self) -> int:
        if self.is_leaf:
            return 1
        return self.first.n_leaves + self.second.n_leaves

    @property
    def n_nodes(self) -> int:
        return self.n_leaves - 1

    def __str__(self):
        return serialize(self)

    def __repr__(self):
        return f"OrientedTree({serialize(self)!r})"

    def __lt__(self, other):
        return serialize(self) < serialize(other)

    def __add__(self, other: "OrientedTree") -> "OrientedTree":
        return add_trees(self, other)


LEAF = OrientedTree()
TAU = LEAF
BETA = OrientedTree((LEAF, LEAF))


def node(a: OrientedTree, b: OrientedTree) -> OrientedTree:
    return OrientedTree((a, b))


def add_trees(a: OrientedTree, b: OrientedTree) -> OrientedTree:
    """The sum a + b: a new root with ``a`` as first and ``b`` as second child."""
    return OrientedTree((a, b))


# -- serialization ----------------------------------------------------------

def serialize(t: OrientedTree) -> str:
    if t.is_leaf:
        return "."
    return "(" + serialize(t.first) + serialize(t.second) + ")"


def parse_tree(text: str) -> OrientedTree:
    """Inverse of :func:`serialize`; grammar ``tree := "." | "(" tree tree ")"``."""
    pos = 0

    def rec():
        nonlocal pos
        if pos >= len(text):
            raise ValueError("unexpected end of tree string")
        c = text[pos]
        if c == ".":
            pos += 1
            return LEAF
        if c == "(":
            pos += 1
            a = rec()
            b = rec()
            if pos >= len(text) or text[pos] != ")":
                raise ValueError(f"expected ')' at position {pos}")
            pos += 1
            return OrientedTree((a, b))
        raise ValueError(f"unexpected character {c!r} at position {pos}")

    t = rec()
    if pos != len(text):
        raise ValueError(f"trailing characters at position {pos}")
    return t


# -- enumeration ------------------------------------------------------------

@lru_cache(maxsize=None)
def _enumerate(n: int) -> tuple:
    if n == 1:
        return (LEAF,)
    out = []
    for p in range(1, n):
        for a in _enumerate(p):
            for b in _enumerate(n - p):
                out.append(add_trees(a, b))
    return tuple(out)


def enumerate_ot(n: int) -> list:
    """All oriented trees with n leaves (a Catalan number of them)."""
    if n < 1:
        raise ValueError("a tree has at least one leaf")
    return list(_enumerate(n))


def catalan(m: int) -> int:
    c = 1
    for i in range(m):
        c = c * 2 * (2 * i + 1) // (i + 2)
    return c


# -- addressing -------------------------------------------------------------

def subtree(t: OrientedTree, path: RamPath) -> OrientedTree:
    for step in path:
        if t.is_leaf or step not in (1, 2):
            raise ValueError(f"path {path} does not address a vertex")
        t = t.children[step - 1]
    return t


def node_paths(t: OrientedTree) -> list:
    """Ramification paths in increasing order (root first)."""
    out = []

    def rec(s, p):
        if s.is_leaf:
            return
        out.append(p)
        rec(s.first, p + (1,))
        rec(s.second, p + (2,))

    rec(t, ())
    return out


def leaf_paths(t: OrientedTree) -> list:
    """Leaf paths; the i-th entry addresses leaf i."""
    out = []

    def rec(s, p):
        if s.is_leaf:
            out.append(p)
            return
        rec(s.first, p + (1,))
        rec(s.second, p + (2,))

    rec(t, ())
    return out


def is_node(t: OrientedTree, path: RamPath) -> bool:
    try:
        return not subtree(t, path).is_leaf
    except ValueError:
        return False


def _require_node(t, path):
    if not is_node(t, tuple(path)):
        raise ValueError(f"path {tuple(path)} does not address a ramification")


def leaves_before(t: OrientedTree, path: RamPath) -> int:
    """Number r of leaves smaller than the vertex at ``path`` (not below it)."""
    path = tuple(path)
    return sum(1 for lp in leaf_paths(t) if lp < path and lp[:len(path)] != path)


# -- invariants -------------------------------------------------------------

def s_leaf(t: OrientedTree, i: int) -> int:
    """Number of ramifications smaller than leaf i."""
    lps = leaf_paths(t)
    if not 1 <= i <= len(lps):
        raise ValueError(f"leaf index {i} out of range 1..{len(lps)}")
    lp = lps[i - 1]
    return sum(1 for p in node_paths(t) if p < lp)


def w_leaf(t: OrientedTree, i: int) -> int:
    """w(i) = s(i) - (i - 1)."""
    if t.n_leaves < 2:
        raise ValueError("w is defined for trees with at least two leaves")
    return s_leaf(t, i) - (i - 1)


def w_node(t: OrientedTree, path: RamPath) -> int:
    """w of a non-root ramification: its w as a leaf of ``t`` with that subtree cut off."""
    path = tuple(path)
    _require_node(t, path)
    if not path:
        raise ValueError("w is not defined for the root")
    cut = subtract(t, path)
    return w_leaf(cut, leaf_paths(cut).index(path) + 1)


def ones_count(path: RamPath) -> int:
    return sum(1 for s in path if s == 1)


def e_sign(t: OrientedTree) -> int:
    """e = (-1)^{w(1)+…+w(n)}, and +1 for the one-leaf tree."""
    return _e_sign(t)


@lru_cache(maxsize=None)
def _e_sign(t: OrientedTree) -> int:
    if t.is_leaf:
        return 1
    total = sum(w_leaf(t, i) for i in range(1, t.n_leaves + 1))
    return -1 if total % 2 else 1


# -- operations -------------------------------------------------------------

def subtract(t: OrientedTree, path: RamPath) -> OrientedTree:
    """Replace the subtree at a ramification by a single leaf."""
    path = tuple(path)
    _require_node(t, path)
    return replace_at(t, path, LEAF)


def replace_at(t: OrientedTree, path: RamPath, new: OrientedTree) -> OrientedTree:
    if not path:
        return new
    if t.is_leaf:
        raise ValueError("path runs past a leaf")
    a, b = t.children
    if path[0] == 1:
        return OrientedTree((replace_at(a, path[1:], new), b))
    return OrientedTree((a, replace_at(b, path[1:], new)))


def compose_trees(outer: OrientedTree, inners: Sequence[OrientedTree]) -> OrientedTree:
    """Graft ``inners[i]`` onto leaf i+1 of ``outer``."""
    if len(inners) != outer.n_leaves:
        raise ValueError(f"need {outer.n_leaves} inner trees, got {len(inners)}")
    it = iter(inners)

    def rec(s):
        if s.is_leaf:
            return next(it)
        a = rec(s.first)
        b = rec(s.second)
        return OrientedTree((a, b))

    return rec(outer)


# -- evaluation -------------------------------------------------------------

def _check_family(t: OrientedTree, B: Mapping):
    paths = node_paths(t)
    missing = [p for p in paths if p not in B]
    if missing:
        raise ValueError(f"no bilinear map assigned at {missing[0]}")
    extra = [p for p in B if p not in set(paths)]
    if extra:
        raise ValueError(f"assignment at {extra[0]} is not a ramification")
    for p in paths:
        if B[p].arity != 2:
            raise ValueError("tree families consist of bilinear maps")


def family_degree(t: OrientedTree, B: Mapping, base: RamPath = ()) -> int:
    """Sum of the linear degrees of the maps on the subtree at ``base``."""
    return sum(B[base + p].lin_degree for p in node_paths(subtree(t, base)))


def evaluate(t: OrientedTree, B: Mapping) -> MultiMap:
    """The n-linear map t(B), built recursively with Koszul signs.

    At a node with children T1 (p leaves) and T2,
    t(B)(a_1..a_n) = (-1)^{|T2(B)|(a_1+…+a_p)} b(T1(B)(a_1..a_p), T2(B)(a_{p+1}..a_n)).
    """
    if t.is_leaf:
        raise ValueError("the one-leaf tree evaluates to the identity, not a multilinear map")
    _check_family(t, B)
    space = B[()].source
    degs = space.degrees
    sub_deg = {p: family_degree(t, B, p) for p in node_paths(t)}

    def rec(s, p, key):
        if s.is_leaf:
            return {key[0]: Fraction(1)}
        k = s.first.n_leaves
        left = rec(s.first, p + (1,), key[:k])
        if not left:
            return {}
        right = rec(s.second, p + (2,), key[k:])
        if not right:
            return {}
        e = sub_deg.get(p + (2,), 0) * sum(degs[i] for i in key[:k])
        val = B[p].apply([left, right])
        return vscale(-1, val) if e % 2 else val

    return MultiMap.from_function(space, B[()].target, t.n_leaves, sub_deg[()], PLAIN,
                                  lambda key: rec(t, (), key), check=False)


def uniform_family(t: OrientedTree, root_map: MultiMap, other: MultiMap | None = None) -> dict:
    """Family with ``root_map`` at the root and ``other`` (default: the same) elsewhere."""
    other = root_map if other is None else other
    return {p: (root_map if not p else other) for p in node_paths(t)}


class AlternatingTreeEvaluator:
    """Evaluates t(B) ∘ (ℓ_1 ⊗ … ⊗ ℓ_n) ∘ α_n without summing over all of Σ_n.

    ``node_map(path)`` gives the bilinear map at a ramification and
    ``leaf_map(i)`` the linear map at global leaf i (None for the identity).
    Inputs are homogeneous vectors; evaluation takes a tuple of input indices.

    At a node with children T1, T2 the alternating sum factors through
    (p, m-p)-shuffles ρ:

        A_T(x) = Σ_ρ χ(ρ, x) (-1)^{s} b(A_T1(x_ρ(1..p)), A_T2(x_ρ(p+1..m)))

    where s collects the Koszul signs of moving T2 and its leaf maps past
    the first block.
    """

    def __init__(self, t: OrientedTree, node_map: Callable, leaf_map: Callable,
                 inputs: Sequence[dict], input_degrees: Sequence[int]):
        if t.is_leaf:
            raise ValueError("need a tree with at least two leaves")
        self.tree = t
        self.inputs = list(inputs)
        self.degrees = list(input_degrees)
        self._node = {p: node_map(p) for p in node_paths(t)}
        self._leaf = {i: leaf_map(i) for i in range(1, t.n_leaves + 1)}
        self._memo: dict = {}
        # per subtree: (tree, first global leaf, node degree, leaf degree)
        self._info: dict = {}

        def walk(s, p, offset):
            if s.is_leaf:
                lm = self._leaf[offset + 1]
                ld = lm.degree if lm is not None else 0
                self._info[p] = (s, offset, 0, ld)
                return 0, ld
            nd1, ld1 = walk(s.first, p + (1,), offset)
            nd2, ld2 = walk(s.second, p + (2,), offset + s.first.n_leaves)
            nd = self._node[p].lin_degree + nd1 + nd2
            self._info[p] = (s, offset, nd, ld1 + ld2)
            return nd, ld1 + ld2

        walk(t, (), 0)

    @property
    def lin_degree(self) -> int:
        _, _, nd, ld = self._info[()]
        return nd + ld

    def __call__(self, key: Sequence[int]) -> dict:
        if len(key) != self.tree.n_leaves:
            raise ValueError("wrong number of arguments")
        return self._eval((), tuple(key))

    def _eval(self, p, key):
        mk = (p, key)
        hit = self._memo.get(mk)
        if hit is not None:
            return hit
        s, offset, _, _ = self._info[p]
        if s.is_leaf:
            v = self.inputs[key[0]]
            lm = self._leaf[offset + 1]
            out = lm(v) if lm is not None else v
            self._memo[mk] = out
            return out
        p1, p2 = p + (1,), p + (2,)
        _, _, nd1, ld1 = self._info[p1]
        _, _, nd2, ld2 = self._info[p2]
        eff2 = nd2 + ld2
        const = (nd2 * ld1) % 2
        degs = [self.degrees[i] for i in key]
        m = len(key)
        k = s.first.n_leaves
        b = self._node[p]
        acc: dict = {}
        for first, rest, _inv in _shuffle_positions(m, k):
            left = self._eval(p1, tuple(key[i] for i in first))
            if not left:
                continue
            right = self._eval(p2, tuple(key[i] for i in rest))
            if not right:
                continue
            sign = shuffle_sign(CHI, first, rest, degs)
            if (eff2 * sum(degs[i] for i in first) + const) % 2:
                sign = -sign
            axpy(acc, sign, b.apply([left, right]))
        self._memo[mk] = acc
        return acc


def composition_sign(outer: OrientedTree, inners: Sequence[OrientedTree],
                     degrees: Mapping) -> int:
    """Sign relating Φ(B) to φ(B⁰) ∘ (ψ¹(B¹) ⊗ … ⊗ ψⁿ(Bⁿ)) for Φ = φ∘(ψ¹,…,ψⁿ).

    ``degrees`` maps ramification paths of the composed tree to the linear
    degrees of the assigned maps.  The exponent is
    Σ_i (Σ_{K∈V⁽ⁱ⁾} b_K)(Σ_{K∈V, K > leaf i} b_K).
    """
    if len(inners) != outer.n_leaves:
        raise ValueError("one inner tree per leaf of the outer tree is required")
    composed = compose_trees(outer, inners)
    paths = set(node_paths(composed))
    if set(degrees) != paths:
        raise ValueError("degrees must be given on exactly the ramifications of the composed tree")
    outer_nodes = node_paths(outer)
    e = 0
    for i, (lp, inner) in enumerate(zip(leaf_paths(outer), inners)):
        inner_deg = sum(degrees[lp + q] for q in node_paths(inner))
        later = sum(degrees[k] for k in outer_nodes if k > lp)
        e += inner_deg * later
    return -1 if e % 2 else 1


# -- grafting bijection -----------------------------------------------------

@dataclass(frozen=True)
class GraftData:
    k: int
    phi: OrientedTree
    psi: OrientedTree
    rho: Permutation
    gamma: Permutation
    delta: Permutation


def graft_decompose(Phi: OrientedTree, K: RamPath, sigma: Permutation) -> GraftData:
    """Split Φ at the non-root ramification K and factor σ through a shuffle."""
    K = tuple(K)
    _require_node(Phi, K)
    if not K:
        raise ValueError("K must not be the root")
    n = Phi.n_leaves
    if sigma.size != n:
        raise ValueError("sigma must permute the leaves of Phi")
    phi = subtree(Phi, K)
    psi = subtract(Phi, K)
    k = phi.n_leaves
    l = n + 1 - k
    r = leaves_before(Phi, K)
    block = sorted(sigma(r + i) for i in range(1, k + 1))
    rest = [j for j in range(1, n + 1) if j not in set(block)]
    rho = Permutation(tuple(block + rest))
    rinv = rho.inverse()
    delta = Permutation(tuple(rinv(sigma(r + i)) for i in range(1, k + 1)))
    gamma = []
    for i in range(1, l + 1):
        if i <= r:
            gamma.append(rinv(sigma(i)) - k + 1)
        elif i == r + 1:
            gamma.append(1)
        else:
            gamma.append(rinv(sigma(i + k - 1)) - k + 1)
    return GraftData(k, phi, psi, rho, Permutation(tuple(gamma)), delta)


def graft_compose(data: GraftData) -> tuple:
    """Inverse of :func:`graft_decompose`; returns (Φ, K, σ)."""
    k, phi, psi = data.k, data.phi, data.psi
    rho, gamma, delta = data.rho, data.gamma, data.delta
    n = rho.size
    l = n + 1 - k
    if not 2 <= k <= n - 1:
        raise ValueError("need 2 <= k <= n-1")
    if phi.n_leaves != k or psi.n_leaves != l:
        raise ValueError("tree sizes do not match k and l")
    if gamma.size != l or delta.size != k or not rho.is_shuffle(k):
        raise ValueError("permutation constraints violated")
    r = gamma.inverse()(1) - 1
    inners = [LEAF] * l
    inners[r] = phi
    Phi = compose_trees(psi, inners)
    K = leaf_paths(psi)[r]
    sig = []
    for i in range(1, n + 1):
        if i <= r:
            sig.append(rho(gamma(i) + k - 1))
        elif i <= r + k:
            sig.append(rho(delta(i - r)))
        else:
            sig.append(rho(gamma(i - (k - 1)) + k - 1))
    return Phi, K, Permutation(tuple(sig))


def graft_triples(n: int) -> list:
    """All (Φ, K, σ) with Φ ∈ Ot(n), K a non-root ramification, σ ∈ Σ_n."""
    perms = Permutation.all(n)
    return [(Phi, K, s) for Phi in enumerate_ot(n) for K in node_paths(Phi)[1:] for s in perms]


def graft_tuples(n: int) -> list:
    """All 6-tuples (k, φ, ψ, ρ, γ, δ) for n leaves."""
    out = []
    for k in range(2, n):
        l = n + 1 - k
        for phi in enumerate_ot(k):
            for psi in enumerate_ot(l):
                for rho in _shuffle_perms(k, n):
                    for gamma in Permutation.all(l):
                        for delta in Permutation.all(k):
                            out.append(GraftData(k, phi, psi, rho, gamma, delta))
    return out


def _shuffle_perms(k, n):
    return [Permutation(tuple(f + 1 for f in first) + tuple(x + 1 for x in rest))
            for first, rest, _ in _shuffle_positions(n, k)]


def wiwo_sign(Phi: OrientedTree, K: RamPath, sigma: Permutation, degrees: Mapping) -> tuple:
    """The two signs (-1)^{r+rk} and (-1)^{r+rk+Σ_{K'∈W} b_{K'}·B''}.

    ``degrees`` gives the linear degree of the map at each ramification of Φ
    and B'' is the total degree of the family on the subtree at K.  W is the
    set of ramifications of ψ = Φ - φ greater than K; the ramifications inside
    φ are not counted (counting them breaks the identity whenever B'' is odd).
    """
    K = tuple(K)
    data = graft_decompose(Phi, K, sigma)
    r = leaves_before(Phi, K)
    k = data.k
    first = -1 if (r + r * k) % 2 else 1
    b2 = sum(degrees[K + q] for q in node_paths(data.phi))
    w = sum(degrees[p] for p in node_paths(data.psi) if p > K)
    second = first * (-1 if (w * b2) % 2 else 1)
    return first, second


def tree_sign_table(n: int) -> list:
    """(serialized tree, e) for every tree with n leaves; handy for reports."""
    return [(serialize(t), e_sign(t)) for t in enumerate_ot(n)]
