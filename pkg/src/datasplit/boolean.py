"""Multilinear polynomials over GF(2) and the k-coloring ideal of an instance.

Variables ``x_{i,j}`` (attribute ``i``, color ``j`` in ``1..k``) are numbered
``(j - 1) * n + i`` so that numeric order is lexicographic in ``(j, i)``.  A
monomial is the bitmask of its variables, which folds ``x**2 = x`` into the
representation, and a polynomial is the frozenset of its monomials (GF(2)
coefficients, so addition is symmetric difference).

Monomials are compared in degree reverse lexicographic order with lower
variable numbers ranking higher.  For two multilinear monomials of equal
degree the larger one in that order is the numerically smaller mask, which
gives the cheap sort key ``(degree, -mask)``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

import numpy as np

from .errors import BudgetExceeded, InfeasibleInstance, SizeExceedsK, VariableCapExceeded
from .family import Covering, Instance, check_feasible, members, normalize


class VarId(NamedTuple):
    i: int
    j: int


def var_index(i: int, j: int, n: int) -> int:
    return (j - 1) * n + i


def var_of(index: int, n: int) -> VarId:
    j, i = divmod(index, n)
    return VarId(i, j + 1)


def var_name(index: int, n: int) -> str:
    return "x_%d_%d" % var_of(index, n)


def monomial_key(m: int) -> tuple[int, int]:
    return (m.bit_count(), -m)


class BoolPoly:
    """An element of GF(2)[X] / (x**2 + x)."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[int] = ()):
        self.terms = frozenset(terms)
        self._hash = None

    @classmethod
    def var(cls, index: int) -> BoolPoly:
        return cls((1 << index,))

    @classmethod
    def monomial(cls, variables: Iterable[int]) -> BoolPoly:
        m = 0
        for v in variables:
            m |= 1 << v
        return cls((m,))

    @classmethod
    def one(cls) -> BoolPoly:
        return cls((0,))

    @classmethod
    def zero(cls) -> BoolPoly:
        return cls()

    def __add__(self, other: BoolPoly) -> BoolPoly:
        if isinstance(other, int):
            other = BoolPoly.one() if other % 2 else BoolPoly.zero()
        return BoolPoly(self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other: BoolPoly) -> BoolPoly:
        if isinstance(other, int):
            return self if other % 2 else BoolPoly.zero()
        out: set[int] = set()
        for a in self.terms:
            for b in other.terms:
                out ^= {a | b}
        return BoolPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = BoolPoly.one() if other % 2 else BoolPoly.zero()
        return isinstance(other, BoolPoly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"BoolPoly({sorted(self.terms, key=monomial_key, reverse=True)})"

    @property
    def is_one(self) -> bool:
        return self.terms == {0}

    def variables(self) -> int:
        """Bitmask of every variable that occurs in the polynomial."""
        u = 0
        for m in self.terms:
            u |= m
        return u

    def degree(self) -> int:
        return max((m.bit_count() for m in self.terms), default=-1)

    def leading(self) -> int:
        return max(self.terms, key=monomial_key)

    def sorted_terms(self) -> list[int]:
        return sorted(self.terms, key=monomial_key, reverse=True)

    def __call__(self, point) -> int:
        return poly_eval(self, point)


def poly_add(p: BoolPoly, q: BoolPoly) -> BoolPoly:
    return p + q


def poly_mul(p: BoolPoly, q: BoolPoly) -> BoolPoly:
    return p * q


def _point_mask(point) -> int:
    if isinstance(point, int):
        return point
    if isinstance(point, Assignment):
        return point.bits
    bits = 0
    for v, val in point.items():
        if val:
            bits |= 1 << v
    return bits


def poly_eval(p: BoolPoly, point) -> int:
    """Value of ``p`` at a 0/1 point.

    ``point`` is a bitmask of the variables set to 1, an ``Assignment``, or a
    mapping from variable number to 0/1.
    """
    ones = _point_mask(point)
    return sum(1 for m in p.terms if m & ones == m) & 1


def partial_eval(p: BoolPoly, ones: int, zeros: int) -> BoolPoly:
    """Substitute known variable values, leaving the rest symbolic."""
    out: set[int] = set()
    for m in p.terms:
        if m & zeros:
            continue
        out ^= {m & ~ones}
    return BoolPoly(out)


def format_poly(p: BoolPoly, n: int) -> str:
    """Render as ``x_i_j`` products joined by ``*`` and terms joined by `` + ``."""
    if not p.terms:
        return "0"
    parts = []
    for m in p.sorted_terms():
        if m == 0:
            parts.append("1")
        else:
            parts.append("*".join(var_name(v, n) for v in members(m)))
    return " + ".join(parts)


def parse_poly(text: str, n: int) -> BoolPoly:
    """Inverse of ``format_poly``."""
    text = text.strip()
    if text == "0":
        return BoolPoly()
    out: set[int] = set()
    for term in text.split("+"):
        term = term.strip()
        m = 0
        if term != "1":
            for factor in term.split("*"):
                _, i, j = factor.strip().split("_")
                m |= 1 << var_index(int(i), int(j), n)
        out ^= {m}
    return BoolPoly(out)


# -- the coloring ideal ------------------------------------------------------


@dataclass(frozen=True)
class IdealGenerators:
    g1: tuple[BoolPoly, ...]
    g2: tuple[BoolPoly, ...]
    k: int
    n: int

    @property
    def polys(self) -> tuple[BoolPoly, ...]:
        return self.g1 + self.g2

    @property
    def num_vars(self) -> int:
        return self.k * self.n

    def dump(self) -> str:
        return "\n".join(format_poly(p, self.n) for p in self.polys)


def color_monomial(subset: int, j: int, n: int) -> int:
    """Monomial prod_{i in subset} x_{i,j} as a variable bitmask."""
    return subset << ((j - 1) * n)


def encode_ideal(instance: Instance, k: int) -> IdealGenerators:
    """Generators whose common 0/1 roots are the coverings with at most k colors.

    One monomial per forbidden set and color (no color class may hold the whole
    set) and one product per required set (some color class holds all of it).
    The instance should already be normalized so that A covers every attribute.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    n = instance.n
    g1 = tuple(
        BoolPoly((color_monomial(f, j, n),)) for f in instance.forbidden for j in range(1, k + 1)
    )
    g2 = []
    for b in instance.required:
        prod = BoolPoly.one()
        for j in range(1, k + 1):
            prod = prod * BoolPoly((color_monomial(b, j, n), 0))
        g2.append(prod)
    return IdealGenerators(g1, tuple(g2), k, n)


# -- multi-colorings -----------------------------------------------------------


@dataclass(frozen=True)
class Assignment:
    """A total 0/1 assignment of the ``k * n`` variables, stored as a bitmask of ones."""

    bits: int
    n: int
    k: int

    def value(self, i: int, j: int) -> int:
        return (self.bits >> var_index(i, j, self.n)) & 1

    def as_dict(self) -> dict[VarId, int]:
        return {
            VarId(i, j): self.value(i, j) for j in range(1, self.k + 1) for i in range(self.n)
        }

    def multicoloring(self) -> np.ndarray:
        mu = np.zeros((self.n, self.k), dtype=bool)
        for v in members(self.bits):
            i, j = var_of(v, self.n)
            mu[i, j - 1] = True
        return mu

    def covering(self) -> Covering:
        return multicoloring_to_covering(self.multicoloring())


def multicoloring_to_covering(mu) -> Covering:
    """Color classes as fragments, in color order, with empty classes dropped."""
    mu = np.asarray(mu, dtype=bool)
    frags = []
    for j in range(mu.shape[1]):
        mask = 0
        for i in np.flatnonzero(mu[:, j]):
            mask |= 1 << int(i)
        if mask:
            frags.append(mask)
    return Covering(tuple(frags))


def covering_to_multicoloring(covering: Covering, k: int, n: int) -> np.ndarray:
    """The n-by-k matrix whose column j indicates fragment j (extra columns stay zero)."""
    frags = covering.fragments if isinstance(covering, Covering) else Covering.from_sets(covering).fragments
    if len(frags) > k:
        raise SizeExceedsK(f"covering has {len(frags)} fragments but k = {k}")
    mu = np.zeros((n, k), dtype=bool)
    for j, x in enumerate(frags):
        for i in members(x):
            mu[i, j] = True
    return mu


def assignment_from_multicoloring(mu) -> Assignment:
    mu = np.asarray(mu, dtype=bool)
    n, k = mu.shape
    bits = 0
    for i, j in zip(*np.nonzero(mu)):
        bits |= 1 << var_index(int(i), int(j) + 1, n)
    return Assignment(bits, n, k)


# -- root enumeration ---------------------------------------------------------


@dataclass(frozen=True)
class AlgebraLimits:
    max_vars: int = 24
    max_nodes: int = 5_000_000
    max_pairs: int = 200_000
    max_k: int = 64


def enumerate_roots(
    gens: IdealGenerators,
    limits: AlgebraLimits = AlgebraLimits(),
    max_roots: int | None = None,
) -> list[Assignment]:
    """All common 0/1 roots of the generators, by backtracking over variables.

    Variables are fixed in increasing number.  After each choice every
    generator mentioning the variable is partially evaluated; a generator
    that has collapsed to the constant 1 can no longer vanish, so the branch
    is cut.  ``max_roots`` stops early once that many roots are found.
    """
    nv = gens.num_vars
    if nv > limits.max_vars:
        raise VariableCapExceeded(f"{nv} variables exceed the cap of {limits.max_vars}")
    polys = [p for p in gens.polys]
    if any(p.is_one for p in polys):
        return []
    watch: list[list[BoolPoly]] = [[] for _ in range(nv)]
    for p in polys:
        for v in members(p.variables()):
            watch[v].append(p)
    roots: list[Assignment] = []
    nodes = 0

    def dead(v, ones, zeros):
        return any(partial_eval(p, ones, zeros).is_one for p in watch[v])

    def walk(v, ones, zeros):
        nonlocal nodes
        nodes += 1
        if nodes > limits.max_nodes:
            raise BudgetExceeded("root search node", limits.max_nodes)
        if v == nv:
            roots.append(Assignment(ones, gens.n, gens.k))
            return max_roots is not None and len(roots) >= max_roots
        bit = 1 << v
        for ones2, zeros2 in ((ones, zeros | bit), (ones | bit, zeros)):
            if dead(v, ones2, zeros2):
                continue
            if walk(v + 1, ones2, zeros2):
                return True
        return False

    walk(0, 0, 0)
    return roots


def has_root(gens: IdealGenerators, limits: AlgebraLimits = AlgebraLimits()) -> bool:
    return bool(enumerate_roots(gens, limits, max_roots=1))


# -- Buchberger in the Boolean quotient ring ------------------------------------


@dataclass
class GroebnerResult:
    feasible: bool
    basis: list[BoolPoly]
    pairs_processed: int = 0
    reductions: int = field(default=0)

    def dump(self, n: int) -> str:
        return "\n".join(format_poly(p, n) for p in self.basis)


def _reduce(terms: Iterable[int], basis: list[tuple[int, frozenset[int]]]) -> set[int]:
    """Normal form of a polynomial modulo ``basis`` (pairs of leading monomial, terms)."""
    todo = set(terms)
    heap = [(-m.bit_count(), m) for m in todo]
    heapq.heapify(heap)
    rem: set[int] = set()
    while heap:
        _, t = heapq.heappop(heap)
        if t not in todo:
            continue
        for lm, g in basis:
            if lm & ~t == 0:
                shift = t & ~lm
                for s in g:
                    u = s | shift
                    if u in todo:
                        todo.remove(u)
                    else:
                        todo.add(u)
                        heapq.heappush(heap, (-u.bit_count(), u))
                break
        else:
            todo.remove(t)
            rem.add(t)
    return rem


def _times_monomial(terms: Iterable[int], m: int) -> set[int]:
    out: set[int] = set()
    for s in terms:
        out ^= {s | m}
    return out


def buchberger(
    polys: Iterable[BoolPoly],
    limits: AlgebraLimits = AlgebraLimits(),
) -> GroebnerResult:
    """Groebner basis of the ideal generated by ``polys`` plus all field equations.

    Besides the ordinary S-polynomials, each basis element ``f`` is paired with
    the field equation of every variable ``x`` in its leading monomial, which in
    multilinear arithmetic amounts to reducing ``x * f``.  Ordinary pairs are
    pruned with the Gebauer-Moeller update.  Returns as soon as 1 enters the
    ideal.
    """
    basis: list[tuple[int, frozenset[int]]] = []
    active: list[int] = []
    pairs: dict[tuple[int, int], int] = {}
    heap: list[tuple] = []
    counter = 0
    processed = 0
    reductions = 0

    def push(kind, a, b, lcm):
        nonlocal counter
        heapq.heappush(heap, (lcm.bit_count(), -lcm, counter, kind, a, b))
        counter += 1

    def add(terms: set[int]) -> bool:
        lm = max(terms, key=monomial_key)
        h = len(basis)
        basis.append((lm, frozenset(terms)))
        if lm == 0:
            return True
        # new pairs (g, h): drop those whose lcm is a multiple of another new lcm
        cand = [(g, basis[g][0] | lm, not (basis[g][0] & lm)) for g in active]
        kept = []
        for pos, (g, lcm, coprime) in enumerate(cand):
            if coprime:
                kept.append((g, lcm, True))
                continue
            rest = cand[pos + 1 :]
            if any(l2 & ~lcm == 0 for _, l2, _ in rest) or any(l2 & ~lcm == 0 for _, l2, _ in kept):
                continue
            kept.append((g, lcm, False))
        # old pairs made redundant by h
        for (a, b), lcm in list(pairs.items()):
            if lm & ~lcm == 0 and (basis[a][0] | lm) != lcm and (basis[b][0] | lm) != lcm:
                del pairs[(a, b)]
        for g, lcm, coprime in kept:
            if not coprime:
                pairs[(g, h)] = lcm
                push("s", g, h, lcm)
        for v in members(lm):
            if any(not (t >> v) & 1 for t in terms):
                push("x", h, 1 << v, lm)
        active[:] = [g for g in active if lm & ~basis[g][0]]
        active.append(h)
        return False

    def reducers():
        return [basis[g] for g in active]

    for p in polys:
        r = _reduce(p.terms, reducers())
        reductions += 1
        if r and add(r):
            return GroebnerResult(False, [BoolPoly.one()], processed, reductions)

    while heap:
        _, _, _, kind, a, b = heapq.heappop(heap)
        if kind == "s" and pairs.pop((a, b), None) is None:
            continue
        processed += 1
        if processed > limits.max_pairs:
            raise BudgetExceeded("critical pair", limits.max_pairs)
        lm_a, f = basis[a]
        if kind == "s":
            lm_b, g = basis[b]
            lcm = lm_a | lm_b
            s = _times_monomial(f, lcm & ~lm_a) ^ _times_monomial(g, lcm & ~lm_b)
        else:
            s = _times_monomial(f, b)
        r = _reduce(s, reducers())
        reductions += 1
        if r and add(r):
            return GroebnerResult(False, [BoolPoly.one()], processed, reductions)

    return GroebnerResult(True, _reduced_basis(reducers()), processed, reductions)


def _reduced_basis(basis: list[tuple[int, frozenset[int]]]) -> list[BoolPoly]:
    lms = [lm for lm, _ in basis]
    keep = []
    for idx, lm in enumerate(lms):
        redundant = any(
            (other & ~lm == 0) and (other != lm or jdx < idx)
            for jdx, other in enumerate(lms)
            if jdx != idx
        )
        if not redundant:
            keep.append(basis[idx])
    out = []
    for idx, (lm, g) in enumerate(keep):
        others = [b for jdx, b in enumerate(keep) if jdx != idx]
        tail = _reduce(g - {lm}, others)
        out.append(BoolPoly(tail | {lm}))
    out.sort(key=lambda p: monomial_key(p.leading()), reverse=True)
    return out


def buchberger_feasible(gens: IdealGenerators, limits: AlgebraLimits = AlgebraLimits()) -> GroebnerResult:
    """Run Buchberger on the coloring ideal; ``feasible`` is False iff the basis is {1}."""
    return buchberger(gens.polys, limits)


def algebraic_search(
    instance: Instance,
    limits: AlgebraLimits = AlgebraLimits(),
    method: str = "auto",
) -> tuple[int, str]:
    """Smallest k whose coloring ideal has a root, and which method settled it.

    ``method`` is ``"enumerate"``, ``"buchberger"`` or ``"auto"`` (root search
    while ``k * n`` stays within ``limits.max_vars``, Buchberger beyond).
    """
    check_feasible(instance)
    inst = normalize(instance)
    if not inst.required:
        return 0, "trivial"
    for k in range(1, min(limits.max_k, len(inst.required)) + 1):
        gens = encode_ideal(inst, k)
        use = method
        if method == "auto":
            use = "enumerate" if gens.num_vars <= limits.max_vars else "buchberger"
        if use == "enumerate":
            found = has_root(gens, limits)
        elif use == "buchberger":
            found = buchberger_feasible(gens, limits).feasible
        else:
            raise ValueError(f"unknown method {method!r}")
        if found:
            return k, use
    if len(inst.required) > limits.max_k:
        raise BudgetExceeded("color count", limits.max_k)
    # the required family itself is always a covering of a feasible instance
    raise InfeasibleInstance()


def algebraic_optimal_size(instance: Instance, limits: AlgebraLimits = AlgebraLimits(), method: str = "auto") -> int:
    return algebraic_search(instance, limits, method)[0]
