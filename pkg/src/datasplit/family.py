"""Instances, coverings and the set-family machinery the solvers share.

Attribute sets are stored as ``int`` bitmasks (bit ``i`` set means attribute
``i`` belongs to the set).  Families are tuples of masks so that instances
and coverings stay hashable and immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    AttributeOutOfRange,
    ChosenNotInFamily,
    EmptyForbiddenSet,
    InfeasibleInstance,
    NotAntichain,
    SingletonForbiddenSet,
    UniverseMismatch,
)


def to_mask(members: Iterable[int]) -> int:
    mask = 0
    for i in members:
        if i < 0:
            raise AttributeOutOfRange(i, None)
        mask |= 1 << i
    return mask


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def fmt_set(mask: int) -> str:
    return "{" + ",".join(map(str, members(mask))) + "}"


def _family(sets) -> tuple[int, ...]:
    return tuple(s if isinstance(s, int) else to_mask(s) for s in sets)


@dataclass(frozen=True)
class Instance:
    """A data splitting problem over attributes ``0..n-1``.

    ``forbidden`` (F) lists attribute sets that must never share a fragment;
    ``required`` (A) lists sets that must appear together in some fragment.
    """

    n: int
    forbidden: tuple[int, ...] = ()
    required: tuple[int, ...] = ()
    attribute_names: tuple[str, ...] | None = field(default=None, compare=False)

    @classmethod
    def from_sets(cls, n, forbidden=(), required=(), attribute_names=None):
        """Build an instance from iterables of attribute indices."""
        names = tuple(attribute_names) if attribute_names is not None else None
        return cls(n, _family(forbidden), _family(required), names)

    @property
    def universe(self) -> int:
        return (1 << self.n) - 1

    def forbidden_sets(self) -> list[list[int]]:
        return [members(m) for m in self.forbidden]

    def required_sets(self) -> list[list[int]]:
        return [members(m) for m in self.required]

    def replace(self, forbidden=None, required=None) -> Instance:
        return Instance(
            self.n,
            self.forbidden if forbidden is None else tuple(forbidden),
            self.required if required is None else tuple(required),
            self.attribute_names,
        )


@dataclass(frozen=True)
class Covering:
    """An ordered family of fragments."""

    fragments: tuple[int, ...] = ()

    @classmethod
    def from_sets(cls, sets) -> Covering:
        return cls(_family(sets))

    def __len__(self):
        return len(self.fragments)

    def __iter__(self):
        return iter(self.fragments)

    def canonical(self) -> Covering:
        """Drop empty and repeated fragments and sort the rest."""
        kept = {f for f in self.fragments if f}
        return Covering(tuple(sorted(kept, key=lambda m: members(m))))

    def key(self) -> frozenset[int]:
        """Family-of-sets identity, ignoring order, repeats and empty fragments."""
        return frozenset(f for f in self.fragments if f)

    def as_lists(self) -> list[list[int]]:
        return [members(f) for f in self.fragments]

    def __str__(self):
        return "{" + ", ".join(fmt_set(f) for f in self.fragments) + "}"


def validate(instance: Instance) -> Instance:
    """Check the instance and strip empty required sets.

    Raises AttributeOutOfRange, EmptyForbiddenSet or SingletonForbiddenSet.
    """
    if instance.n < 0:
        raise AttributeOutOfRange(instance.n, 0)
    universe = instance.universe
    for s in instance.forbidden + instance.required:
        if s < 0:
            raise AttributeOutOfRange(s, instance.n)
        if s & ~universe:
            raise AttributeOutOfRange(members(s & ~universe)[0], instance.n)
    for s in instance.forbidden:
        if s == 0:
            raise EmptyForbiddenSet()
        if s.bit_count() == 1:
            raise SingletonForbiddenSet(members(s)[0])
    if instance.attribute_names is not None and len(instance.attribute_names) != instance.n:
        raise AttributeOutOfRange(len(instance.attribute_names) - 1, instance.n)
    return instance.replace(required=[s for s in instance.required if s])


# -- degrees ---------------------------------------------------------------


def element_degree(family: Sequence[int], i: int) -> int:
    """Number of sets in ``family`` containing attribute ``i``."""
    bit = 1 << i
    return sum(1 for s in family if s & bit)


def set_degree(family: Sequence[int], subset: int) -> int:
    """Number of sets in ``family`` meeting ``subset``."""
    return sum(1 for s in family if s & subset)


def family_degree(family: Sequence[int]) -> int:
    """Largest element degree in ``family`` (0 for the empty family)."""
    top = 0
    for i in members(_union(family)):
        top = max(top, element_degree(family, i))
    return top


def _union(family: Iterable[int]) -> int:
    u = 0
    for s in family:
        u |= s
    return u


def closure_contains(subset: int, family: Iterable[int]) -> bool:
    """True if some member of ``family`` is a superset of ``subset``."""
    return any(is_subset(subset, s) for s in family)


# -- normalization and feasibility -----------------------------------------


def minimal_sets(family: Sequence[int]) -> list[int]:
    """Inclusion-minimal members, first occurrence order, duplicates removed."""
    out = []
    seen = set()
    for s in family:
        if s in seen:
            continue
        seen.add(s)
        if not any(t != s and is_subset(t, s) for t in family):
            out.append(s)
    return out


def maximal_sets(family: Sequence[int]) -> list[int]:
    """Inclusion-maximal members, first occurrence order, duplicates removed."""
    out = []
    seen = set()
    for s in family:
        if s in seen:
            continue
        seen.add(s)
        if not any(t != s and is_subset(s, t) for t in family):
            out.append(s)
    return out


def normalize(instance: Instance) -> Instance:
    """Reduce F to its minimal sets and A to its maximal sets, then complete A.

    Every attribute missing from the union of A is appended as a singleton,
    in increasing order.  Coverings of the result are exactly the coverings
    of the input.
    """
    forbidden = minimal_sets(instance.forbidden)
    required = maximal_sets(instance.required)
    missing = instance.universe & ~_union(required)
    required.extend(1 << i for i in members(missing))
    return instance.replace(forbidden=forbidden, required=required)


def first_violation(instance: Instance) -> tuple[int, int] | None:
    """A (forbidden, required) pair with forbidden ⊆ required, if any."""
    for f in instance.forbidden:
        for b in instance.required:
            if is_subset(f, b):
                return f, b
    return None


def is_feasible(instance: Instance) -> bool:
    return first_violation(instance) is None


def check_feasible(instance: Instance) -> None:
    bad = first_violation(instance)
    if bad is not None:
        raise InfeasibleInstance(fmt_set(bad[0]), fmt_set(bad[1]))


def admissible(fragment: int, forbidden: Sequence[int]) -> bool:
    """True if ``fragment`` contains no forbidden set."""
    return not any(is_subset(f, fragment) for f in forbidden)


def is_covering(instance: Instance, covering) -> bool:
    frags = covering.fragments if isinstance(covering, Covering) else _family(covering)
    if not all(admissible(x, instance.forbidden) for x in frags):
        return False
    return all(closure_contains(b, frags) for b in instance.required)


def dominates(a: Instance, b: Instance) -> bool:
    """True when every covering of ``a`` is guaranteed to be a covering of ``b``."""
    if a.n != b.n:
        raise UniverseMismatch(f"universe sizes differ: {a.n} vs {b.n}")
    forb_ok = all(any(is_subset(fa, fb) for fa in a.forbidden) for fb in b.forbidden)
    req_ok = all(any(is_subset(rb, ra) for ra in a.required) for rb in b.required)
    return forb_ok and req_ok


def punctured_covering(n: int, family, chosen) -> Covering:
    """The covering {P - {i} : i in chosen} of the instance ({chosen}, family - {chosen})."""
    fam = _family(family)
    chosen = chosen if isinstance(chosen, int) else to_mask(chosen)
    for s in fam:
        for t in fam:
            if s != t and is_subset(s, t):
                raise NotAntichain(f"{fmt_set(s)} is contained in {fmt_set(t)}")
    if chosen not in fam:
        raise ChosenNotInFamily(fmt_set(chosen))
    universe = (1 << n) - 1
    return Covering(tuple(universe & ~(1 << i) for i in members(chosen)))


# -- bounds ------------------------------------------------------------------


@dataclass(frozen=True)
class BoundsReport:
    lower: int
    greedy_upper: int
    heuristic_upper: int
    refined_upper: int
    probabilistic_size_bound: float
    probabilistic_degree_bound: float
    k: int
    degF: int
    degA: int

    def as_dict(self) -> dict:
        return {
            "lower": self.lower,
            "greedy_upper": self.greedy_upper,
            "heuristic_upper": self.heuristic_upper,
            "refined_upper": self.refined_upper,
            "probabilistic_size_bound": self.probabilistic_size_bound,
            "probabilistic_degree_bound": self.probabilistic_degree_bound,
            "k": self.k,
            "degF": self.degF,
            "degA": self.degA,
        }


def heuristic_order(instance: Instance) -> list[int]:
    """Required sets stably sorted by how many forbidden sets they meet, most first."""
    return sorted(instance.required, key=lambda b: -set_degree(instance.forbidden, b))


def lower_bound(instance: Instance) -> int:
    """Minimum-degree style lower bound on the size of any covering."""
    req = instance.required
    if not req:
        return 0
    if not instance.forbidden:
        return 1
    m = len(req)
    worst = max(
        min(element_degree(req, a) for a in members(f)) for f in instance.forbidden
    )
    # positive whenever the instance is feasible
    den = m - worst
    return -(-m // den)


def ordered_size_bound(order: Sequence[int], forbidden: Sequence[int], deg_a: int) -> int:
    """max_i min(deg_{B_i}(F) * deg(A) + 1, i) over the given processing order."""
    best = 0
    for i, b in enumerate(order, start=1):
        best = max(best, min(set_degree(forbidden, b) * deg_a + 1, i))
    return best


def refined_size_bound(order: Sequence[int], forbidden: Sequence[int], deg_a: int) -> int:
    """Track the worst-case fragment count step by step along ``order``.

    After the first set there is one fragment.  A later set can only open a new
    fragment when the number of fragments it may be blocked from is at least
    the current count.
    """
    if not order:
        return 0
    count = 1
    for b in order[1:]:
        blocked = set_degree(forbidden, b) * deg_a
        if blocked >= count:
            count += 1
    return count


def bounds(instance: Instance) -> BoundsReport:
    """All closed-form size bounds for a feasible instance.

    The instance is normalized first; the heuristic and refined bounds use the
    degree-sorted order that the heuristic solver processes.
    """
    check_feasible(instance)
    inst = normalize(instance)
    F, A = inst.forbidden, inst.required
    deg_f = family_degree(F)
    deg_a = family_degree(A)
    k = max((b.bit_count() for b in A), default=0)
    order = heuristic_order(inst)
    k_all = max((s.bit_count() for s in F + A), default=0)
    log_n = math.log(inst.n) if inst.n > 0 else 0.0
    base = 2 * k_all * deg_f
    return BoundsReport(
        lower=lower_bound(inst),
        greedy_upper=k * deg_f * deg_a + 1,
        heuristic_upper=ordered_size_bound(order, F, deg_a),
        refined_upper=refined_size_bound(order, F, deg_a),
        probabilistic_size_bound=2 * base**k_all * log_n,
        probabilistic_degree_bound=2 * base ** max(k_all - 1, 0) * log_n,
        k=k,
        degF=deg_f,
        degA=deg_a,
    )
