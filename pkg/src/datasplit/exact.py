"""Exact search for optimal coverings.

Any covering can be shrunk so that each fragment is the union of the required
sets it contains, without breaking either covering condition.  Optimal
coverings therefore correspond to partitions of the required family into
admissible groups, which is what the search below enumerates.  Group labels
follow restricted-growth order (a set may only open the next unused group)
so each partition is visited once.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BudgetExceeded
from .family import (
    Covering,
    Instance,
    check_feasible,
    is_feasible,
    is_subset,
    lower_bound,
    normalize,
    set_degree,
)
from .greedy import heuristic_cover


@dataclass(frozen=True)
class SolveLimits:
    max_nodes: int = 5_000_000
    max_k: int = 64

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_k <= 0:
            raise ValueError("solve limits must be positive")


@dataclass
class OptimalReport:
    optimal_size: int
    one_cover: Covering
    nodes_explored: int
    canonical_optimal_covers: set[Covering] | None = field(default=None)

    def as_dict(self) -> dict:
        return {
            "optimal_size": self.optimal_size,
            "cover": self.one_cover.canonical().as_lists(),
            "num_canonical_optimal": (
                len(self.canonical_optimal_covers)
                if self.canonical_optimal_covers is not None
                else None
            ),
            "nodes": self.nodes_explored,
        }


class _Search:
    """Shared state for one partition search over a normalized instance."""

    def __init__(self, instance: Instance, limits: SolveLimits):
        F = instance.forbidden
        req = instance.required
        # most constrained sets first
        order = sorted(range(len(req)), key=lambda i: -set_degree(F, req[i]))
        self.sets = [req[i] for i in order]
        self.residues = [[f & ~b for f in F if f & b] for b in self.sets]
        self.limits = limits
        self.nodes = 0

    def _tick(self):
        self.nodes += 1
        if self.nodes > self.limits.max_nodes:
            raise BudgetExceeded("search node", self.limits.max_nodes)

    def _fits(self, i, group):
        return not any(is_subset(r, group) for r in self.residues[i])

    def decide(self, t: int) -> list[int] | None:
        groups: list[int] = []
        sets = self.sets
        m = len(sets)

        def place(i):
            self._tick()
            if i == m:
                return True
            b = sets[i]
            for j, g in enumerate(groups):
                if is_subset(b, g):
                    # joining a group that already holds b changes nothing
                    return place(i + 1)
            for j, g in enumerate(groups):
                if self._fits(i, g):
                    groups[j] = g | b
                    if place(i + 1):
                        return True
                    groups[j] = g
            if len(groups) < t:
                groups.append(b)
                if place(i + 1):
                    return True
                groups.pop()
            return False

        return list(groups) if place(0) else None

    def enumerate(self, t: int) -> set[Covering]:
        found: set[Covering] = set()
        groups: list[int] = []
        sets = self.sets
        m = len(sets)

        def place(i):
            self._tick()
            if m - i < t - len(groups):
                return
            if i == m:
                found.add(Covering(tuple(groups)).canonical())
                return
            b = sets[i]
            for j, g in enumerate(groups):
                if self._fits(i, g):
                    groups[j] = g | b
                    place(i + 1)
                    groups[j] = g
            if len(groups) < t:
                groups.append(b)
                place(i + 1)
                groups.pop()

        place(0)
        return found


def decide_cover_exists(instance: Instance, t: int, limits: SolveLimits = SolveLimits()) -> Covering | None:
    """Return a covering with at most ``t`` fragments, or None if there is none.

    Raises BudgetExceeded rather than guessing when the node budget runs out.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    inst = normalize(instance)
    if not is_feasible(inst):
        return None
    groups = _Search(inst, limits).decide(t)
    return None if groups is None else Covering(tuple(groups))


def optimal_cover(instance: Instance, limits: SolveLimits = SolveLimits(), enumerate_all: bool = False) -> OptimalReport:
    """Smallest covering, found by deepening the fragment count from the lower bound.

    The heuristic covering caps the search: once every smaller size has been
    refuted, its size is optimal and it serves as the witness.
    """
    check_feasible(instance)
    inst = normalize(instance)
    if not inst.required:
        return OptimalReport(0, Covering(), 0, {Covering()} if enumerate_all else None)
    search = _Search(inst, limits)
    upper_cover, _ = heuristic_cover(inst)
    upper = len(upper_cover)
    best = None
    t = max(lower_bound(inst), 1)
    while t < upper:
        if t > limits.max_k:
            raise BudgetExceeded("fragment count", limits.max_k)
        groups = search.decide(t)
        if groups is not None:
            best = Covering(tuple(groups))
            break
        t += 1
    if best is None:
        if upper > limits.max_k:
            raise BudgetExceeded("fragment count", limits.max_k)
        t, best = upper, upper_cover
    covers = search.enumerate(t) if enumerate_all else None
    return OptimalReport(t, best, search.nodes, covers)


def enumerate_optimal_covers(instance: Instance, limits: SolveLimits = SolveLimits(), size: int | None = None) -> set[Covering]:
    """All coverings obtained from partitions of A into exactly the optimal number of groups."""
    check_feasible(instance)
    inst = normalize(instance)
    if size is None:
        size = optimal_cover(inst, limits).optimal_size
    if not inst.required:
        return {Covering()}
    return _Search(inst, limits).enumerate(size)
