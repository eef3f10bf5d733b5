"""Greedy construction of coverings and its degree-sorted variant."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .family import (
    Covering,
    Instance,
    check_feasible,
    element_degree,
    family_degree,
    is_subset,
    members,
    set_degree,
)

MERGED = "merged"
CONTAINED = "contained"
APPENDED = "appended"


@dataclass(frozen=True)
class Step:
    """What happened to one required set.

    ``required_index`` points into the instance's stored required family;
    ``fragment`` is the index of the fragment that absorbed or now holds it.
    """

    required_index: int
    action: str
    fragment: int

    def as_dict(self) -> dict:
        return {"required": self.required_index, "action": self.action, "fragment": self.fragment}


def _blocking_residues(b: int, forbidden: Sequence[int]) -> list[int]:
    # X is admissible already, so X | b can only swallow a forbidden set that meets b
    return [f & ~b for f in forbidden if f & b]


def greedy_order(instance: Instance, order: Sequence[int]) -> tuple[Covering, list[Step]]:
    """Run the greedy construction over required sets in the given index order."""
    fragments: list[int] = []
    steps: list[Step] = []
    for idx in order:
        b = instance.required[idx]
        home = next((j for j, x in enumerate(fragments) if is_subset(b, x)), None)
        if home is not None:
            steps.append(Step(idx, CONTAINED, home))
            continue
        residues = _blocking_residues(b, instance.forbidden)
        for j, x in enumerate(fragments):
            if not any(is_subset(r, x) for r in residues):
                fragments[j] = x | b
                steps.append(Step(idx, MERGED, j))
                break
        else:
            fragments.append(b)
            steps.append(Step(idx, APPENDED, len(fragments) - 1))
    return Covering(tuple(fragments)), steps


def greedy_cover(instance: Instance) -> tuple[Covering, list[Step]]:
    """Merge each required set, in stored order, into the first fragment that stays admissible."""
    check_feasible(instance)
    return greedy_order(instance, range(len(instance.required)))


def heuristic_cover(instance: Instance) -> tuple[Covering, list[Step]]:
    """Greedy construction after a stable sort of A by decreasing forbidden degree."""
    check_feasible(instance)
    F = instance.forbidden
    order = sorted(range(len(instance.required)), key=lambda i: -set_degree(F, instance.required[i]))
    return greedy_order(instance, order)


def verify_theorem9(instance: Instance, covering: Covering) -> bool:
    """Check the size bound k*deg(F)*deg(A)+1 and per-attribute degree domination."""
    A = instance.required
    k = max((b.bit_count() for b in A), default=0)
    limit = k * family_degree(instance.forbidden) * family_degree(A) + 1
    if len(covering) > limit:
        return False
    frags = covering.fragments
    touched = 0
    for x in frags:
        touched |= x
    return all(element_degree(frags, v) <= element_degree(A, v) for v in members(touched))


__all__ = [
    "APPENDED",
    "CONTAINED",
    "MERGED",
    "Step",
    "greedy_cover",
    "greedy_order",
    "heuristic_cover",
    "verify_theorem9",
]
