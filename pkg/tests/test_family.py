import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from datasplit.errors import (
    AttributeOutOfRange,
    ChosenNotInFamily,
    EmptyForbiddenSet,
    InfeasibleInstance,
    NotAntichain,
    SingletonForbiddenSet,
    UniverseMismatch,
)
from datasplit.exact import optimal_cover
from datasplit.experiments import example2_instance, medical_instance
from datasplit.family import (
    Covering,
    Instance,
    bounds,
    dominates,
    element_degree,
    family_degree,
    is_covering,
    is_feasible,
    lower_bound,
    members,
    normalize,
    punctured_covering,
    set_degree,
    to_mask,
    validate,
)

from .oracles import all_subsets, is_cover, random_feasible

MED_F = [[0, 2, 3], [0, 1, 2], [0, 1, 4], [1, 2, 3]]
MED_A = [[1, 2, 5], [1, 3, 5], [0, 2, 5], [4]]


def masks(family):
    return [to_mask(s) for s in family]


# -- validation ---------------------------------------------------------------


def test_validate_accepts_example2():
    inst = Instance.from_sets(5, [[1, 2, 3]], [[1, 4], [2, 4], [3]])
    assert validate(inst) == inst


def test_validate_rejects_singleton_forbidden():
    with pytest.raises(SingletonForbiddenSet) as e:
        validate(Instance.from_sets(3, [[0]], [[0, 1]]))
    assert e.value.attribute == 0


def test_validate_rejects_empty_forbidden():
    with pytest.raises(EmptyForbiddenSet):
        validate(Instance(3, (0,), (1,)))


def test_validate_strips_empty_required():
    inst = validate(Instance.from_sets(3, [[0, 1]], [[2], []]))
    assert inst.required_sets() == [[2]]


def test_validate_out_of_range():
    with pytest.raises(AttributeOutOfRange):
        validate(Instance.from_sets(3, [[0, 3]], [[1]]))


# -- degrees --------------------------------------------------------------------


def test_degrees():
    A = masks(MED_A)
    assert element_degree(A, 5) == 3
    assert family_degree(A) == 3
    assert set_degree(masks(MED_F), to_mask([1, 2, 5])) == 4
    assert family_degree([]) == 0


# -- normalization --------------------------------------------------------------


def test_normalize_min_forbidden():
    inst = normalize(Instance.from_sets(4, [[1, 2], [1, 2, 3]], [[0], [1], [2], [3]]))
    assert inst.forbidden_sets() == [[1, 2]]


def test_normalize_max_required():
    inst = normalize(Instance.from_sets(5, [], [[1, 4], [1]]))
    assert inst.required_sets()[0] == [1, 4]
    assert [1] not in inst.required_sets()


def test_normalize_appends_completion_singletons_last():
    inst = normalize(Instance.from_sets(5, [[1, 2, 3]], [[1, 4], [2, 4], [3]]))
    assert inst.required_sets() == [[1, 4], [2, 4], [3], [0]]


def test_normalize_drops_duplicates_keeps_order():
    inst = normalize(Instance.from_sets(4, [[0, 1], [2, 3], [0, 1]], [[0, 2], [1, 3], [0, 2]]))
    assert inst.forbidden_sets() == [[0, 1], [2, 3]]
    assert inst.required_sets() == [[0, 2], [1, 3]]


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10**9))
def test_normalize_idempotent(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    F, A = random_feasible(rng, max(n, 2))
    inst = Instance.from_sets(max(n, 2), F, A)
    once = normalize(inst)
    assert normalize(once) == once


def test_normalize_preserves_coverings_exhaustively():
    # every family of up to three subsets of a 4-element universe; A already
    # spans the universe, as the min/max reduction assumes
    rng = random.Random(4)
    subsets = [to_mask(s) for s in all_subsets(4)]
    fams = [c for t in range(1, 4) for c in combinations(subsets, t)]
    for _ in range(15):
        F = [[0, 1]] + [sorted(rng.sample(range(4), rng.randint(2, 4))) for _ in range(rng.randint(0, 2))]
        A = [sorted(rng.sample(range(4), rng.randint(1, 3))) for _ in range(rng.randint(1, 4))]
        A += [[i] for i in range(4) if not any(i in b for b in A)]
        inst = Instance.from_sets(4, F, A)
        norm = normalize(inst)
        for fam in fams:
            assert is_covering(inst, fam) == is_covering(norm, fam)


# -- feasibility and coverings ------------------------------------------------------


def test_feasibility():
    assert is_feasible(example2_instance())
    assert not is_feasible(Instance.from_sets(4, [[1, 2]], [[1, 2, 3]]))
    assert is_feasible(Instance.from_sets(4, [], [[0, 1, 2, 3]]))


def test_feasible_iff_solvable_small():
    rng = random.Random(2)
    for _ in range(200):
        n = rng.randint(2, 5)
        F = [sorted(rng.sample(range(n), rng.randint(2, n))) for _ in range(rng.randint(0, 3))]
        A = [sorted(rng.sample(range(n), rng.randint(1, n))) for _ in range(rng.randint(1, 4))]
        inst = normalize(Instance.from_sets(n, F, A))
        if is_feasible(inst):
            assert is_covering(inst, inst.required)
            assert optimal_cover(inst).optimal_size >= 1
        else:
            with pytest.raises(InfeasibleInstance):
                optimal_cover(inst)


def test_is_covering_example2():
    inst = example2_instance()
    # labels 1..4 live at indices 0..3
    assert is_covering(inst, Covering.from_sets([[1, 3], [0, 2, 3]]))
    assert not is_covering(inst, Covering.from_sets([[0, 1, 2, 3]]))
    assert not is_covering(inst, Covering.from_sets([[0, 3], [2]]))


def test_is_covering_matches_definition():
    rng = random.Random(9)
    for _ in range(300):
        n = rng.randint(2, 5)
        F, A = random_feasible(rng, n)
        frags = [sorted(rng.sample(range(n), rng.randint(1, n))) for _ in range(rng.randint(1, 4))]
        inst = Instance.from_sets(n, F, A)
        expect = is_cover([frozenset(s) for s in F], [frozenset(s) for s in A], [frozenset(s) for s in frags])
        assert is_covering(inst, Covering.from_sets(frags)) == expect


# -- domination -----------------------------------------------------------------------


def test_dominates_examples():
    a = Instance.from_sets(6, [[1, 2]], [[3, 4, 5]])
    b = Instance.from_sets(6, [[1, 2, 3]], [[3, 4]])
    assert dominates(a, b)
    assert dominates(a, a)
    assert not dominates(Instance.from_sets(6, [[1, 2]], [[3]]), Instance.from_sets(6, [[4, 5]], [[3]]))


def test_dominates_universe_mismatch():
    with pytest.raises(UniverseMismatch):
        dominates(Instance.from_sets(3, [], [[0]]), Instance.from_sets(4, [], [[0]]))


def test_domination_transfers_coverings():
    rng = random.Random(5)
    subsets = [to_mask(s) for s in all_subsets(4)]
    fams = [c for t in range(1, 3) for c in combinations(subsets, t)]
    hits = 0
    for _ in range(400):
        a = Instance.from_sets(4, *random_feasible(rng, 4, 2, 2))
        b = Instance.from_sets(4, *random_feasible(rng, 4, 2, 2))
        if not dominates(a, b):
            continue
        hits += 1
        for fam in fams:
            if is_covering(a, fam):
                assert is_covering(b, fam)
    assert hits > 5


# -- punctured covering -------------------------------------------------------


def test_punctured_examples():
    assert punctured_covering(4, [[0, 1], [2, 3]], [0, 1]).as_lists() == [[1, 2, 3], [0, 2, 3]]
    assert punctured_covering(3, [[0, 1, 2]], [0, 1, 2]).as_lists() == [[1, 2], [0, 2], [0, 1]]
    assert punctured_covering(2, [[0], [1]], [0]).as_lists() == [[1]]


def test_punctured_errors():
    with pytest.raises(NotAntichain):
        punctured_covering(3, [[0], [0, 1]], [0])
    with pytest.raises(ChosenNotInFamily):
        punctured_covering(3, [[0], [1]], [2])


def test_punctured_is_covering():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(2, 7)
        fam = []
        for _ in range(rng.randint(1, 5)):
            s = to_mask(rng.sample(range(n), rng.randint(1, n)))
            if not any(s & t in (s, t) for t in fam):
                fam.append(s)
        chosen = rng.choice(fam)
        cov = punctured_covering(n, fam, chosen)
        if chosen.bit_count() < 2:
            continue  # a singleton forbidden set is outside the validated model
        inst = Instance(n, (chosen,), tuple(s for s in fam if s != chosen))
        assert is_covering(inst, cov)


# -- bounds ---------------------------------------------------------------------------


def test_bounds_medical():
    rep = bounds(medical_instance(1))
    assert rep.lower == 2
    assert rep.greedy_upper == 28
    assert rep.heuristic_upper == 4
    assert (rep.k, rep.degF, rep.degA) == (3, 3, 3)
    assert rep.lower <= rep.refined_upper <= rep.heuristic_upper


def test_bounds_probabilistic_formula():
    import math

    rep = bounds(medical_instance(1))
    # sets have size at most 3, deg(F) = 3, n = 6
    assert rep.probabilistic_size_bound == pytest.approx(2 * 18**3 * math.log(6))
    assert rep.probabilistic_degree_bound == pytest.approx(2 * 18**2 * math.log(6))


def test_bounds_infeasible():
    with pytest.raises(InfeasibleInstance):
        bounds(Instance.from_sets(4, [[1, 2]], [[1, 2, 3]]))


def test_lower_bound_defaults():
    assert lower_bound(Instance.from_sets(3, [], [[0], [1, 2]])) == 1
    assert lower_bound(Instance(3, (3,), ())) == 0


def test_lower_bound_denominator_positive():
    rng = random.Random(3)
    for _ in range(500):
        n = rng.randint(2, 8)
        inst = normalize(Instance.from_sets(n, *random_feasible(rng, n)))
        if not inst.forbidden:
            continue
        worst = max(min(element_degree(inst.required, a) for a in members(f)) for f in inst.forbidden)
        assert len(inst.required) - worst > 0


def test_lower_bound_below_optimum():
    rng = random.Random(8)
    for _ in range(300):
        n = rng.randint(2, 8)
        inst = normalize(Instance.from_sets(n, *random_feasible(rng, n, 5, 6)))
        assert lower_bound(inst) <= optimal_cover(inst).optimal_size
