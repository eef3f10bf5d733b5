import random
from itertools import permutations

import pytest

from datasplit.errors import InfeasibleInstance
from datasplit.exact import optimal_cover
from datasplit.experiments import GenParams, example2_instance, gen_random_instance, medical_instance
from datasplit.family import Covering, Instance, bounds, element_degree, is_covering, normalize
from datasplit.greedy import APPENDED, CONTAINED, MERGED, greedy_cover, greedy_order, heuristic_cover, verify_theorem9

from .oracles import is_cover, random_feasible


def test_greedy_example2():
    cov, trace = greedy_cover(example2_instance())
    # {1,2,4}, {3} in the 1-based labels
    assert cov.as_lists() == [[0, 1, 3], [2]]
    assert [s.action for s in trace] == [APPENDED, MERGED, APPENDED]


def test_greedy_medical():
    cov, _ = greedy_cover(medical_instance(1))
    assert cov.as_lists() == [[1, 2, 4, 5], [1, 3, 5], [0, 2, 5]]


def test_greedy_no_forbidden_merges_everything():
    cov, _ = greedy_cover(Instance.from_sets(3, [], [[0], [1], [2]]))
    assert cov.as_lists() == [[0, 1, 2]]


def test_greedy_contained_step():
    cov, trace = greedy_cover(Instance.from_sets(3, [], [[0, 1, 2], [1]]))
    assert len(cov) == 1
    assert trace[1].action == CONTAINED and trace[1].fragment == 0


def test_greedy_infeasible():
    inst = Instance.from_sets(4, [[1, 2]], [[1, 2, 3]])
    with pytest.raises(InfeasibleInstance):
        greedy_cover(inst)
    with pytest.raises(InfeasibleInstance):
        heuristic_cover(inst)


def test_heuristic_examples():
    inst = example2_instance()
    assert heuristic_cover(inst)[0] == greedy_cover(inst)[0]
    assert len(heuristic_cover(medical_instance(1))[0]) == 3
    assert len(heuristic_cover(medical_instance(3))[0]) in (2, 3)


def test_heuristic_is_stable_sort():
    # equal degrees keep their input order
    inst = Instance.from_sets(5, [[0, 4]], [[1], [0, 2], [3], [4, 3]])
    _, trace = heuristic_cover(inst)
    assert [s.required_index for s in trace] == [1, 3, 0, 2]


def test_trace_has_one_step_per_required_set():
    inst = medical_instance(5)
    for solver in (greedy_cover, heuristic_cover):
        _, trace = solver(inst)
        assert sorted(s.required_index for s in trace) == list(range(len(inst.required)))


def test_theorem9_examples():
    inst = medical_instance(1)
    assert verify_theorem9(inst, greedy_cover(inst)[0])
    ex2 = example2_instance()
    assert verify_theorem9(ex2, greedy_cover(ex2)[0])
    whole = normalize(ex2)
    assert verify_theorem9(whole, Covering((whole.universe,)))


def test_theorem9_rejects_oversized():
    inst = Instance.from_sets(3, [], [[0], [1], [2]])
    # bound is 1 * 0 * 1 + 1 = 1
    assert not verify_theorem9(inst, Covering.from_sets([[0], [1], [2]]))


def test_random_outputs_are_coverings():
    rng = random.Random(1)
    for _ in range(500):
        n = rng.randint(2, 10)
        F, A = random_feasible(rng, n, 6, 8)
        inst = Instance.from_sets(n, F, A)
        for solver in (greedy_cover, heuristic_cover):
            cov, _ = solver(inst)
            assert is_cover([frozenset(s) for s in F], [frozenset(s) for s in A], [frozenset(x) for x in cov.as_lists()])
            assert verify_theorem9(inst, cov)
            v_ok = all(element_degree(cov.fragments, v) <= element_degree(inst.required, v) for v in range(n))
            assert v_ok


def test_deterministic():
    inst = gen_random_instance(GenParams(12, 0.6, 3))
    assert greedy_cover(inst) == greedy_cover(inst)
    assert heuristic_cover(inst) == heuristic_cover(inst)


def test_heuristic_within_refined_bound():
    rng = random.Random(6)
    for _ in range(500):
        n = rng.randint(2, 10)
        inst = normalize(Instance.from_sets(n, *random_feasible(rng, n, 6, 8)))
        rep = bounds(inst)
        size = len(heuristic_cover(inst)[0])
        assert size <= rep.refined_upper <= rep.heuristic_upper


def test_some_order_is_optimal():
    rng = random.Random(10)
    for _ in range(60):
        n = rng.randint(2, 6)
        inst = normalize(Instance.from_sets(n, *random_feasible(rng, n, 4, 5)))
        if len(inst.required) > 6:
            continue
        opt = optimal_cover(inst).optimal_size
        best = min(len(greedy_order(inst, p)[0]) for p in permutations(range(len(inst.required))))
        assert best == opt
