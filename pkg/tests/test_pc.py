import numpy as np
import pytest

from causalforge.exceptions import InsufficientSamples, InvalidConfig, PriorConflict
from causalforge.graphs import dag_to_cpdag, find_cycle, is_dag
from causalforge.algorithms.pc import (
    FisherZCI,
    OracleCI,
    PcConfig,
    apply_meek_rules,
    orient_v_structures,
    pc,
    pc_skeleton,
)
from causalforge.priors import PriorKnowledge
from causalforge.simulate import NoiseSpec, simulate_iid

from oracles import random_er_dag


def edges(d, pairs):
    B = np.zeros((d, d), dtype=np.int8)
    for i, j in pairs:
        B[i, j] = 1
    return B


class AlwaysIndependent:
    def __init__(self, d):
        self.d = d

    def independent(self, i, j, S):
        return True


# -- skeleton ----------------------------------------------------------------


def test_config_validation():
    with pytest.raises(InvalidConfig):
        PcConfig(alpha=0.0).validate()
    with pytest.raises(InvalidConfig):
        PcConfig(variant="turbo").validate()
    with pytest.raises(InvalidConfig):
        PcConfig(max_condition_size=-1).validate()


def test_skeleton_collider_oracle():
    truth = edges(3, [(0, 2), (1, 2)])
    skel, seps = pc_skeleton(OracleCI(truth), PcConfig())
    expected = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]], dtype=np.int8)
    assert np.array_equal(skel, expected)
    assert seps[frozenset((0, 1))] == ()


def test_skeleton_chain_oracle():
    truth = edges(3, [(0, 1), (1, 2)])
    skel, seps = pc_skeleton(OracleCI(truth), PcConfig())
    expected = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=np.int8)
    assert np.array_equal(skel, expected)
    assert seps[frozenset((0, 2))] == (1,)


def test_skeleton_complete_independence():
    skel, seps = pc_skeleton(AlwaysIndependent(4), PcConfig())
    assert not skel.any()
    assert len(seps) == 6
    assert all(S == () for S in seps.values())


def test_skeleton_respects_protected_pairs():
    skel, seps = pc_skeleton(
        AlwaysIndependent(3), PcConfig(), protected=frozenset({frozenset((0, 1))})
    )
    assert skel[0, 1] == 1 and skel[1, 0] == 1
    assert skel.sum() == 2


def test_skeleton_max_condition_size():
    truth = edges(3, [(0, 1), (1, 2)])
    skel, _ = pc_skeleton(OracleCI(truth), PcConfig(max_condition_size=0))
    # 0 and 2 are only separated given {1}; a level-0 cap must keep that edge
    assert skel[0, 2] == 1


# -- orientation -------------------------------------------------------------


def test_orient_collider():
    skel = edges(3, [(0, 2), (2, 0), (1, 2), (2, 1)])
    seps = {frozenset((0, 1)): ()}
    P = orient_v_structures(skel, seps)
    assert np.array_equal(P, edges(3, [(0, 2), (1, 2)]))


def test_orient_chain_stays_undirected():
    skel = edges(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    seps = {frozenset((0, 2)): (1,)}
    P = orient_v_structures(skel, seps)
    assert np.array_equal(P, skel)


def test_orient_empty():
    P = orient_v_structures(np.zeros((3, 3), dtype=np.int8), {})
    assert not P.any()


def test_orientation_conflict_drops_to_undirected():
    # path 0-1-2-3 with sepsets proposing both 1->2 (from 1,3) and 2->1 (from 0,2)
    skel = edges(4, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)])
    seps = {frozenset((0, 2)): (), frozenset((1, 3)): (), frozenset((0, 3)): ()}
    P = orient_v_structures(skel, seps)
    assert P[1, 2] == 1 and P[2, 1] == 1
    assert P[0, 1] == 1 and P[1, 0] == 0
    assert P[3, 2] == 1 and P[2, 3] == 0


def test_meek_wrapper():
    P = edges(3, [(0, 1), (1, 2), (2, 1)])
    C = apply_meek_rules(P)
    assert np.array_equal(C, edges(3, [(0, 1), (1, 2)]))


# -- full pc -----------------------------------------------------------------


def test_pc_oracle_exactness_sample():
    rng = np.random.default_rng(0)
    for trial in range(25):
        d = int(rng.integers(3, 9))
        e = int(rng.integers(1, d * (d - 1) // 2 + 1))
        truth = random_er_dag(np.random.default_rng(trial), d, e)
        for variant in ("original", "stable"):
            est = pc(OracleCI(truth), PcConfig(variant=variant))
            assert np.array_equal(est, dag_to_cpdag(truth)), (trial, variant)


def test_pc_stable_order_invariance():
    rng = np.random.default_rng(1)
    truth = random_er_dag(np.random.default_rng(5), 7, 10)
    base, _ = pc_skeleton(OracleCI(truth), PcConfig(variant="stable"))
    for _ in range(5):
        perm = rng.permutation(7)
        P = np.eye(7, dtype=np.int8)[perm]
        moved, _ = pc_skeleton(OracleCI(P @ truth @ P.T), PcConfig(variant="stable"))
        assert np.array_equal(P.T @ moved @ P, base)


def test_pc_directed_part_acyclic():
    rng = np.random.default_rng(2)
    for trial in range(10):
        truth = random_er_dag(np.random.default_rng(50 + trial), 7, 12)
        est = pc(OracleCI(truth), PcConfig())
        directed = ((est == 1) & (est.T == 0)).astype(np.int8)
        assert find_cycle(directed) is None


def test_pc_on_chain_data():
    W = np.zeros((3, 3))
    W[0, 1] = 1.2
    W[1, 2] = 1.5
    X = simulate_iid(W, 10000, "linear", NoiseSpec("gauss"), seed=3).X
    est = pc(X, PcConfig(alpha=0.05))
    expected = edges(3, [(0, 1), (1, 0), (1, 2), (2, 1)])
    assert np.array_equal(est, expected)


def test_pc_on_collider_data():
    W = np.zeros((3, 3))
    W[0, 2] = 1.0
    W[1, 2] = -1.3
    X = simulate_iid(W, 10000, "linear", NoiseSpec("gauss"), seed=4).X
    est = pc(X, PcConfig())
    assert np.array_equal(est, edges(3, [(0, 2), (1, 2)]))


def test_pc_required_edge_orients_chain():
    W = np.zeros((3, 3))
    W[0, 1] = 1.2
    W[1, 2] = 1.5
    X = simulate_iid(W, 10000, "linear", NoiseSpec("gauss"), seed=5).X
    prior = PriorKnowledge(required=frozenset({(0, 1)}))
    est = pc(X, PcConfig(), prior=prior)
    # forcing 0->1 lets Meek R1 direct the rest of the chain
    assert np.array_equal(est, edges(3, [(0, 1), (1, 2)]))


def test_pc_forbidden_edge_absent():
    W = np.zeros((3, 3))
    W[0, 1] = 1.2
    W[1, 2] = 1.5
    X = simulate_iid(W, 10000, "linear", NoiseSpec("gauss"), seed=6).X
    prior = PriorKnowledge(forbidden=frozenset({(0, 1), (1, 0)}))
    est = pc(X, PcConfig(), prior=prior)
    assert est[0, 1] == 0 and est[1, 0] == 0
    prior_one_way = PriorKnowledge(forbidden=frozenset({(1, 0)}))
    est2 = pc(X, PcConfig(), prior=prior_one_way)
    assert est2[1, 0] == 0


def test_pc_prior_conflict():
    with pytest.raises(PriorConflict):
        PriorKnowledge(
            required=frozenset({(0, 1)}), forbidden=frozenset({(0, 1)})
        ).validate(3)
    with pytest.raises(PriorConflict):
        PriorKnowledge(required=frozenset({(0, 1), (1, 0)})).validate(3)


def test_pc_single_variable():
    est = pc(np.random.default_rng(0).standard_normal((100, 1)), PcConfig())
    assert est.shape == (1, 1)
    assert not est.any()


def test_fisherz_ci_insufficient_samples():
    X = np.random.default_rng(1).standard_normal((4, 3))
    ci = FisherZCI(X)
    with pytest.raises(InsufficientSamples):
        ci.independent(0, 1, (2,))
