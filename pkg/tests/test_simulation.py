import random

import numpy as np
import pytest

from contractkit.composition import compose
from contractkit.errors import DimensionMismatch, ExternalDimMismatch
from contractkit.generators import random_system, relax
from contractkit.simulation import (
    FailureReason,
    SimulationRelation,
    check_relation,
    composition_upper_witness,
    diagonal_relation,
    infimum_witness,
    largest_simulation_relation,
    simulates,
    transitive_witness,
)
from contractkit.subspace import Subspace, kernel
from contractkit.system import DVSystem, consistent_subspace
from contractkit.trajectory import shadow_simulation


def zero_relation(S1, S2):
    return SimulationRelation(S1.n, S2.n, Subspace.zero(S1.n + S2.n))


def random_pair(rng, augment=True):
    s = random_system(rng, p=rng.randint(1, 2))
    return s, relax(s, rng, augment=augment)


# -- check_relation -----------------------------------------------------------


def test_zero_relation_is_valid_but_not_full_without_moves():
    # no driving input: the driving condition is vacuous
    s = DVSystem([[1]], [[]], [[1]], [])
    v = check_relation(zero_relation(s, s), s, s)
    assert not v.holds and v.is_relation
    assert v.failure_reason is FailureReason.NOT_FULL


def test_zero_relation_misses_admissible_moves():
    s = DVSystem([[0]], [[1]], [[1]], [])
    v = check_relation(zero_relation(s, s), s, s)
    assert v.failure_reason is FailureReason.DRIVING
    assert not v.is_relation


def test_zero_relation_of_trivial_system_is_full():
    s = DVSystem([[1]], [[1]], [[1]], [[1]])
    assert consistent_subspace(s).is_zero
    assert check_relation(zero_relation(s, s), s, s).holds


def test_output_condition_failure_is_reported_first():
    s = DVSystem([[0]], [[1]], [[1]], [])
    bad = SimulationRelation(1, 1, Subspace(2, [(1, 2)]))
    assert check_relation(bad, s, s).failure_reason is FailureReason.OUTPUT


def test_state_condition_failure():
    # x' = x, y' = 0: the pair (1, 1) drifts out of the diagonal
    s1 = DVSystem([[1]], [[]], [[1]], [])
    s2 = DVSystem([[0]], [[]], [[1]], [])
    rel = SimulationRelation(1, 1, Subspace(2, [(1, 1)]))
    assert check_relation(rel, s1, s2).failure_reason is FailureReason.STATE


def test_diagonal_is_a_full_relation_for_random_systems(rng):
    for _ in range(50):
        s = random_system(rng, p=2)
        assert check_relation(diagonal_relation(consistent_subspace(s)), s, s).holds


def test_block_size_mismatch_raises(vehicles):
    with pytest.raises(DimensionMismatch):
        check_relation(SimulationRelation(1, 1, Subspace.full(2)), vehicles.G, vehicles.G)
    with pytest.raises(DimensionMismatch):
        SimulationRelation(1, 2, Subspace.full(2))


def vehicle_relation(vehicles) -> SimulationRelation:
    """{(x^a, x, x^g) : x^a = x = x^g in ker H^g}, assembled by hand."""
    return SimulationRelation(8, 4, Subspace(12, (v * 3 for v in kernel(vehicles.Hg).vectors)))


def test_vehicle_relation_passes_conditions_but_is_not_full(vehicles):
    left = compose(vehicles.A, vehicles.Sigma)
    v = check_relation(vehicle_relation(vehicles), left, vehicles.G)
    assert v.is_relation
    assert v.failure_reason is FailureReason.NOT_FULL
    assert v.witness.left_projection().dim == 3
    assert consistent_subspace(left).dim == 4


# -- largest relation and simulates -------------------------------------------


def test_largest_relation_of_scalar_integrator_is_diagonal():
    s = DVSystem([[0]], [[1]], [[1]], [])
    S = largest_simulation_relation(s, s)
    assert S.relation == Subspace(2, [(1, 1)])
    assert simulates(s, s).holds


def test_largest_relation_for_vehicle_example(vehicles):
    left = compose(vehicles.A, vehicles.Sigma)
    S = largest_simulation_relation(left, vehicles.G)
    assert S.relation == vehicle_relation(vehicles).relation
    assert S.dim == 3
    v = simulates(left, vehicles.G)
    assert not v.holds and v.is_relation
    assert v.failure_reason is FailureReason.NOT_FULL
    assert v.describe() == "FAILS(NotFull)"
    assert v.witness.left_projection().dim == 3


def test_silent_right_system_forces_left_state_to_zero():
    # hand iteration: the output row [1 0] gives x1 = 0, y free; A = 0 keeps it
    s1 = DVSystem([[0]], [[1]], [[1]], [])
    s2 = DVSystem([[0]], [[1]], [[0]], [])
    S = largest_simulation_relation(s1, s2)
    assert S.relation == Subspace(2, [(0, 1)])
    # the left move (1, 0) cannot be matched
    assert simulates(s1, s2).failure_reason is FailureReason.DRIVING
    # without driving input on the left the relation is valid, just not full
    still = DVSystem([[0]], [[]], [[1]], [])
    v = simulates(still, s2)
    assert v.is_relation and v.failure_reason is FailureReason.NOT_FULL


def test_external_dimension_mismatch_raises():
    with pytest.raises(ExternalDimMismatch):
        simulates(DVSystem.build([[0]]), DVSystem.build([[0, 0], [0, 0]]))


def test_reflexivity(rng):
    for _ in range(100):
        s = random_system(rng, p=rng.randint(1, 2))
        assert simulates(s, s).holds


def test_largest_relation_contains_the_diagonal(rng):
    for _ in range(50):
        s = random_system(rng, p=1)
        diag = diagonal_relation(consistent_subspace(s))
        assert diag.is_contained_in(largest_simulation_relation(s, s))


def test_relaxed_systems_simulate_originals():
    rng = random.Random(31)
    fails = sum(not simulates(*random_pair(rng)).holds for _ in range(100))
    assert fails == 0


def test_added_constraints_can_break_simulation():
    s = DVSystem([[0]], [[1]], [[1]], [])
    pinned = s.with_constraints([[1]])
    assert simulates(pinned, s).holds
    assert simulates(s, pinned).failure_reason is FailureReason.DRIVING
    drifting = DVSystem([[1]], [[]], [[1]], [])
    assert simulates(drifting, pinned).failure_reason is FailureReason.NOT_FULL


# -- witnesses ------------------------------------------------------------------


def test_transitive_witness_with_identity():
    s = DVSystem([[0, 1], [0, 0]], [[0], [1]], [[1, 0]], [])
    other = largest_simulation_relation(s, s)
    ident = diagonal_relation(Subspace.full(2))
    assert transitive_witness(ident, other).relation == other.relation
    assert transitive_witness(other, ident).relation == other.relation


def test_transitive_witness_of_diagonals_is_diagonal_on_intersection():
    V = Subspace(3, [(1, 0, 1), (0, 1, 0)])
    W = Subspace(3, [(1, 0, 1), (0, 0, 1)])
    got = transitive_witness(diagonal_relation(V), diagonal_relation(W))
    assert got.relation == diagonal_relation(V & W).relation


def test_transitive_witness_dimension_check():
    with pytest.raises(DimensionMismatch):
        transitive_witness(diagonal_relation(Subspace.full(1)), diagonal_relation(Subspace.full(2)))


def test_transitivity_through_witness():
    rng = random.Random(32)
    used = 0
    for _ in range(50):
        s1 = random_system(rng, p=rng.randint(1, 2))
        s2 = relax(s1, rng)
        s3 = relax(s2, rng)
        v12, v23 = simulates(s1, s2), simulates(s2, s3)
        if not (v12.holds and v23.holds):
            continue
        used += 1
        w = transitive_witness(v12.witness, v23.witness)
        assert check_relation(w, s1, s3).holds
        assert w.is_contained_in(largest_simulation_relation(s1, s3))
    assert used >= 45


def test_upper_witness_for_scalar_copies():
    s = DVSystem([[0]], [[1]], [[1]], [])
    w = composition_upper_witness(s, s, 1)
    assert w.relation == Subspace(3, [(1, 1, 1)])


def test_upper_witness_for_vehicle_example(vehicles):
    w = composition_upper_witness(vehicles.A, vehicles.Sigma, 1)
    assert w.dim == 4
    assert check_relation(w, compose(vehicles.A, vehicles.Sigma), vehicles.A).holds


def test_upper_witnesses_hold_and_are_maximal_bounded():
    rng = random.Random(33)
    for _ in range(100):
        p = rng.randint(1, 2)
        a, b = random_system(rng, p), random_system(rng, p)
        c = compose(a, b)
        for side, target in ((1, a), (2, b)):
            w = composition_upper_witness(a, b, side)
            assert check_relation(w, c, target).holds
            assert w.is_contained_in(largest_simulation_relation(c, target))


def test_upper_witness_rejects_bad_side():
    s = DVSystem([[0]], [[1]], [[1]], [])
    with pytest.raises(ValueError):
        composition_upper_witness(s, s, 3)


def test_infimum_witness_of_identities():
    s = DVSystem([[0, 1], [-1, 0]], [[1], [0]], [[1, 0]], [])
    ident = diagonal_relation(Subspace.full(2))
    w = infimum_witness(ident, ident)
    assert w.relation == Subspace(6, [v + v + v for v in Subspace.full(2).vectors])
    assert check_relation(w, s, compose(s, s)).holds


def test_infimum_witness_on_random_triples():
    rng = random.Random(34)
    used = 0
    for _ in range(100):
        s = random_system(rng, p=rng.randint(1, 2))
        a, b = relax(s, rng), relax(s, rng)
        va, vb = simulates(s, a), simulates(s, b)
        if not (va.holds and vb.holds):
            continue
        used += 1
        w = infimum_witness(va.witness, vb.witness)
        assert check_relation(w, s, compose(a, b)).holds
    assert used >= 80


def test_infimum_witness_for_system_without_consistent_states():
    s = DVSystem([[1]], [[0]], [[1]], [[1]])
    other = DVSystem([[0]], [[1]], [[1]], [])
    va, vb = simulates(s, other), simulates(s, other)
    w = infimum_witness(va.witness, vb.witness)
    assert w.relation.is_zero
    assert check_relation(w, s, compose(other, other)).holds


def test_driving_condition_is_monotone_toward_largest_relation():
    rng = random.Random(35)
    checked = 0
    for _ in range(80):
        s = random_system(rng, p=rng.randint(1, 2))
        big = largest_simulation_relation(s, s)
        small = diagonal_relation(consistent_subspace(s))
        # enlarge the diagonal one basis vector of S* at a time; whenever the
        # enlargement still meets the output and state conditions, the
        # driving condition must keep holding
        for extra in big.relation.vectors:
            mid = SimulationRelation(s.n, s.n, small.relation + Subspace(2 * s.n, [extra]))
            v = check_relation(mid, s, s)
            if v.failure_reason in (None, FailureReason.DRIVING, FailureReason.NOT_FULL):
                checked += 1
                assert v.failure_reason is not FailureReason.DRIVING
    assert checked > 50


# -- trajectory-level sanity ----------------------------------------------------


def test_shadowing_matches_outputs_along_largest_relation():
    rng = random.Random(36)
    nrng = np.random.default_rng(36)
    tried = 0
    worst = 0.0
    for _ in range(60):
        s1 = random_system(rng, p=rng.randint(1, 2), max_n=2)
        s2 = relax(s1, rng, augment=False)
        v = simulates(s1, s2)
        if not v.holds:
            continue
        tried += 1
        res = shadow_simulation(s1, s2, v.witness, nrng, t_end=1.0)
        worst = max(worst, res.output_gap / max(1.0, res.scale))
        assert res.relation_gap <= 1e-8 * max(1.0, res.scale)
    assert tried >= 30
    assert worst < 1e-8
