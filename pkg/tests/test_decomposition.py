import math

import numpy as np
import pytest

from mhd.decomposition import (
    CircuitPlan,
    TwoLevelStep,
    d4_reference_etas,
    d4_reference_plan,
    decompose,
    decompose_matrix,
    recompose,
    verify_d4_reference,
)
from mhd.errors import DecompositionError, ModeIndexError
from mhd.generator import build
from mhd.network import build_network, hadamard_check, theta_dip


def test_d2_single_step():
    t = 0.4
    plan = decompose(build_network(build(2), t))
    assert len(plan.steps) == 1
    assert plan.steps[0].eta == pytest.approx(math.sin(t) ** 2, abs=1e-15)


@pytest.mark.parametrize("t", [0.1, 0.5, 1.0])
def test_d4_round_trip(t):
    net = build_network(build(4), t)
    plan = decompose(net)
    assert len(plan.steps) <= 6
    assert np.max(np.abs(recompose(plan) - net.D)) <= 1e-10


def test_identity_network_recomposes_to_identity():
    plan = decompose(build_network(build(8), 0.0))
    assert all(s.eta == 0.0 for s in plan.steps)
    assert np.array_equal(recompose(plan), np.eye(8))


def test_d8_round_trip():
    net = build_network(build(8), 0.7)
    assert np.max(np.abs(recompose(decompose(net)) - net.D)) <= 1e-10


def test_recompose_trivial_plans():
    assert np.array_equal(recompose(CircuitPlan(3, 0.0, (), (1, 1, 1))), np.eye(3))
    plan = CircuitPlan(2, 0.0, (TwoLevelStep(0, 1, 0.5, False),), (1, 1))
    r = math.sqrt(0.5)
    np.testing.assert_allclose(recompose(plan), [[r, r], [r, -r]], atol=1e-15)


def test_recompose_rejects_bad_indices():
    with pytest.raises(ModeIndexError):
        recompose(CircuitPlan(2, 0.0, (TwoLevelStep(0, 2, 0.5, False),), (1, 1)))
    with pytest.raises(ModeIndexError):
        recompose(CircuitPlan(2, 0.0, (), (1,)))


def test_decompose_rejects_non_orthogonal():
    with pytest.raises(DecompositionError):
        decompose_matrix([[1.0, 1.0], [0.0, 1.0]])


@pytest.mark.parametrize("m", [2, 4, 8, 16])
def test_round_trip_random_angles(m):
    g = build(m)
    for t in np.random.default_rng(100 + m).uniform(-math.pi, math.pi, 10):
        net = build_network(g, t)
        plan = decompose(net)
        assert len(plan.steps) <= m * (m - 1) // 2
        assert np.max(np.abs(recompose(plan) - net.D)) <= 1e-10
        for step in plan.steps:
            S = step.splitter()
            B = step.block()
            assert np.allclose(S @ S.T, np.eye(2), atol=1e-12)
            assert np.linalg.det(S) == pytest.approx(-1.0, abs=1e-12)
            assert np.allclose(B @ B.T, np.eye(2), atol=1e-12)
            assert 0.0 <= step.eta <= 1.0


def test_random_orthogonal_round_trip():
    rng = np.random.default_rng(0)
    Q, _ = np.linalg.qr(rng.normal(size=(7, 7)))
    plan = decompose_matrix(Q)
    assert np.max(np.abs(recompose(plan) - Q)) <= 1e-10


def test_d4_reference_etas():
    assert d4_reference_etas(0.0) == (0.0, 0.0, 0.0)
    assert d4_reference_etas(math.pi / 4)[2] == pytest.approx(1 / 6, abs=1e-15)
    assert d4_reference_etas(math.pi / 3)[0] == pytest.approx(0.5, abs=1e-15)
    for t in np.linspace(0, theta_dip(4), 101):
        assert all(0.0 <= e <= 1.0 for e in d4_reference_etas(t))


def test_d4_reference_matches_generic_elimination():
    for t in np.linspace(0.05, math.pi / 3, 7):
        generic = decompose(build_network(build(4), t))
        pinned = d4_reference_plan(t)
        for a, b in zip(generic.steps, pinned.steps):
            assert (a.p, a.q, a.phase_pi) == (b.p, b.q, b.phase_pi)
            assert a.eta == pytest.approx(b.eta, abs=1e-12)
        assert generic.residual_phases == pinned.residual_phases


def test_verify_d4_reference():
    assert verify_d4_reference(0.0)
    assert all(verify_d4_reference(t) for t in np.linspace(0, math.pi / 3, 21))
    assert hadamard_check(build_network(build(4), math.pi / 3))
    np.testing.assert_allclose(recompose(d4_reference_plan(math.pi / 3)) * 2, [[1, 1, 1, 1], [-1, 1, -1, 1], [-1, 1, 1, -1], [-1, -1, 1, 1]], atol=1e-12)


def test_plan_json_round_trip(tmp_path):
    net = build_network(build(4), 0.5)
    plan = decompose(net)
    path = tmp_path / "plan.json"
    plan.dump(path, target=net.D)
    again = CircuitPlan.load(path)
    assert again == plan
    import json

    obj = json.loads(path.read_text())
    assert set(obj) == {"m", "theta", "steps", "residual_phases", "recompose_error"}
    assert obj["recompose_error"] <= 1e-10
