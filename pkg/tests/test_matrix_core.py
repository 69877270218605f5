import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mhd import _kernels_py, matrix_core
from mhd.errors import SizeError
from mhd.generator import build
from mhd.matrix_core import as_mat, is_orthogonal, mat_from_json, mat_to_json, matexp_series, permanent

from oracles import naive_permanent

try:
    from mhd import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = [pytest.param(_kernels_py.ryser, id="python")]
if _compiled is not None:
    BACKENDS.append(pytest.param(_compiled.ryser, id="cython"))

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def test_permanent_dip_d2_is_zero():
    assert permanent(np.array([[1, 1], [-1, 1]]) / math.sqrt(2)) == pytest.approx(0.0, abs=1e-15)


def test_permanent_identity_and_integers():
    assert permanent(np.eye(2)) == 1.0
    assert permanent([[1, 2], [3, 4]]) == 10.0


def test_permanent_size_guard():
    with pytest.raises(SizeError):
        permanent(np.ones((21, 21)))


def test_permanent_all_ones_is_factorial():
    for n in range(1, 9):
        assert permanent(np.ones((n, n))) == pytest.approx(math.factorial(n))


@pytest.mark.parametrize("ryser", BACKENDS)
@pytest.mark.parametrize("n", [4, 5, 6])
def test_ryser_matches_permutation_sum(ryser, n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        A = rng.normal(size=(n, n))
        assert abs(ryser(A) - naive_permanent(A)) <= 1e-10


@pytest.mark.skipif(_compiled is None, reason="compiled kernels not built")
def test_backends_agree_at_larger_size():
    A = np.random.default_rng(3).uniform(-1, 1, size=(12, 12))
    assert _compiled.ryser(A) == pytest.approx(_kernels_py.ryser(A), rel=1e-10, abs=1e-10)


def test_backend_is_reported():
    assert matrix_core.BACKEND in ("cython", "python")


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (5, 5), elements=finite), st.data())
def test_permanent_invariant_under_row_and_column_shuffles(A, data):
    p = data.draw(st.permutations(range(5)))
    q = data.draw(st.permutations(range(5)))
    assert permanent(A[list(p)][:, list(q)]) == pytest.approx(permanent(A), rel=1e-9, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (4, 4), elements=finite))
def test_permanent_with_duplicated_row_swap(A):
    A = A.copy()
    A[2] = A[0]
    swapped = A[[2, 1, 0, 3]]
    assert permanent(swapped) == pytest.approx(permanent(A), rel=1e-9, abs=1e-9)


def test_is_orthogonal():
    assert is_orthogonal([[0, 1], [-1, 0]], 1e-12)
    assert is_orthogonal(np.eye(5), 0.0)
    assert not is_orthogonal([[1, 1], [0, 1]], 1e-12)


def test_matexp_series_zero_is_identity():
    assert np.array_equal(matexp_series(np.zeros((3, 3)), 5), np.eye(3))


def test_matexp_series_rotation():
    t = math.pi / 4
    E = matexp_series(t * np.array([[0, 1], [-1, 0]]), 30)
    np.testing.assert_allclose(E, [[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]], atol=1e-12)


def test_matexp_series_y4_closed_form():
    Y = build(4).Y
    t = math.pi / 3
    np.testing.assert_allclose(matexp_series(t * Y, 40), math.cos(t) * np.eye(4) + math.sin(t) * Y, atol=1e-12)


@pytest.mark.parametrize("m", [2, 4, 8, 16, 32])
def test_matexp_of_generator_is_orthogonal(m):
    Y = build(m).Y
    for t in np.random.default_rng(m).uniform(-math.pi, math.pi, 5):
        assert is_orthogonal(matexp_series(t * Y, 40), 1e-10)


def test_as_mat_rejects_bad_input():
    with pytest.raises(SizeError):
        as_mat([[1, 2, 3]])
    with pytest.raises(SizeError):
        as_mat([[np.nan]])
    with pytest.raises(SizeError):
        as_mat(np.zeros((0, 0)))


def test_matrix_json_round_trip_is_exact():
    M = np.random.default_rng(0).normal(size=(6, 6))
    text = json.dumps(mat_to_json(M))
    assert np.array_equal(mat_from_json(json.loads(text)), M)


def test_matrix_json_dimension_mismatch():
    with pytest.raises(SizeError):
        mat_from_json({"m": 3, "rows": [[1, 0], [0, 1]]})
