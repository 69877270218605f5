import math

import numpy as np
import pytest

from mhd.errors import InvalidGeneratorError, UnsupportedSizeError
from mhd.generator import (
    Generator,
    build,
    double,
    enumerate_skew_sign_candidates,
    exists_generator_of_size,
    validate,
    y2,
)

Y4_GOLD = np.array([[0, 1, 1, 1], [-1, 0, -1, 1], [-1, 1, 0, -1], [-1, -1, 1, 0]]) / math.sqrt(3)


def test_y2():
    g = y2()
    assert np.array_equal(g.Y, [[0, 1], [-1, 0]])
    assert all(validate(g.Y, tol=1e-15).values())
    assert np.array_equal(g.Y @ g.Y, -np.eye(2))


def test_double_y2_gives_y4():
    np.testing.assert_allclose(double(y2()).Y, Y4_GOLD, atol=1e-15)


def test_double_off_diagonal_magnitudes():
    Y = double(y2()).Y
    off = Y[~np.eye(4, dtype=bool)]
    np.testing.assert_allclose(np.abs(off), 1 / math.sqrt(3), atol=1e-15)


def test_double_twice_is_valid():
    assert all(validate(double(double(y2())).Y, tol=1e-12).values())


def test_build_base_cases():
    assert build(2) == y2()
    np.testing.assert_allclose(build(4).Y, Y4_GOLD, atol=1e-15)


@pytest.mark.parametrize("m", [2, 4, 8, 16, 32, 64])
def test_built_generators_satisfy_all_conditions(m):
    Y = build(m).Y
    assert validate(Y, tol=1e-12) == {"A1": True, "A2": True, "A3": True, "square_is_minus_identity": True}
    np.testing.assert_allclose(np.linalg.norm(Y, axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(Y, axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("m", [4, 8, 16, 32])
def test_build_agrees_with_float_doubling(m):
    np.testing.assert_allclose(build(m).Y, double(build(m // 2)).Y, atol=1e-12)


def test_build_is_deterministic():
    assert np.array_equal(build(16).Y, build(16).Y)


@pytest.mark.parametrize("m", [0, 1, 3, 6, 12, 24])
def test_build_rejects_non_powers_of_two(m):
    with pytest.raises(UnsupportedSizeError, match="powers of two"):
        build(m)


def test_validate_symmetric_matrix():
    assert validate([[0, 1], [1, 0]]) == {"A1": False, "A2": True, "A3": True, "square_is_minus_identity": False}


def test_no_3x3_generator_exhaustive():
    candidates = list(enumerate_skew_sign_candidates(3))
    assert len(candidates) == 8
    for Y in candidates:
        assert not all(validate(Y).values())


def test_no_6x6_generator_exhaustive():
    assert not exists_generator_of_size(6)


def test_4x4_search_finds_generators():
    assert exists_generator_of_size(4)


def test_generator_rejects_invalid_matrix():
    Y = np.array(build(4).Y)
    Y[0, 1] *= -1
    with pytest.raises(InvalidGeneratorError):
        Generator(Y)


def test_generator_matrix_is_read_only():
    g = build(4)
    with pytest.raises(ValueError):
        g.Y[0, 0] = 1.0
