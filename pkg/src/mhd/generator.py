"""Generators ``Y_m`` of the multimode HOM device.

A generator is a real m x m matrix that is

* skew-symmetric (``Y.T == -Y``),
* has every off-diagonal entry of magnitude ``1/sqrt(m - 1)``,
* is orthogonal (``Y @ Y.T == I``),

so that ``Y @ Y == -I`` follows.  Sizes ``m = 2**k`` are built by repeated
block doubling starting from the 2x2 rotation generator.
"""
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import ConsistencyError, InvalidGeneratorError, UnsupportedSizeError
from .matrix_core import DEFAULT_TOL, as_mat

FLAGS = ("A1", "A2", "A3", "square_is_minus_identity")


def validate(Y, tol=DEFAULT_TOL):
    """Check each generator condition independently.

    Accepts any square matrix and never raises for a failed condition; the
    report maps ``A1`` (skew), ``A2`` (equal off-diagonal magnitude), ``A3``
    (orthogonal) and ``square_is_minus_identity`` to booleans.
    """
    Y = as_mat(Y)
    m = Y.shape[0]
    eye = np.eye(m)
    off = ~np.eye(m, dtype=bool)
    if m > 1:
        a2 = bool(np.max(np.abs(np.abs(Y[off]) - 1.0 / np.sqrt(m - 1))) <= tol)
    else:
        a2 = True  # no off-diagonal entries
    return {
        "A1": bool(np.max(np.abs(Y.T + Y)) <= tol),
        "A2": a2,
        "A3": bool(np.max(np.abs(Y @ Y.T - eye)) <= tol),
        "square_is_minus_identity": bool(np.max(np.abs(Y @ Y + eye)) <= tol),
    }


@dataclass(frozen=True, eq=False)
class Generator:
    """A validated generator matrix.  ``Y`` is read-only."""

    Y: np.ndarray

    def __post_init__(self):
        Y = as_mat(self.Y)
        report = validate(Y)
        failed = [k for k in FLAGS if not report[k]]
        if failed:
            raise InvalidGeneratorError(f"matrix fails generator conditions: {', '.join(failed)}")
        Y.setflags(write=False)
        object.__setattr__(self, "Y", Y)

    @property
    def m(self):
        return self.Y.shape[0]

    def __eq__(self, other):
        return isinstance(other, Generator) and np.array_equal(self.Y, other.Y)

    def __hash__(self):
        return hash(self.Y.tobytes())


def y2():
    return Generator(np.array([[0.0, 1.0], [-1.0, 0.0]]))


def double(g):
    """Block-double a generator: ``Y_m -> Y_2m``.

    Y_2m = sqrt(m-1)/sqrt(2m-1) [[Y, Y + I/sqrt(m-1)], [Y - I/sqrt(m-1), -Y]]
    """
    Y = g.Y
    m = g.m
    eye = np.eye(m) / np.sqrt(m - 1)
    block = np.block([[Y, Y + eye], [Y - eye, -Y]])
    Y2m = np.sqrt(m - 1) / np.sqrt(2 * m - 1) * block
    try:
        return Generator(Y2m)
    except InvalidGeneratorError as exc:
        raise ConsistencyError(f"doubling a valid {m}x{m} generator gave an invalid one: {exc}") from exc


def _sign_pattern(m):
    # integer form of double(): S -> [[S, S+I], [S-I, -S]], exact at every size
    S = np.array([[0, 1], [-1, 0]], dtype=np.int64)
    while S.shape[0] < m:
        eye = np.eye(S.shape[0], dtype=np.int64)
        S = np.block([[S, S + eye], [S - eye, -S]])
    return S


def is_power_of_two(m):
    return isinstance(m, (int, np.integer)) and m >= 2 and (m & (m - 1)) == 0


def build(m):
    """Generator for ``m = 2**k`` modes, ``k >= 1``.

    Only powers of two are reachable by block doubling; other doubly even
    sizes can still be checked with :func:`validate`.
    """
    if not is_power_of_two(m):
        raise UnsupportedSizeError(
            f"m={m}: block doubling from the 2x2 generator only reaches powers of two (m = 2**k, k >= 1)"
        )
    S = _sign_pattern(m)
    try:
        return Generator(S / np.sqrt(m - 1))
    except InvalidGeneratorError as exc:
        raise ConsistencyError(f"built generator for m={m} is invalid: {exc}") from exc


def enumerate_skew_sign_candidates(m):
    """Yield every ``m x m`` skew matrix with off-diagonals ``+-1/sqrt(m-1)``.

    There are ``2**(m(m-1)/2)`` of them; intended for small ``m`` only.
    """
    iu = np.triu_indices(m, k=1)
    scale = 1.0 / np.sqrt(m - 1)
    for signs in product((1.0, -1.0), repeat=len(iu[0])):
        Y = np.zeros((m, m))
        Y[iu] = signs
        Y = (Y - Y.T) * scale
        yield Y


def exists_generator_of_size(m, tol=DEFAULT_TOL):
    """Exhaustive search over sign patterns; True iff some pattern validates."""
    for Y in enumerate_skew_sign_candidates(m):
        if all(validate(Y, tol).values()):
            return True
    return False
