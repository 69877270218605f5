"""The tunable network ``D_m(theta) = exp(theta Y) = cos(theta) I + sin(theta) Y``.

Mode indices are 0-based throughout the library.  Only the CLI speaks 1-based
indices.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ModeIndexError
from .generator import Generator
from .matrix_core import DEFAULT_TOL


@dataclass(frozen=True, order=True)
class InputPair:
    """Two distinct input modes ``i < j`` carrying one photon each."""

    i: int
    j: int

    def __post_init__(self):
        if not (0 <= self.i < self.j):
            raise ModeIndexError(f"input pair needs 0 <= i < j, got ({self.i}, {self.j})")

    def check(self, m):
        if self.j >= m:
            raise ModeIndexError(f"input pair ({self.i}, {self.j}) out of range for m={m}")
        return self

    @classmethod
    def from_one_based(cls, text):
        """Parse ``"2,3"`` (1-based, as on the command line) into ``InputPair(1, 2)``."""
        try:
            a, b = (int(s) - 1 for s in str(text).split(","))
        except ValueError as exc:
            raise ModeIndexError(f"cannot parse input pair {text!r}; expected 'i,j'") from exc
        if a == b:
            raise ModeIndexError(f"input modes must differ, got {text!r}")
        return cls(min(a, b), max(a, b))

    def one_based(self):
        return f"{self.i + 1},{self.j + 1}"


def all_inputs(m):
    return [InputPair(i, j) for i in range(m) for j in range(i + 1, m)]


@dataclass(frozen=True, eq=False)
class MHDNetwork:
    generator: Generator
    theta: float
    D: np.ndarray

    @property
    def m(self):
        return self.generator.m


def build_network(g, theta):
    theta = float(theta)
    if not np.isfinite(theta):
        raise DomainError(f"theta must be finite, got {theta}")
    D = np.cos(theta) * np.eye(g.m) + np.sin(theta) * g.Y
    D.setflags(write=False)
    return MHDNetwork(generator=g, theta=theta, D=D)


def theta_dip(m):
    """Angle where ``cos(theta) = sin(theta)/sqrt(m-1) = 1/sqrt(m)``."""
    if m < 2:
        raise DomainError(f"theta_dip needs m >= 2, got {m}")
    return float(np.arccos(1.0 / np.sqrt(m)))


def submatrix(net, rows, cols):
    """``[[d_pi, d_pj], [d_qi, d_qj]]`` for output rows (p, q), input columns (i, j)."""
    m = net.m
    for k in (*rows, *cols):
        if not 0 <= k < m:
            raise ModeIndexError(f"mode index {k} out of range for m={m}")
    return net.D[np.ix_(rows, cols)]


def hadamard_check(net, tol=DEFAULT_TOL):
    """True iff ``H = sqrt(m) D`` is a +-1 matrix with ``H H^T = m I``."""
    m = net.m
    H = np.sqrt(m) * net.D
    if np.max(np.abs(np.abs(H) - 1.0)) > tol:
        return False
    return bool(np.max(np.abs(H @ H.T - m * np.eye(m))) <= tol * m)
