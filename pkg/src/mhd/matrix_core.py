"""Small dense real matrices: validation, permanents, orthogonality, JSON I/O.

Matrices are plain ``numpy.ndarray`` objects of dtype float64.  The permanent
kernel is taken from the compiled ``mhd._kernels`` extension when it is
importable and from ``mhd._kernels_py`` otherwise; set ``MHD_PURE_PYTHON=1``
to force the fallback.
"""
import json
import os
from math import factorial

import numpy as np

from .errors import SizeError

if os.environ.get("MHD_PURE_PYTHON"):
    from ._kernels_py import ryser as _ryser

    BACKEND = "python"
else:
    try:
        from ._kernels import ryser as _ryser

        BACKEND = "cython"
    except ImportError:  # extension not built
        from ._kernels_py import ryser as _ryser

        BACKEND = "python"

DEFAULT_TOL = 1e-12
ROOT_TOL = 1e-9
MAX_PERMANENT_DIM = 20


def as_mat(values):
    """Return ``values`` as a finite, square, float64 array (a copy)."""
    M = np.array(values, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise SizeError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise SizeError("matrix has non-finite entries")
    return M


def permanent(sub):
    """Permanent of a square matrix, ``sum_sigma prod_i sub[i, sigma(i)]``.

    Sizes up to 3 are expanded directly; larger ones go through Ryser's
    inclusion-exclusion formula.
    """
    A = as_mat(sub)
    n = A.shape[0]
    if n > MAX_PERMANENT_DIM:
        raise SizeError(f"permanent limited to {MAX_PERMANENT_DIM}x{MAX_PERMANENT_DIM}, got {n}x{n}")
    if n == 1:
        return float(A[0, 0])
    if n == 2:
        return float(A[0, 0] * A[1, 1] + A[0, 1] * A[1, 0])
    if n == 3:
        return float(
            A[0, 0] * (A[1, 1] * A[2, 2] + A[1, 2] * A[2, 1])
            + A[0, 1] * (A[1, 0] * A[2, 2] + A[1, 2] * A[2, 0])
            + A[0, 2] * (A[1, 0] * A[2, 1] + A[1, 1] * A[2, 0])
        )
    return float(_ryser(np.ascontiguousarray(A)))


def is_orthogonal(M, tol=DEFAULT_TOL):
    M = as_mat(M)
    return bool(np.max(np.abs(M @ M.T - np.eye(M.shape[0]))) <= tol)


def matexp_series(M, terms=40):
    """Truncated Taylor series ``sum_{k<terms} M^k / k!``.

    Cross-check oracle for closed-form exponentials; not used on any hot path.
    """
    M = as_mat(M)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    out = np.zeros_like(M)
    power = np.eye(M.shape[0])
    for k in range(terms):
        out += power / factorial(k)
        power = power @ M
    return out


def mat_to_json(M):
    """Serialize to ``{"m": int, "rows": [[...], ...]}``.

    Python's float repr round-trips exactly, so no precision is lost.
    """
    M = as_mat(M)
    return {"m": int(M.shape[0]), "rows": [[float(x) for x in row] for row in M]}


def mat_from_json(obj):
    M = as_mat(obj["rows"])
    if int(obj["m"]) != M.shape[0]:
        raise SizeError(f"declared m={obj['m']} but rows describe a {M.shape[0]}x{M.shape[0]} matrix")
    return M


def write_matrix(path, M):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(mat_to_json(M), fh, indent=2)
        fh.write("\n")


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return mat_from_json(json.load(fh))
