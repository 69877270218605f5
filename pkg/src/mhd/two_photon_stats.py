"""Two-photon output statistics of ``D_m(theta)``.

For photons entering modes ``i < j`` the probability of detecting them in
output modes ``a <= b`` is the squared permanent of the 2x2 submatrix on rows
``(a, b)`` and columns ``(i, j)``, halved when ``a == b``.

Output detectors are split into groups A and B per input, using the signs of
``c_i * c_j`` where ``c_i, c_j`` are columns of ``D_m(theta_dip)``.  The same
grouping is reused at every ``theta``.
"""
import threading
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import bisect

from .errors import ContractError, DegenerateGroupingError, DomainError, ModeIndexError
from .matrix_core import DEFAULT_TOL, permanent
from .network import InputPair, build_network, submatrix, theta_dip

ZERO_TOL = 1e-12
BISECT_XTOL = 1e-13
BISECT_MAXITER = 200


@dataclass(frozen=True, order=True)
class OutputOutcome:
    """Detected output modes ``a <= b``; ``a == b`` means both photons in one mode."""

    a: int
    b: int

    def __post_init__(self):
        if not (0 <= self.a <= self.b):
            raise ModeIndexError(f"outcome needs 0 <= a <= b, got ({self.a}, {self.b})")

    @property
    def bunched(self):
        return self.a == self.b


def all_outcomes(m):
    return [OutputOutcome(a, b) for a in range(m) for b in range(a, m)]


@dataclass(frozen=True)
class TwoPhotonDistribution:
    m: int
    input: InputPair
    theta: float
    probs: dict

    def total(self):
        return sum(self.probs.values())


@dataclass(frozen=True)
class DetectorGrouping:
    input: InputPair
    labels: tuple

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        m = len(labels)
        if set(labels) - {"A", "B"}:
            raise ContractError(f"labels must be 'A' or 'B', got {sorted(set(labels))}")
        if labels.count("A") * 2 != m:
            raise ContractError(f"grouping must be balanced, got {labels.count('A')} A of {m}")
        self.input.check(m)
        if labels[self.input.i] == labels[self.input.j]:
            raise ContractError("input modes i and j must fall in different groups")

    @property
    def m(self):
        return len(self.labels)

    @property
    def mask_a(self):
        return np.array([lab == "A" for lab in self.labels])

    def members(self, group):
        return [k for k, lab in enumerate(self.labels) if lab == group]


def _check_outcome(m, out):
    if out.b >= m:
        raise ModeIndexError(f"outcome ({out.a}, {out.b}) out of range for m={m}")


def outcome_probability(net, input, out):
    """Probability of a single output outcome, via the 2x2 permanent."""
    input.check(net.m)
    _check_outcome(net.m, out)
    p = permanent(submatrix(net, (out.a, out.b), (input.i, input.j))) ** 2
    return p / 2.0 if out.bunched else p


def pair_probabilities(net, input):
    """Matrix ``P`` with ``P[a, b]`` the probability of outcome ``(min, max)``.

    Vectorised form of :func:`outcome_probability`: the permanent of rows
    ``(a, b)``, columns ``(i, j)`` is ``ci[a] cj[b] + ci[b] cj[a]``.  ``P`` is
    symmetric; each unordered outcome appears at ``[a, b]`` and ``[b, a]``.
    """
    input.check(net.m)
    ci = net.D[:, input.i]
    cj = net.D[:, input.j]
    perm = np.outer(ci, cj) + np.outer(cj, ci)
    P = perm**2
    P[np.diag_indices_from(P)] /= 2.0
    return P


def distribution(net, input):
    P = pair_probabilities(net, input)
    probs = {OutputOutcome(a, b): float(P[a, b]) for a in range(net.m) for b in range(a, net.m)}
    return TwoPhotonDistribution(m=net.m, input=input, theta=net.theta, probs=probs)


@lru_cache(maxsize=4096)
def _grouping_labels(Y_bytes, m, i, j):
    Y = np.frombuffer(Y_bytes, dtype=np.float64).reshape(m, m)
    td = theta_dip(m)
    D = np.cos(td) * np.eye(m) + np.sin(td) * Y
    prod = D[:, i] * D[:, j]
    if np.any(np.abs(prod) <= ZERO_TOL):
        raise DegenerateGroupingError(f"c_{i} * c_{j} has a zero entry; matrix is not a valid generator")
    return tuple("A" if x > 0 else "B" for x in prod)


_grouping_lock = threading.Lock()


def grouping(g, input):
    """Detector grouping ``sign(c_i * c_j)`` at ``theta_dip``; +1 -> A, -1 -> B.

    Computed once per (generator, input) and cached.
    """
    input.check(g.m)
    with _grouping_lock:
        labels = _grouping_labels(g.Y.tobytes(), g.m, input.i, input.j)
    return DetectorGrouping(input=input, labels=labels)


def _check_grouping(net, input, grp):
    if grp.input != input or grp.m != net.m:
        raise ContractError(f"grouping for {grp.input} (m={grp.m}) used with input {input} (m={net.m})")


def coincidence_probability(net, input, grp):
    """Total probability of one photon in group A and one in group B."""
    _check_grouping(net, input, grp)
    P = pair_probabilities(net, input)
    a = grp.mask_a
    return float(P[np.ix_(a, ~a)].sum())


def bunching_probability(net, input, grp, group):
    """Probability that both photons land in detectors of ``group`` ("A" or "B")."""
    _check_grouping(net, input, grp)
    if group not in ("A", "B"):
        raise ContractError(f"group must be 'A' or 'B', got {group!r}")
    P = pair_probabilities(net, input)
    sel = grp.mask_a if group == "A" else ~grp.mask_a
    block = P[np.ix_(sel, sel)]
    # off-diagonal outcomes appear twice in the symmetric block
    return float((block.sum() + np.trace(block)) / 2.0)


def cross_group_probabilities(net, input, grp):
    """The individual ``(m/2)**2`` cross-group outcome probabilities."""
    _check_grouping(net, input, grp)
    P = pair_probabilities(net, input)
    a = grp.mask_a
    return P[np.ix_(a, ~a)].ravel()


def closed_form_pAB(m, theta):
    """Coincidence probability between groups A and B, independent of input.

    (m-2) (cos sin/sqrt(m-1) - sin^2/(m-1))^2 + (cos^2 - sin^2/(m-1))^2
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    c, s = np.cos(theta), np.sin(theta)
    u = c * s / np.sqrt(m - 1) - s * s / (m - 1)
    v = c * c - s * s / (m - 1)
    return (m - 2) * u * u + v * v


def closed_form_pA2_appendix(m, theta):
    """Probability of both photons in group A, summed term by term."""
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    c, s = np.cos(theta), np.sin(theta)
    return (
        (m - 2) / (2 * (m - 1)) * s**4
        + (m - 2) / (m - 1) ** 1.5 * c * s**3
        + (m + 2) / (2 * (m - 1)) * c**2 * s**2
    )


def pAB_derivative(m, theta):
    """Analytic ``d/dtheta`` of :func:`closed_form_pAB`.

    With u, v as in the closed form,
    du = cos(2t)/sqrt(m-1) - sin(2t)/(m-1) and dv = -sin(2t) m/(m-1).
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    c, s = np.cos(theta), np.sin(theta)
    u = c * s / np.sqrt(m - 1) - s * s / (m - 1)
    v = c * c - s * s / (m - 1)
    du = np.cos(2 * theta) / np.sqrt(m - 1) - np.sin(2 * theta) / (m - 1)
    dv = -np.sin(2 * theta) * m / (m - 1)
    return 2 * (m - 2) * u * du + 2 * v * dv


def _beam_splitter_pAB(phi):
    return np.cos(2 * phi) ** 2


def _mismatch(m, theta, phi):
    """Signed gap between the two coincidence profiles, increasing in ``theta``.

    Near full coincidence ``P(AB) = 1 - O(theta^2)`` rounds to 1, so there the
    gap is taken between the bunching rates ``1 - P(AB)`` instead: ``sin^2(2 phi)``
    against ``2 P(A^2)``, both of which keep full relative precision.
    """
    if _beam_splitter_pAB(phi) >= 0.5:
        return 2.0 * closed_form_pA2_appendix(m, theta) - np.sin(2 * phi) ** 2
    return _beam_splitter_pAB(phi) - closed_form_pAB(m, theta)


def map_theta_to_phi(m, theta):
    """Beam-splitter angle ``phi`` in ``[0, pi/4]`` whose coincidence rate
    ``cos^2(2 phi)`` equals ``closed_form_pAB(m, theta)``.

    Solved by bisection; both profiles fall strictly from 1 to 0.
    """
    td = theta_dip(m)
    if not 0.0 <= theta <= td:
        raise DomainError(f"theta={theta} outside [0, theta_dip({m})={td}]")
    if theta == 0.0:
        return 0.0
    if theta == td:
        return np.pi / 4
    return float(bisect(lambda p: -_mismatch(m, theta, p), 0.0, np.pi / 4, xtol=BISECT_XTOL, maxiter=BISECT_MAXITER))


def map_phi_to_theta(m, phi):
    """Inverse of :func:`map_theta_to_phi`, by bisection on ``[0, theta_dip]``.

    For large ``m`` the result approaches ``2 phi``.
    """
    td = theta_dip(m)
    if not 0.0 <= phi <= np.pi / 4:
        raise DomainError(f"phi={phi} outside [0, pi/4]")
    if phi == 0.0:
        return 0.0
    if phi == np.pi / 4:
        return td
    return float(bisect(lambda t: _mismatch(m, t, phi), 0.0, td, xtol=BISECT_XTOL, maxiter=BISECT_MAXITER))


def zero_permanent_count(g, input, tol=ZERO_TOL):
    """Number of output pairs ``p < q`` whose permanent vanishes at ``theta_dip``."""
    net = build_network(g, theta_dip(g.m))
    input.check(g.m)
    ci = net.D[:, input.i]
    cj = net.D[:, input.j]
    perm = np.outer(ci, cj) + np.outer(cj, ci)
    iu = np.triu_indices(g.m, k=1)
    return int(np.count_nonzero(np.abs(perm[iu]) <= tol))


def profile_point(net, input, grp):
    """``(p_AB, p_A2, p_B2)`` by brute force for one network and input."""
    return (
        coincidence_probability(net, input, grp),
        bunching_probability(net, input, grp, "A"),
        bunching_probability(net, input, grp, "B"),
    )


def normalization_error(net, input):
    P = pair_probabilities(net, input)
    total = (P.sum() + np.trace(P)) / 2.0
    return abs(total - 1.0)

