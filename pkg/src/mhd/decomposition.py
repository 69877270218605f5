"""Two-level (beam splitter) decomposition of real orthogonal networks.

Column-by-column elimination: for column ``c`` the sub-diagonal entries are
zeroed top to bottom, each by a step acting on modes ``(c, k)``.  Each step's
2x2 block is

    diag(1, s) @ [[sqrt(1-eta), sqrt(eta)], [sqrt(eta), -sqrt(1-eta)]]

with ``s = -1`` when ``phase_pi`` is set (a pi phase on mode ``q`` after the
splitter).  The plan recomposes as

    U = T_1 @ T_2 @ ... @ T_N @ diag(residual_phases).
"""
import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DecompositionError, ModeIndexError
from .generator import build
from .matrix_core import as_mat

ZERO_TOL = 1e-13
ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class TwoLevelStep:
    p: int
    q: int
    eta: float
    phase_pi: bool

    def splitter(self):
        a, b = np.sqrt(1.0 - self.eta), np.sqrt(self.eta)
        return np.array([[a, b], [b, -a]])

    def block(self):
        return np.diag([1.0, -1.0 if self.phase_pi else 1.0]) @ self.splitter()

    def embed(self, m):
        if not 0 <= self.p < self.q < m:
            raise ModeIndexError(f"step modes ({self.p}, {self.q}) invalid for m={m}")
        T = np.eye(m)
        T[np.ix_((self.p, self.q), (self.p, self.q))] = self.block()
        return T


@dataclass(frozen=True)
class CircuitPlan:
    m: int
    theta: float
    steps: tuple
    residual_phases: tuple

    def to_json(self, target=None):
        obj = {
            "m": self.m,
            "theta": self.theta,
            "steps": [asdict(s) for s in self.steps],
            "residual_phases": [int(x) for x in self.residual_phases],
        }
        if target is not None:
            obj["recompose_error"] = float(np.max(np.abs(recompose(self) - target)))
        return obj

    @classmethod
    def from_json(cls, obj):
        return cls(
            m=int(obj["m"]),
            theta=obj["theta"],
            steps=tuple(TwoLevelStep(int(s["p"]), int(s["q"]), float(s["eta"]), bool(s["phase_pi"])) for s in obj["steps"]),
            residual_phases=tuple(int(x) for x in obj["residual_phases"]),
        )

    def dump(self, path, target=None):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(target), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def decompose_matrix(U, theta=float("nan")):
    """Reduce a real orthogonal matrix to at most ``m(m-1)/2`` two-level steps."""
    V = as_mat(U)
    m = V.shape[0]
    if np.max(np.abs(V @ V.T - np.eye(m))) > ORTHO_TOL:
        raise DecompositionError("matrix is not orthogonal")
    steps = []
    for c in range(m - 1):
        for k in range(c + 1, m):
            x, y = V[c, c], V[k, c]
            if abs(y) <= ZERO_TOL:
                # explicit no-op step keeps the plan layout fixed
                step = TwoLevelStep(c, k, 0.0, True)
            else:
                r = np.hypot(x, y)
                eta = min(1.0, (y / r) ** 2)
                same_sign = (x >= 0) == (y >= 0)
                step = TwoLevelStep(c, k, float(eta), not same_sign)
            # elimination applies the inverse (transpose) of the step's block
            rows = (c, k)
            V[rows, :] = step.block().T @ V[rows, :]
            V[k, c] = 0.0
            steps.append(step)
    off = V - np.diag(np.diag(V))
    phases = np.sign(np.diag(V))
    if np.max(np.abs(off)) > ORTHO_TOL or np.max(np.abs(np.abs(np.diag(V)) - 1.0)) > ORTHO_TOL:
        raise DecompositionError("elimination did not reach a diagonal of +-1")
    return CircuitPlan(m=m, theta=theta, steps=tuple(steps), residual_phases=tuple(int(s) for s in phases))


def decompose(net):
    return decompose_matrix(net.D, theta=net.theta)


def recompose(plan):
    m = plan.m
    if len(plan.residual_phases) != m:
        raise ModeIndexError(f"expected {m} residual phases, got {len(plan.residual_phases)}")
    U = np.eye(m)
    for step in plan.steps:
        U = U @ step.embed(m)
    return U @ np.diag(np.asarray(plan.residual_phases, dtype=float))


def d4_reference_etas(theta):
    """Transmission ratios of the three distinct splitters in the ``D_4`` circuit."""
    s2 = np.sin(theta) ** 2
    c2t = np.cos(2 * theta)
    return s2 / (2 + c2t), 2 * s2 / (5 + c2t), s2 / 3


# Pinned D_4 layout: (p, q, which eta, phase_pi) in recomposition order,
# then residual phases.  Found by running the elimination on build(4) and
# matching its ratios to the three closed forms; valid for 0 < theta <= pi/3.
D4_LAYOUT = (
    (0, 1, 0, True),
    (0, 2, 1, True),
    (0, 3, 2, True),
    (1, 2, 2, False),
    (1, 3, 1, True),
    (2, 3, 0, True),
)
D4_RESIDUAL = (1, 1, -1, 1)


def d4_reference_plan(theta):
    etas = d4_reference_etas(theta)
    steps = tuple(TwoLevelStep(p, q, float(etas[e]), ph) for p, q, e, ph in D4_LAYOUT)
    return CircuitPlan(m=4, theta=float(theta), steps=steps, residual_phases=D4_RESIDUAL)


def verify_d4_reference(theta, tol=1e-9):
    """Does the pinned ``D_4`` circuit reproduce ``cos(theta) I + sin(theta) Y_4``?"""
    target = np.cos(theta) * np.eye(4) + np.sin(theta) * build(4).Y
    return bool(np.max(np.abs(recompose(d4_reference_plan(theta)) - target)) <= tol)
