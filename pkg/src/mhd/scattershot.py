"""Two-photon scattershot source built from ``n`` SPDC crystals.

Each crystal emits ``p`` photon pairs with probability ``(1 - chi^2) chi^(2p)``.
A pump pulse is accepted only when exactly two crystals emit exactly one pair
and every other crystal emits none.  Accepted pulses are fed through
``D_m(theta)`` and the output outcome is drawn from the exact two-photon
distribution.
"""
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ConfigurationError, ContractError, DomainError
from .network import InputPair, all_inputs, build_network
from .two_photon_stats import closed_form_pA2_appendix, closed_form_pAB, grouping, pair_probabilities

CHUNK = 1 << 16


@dataclass(frozen=True)
class SourceParams:
    n: int
    chi: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigurationError(f"need n >= 1 crystals, got {self.n}")
        if not 0.0 <= self.chi < 1.0:
            raise ConfigurationError(f"squeezing chi must lie in [0, 1), got {self.chi}")


def herald_two_probability(params, i, j):
    """Probability of heralding exactly one pair in crystals ``i`` and ``j``
    and nothing elsewhere: ``(1 - chi^2)^n chi^4``."""
    if i == j:
        raise ConfigurationError("two photons need two distinct crystals")
    for k in (i, j):
        if not 0 <= k < params.n:
            raise ConfigurationError(f"crystal index {k} out of range for n={params.n}")
    return (1 - params.chi**2) ** params.n * params.chi**4


def success_D(params):
    """Any of the ``n(n-1)/2`` input pairs is accepted by ``D_n``."""
    n, chi = params.n, params.chi
    return (1 - chi**2) ** n * chi**4 * n * (n - 1) / 2


def success_L(params):
    """Array of ``n/2`` independent beam splitters; ``n/2`` accepted inputs."""
    n, chi = params.n, params.chi
    if n % 2:
        raise ConfigurationError(f"L_n needs an even number of crystals, got n={n}")
    return (1 - chi**2) ** n * chi**4 * n / 2


def success_Lprime(params):
    """Unheralded source: each of ``n`` crystals feeds one beam splitter directly."""
    n, chi = params.n, params.chi
    return (1 - chi**2) ** n * chi**2 * n


def crossover_n(chi):
    """Crystal count above which ``D_n`` beats ``L'_2n``: ``2/chi^2 + 1``."""
    if chi <= 0.0:
        raise DomainError("crossover diverges for chi = 0")
    if chi > 1.0:
        raise DomainError(f"chi must be <= 1, got {chi}")
    return 2.0 / chi**2 + 1.0


def _pair_counts(rng, n, chi, size):
    # inverse CDF of P(p) = (1 - chi^2) chi^(2p):  p = floor(log(1 - U) / log(chi^2))
    u = rng.random((size, n))
    if chi == 0.0:
        return np.zeros((size, n), dtype=np.int64)
    return np.floor(np.log1p(-u) / np.log(chi * chi)).astype(np.int64)


def _accepted(counts):
    ones = counts == 1
    return (ones.sum(axis=1) == 2) & (counts.sum(axis=1) == 2)


def sample_input(params, rng):
    """One pump pulse.  Returns the heralded :class:`InputPair` or ``None``."""
    counts = _pair_counts(rng, params.n, params.chi, 1)
    if not _accepted(counts)[0]:
        return None
    i, j = np.flatnonzero(counts[0])
    return InputPair(int(i), int(j))


@dataclass
class InputTally:
    """Outcome counts for one heralded input."""

    heralds: int = 0
    AB: int = 0
    A2: int = 0
    B2: int = 0
    outcomes: dict = field(default_factory=dict)

    def merge(self, other):
        self.heralds += other.heralds
        self.AB += other.AB
        self.A2 += other.A2
        self.B2 += other.B2
        for k, v in other.outcomes.items():
            self.outcomes[k] = self.outcomes.get(k, 0) + v


@dataclass
class ExperimentRecord:
    seed: int
    params: SourceParams
    theta: float
    trials: int
    workers: int
    herald_successes: int
    multi_photon_rejections: int
    tallies: dict

    def empirical(self):
        """Pooled empirical ``(P_AB, P_A2, P_B2)`` over all heralded inputs."""
        h = self.herald_successes
        if h == 0:
            return (float("nan"),) * 3
        ab = sum(t.AB for t in self.tallies.values())
        a2 = sum(t.A2 for t in self.tallies.values())
        b2 = sum(t.B2 for t in self.tallies.values())
        return ab / h, a2 / h, b2 / h

    def to_json(self):
        m = self.params.n
        p_ab = float(closed_form_pAB(m, self.theta))
        emp = self.empirical()
        return {
            "seed": self.seed,
            "params": asdict(self.params),
            "theta": self.theta,
            "trials": self.trials,
            "workers": self.workers,
            "herald_successes": self.herald_successes,
            "multi_photon_rejections": self.multi_photon_rejections,
            "mode_index_base": 0,
            "tallies": {
                key: {**{k: v for k, v in asdict(t).items() if k != "outcomes"}, "outcomes": dict(sorted(t.outcomes.items()))}
                for key, t in sorted(self.tallies.items())
            },
            "empirical": {"p_AB": emp[0], "p_A2": emp[1], "p_B2": emp[2]},
            "analytic": {
                "herald_rate": success_D(self.params),
                "p_AB": p_ab,
                "p_A2": float(closed_form_pA2_appendix(m, self.theta)),
                "p_B2": (1.0 - p_ab) / 2.0,
            },
        }

    @classmethod
    def from_json(cls, obj):
        tallies = {key: InputTally(**t) for key, t in obj["tallies"].items()}
        return cls(
            seed=obj["seed"],
            params=SourceParams(**obj["params"]),
            theta=obj["theta"],
            trials=obj["trials"],
            workers=obj["workers"],
            herald_successes=obj["herald_successes"],
            multi_photon_rejections=obj["multi_photon_rejections"],
            tallies=tallies,
        )

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(json.load(fh))


def _outcome_table(net, inp, grp):
    """Outcome keys, their cumulative probabilities, and A/B class per outcome."""
    m = net.m
    P = pair_probabilities(net, inp)
    a_idx, b_idx = np.triu_indices(m)
    cdf = np.cumsum(P[a_idx, b_idx])
    mask = grp.mask_a
    in_a = mask[a_idx], mask[b_idx]
    cls = np.where(in_a[0] & in_a[1], 1, np.where(~in_a[0] & ~in_a[1], 2, 0))  # 0 AB, 1 A2, 2 B2
    keys = [f"{a},{b}" for a, b in zip(a_idx, b_idx)]
    return keys, cdf, cls


def _run_worker(rng, params, trials, tables):
    n, chi = params.n, params.chi
    tallies = {}
    heralds = 0
    rejected = 0
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        done += size
        counts = _pair_counts(rng, n, chi, size)
        ok = _accepted(counts)
        rejected += int(np.count_nonzero(counts.sum(axis=1) > 2))
        if not ok.any():
            continue
        hit = counts[ok]
        # the two emitting crystals in each accepted row, in increasing order
        cols = np.nonzero(hit)[1].reshape(-1, 2)
        heralds += len(cols)
        u = rng.random(len(cols))
        for (i, j), x in zip(cols, u):
            key = f"{i},{j}"
            keys, cdf, cls = tables[(int(i), int(j))]
            # an outcome with zero probability has an empty CDF interval and is never drawn
            k = min(int(np.searchsorted(cdf, x * cdf[-1], side="right")), len(keys) - 1)
            t = tallies.setdefault(key, InputTally())
            t.heralds += 1
            t.outcomes[keys[k]] = t.outcomes.get(keys[k], 0) + 1
            if cls[k] == 0:
                t.AB += 1
            elif cls[k] == 1:
                t.A2 += 1
            else:
                t.B2 += 1
    return heralds, rejected, tallies


def run_experiment(g, theta, params, trials, seed, workers=1):
    """Simulate ``trials`` pump pulses through ``D_m(theta)``.

    Trials are split across ``workers`` streams seeded from
    ``SeedSequence(seed).spawn(workers)``; a fixed ``(seed, workers)`` gives an
    identical record.
    """
    if params.n != g.m:
        raise ContractError(f"source has {params.n} crystals but network has {g.m} modes")
    if trials < 1:
        raise ConfigurationError(f"trials must be >= 1, got {trials}")
    if workers < 1:
        raise ConfigurationError(f"workers must be >= 1, got {workers}")
    net = build_network(g, theta)
    tables = {}
    for inp in all_inputs(g.m):
        tables[(inp.i, inp.j)] = _outcome_table(net, inp, grouping(g, inp))
    shares = [trials // workers + (1 if w < trials % workers else 0) for w in range(workers)]
    rngs = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(workers)]
    if workers == 1:
        results = [_run_worker(rngs[0], params, shares[0], tables)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda w: _run_worker(rngs[w], params, shares[w], tables), range(workers)))
    tallies = {}
    heralds = rejected = 0
    for h, r, t in results:
        heralds += h
        rejected += r
        for key, tally in t.items():
            tallies.setdefault(key, InputTally()).merge(tally)
    return ExperimentRecord(
        seed=seed,
        params=params,
        theta=float(theta),
        trials=trials,
        workers=workers,
        herald_successes=heralds,
        multi_photon_rejections=rejected,
        tallies=dict(sorted(tallies.items())),
    )
