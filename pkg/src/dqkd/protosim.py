"""Monte-Carlo simulation of the full two-way protocol at finite size.

Each of the n rounds sends a uniformly chosen state from {0, 1, +, -}
through the forward attack. The receiver either check-measures it in a
uniformly chosen basis (keeping only consistent-basis results for the
fidelity estimates) or encodes a uniform key bit, I for 0 and the flip Y
for 1. The encoded qubit returns through a classical bit-flip channel of
strength backward_noise and is measured in the preparation basis, which
decodes the key bit deterministically on a clean channel. A random subset
of the decoded bits is announced to estimate the error rate; the rest form
the raw key. Estimates feed the asymptotic rate formulas; the abort rule
compares the estimated xi against 1/2, optionally slacked by a multiple of
its standard error.

Round outcomes are sampled from exact probabilities: the check-mode
distribution comes from the reduced qubit state of the attacked probe, and
the forward decode error probability equals 1 - f for both key bits
because the flip Y maps each basis state to its complement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import AttackParams, probe_outcome_probability, validate
from .keyrate import BOUNDARY_ATOL, KeyRateReport, final_rate
from .qstate import BASIS_OF, COMPLEMENT, STATE_LABELS

BOUNDARY_XI = 0.5


class InsufficientDataError(ValueError):
    """An estimator was asked for a rate with zero trials."""


@dataclass(frozen=True)
class ProtocolConfig:
    """One protocol run: attack, sample size, conventions, seed.

    check_fraction is the probability a received qubit is check-measured;
    announce_fraction the probability an encoding-mode bit is announced.
    abort_slack_z widens the abort rule to est_xi - z * se < 1/2.
    """

    attack: AttackParams
    n: int
    check_fraction: float = 0.5
    announce_fraction: float = 0.5
    backward_noise: float = 0.0
    seed: int = 0
    permute: bool = True
    abort_slack_z: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n={self.n} must be at least 1")
        for name in ("check_fraction", "announce_fraction"):
            val = getattr(self, name)
            if not 0.0 < val < 1.0:
                raise ValueError(f"{name}={val} outside the open interval (0, 1)")
        if not 0.0 <= self.backward_noise <= 0.5:
            raise ValueError(f"backward_noise={self.backward_noise} outside [0, 1/2]")
        if self.abort_slack_z < 0.0:
            raise ValueError(f"abort_slack_z={self.abort_slack_z} must be >= 0")

    def to_dict(self) -> dict:
        return {
            "attack": self.attack.to_dict(),
            "n": self.n,
            "check_fraction": self.check_fraction,
            "announce_fraction": self.announce_fraction,
            "backward_noise": self.backward_noise,
            "seed": self.seed,
            "permute": self.permute,
            "abort_slack_z": self.abort_slack_z,
        }


@dataclass(frozen=True)
class ProtocolStats:
    """Counts and estimates from one simulated run.

    counts holds the consistent-basis check tallies keyed
    "prepared|basis|outcome"; the four round categories
    (consistent checks, discarded checks, announced bits, raw key m)
    partition n exactly.
    """

    counts: dict
    n_check_consistent: int
    n_check_discarded: int
    n_announced: int
    m: int
    est_f0: float
    se_f0: float
    est_f1: float
    se_f1: float
    est_fplus: float
    se_fplus: float
    est_fminus: float
    se_fminus: float
    est_e: float
    se_e: float
    est_xi: float
    se_xi: float
    k_est: int
    aborted: bool

    def to_dict(self) -> dict:
        return {
            "counts": dict(self.counts),
            "n_check_consistent": self.n_check_consistent,
            "n_check_discarded": self.n_check_discarded,
            "n_announced": self.n_announced,
            "m": self.m,
            "est_f0": self.est_f0,
            "se_f0": self.se_f0,
            "est_f1": self.est_f1,
            "se_f1": self.se_f1,
            "est_fplus": self.est_fplus,
            "se_fplus": self.se_fplus,
            "est_fminus": self.est_fminus,
            "se_fminus": self.se_fminus,
            "est_e": self.est_e,
            "se_e": self.se_e,
            "est_xi": self.est_xi,
            "se_xi": self.se_xi,
            "k_est": self.k_est,
            "aborted": self.aborted,
        }


def decode_key_bit(prepared: str, outcome: str) -> int:
    """Key bit implied by measuring `outcome` after preparing `prepared`.

    0 when the outcome equals the prepared state, 1 when it is the basis
    complement; cross-basis pairs are rejected.
    """
    if prepared not in BASIS_OF or outcome not in BASIS_OF:
        raise ValueError(f"unknown state label in ({prepared!r}, {outcome!r})")
    if BASIS_OF[prepared] != BASIS_OF[outcome]:
        raise ValueError(
            f"{prepared!r} and {outcome!r} are not measured in the same basis"
        )
    return 0 if outcome == prepared else 1


def estimate_with_se(successes: int, trials: int) -> tuple[float, float]:
    """Binomial point estimate and standard error sqrt(p(1-p)/trials)."""
    if trials < 1:
        raise InsufficientDataError("estimate requested with zero trials")
    p = successes / trials
    return p, math.sqrt(p * (1.0 - p) / trials)


def run_protocol(config: ProtocolConfig) -> tuple[ProtocolStats, KeyRateReport]:
    """Simulate one full run and evaluate the asymptotic rate from estimates.

    All randomness comes from one generator seeded with config.seed, so
    identical configs reproduce identical results bit for bit. The rounds
    are vectorized; no per-round Python loop.

    Raises:
        InsufficientDataError: n too small for some estimator to see even
            one trial (every fidelity needs consistent-basis checks and
            the error rate needs announced bits).
    """
    params = validate(config.attack)
    # exact per-state probability that the attacked probe still matches
    match_prob = np.array(
        [probe_outcome_probability(params, lab, lab) for lab in STATE_LABELS]
    )
    n = config.n
    rng = np.random.default_rng(config.seed)

    preps = rng.integers(0, 4, size=n)
    is_check = rng.random(n) < config.check_fraction
    check_basis = rng.integers(0, 2, size=n)  # 0 = Z, 1 = X
    u_check = rng.random(n)
    enc_bits = rng.integers(0, 2, size=n)
    u_decode = rng.random(n)
    u_back = rng.random(n)

    if config.permute:
        order = rng.permutation(n)
        preps = preps[order]
        is_check = is_check[order]
        check_basis = check_basis[order]
        u_check = u_check[order]
        enc_bits = enc_bits[order]
        u_decode = u_decode[order]
        u_back = u_back[order]
    u_announce = rng.random(n)

    prep_basis = (preps >= 2).astype(np.int64)
    consistent = is_check & (check_basis == prep_basis)
    discarded = is_check & ~consistent
    check_match = u_check < match_prob[preps]

    counts: dict[str, int] = {}
    trials_f = np.zeros(4, dtype=np.int64)
    successes_f = np.zeros(4, dtype=np.int64)
    for k, label in enumerate(STATE_LABELS):
        here = consistent & (preps == k)
        hits = int(np.count_nonzero(here & check_match))
        misses = int(np.count_nonzero(here & ~check_match))
        trials_f[k] = hits + misses
        successes_f[k] = hits
        basis = BASIS_OF[label]
        if hits:
            counts[f"{label}|{basis}|{label}"] = hits
        if misses:
            counts[f"{label}|{basis}|{COMPLEMENT[label]}"] = misses

    est_f = np.zeros(4)
    se_f = np.zeros(4)
    for k in range(4):
        est_f[k], se_f[k] = estimate_with_se(int(successes_f[k]), int(trials_f[k]))

    # both encodings decode wrongly with probability 1 - f: Y swaps the
    # basis states, so the flipped branch weight is the same either way
    forward_err = u_decode < (1.0 - match_prob[preps])
    back_flip = u_back < config.backward_noise
    decoded = enc_bits ^ forward_err ^ back_flip
    bit_err = decoded != enc_bits

    is_enc = ~is_check
    announced = is_enc & (u_announce < config.announce_fraction)
    raw_key = is_enc & ~announced
    m = int(np.count_nonzero(raw_key))
    est_e, se_e = estimate_with_se(
        int(np.count_nonzero(announced & bit_err)),
        int(np.count_nonzero(announced)),
    )

    est_xi = float(0.5 * (est_f[0] + est_f[1]) + 0.5 * (est_f[2] + est_f[3]) - 1.0)
    se_xi = 0.5 * math.sqrt(float(np.sum(se_f**2)))

    report = final_rate(
        min(max(est_xi, -1.0), 1.0),
        min(max(float(est_e), 0.0), 0.5),
    )
    aborted = bool(est_xi - config.abort_slack_z * se_xi < BOUNDARY_XI - BOUNDARY_ATOL)
    k_est = 0 if aborted else max(0, int(round(m * report.r_final)))

    stats = ProtocolStats(
        counts=counts,
        n_check_consistent=int(np.count_nonzero(consistent)),
        n_check_discarded=int(np.count_nonzero(discarded)),
        n_announced=int(np.count_nonzero(announced)),
        m=m,
        est_f0=float(est_f[0]),
        se_f0=float(se_f[0]),
        est_f1=float(est_f[1]),
        se_f1=float(se_f[1]),
        est_fplus=float(est_f[2]),
        se_fplus=float(se_f[2]),
        est_fminus=float(est_f[3]),
        se_fminus=float(se_f[3]),
        est_e=float(est_e),
        se_e=float(se_e),
        est_xi=float(est_xi),
        se_xi=float(se_xi),
        k_est=k_est,
        aborted=aborted,
    )
    return stats, report
