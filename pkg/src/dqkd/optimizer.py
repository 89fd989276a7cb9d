"""Certify the eavesdropper's entropy maximum by direct search.

Observed fidelities pin the amplitudes (c0^2 = f01) and, through the
boundary identity 1 + c0^2 p0 + c1^2 q0 = 2 fpm, one linear combination of
the real overlap parts. Everything else about the attack is free, so the
worst case is the attack maximizing the entropy of the averaged
qubit-ancilla state under that single equality constraint. The search
eliminates q0 exactly, grids the remaining real direction p0, and refines
with a derivative-free simplex over (p0, p1, q1, s1, r1); overlaps that
provably cancel from the spectrum (u and v, linked by the orthogonality
constraint, and the real parts of s and r) are held at the tie-break
value 0. The result is compared against the closed-form maximum 1 + h(xi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .attack import AttackParams, AttackValidationError, forward_fidelities
from .keyrate import (
    SYMMETRY_ATOL,
    be_spectrum_closed_form,
    s_be_max,
    s_be_numeric,
)

GAP_TOLERANCE = 1e-5
# below this flip probability the q0 term cannot compensate anything and p0 is pinned
PINNED_C1SQ = 1e-9


class InfeasibleConstraintError(ValueError):
    """No attack parameters satisfy the fidelity constraint."""


@dataclass(frozen=True)
class FidelityConstraint:
    """Observed fidelities an attack must reproduce.

    Attributes:
        c0sq: computational-basis fidelity f01 (undisturbed probability).
        cppsq: diagonal-basis fidelity fpm.
        tolerance: how closely the returned maximizer must reproduce them.
    """

    c0sq: float
    cppsq: float
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        for name, val in (("c0sq", self.c0sq), ("cppsq", self.cppsq)):
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name}={val} outside [0, 1]")

    @property
    def c1sq(self) -> float:
        return 1.0 - self.c0sq

    @property
    def xi(self) -> float:
        return self.cppsq - self.c1sq


@dataclass(frozen=True)
class OptResult:
    """Outcome of one constrained entropy maximization.

    Attributes:
        best_params: the best attack found.
        best_entropy: its entropy in bits.
        closed_form_entropy: the analytic maximum 1 + h(xi).
        gap: closed_form_entropy - best_entropy.
        iterations: objective evaluations spent.
        converged: |gap| within the certification tolerance.
    """

    best_params: AttackParams
    best_entropy: float
    closed_form_entropy: float
    gap: float
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "best_entropy": self.best_entropy,
            "closed_form_entropy": self.closed_form_entropy,
            "gap": self.gap,
            "iterations": self.iterations,
            "converged": self.converged,
            "best_params": self.best_params.to_dict(),
        }


def entropy_objective(params: AttackParams) -> float:
    """Entropy of the averaged qubit-ancilla state, in bits.

    Uses the closed-form spectrum for symmetric amplitudes and falls back
    to brute-force diagonalization otherwise; the two routes agree within
    1e-10 wherever both apply.
    """
    if abs(params.c00 - params.c11) <= SYMMETRY_ATOL:
        return be_spectrum_closed_form(params).entropy()
    return s_be_numeric(params)


def maximize_s_be(
    constraint: FidelityConstraint,
    budget: int = 20000,
    seed: int = 0,
) -> OptResult:
    """Maximize the eavesdropper entropy under a fidelity constraint.

    Args:
        constraint: observed f01 and fpm the attack must reproduce.
        budget: cap on objective evaluations across all search stages.
        seed: seed for the start-point jitter; fixed (constraint, budget,
            seed) triples give identical results.

    Returns:
        OptResult with the best attack, its entropy, and the gap to the
        closed-form maximum.

    Raises:
        BoundaryViolationError: constraint lies below the xi >= 1/2 region.
        InfeasibleConstraintError: no overlap assignment can meet it.
    """
    c0sq = constraint.c0sq
    c1sq = constraint.c1sq
    cppsq = constraint.cppsq
    closed_form = s_be_max(c0sq, c1sq, cppsq)
    c0 = math.sqrt(c0sq)
    c1 = math.sqrt(c1sq)
    pinned = 2.0 * cppsq - 1.0

    evals = 0

    def params_at(x: np.ndarray) -> AttackParams | None:
        p0, p1, q1, s1, r1 = (float(t) for t in x)
        if c1sq > PINNED_C1SQ:
            q0 = (pinned - c0sq * p0) / c1sq
        else:
            # no flip amplitude: p0 is not a free direction, project it
            p0 = pinned / c0sq
            q0 = 1.0
        if abs(p0) > 1.0 or abs(q0) > 1.0:
            return None
        return AttackParams(
            c00=c0,
            c01=c1,
            c11=c0,
            c10=c1,
            s=complex(0.0, s1),
            u=0j,
            p=complex(p0, p1),
            r=complex(0.0, r1),
            v=0j,
            q=complex(q0, q1),
        )

    def neg_entropy(x: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        params = params_at(x)
        if params is None:
            return np.inf
        try:
            return -entropy_objective(params)
        except AttackValidationError:
            return np.inf

    if c1sq > PINNED_C1SQ:
        lo = max(-1.0, (pinned - c1sq) / c0sq)
        hi = min(1.0, (pinned + c1sq) / c0sq)
    else:
        lo = hi = pinned / c0sq
    if lo > hi + 1e-12 or hi < -1.0 or lo > 1.0:
        raise InfeasibleConstraintError(
            f"no p0 satisfies the boundary identity for {constraint}"
        )

    # stage 1: grid along the one constrained real direction
    n_grid = max(2, min(41, budget // 8)) if hi > lo else 1
    grid = np.linspace(lo, hi, n_grid)
    grid_scores = [neg_entropy(np.array([p0, 0.0, 0.0, 0.0, 0.0])) for p0 in grid]
    best_grid_p0 = float(grid[int(np.argmin(grid_scores))])

    # stage 2: simplex refinement from the analytic candidate (q0 = 1),
    # the best grid point, and one jittered start
    analytic_p0 = min(1.0, max(-1.0, (pinned - c1sq) / c0sq)) if c1sq > PINNED_C1SQ else lo
    rng = np.random.default_rng(seed)
    jitter = 0.02 * rng.standard_normal(4)
    starts = [
        np.array([analytic_p0, 0.0, 0.0, 0.0, 0.0]),
        np.array([best_grid_p0, 0.0, 0.0, 0.0, 0.0]),
        np.array([best_grid_p0, *jitter]),
    ]
    per_start = max(200, (budget - evals) // len(starts))

    candidates: list[tuple[float, np.ndarray]] = []
    for x0 in starts:
        score0 = neg_entropy(x0)
        if np.isfinite(score0):
            candidates.append((score0, x0))
        # inf marks infeasible proposals; silence the inf-inf comparison noise
        with np.errstate(invalid="ignore"):
            res = minimize(
                neg_entropy,
                x0,
                method="Nelder-Mead",
                options={
                    "maxfev": per_start,
                    "xatol": 1e-9,
                    "fatol": 1e-12,
                },
            )
        if np.isfinite(res.fun):
            candidates.append((float(res.fun), res.x))

    if not candidates:
        raise InfeasibleConstraintError(
            f"search found no valid attack for {constraint}"
        )

    def tie_break(entry: tuple[float, np.ndarray]) -> tuple[float, float]:
        score, x = entry
        # smaller (q1, p1) wins between equal entropies; s0 = r0 = 0 already
        return (round(score / 1e-12) * 1e-12, float(np.hypot(x[2], x[1])))

    _, best_x = min(candidates, key=tie_break)
    best_params = params_at(best_x)
    if best_params is None:
        raise InfeasibleConstraintError("refinement left the feasible region")
    best_entropy = entropy_objective(best_params)

    fids = forward_fidelities(best_params)
    if (
        abs(fids.f01 - c0sq) > constraint.tolerance
        or abs(fids.fpm - cppsq) > constraint.tolerance
    ):
        raise InfeasibleConstraintError(
            f"maximizer violates the fidelity constraint: {fids.to_dict()}"
        )

    gap = closed_form - best_entropy
    return OptResult(
        best_params=best_params,
        best_entropy=best_entropy,
        closed_form_entropy=closed_form,
        gap=gap,
        iterations=evals,
        converged=abs(gap) <= GAP_TOLERANCE,
    )
