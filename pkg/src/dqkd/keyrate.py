"""Joint states, spectra and key rates of the attacked two-way protocol.

The source emits computational-basis qubits with equal probability, so the
travelling state is maximally mixed. After the forward attack the joint
qubit-ancilla state is an equal mixture of the two attacked branches; the
receiver encodes key bit 0 by doing nothing and key bit 1 by applying the
real antisymmetric flip Y = |0><1| - |1><0|. Averaging over the key bit and
keeping a classical copy of it yields a classical-quantum state on
key ox qubit ox ancilla whose entropy is exactly 2 bits for every valid
attack; the eavesdropper's uncertainty about the key is therefore governed
entirely by the entropy of the reduced qubit-ancilla state.

For symmetric attacks (equal undisturbed amplitudes) that reduced state has
a closed-form spectrum: the four nonzero eigenvalues are (1 +/- D1 +/- D2)/4
with

    D1 = sqrt((c0^2 p0 - c1^2 q0)^2 + (c0^2 p1 - c1^2 q1)^2
              + c0^2 c1^2 (s1 + r1)^2)
    D2 = c0 c1 |s1 - r1|

in the overlap notation of the attack module. Maximizing the resulting
entropy over the unobserved overlaps, with the observed fidelities pinning
c0^2 p0 + c1^2 q0, gives 1 + h(xi) where xi = fpm + f01 - 1 and h is the
binary entropy; the privacy-amplification rate is then 2 - (1 + h(xi)) =
1 - h(xi), positive only above the abort boundary xi >= 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .attack import AttackParams, ChannelFidelities, branch_vectors, validate
from .qstate import (
    DensityMatrix,
    KET_0,
    KET_1,
    Spectrum,
    Y_GATE,
    binary_entropy,
    density,
    kron,
    outer,
    partial_trace,
    trace_distance,
    von_neumann_entropy,
)

SYMMETRY_ATOL = 1e-9
BOUNDARY_XI = 0.5
# float slack on boundary comparisons, matching the domain checks below
BOUNDARY_ATOL = 1e-12


class ClosedFormNotApplicableError(ValueError):
    """Closed-form spectrum requested for asymmetric amplitudes."""


class BoundaryViolationError(ValueError):
    """Observed fidelities fall below the abort boundary fpm + f01 >= 3/2."""


@dataclass(frozen=True)
class JointStateBundle:
    """The joint states produced by one forward attack.

    Attributes:
        rho_abe: classical key bit ox qubit ox ancilla, dims (2, 2, 4).
        rho_be: qubit ox ancilla after averaging the key bit, dims (2, 4).
        rho_be_0: qubit ox ancilla branch for key bit 0 (encoding I).
        rho_be_1: qubit ox ancilla branch for key bit 1 (encoding Y).
    """

    rho_abe: DensityMatrix
    rho_be: DensityMatrix
    rho_be_0: DensityMatrix
    rho_be_1: DensityMatrix


def build_rho_abe(params: AttackParams) -> JointStateBundle:
    """Assemble the joint key-qubit-ancilla state for a validated attack.

    The forward channel turns the maximally mixed qubit into an equal
    mixture of the two attacked branch vectors; the key-1 branch is that
    state conjugated by Y on the qubit factor. The classical key bit is
    kept as an explicit 2-dimensional factor in front.

    Args:
        params: attack parameters; validated on entry.

    Returns:
        JointStateBundle with all four states as validated density matrices.
    """
    validate(params)
    phi0, phi1 = branch_vectors(params)
    be0 = 0.5 * (outer(phi0) + outer(phi1))
    y_qubit = kron(Y_GATE, np.eye(4, dtype=complex))
    be1 = y_qubit @ be0 @ y_qubit.conj().T
    rho_be_0 = density(be0, dims=(2, 4))
    rho_be_1 = density(be1, dims=(2, 4))
    abe = 0.5 * kron(outer(KET_0), be0) + 0.5 * kron(outer(KET_1), be1)
    rho_abe = density(abe, dims=(2, 2, 4))
    rho_be = partial_trace(rho_abe, keep=(1, 2))
    return JointStateBundle(
        rho_abe=rho_abe, rho_be=rho_be, rho_be_0=rho_be_0, rho_be_1=rho_be_1
    )


def backward_indistinguishability(params: AttackParams | None = None) -> float:
    """Distinguishability of the two encodings as seen on the channel.

    With no forward attack the returning qubit alone is examined: encoding
    I or Y on the maximally mixed state gives identical states, so the
    trace distance is 0 and a backward-only eavesdropper learns nothing.
    With a forward attack the comparison is made on the joint
    qubit-ancilla branches, which generally do differ.

    Args:
        params: optional forward attack; None means untouched channel.

    Returns:
        Trace distance between the key-0 and key-1 states.
    """
    if params is None:
        rho = 0.5 * np.eye(2, dtype=complex)
        encoded = Y_GATE @ rho @ Y_GATE.conj().T
        return trace_distance(rho, encoded)
    bundle = build_rho_abe(params)
    return trace_distance(bundle.rho_be_0.matrix, bundle.rho_be_1.matrix)


@dataclass(frozen=True)
class BeSpectrumClosedForm:
    """Closed-form nonzero spectrum of the averaged qubit-ancilla state.

    The four eigenvalues are (1 +/- delta1 +/- delta2)/4 with delta1 >=
    delta2 >= 0; the remaining four eigenvalues of the 8-dimensional state
    are exactly zero.
    """

    delta1: float
    delta2: float
    lambda4: float
    lambda5: float
    lambda6: float
    lambda7: float

    def spectrum(self) -> Spectrum:
        """The four nonzero eigenvalues, sorted descending."""
        return np.sort(
            np.array([self.lambda4, self.lambda5, self.lambda6, self.lambda7])
        )[::-1]

    def entropy(self) -> float:
        """Entropy of the spectrum in bits, with 0 log 0 = 0."""
        lams = self.spectrum()
        lams = lams[lams > 1e-12]
        return float(-np.sum(lams * np.log2(lams)))


def be_spectrum_closed_form(params: AttackParams) -> BeSpectrumClosedForm:
    """Closed-form spectrum for symmetric attacks.

    Args:
        params: validated attack with c00 = c11; the undisturbed amplitude
            is c0 and the flip amplitude c1 = sqrt(1 - c0^2).

    Returns:
        BeSpectrumClosedForm whose eigenvalues match brute-force
        diagonalization of the built state within 1e-10.

    Raises:
        ClosedFormNotApplicableError: amplitudes differ by more than 1e-9;
            average the observed fidelities and use the rate formulas
            directly instead.
    """
    validate(params)
    if abs(params.c00 - params.c11) > SYMMETRY_ATOL:
        raise ClosedFormNotApplicableError(
            f"closed form needs c00 = c11, got {params.c00} vs {params.c11}; "
            "average the fidelities and evaluate the rate from xi instead"
        )
    c0 = params.c00
    c1 = params.c01
    m = c0**2 * params.p - c1**2 * params.q
    d_a = math.sqrt(abs(m) ** 2 + (c0 * c1 * (params.s.imag + params.r.imag)) ** 2)
    d_b = c0 * c1 * abs(params.s.imag - params.r.imag)
    delta1, delta2 = max(d_a, d_b), min(d_a, d_b)
    return BeSpectrumClosedForm(
        delta1=delta1,
        delta2=delta2,
        lambda4=(1.0 + delta1 + delta2) / 4.0,
        lambda5=(1.0 + delta1 - delta2) / 4.0,
        lambda6=(1.0 - delta1 - delta2) / 4.0,
        lambda7=(1.0 - delta1 + delta2) / 4.0,
    )


def s_be_numeric(params: AttackParams) -> float:
    """Entropy of the averaged qubit-ancilla state by diagonalization."""
    return von_neumann_entropy(build_rho_abe(params).rho_be)


def s_be_max(c0sq: float, c1sq: float, cppsq: float) -> float:
    """Largest eavesdropper entropy compatible with observed fidelities.

    Over all attacks reproducing computational-basis fidelity c0sq (flip
    probability c1sq) and diagonal-basis fidelity cppsq, the entropy of the
    averaged qubit-ancilla state reaches 1 + h(xi), xi = cppsq - c1sq.

    Args:
        c0sq: observed undisturbed probability, equals 1 - c1sq.
        c1sq: observed flip probability.
        cppsq: observed diagonal-basis fidelity.

    Returns:
        The maximum entropy in bits.

    Raises:
        ValueError: inputs outside [0, 1] or mutually inconsistent.
        BoundaryViolationError: cppsq - c1sq < 1/2 (abort region).
    """
    for name, val in (("c0sq", c0sq), ("c1sq", c1sq), ("cppsq", cppsq)):
        if not -1e-12 <= val <= 1.0 + 1e-12:
            raise ValueError(f"{name}={val} outside [0, 1]")
    if abs(c0sq + c1sq - 1.0) > 1e-9:
        raise ValueError(f"c0sq + c1sq = {c0sq + c1sq} is not 1")
    xi = cppsq - c1sq
    if xi < BOUNDARY_XI - 1e-12:
        raise BoundaryViolationError(
            f"cppsq - c1sq = {xi} below the 1/2 boundary; no positive rate exists"
        )
    return 1.0 + binary_entropy(min(xi, 1.0))


def xi_from_fidelities(f: ChannelFidelities) -> float:
    """The rate parameter fpm + f01 - 1 from observed fidelities."""
    for name, val in f.to_dict().items():
        if not -1e-12 <= val <= 1.0 + 1e-12:
            raise ValueError(f"{name}={val} outside [0, 1]")
    return f.fpm + f.f01 - 1.0


@dataclass(frozen=True)
class KeyRateReport:
    """Asymptotic rate summary for one observed (xi, e) pair.

    Attributes:
        xi: forward-channel rate parameter fpm + f01 - 1.
        e: bit error rate of the announced key bits.
        r_pa: privacy-amplification rate 1 - h(xi), 0 when aborted.
        r_final: final rate max(0, 1 - h(xi) - h(e)), 0 when aborted.
        r_final_raw: unclamped 1 - h(xi) - h(e), kept for rate curves; NaN
            when xi < 0 leaves it undefined.
        r_bb84: comparator rate 1 - 2 h(e).
        boundary_ok: xi >= 1/2.
        aborted: the protocol outcome; always the negation of boundary_ok.
    """

    xi: float
    e: float
    r_pa: float
    r_final: float
    r_final_raw: float
    r_bb84: float
    boundary_ok: bool
    aborted: bool

    def to_dict(self) -> dict:
        raw = self.r_final_raw
        return {
            "xi": self.xi,
            "e": self.e,
            "r_pa": self.r_pa,
            "r_final": self.r_final,
            "r_final_raw": raw if math.isfinite(raw) else None,
            "r_bb84": self.r_bb84,
            "boundary_ok": self.boundary_ok,
            "aborted": self.aborted,
        }


def final_rate(xi: float, e: float) -> KeyRateReport:
    """Evaluate the asymptotic key rate and the abort decision.

    Args:
        xi: forward rate parameter in [-1, 1].
        e: announced-bit error rate in [0, 1/2].

    Returns:
        KeyRateReport; aborted runs carry zero rates, not errors.

    Raises:
        ValueError: xi or e outside their domains.
    """
    if not -1.0 - 1e-12 <= xi <= 1.0 + 1e-12:
        raise ValueError(f"xi={xi} outside [-1, 1]")
    if not -1e-12 <= e <= 0.5 + 1e-12:
        raise ValueError(f"e={e} outside [0, 1/2]")
    xi = min(max(xi, -1.0), 1.0)
    e = min(max(e, 0.0), 0.5)
    r_bb84 = 1.0 - 2.0 * binary_entropy(e)
    if xi >= 0.0:
        r_final_raw = 1.0 - binary_entropy(xi) - binary_entropy(e)
    else:
        r_final_raw = math.nan
    boundary_ok = xi >= BOUNDARY_XI - BOUNDARY_ATOL
    if boundary_ok:
        r_pa = 1.0 - binary_entropy(xi)
        r_final = max(0.0, r_final_raw)
    else:
        r_pa = 0.0
        r_final = 0.0
    return KeyRateReport(
        xi=xi,
        e=e,
        r_pa=r_pa,
        r_final=r_final,
        r_final_raw=r_final_raw,
        r_bb84=r_bb84,
        boundary_ok=boundary_ok,
        aborted=not boundary_ok,
    )
