"""Collective forward attacks on the two-way channel.

An eavesdropper couples each travelling qubit to a private ancilla (at most
four-dimensional) with a unitary acting as

    U (|0> ox |E>) = c00 |0> ox |E00> + c01 |1> ox |E01>
    U (|1> ox |E>) = c11 |1> ox |E11> + c10 |0> ox |E10>

All four amplitudes are real and non-negative: any phase is absorbed into the
ancilla kets, so the computational-basis equations above define the
parameterization and every diagonal-basis quantity is derived from it.
The ancilla kets are not necessarily orthogonal; the attack is fully
described by the amplitudes plus six complex overlaps:

    s = <E00|E01>   u = <E00|E10>   p = <E00|E11>
    r = <E11|E10>   v = <E01|E11>   q = <E01|E10>

Validity means: both amplitude pairs normalized, every overlap inside the
unit disc, the 4x4 Gram matrix of the kets positive semidefinite, and the
two branch vectors orthogonal, which reads

    c00 * c10 * u + c01 * c11 * v = 0.

For equal amplitudes (c00 = c11, hence c01 = c10) the orthogonality
constraint forces u = -v, i.e. u0 = -v0 and u1 = -v1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qstate import (
    ComplexMatrix,
    Ket,
    KET_0,
    KET_1,
    STATE_KETS,
    kron,
    outer,
    partial_trace,
    density,
)

AMPLITUDE_ATOL = 1e-12
OVERLAP_ATOL = 1e-12
UNITARITY_ATOL = 1e-12
GRAM_SLACK = -1e-10

OVERLAP_NAMES = ("s", "u", "p", "r", "v", "q")
NAMED_ATTACKS = ("identity", "measure_z", "measure_x", "symmetric")


class AttackValidationError(ValueError):
    """Base class for attack-parameter validation failures."""


class AmplitudeNormalizationError(AttackValidationError):
    """c00^2 + c01^2 or c11^2 + c10^2 deviates from 1, or an amplitude is negative."""


class OverlapMagnitudeError(AttackValidationError):
    """Some overlap has modulus above 1."""


class UnitarityConstraintError(AttackValidationError):
    """The branch vectors are not orthogonal: c00 c10 u + c01 c11 v != 0."""


class GramNotPositiveError(AttackValidationError):
    """The 4x4 Gram matrix of the ancilla kets is not positive semidefinite."""


class SamplingBudgetError(RuntimeError):
    """Rejection sampling failed to produce a valid parameter set."""


@dataclass(frozen=True)
class AttackParams:
    """Amplitudes and ancilla overlaps of a collective forward attack.

    Attributes:
        c00: amplitude of the undisturbed branch for an incoming |0>.
        c01: amplitude of the flipped branch for an incoming |0>.
        c11: amplitude of the undisturbed branch for an incoming |1>.
        c10: amplitude of the flipped branch for an incoming |1>.
        s: overlap <E00|E01> between the two ancilla records for |0>.
        u: overlap <E00|E10> across the undisturbed-0 / flipped-1 records.
        p: overlap <E00|E11> between the two undisturbed records.
        r: overlap <E11|E10> between the two ancilla records for |1>.
        v: overlap <E01|E11> across the flipped-0 / undisturbed-1 records.
        q: overlap <E01|E10> between the two flipped records.
    """

    c00: float
    c01: float
    c11: float
    c10: float
    s: complex = 0j
    u: complex = 0j
    p: complex = 0j
    r: complex = 0j
    v: complex = 0j
    q: complex = 0j

    @property
    def overlaps(self) -> dict[str, complex]:
        return {name: complex(getattr(self, name)) for name in OVERLAP_NAMES}

    @property
    def symmetric(self) -> bool:
        """True when both undisturbed amplitudes coincide."""
        return abs(self.c00 - self.c11) <= 1e-9

    def to_dict(self) -> dict:
        """Flat document: the four amplitudes plus a list of named overlaps."""
        return {
            "c00": float(self.c00),
            "c01": float(self.c01),
            "c11": float(self.c11),
            "c10": float(self.c10),
            "overlaps": [
                {"name": name, "re": float(val.real), "im": float(val.imag)}
                for name, val in self.overlaps.items()
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "AttackParams":
        try:
            amps = {k: float(doc[k]) for k in ("c00", "c01", "c11", "c10")}
        except KeyError as exc:
            raise ValueError(f"attack document is missing amplitude key {exc}") from exc
        ov = {name: 0j for name in OVERLAP_NAMES}
        for entry in doc.get("overlaps", []):
            name = entry.get("name")
            if name not in OVERLAP_NAMES:
                raise ValueError(f"unknown overlap name {name!r}")
            ov[name] = complex(float(entry["re"]), float(entry["im"]))
        return cls(**amps, **ov)


def gram_matrix(params: AttackParams) -> ComplexMatrix:
    """Gram matrix of (|E00>, |E01>, |E11>, |E10>) with unit diagonal."""
    s, u, p, r, v, q = (params.s, params.u, params.p, params.r, params.v, params.q)
    g = np.array(
        [
            [1.0, s, p, u],
            [np.conjugate(s), 1.0, v, q],
            [np.conjugate(p), np.conjugate(v), 1.0, r],
            [np.conjugate(u), np.conjugate(q), np.conjugate(r), 1.0],
        ],
        dtype=complex,
    )
    return g


def validate(params: AttackParams) -> AttackParams:
    """Check every attack invariant; return the params unchanged if valid.

    Raises:
        AmplitudeNormalizationError: amplitudes negative or not normalized.
        OverlapMagnitudeError: an overlap leaves the unit disc.
        UnitarityConstraintError: branch vectors not orthogonal.
        GramNotPositiveError: overlap Gram matrix not PSD.
    """
    amps = (params.c00, params.c01, params.c11, params.c10)
    if min(amps) < -AMPLITUDE_ATOL or max(amps) > 1.0 + AMPLITUDE_ATOL:
        raise AmplitudeNormalizationError(f"amplitudes {amps} outside [0, 1]")
    if abs(params.c00**2 + params.c01**2 - 1.0) > AMPLITUDE_ATOL:
        raise AmplitudeNormalizationError(
            f"c00^2 + c01^2 = {params.c00**2 + params.c01**2} is not 1"
        )
    if abs(params.c11**2 + params.c10**2 - 1.0) > AMPLITUDE_ATOL:
        raise AmplitudeNormalizationError(
            f"c11^2 + c10^2 = {params.c11**2 + params.c10**2} is not 1"
        )
    for name, val in params.overlaps.items():
        if abs(val) > 1.0 + OVERLAP_ATOL:
            raise OverlapMagnitudeError(f"|{name}| = {abs(val)} exceeds 1")
    residual = params.c00 * params.c10 * params.u + params.c01 * params.c11 * params.v
    if abs(residual) > UNITARITY_ATOL:
        raise UnitarityConstraintError(
            f"|c00 c10 u + c01 c11 v| = {abs(residual)} exceeds 1e-12"
        )
    w = np.linalg.eigvalsh(gram_matrix(params))
    if w.min() < GRAM_SLACK:
        raise GramNotPositiveError(
            f"Gram eigenvalue {w.min()} below the -1e-10 positivity slack"
        )
    return params


def realize_ancilla(params: AttackParams) -> np.ndarray:
    """Concrete ancilla kets reproducing the overlaps.

    Factorizes the Gram matrix through its eigendecomposition, clamping
    eigenvalues in [-1e-10, 0) to zero. Returns a (4, 4) array whose rows
    are the kets (|E00>, |E01>, |E11>, |E10>) in a four-dimensional space.
    """
    g = gram_matrix(params)
    lam, vecs = np.linalg.eigh(g)
    if lam.min() < GRAM_SLACK:
        raise GramNotPositiveError(
            f"Gram eigenvalue {lam.min()} below the -1e-10 positivity slack"
        )
    lam = np.clip(lam, 0.0, None)
    b = vecs * np.sqrt(lam)
    # rows of conj(b) satisfy <row_i|row_j> = G_ij
    return np.conjugate(b)


def branch_vectors(params: AttackParams) -> tuple[Ket, Ket]:
    """The two attacked transmission branches as 8-dim qubit-ancilla kets.

    Returns (U(|0> ox |E>), U(|1> ox |E>)) built from realized ancillas.
    """
    e00, e01, e11, e10 = realize_ancilla(params)
    phi0 = params.c00 * kron(KET_0, e00) + params.c01 * kron(KET_1, e01)
    phi1 = params.c11 * kron(KET_1, e11) + params.c10 * kron(KET_0, e10)
    return phi0, phi1


def build_unitary(params: AttackParams) -> ComplexMatrix:
    """8x8 unitary realizing the attack on qubit ox ancilla.

    The columns for inputs |0> ox |E> and |1> ox |E> (ancilla reference ket
    = first basis vector) are exactly the two branch vectors; the remaining
    columns are an orthonormal completion of the complement.
    """
    phi0, phi1 = branch_vectors(params)
    u = np.zeros((8, 8), dtype=complex)
    u[:, 0] = phi0
    u[:, 4] = phi1
    # orthonormal basis of the complement via the projector's eigenvectors
    proj = np.eye(8, dtype=complex) - outer(phi0) - outer(phi1)
    lam, vecs = np.linalg.eigh(proj)
    complement = vecs[:, lam > 0.5]
    if complement.shape[1] != 6:
        raise AttackValidationError("branch vectors do not span a 2-dim subspace")
    for col, idx in zip(complement.T, (1, 2, 3, 5, 6, 7)):
        u[:, idx] = col
    return u


@dataclass(frozen=True)
class ChannelFidelities:
    """Forward-channel fidelities observable in check mode.

    f0/f1 are the probabilities that a computational-basis probe comes out
    unchanged; fplus/fminus the same for the diagonal basis.
    """

    f0: float
    f1: float
    fplus: float
    fminus: float

    @property
    def f01(self) -> float:
        """Average computational-basis fidelity."""
        return 0.5 * (self.f0 + self.f1)

    @property
    def fpm(self) -> float:
        """Average diagonal-basis fidelity."""
        return 0.5 * (self.fplus + self.fminus)

    def to_dict(self) -> dict:
        return {
            "f0": self.f0,
            "f1": self.f1,
            "fplus": self.fplus,
            "fminus": self.fminus,
        }


def forward_fidelities(params: AttackParams) -> ChannelFidelities:
    """Fidelities of the four probe states under the attack, via the Gram matrix.

    The computational-basis fidelities are c00^2 and c11^2. The diagonal
    ones are squared norms of the (+,+,+,+) and (+,-,+,-) signed amplitude
    combinations of the four ancilla kets, divided by 4; no explicit ancilla
    realization is needed.
    """
    c00, c01, c11, c10 = params.c00, params.c01, params.c11, params.c10
    g = gram_matrix(params)

    def combo_norm_sq(signs: tuple[int, int, int, int]) -> float:
        w = np.array(
            [signs[0] * c00, signs[1] * c01, signs[2] * c11, signs[3] * c10],
            dtype=complex,
        )
        return float(np.real(np.conjugate(w) @ g @ w))

    fplus = combo_norm_sq((1, 1, 1, 1)) / 4.0
    fminus = combo_norm_sq((1, -1, 1, -1)) / 4.0
    return ChannelFidelities(
        f0=float(params.c00**2),
        f1=float(params.c11**2),
        fplus=fplus,
        fminus=fminus,
    )


def probe_outcome_probability(params: AttackParams, prepared: str, outcome: str) -> float:
    """P(measuring the attacked probe as `outcome`), by direct simulation.

    Sends the prepared state through a realized attack, traces out the
    ancilla, and projects the reduced qubit state onto the outcome state.
    With outcome == prepared this is the channel fidelity; it provides the
    simulation-route counterpart to the Gram-based forward_fidelities.
    """
    phi0, phi1 = branch_vectors(params)
    prep = STATE_KETS[prepared]
    attacked = prep[0] * phi0 + prep[1] * phi1
    rho = density(outer(attacked), dims=(2, 4))
    reduced = partial_trace(rho, keep=(0,))
    out = STATE_KETS[outcome]
    return float(np.real(np.conjugate(out) @ reduced.matrix @ out))


def named_attack(name: str, e: float | None = None) -> AttackParams:
    """Reference attacks used across tests, demos and the CLI.

    Args:
        name: one of "identity", "measure_z", "measure_x", "symmetric".
        e: disturbance parameter in [0, 1/2], required for "symmetric".

    Returns:
        A validated AttackParams.
    """
    if name == "identity":
        params = AttackParams(
            c00=1.0, c01=0.0, c11=1.0, c10=0.0,
            s=1 + 0j, u=1 + 0j, p=1 + 0j, r=1 + 0j, v=1 + 0j, q=1 + 0j,
        )
    elif name == "measure_z":
        params = AttackParams(c00=1.0, c01=0.0, c11=1.0, c10=0.0)
    elif name == "measure_x":
        a = 1.0 / np.sqrt(2.0)
        params = AttackParams(c00=a, c01=a, c11=a, c10=a, p=1 + 0j, q=1 + 0j)
    elif name == "symmetric":
        if e is None:
            raise ValueError("the symmetric attack needs a disturbance e")
        e = float(e)
        if not 0.0 <= e <= 0.5:
            raise ValueError(f"symmetric disturbance e={e} outside [0, 1/2]")
        c0 = np.sqrt(1.0 - e)
        c1 = np.sqrt(e)
        # q0 = 1 and the boundary identity 2 fpm - 1 = c0^2 p0 + c1^2 q0
        # pin p0 so that fpm = f01 = 1 - e
        p0 = (1.0 - 3.0 * e) / (1.0 - e)
        params = AttackParams(
            c00=c0, c01=c1, c11=c0, c10=c1, p=complex(p0), q=1 + 0j,
        )
    else:
        raise ValueError(f"unknown attack name {name!r}; expected one of {NAMED_ATTACKS}")
    return validate(params)


def _unit_vector(rng: np.random.Generator, dim: int) -> Ket:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def sample_valid(
    seed: int | None = None,
    symmetric: bool = False,
    max_iterations: int = 10**6,
) -> AttackParams:
    """Draw a random valid attack.

    Three ancilla kets and the amplitudes are drawn freely; the remaining
    overlap <E00|E10> is solved from the orthogonality constraint and the
    fourth ket is constructed to realize it, so the Gram matrix is PSD by
    construction. Draws that leave the unit disc are rejected.

    Args:
        seed: seed for the deterministic generator.
        symmetric: force c00 = c11 (the closed-form spectrum regime).
        max_iterations: rejection bound before giving up.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_iterations):
        e00 = _unit_vector(rng, 4)
        e01 = _unit_vector(rng, 4)
        e11 = _unit_vector(rng, 4)
        c00 = rng.uniform(0.0, 1.0)
        c11 = c00 if symmetric else rng.uniform(0.0, 1.0)
        c01 = np.sqrt(1.0 - c00**2)
        c10 = np.sqrt(1.0 - c11**2)
        if c00 * c10 < 1e-6:
            continue
        v = complex(np.vdot(e01, e11))
        u = -(c01 * c11 / (c00 * c10)) * v
        if abs(u) > 1.0 - 1e-9:
            continue
        w = _unit_vector(rng, 4)
        w = w - np.vdot(e00, w) * e00
        norm = np.linalg.norm(w)
        if norm < 1e-6:
            continue
        e10 = u * e00 + np.sqrt(1.0 - abs(u) ** 2) * (w / norm)
        params = AttackParams(
            c00=float(c00),
            c01=float(c01),
            c11=float(c11),
            c10=float(c10),
            s=complex(np.vdot(e00, e01)),
            u=u,
            p=complex(np.vdot(e00, e11)),
            r=complex(np.vdot(e11, e10)),
            v=v,
            q=complex(np.vdot(e01, e10)),
        )
        return validate(params)
    raise SamplingBudgetError(f"no valid draw within {max_iterations} iterations")
