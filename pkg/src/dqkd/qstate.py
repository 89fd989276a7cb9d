"""Qubit states, operators and dense linear algebra shared by the whole package.

Conventions used everywhere:

* kets are 1-d complex numpy arrays, matrices are 2-d complex numpy arrays
  (the ``Ket`` / ``ComplexMatrix`` aliases below),
* composite systems are ordered big-endian, so ``kron(a, b)`` puts system
  ``a`` on the most significant index,
* spectra are returned sorted in descending order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Plumbing aliases: a Ket is a 1-d complex array, a ComplexMatrix a 2-d one,
# a Spectrum a real 1-d array sorted in descending order.
Ket = np.ndarray
ComplexMatrix = np.ndarray
Spectrum = np.ndarray

HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
PSD_SLACK = -1e-10
ENTROPY_CUTOFF = 1e-12

I_GATE = np.eye(2, dtype=complex)
X_GATE = np.array([[0, 1], [1, 0]], dtype=complex)
Z_GATE = np.array([[1, 0], [0, -1]], dtype=complex)
# Encoding flip |0><1| - |1><0|. Real antisymmetric; differs from the Pauli Y
# by a global phase, so conjugating a state with it is the same operation.
Y_GATE = np.array([[0, 1], [-1, 0]], dtype=complex)

KET_0 = np.array([1, 0], dtype=complex)
KET_1 = np.array([0, 1], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2.0)
KET_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2.0)

STATE_LABELS = ("0", "1", "+", "-")
STATE_KETS = {"0": KET_0, "1": KET_1, "+": KET_PLUS, "-": KET_MINUS}
BASIS_OF = {"0": "Z", "1": "Z", "+": "X", "-": "X"}
COMPLEMENT = {"0": "1", "1": "0", "+": "-", "-": "+"}


class NotHermitianError(ValueError):
    """Matrix is not Hermitian within tolerance."""


class NotDensityMatrixError(ValueError):
    """Matrix fails a density-matrix invariant (trace or positivity)."""


def kron(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product, big-endian subsystem order."""
    return np.kron(a, b)


def dagger(m: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return m.conjugate().T


def outer(v: Ket) -> ComplexMatrix:
    """Projector |v><v|."""
    return np.outer(v, v.conjugate())


@dataclass(frozen=True)
class DensityMatrix:
    """Validated density matrix over subsystems of dimensions ``dims``.

    Invariants checked on construction: square shape matching prod(dims),
    Hermitian within 1e-12, unit trace within 1e-12, eigenvalues >= -1e-10.
    """

    matrix: ComplexMatrix
    dims: tuple[int, ...]

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        d = int(np.prod(self.dims))
        if m.ndim != 2 or m.shape != (d, d):
            raise NotDensityMatrixError(
                f"shape {m.shape} does not match dims {self.dims}"
            )
        if np.max(np.abs(m - dagger(m))) > HERMITIAN_ATOL:
            raise NotHermitianError("density matrix is not Hermitian within 1e-12")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_ATOL:
            raise NotDensityMatrixError(f"trace {tr} is not 1 within 1e-12")
        w = np.linalg.eigvalsh(m)
        if w.min() < PSD_SLACK:
            raise NotDensityMatrixError(
                f"eigenvalue {w.min()} below the -1e-10 positivity slack"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectrum(self) -> Spectrum:
        """Eigenvalues, descending."""
        return np.sort(np.linalg.eigvalsh(self.matrix))[::-1]


def density(matrix: ComplexMatrix, dims: tuple[int, ...]) -> DensityMatrix:
    """Shorthand constructor for a validated DensityMatrix."""
    return DensityMatrix(matrix=matrix, dims=dims)


def partial_trace(rho: DensityMatrix, keep: tuple[int, ...]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    ``keep`` preserves the original relative order of the kept subsystems.
    """
    keep = tuple(int(k) for k in keep)
    dims = rho.dims
    n = len(dims)
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if any(k < 0 or k >= n for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"keep={keep} is not a subset of subsystems 0..{n - 1}")
    if tuple(sorted(keep)) != keep:
        raise ValueError("keep indices must be strictly increasing")
    t = rho.matrix.reshape(dims + dims)
    # contract row/column indices of each traced subsystem, highest index first
    traced = [i for i in range(n) if i not in keep]
    for i in sorted(traced, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + (t.ndim // 2))
    kept_dims = tuple(dims[k] for k in keep)
    d = int(np.prod(kept_dims)) if kept_dims else 1
    return DensityMatrix(matrix=t.reshape(d, d), dims=kept_dims)


def eig_hermitian(m: ComplexMatrix) -> Spectrum:
    """Eigenvalues of a Hermitian matrix, sorted descending."""
    m = np.asarray(m, dtype=complex)
    if np.max(np.abs(m - dagger(m))) > 1e-10:
        raise NotHermitianError("matrix is not Hermitian within 1e-10")
    return np.sort(np.linalg.eigvalsh(m))[::-1]


def von_neumann_entropy(rho: DensityMatrix | ComplexMatrix) -> float:
    """S(rho) = -sum_i w_i log2 w_i with eigenvalues below 1e-12 dropped.

    Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower raises.
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    w = np.linalg.eigvalsh(m)
    if w.min() < PSD_SLACK:
        raise NotDensityMatrixError(
            f"eigenvalue {w.min()} below the -1e-10 positivity slack"
        )
    w = w[w > ENTROPY_CUTOFF]
    return float(-np.sum(w * np.log2(w)))


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0."""
    x = float(x)
    if x < -1e-12 or x > 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument {x} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def trace_distance(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """(1/2) * trace norm of a - b for Hermitian a, b."""
    w = np.linalg.eigvalsh(np.asarray(a, dtype=complex) - np.asarray(b, dtype=complex))
    return float(0.5 * np.sum(np.abs(w)))
