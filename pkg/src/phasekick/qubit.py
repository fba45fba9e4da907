"""Single-qubit density matrix and the phase-kick / dephasing maps.

Convention used throughout the package::

    R_z(theta) = diag(exp(-i theta / 2), exp(+i theta / 2))

so conjugating a state by ``R_z(theta)`` multiplies the coherence ``b``
(row 0, column 1) by ``exp(-i theta)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InvalidInputError

STATE_TOL = 1e-12


@dataclass(frozen=True)
class DensityMatrix:
    """Qubit state ``[[a, b], [conj(b), d]]`` with ``d = 1 - a``.

    ``d`` may be passed explicitly; it is checked against ``1 - a`` and then
    dropped in favour of the derived value, so the trace never drifts.
    """

    a: float
    b: complex = 0j
    d: float | None = None

    def __post_init__(self):
        a = float(self.a)
        b = complex(self.b)
        if not (math.isfinite(a) and cmath.isfinite(b)):
            raise InvalidInputError("density matrix entries must be finite")
        if self.d is not None:
            d = float(self.d)
            if abs(a + d - 1.0) > STATE_TOL:
                raise InvalidInputError(f"trace a + d = {a + d!r} is not 1")
        if a < -STATE_TOL or a > 1.0 + STATE_TOL:
            raise InvalidInputError(f"population a = {a!r} outside [0, 1]")
        a = min(max(a, 0.0), 1.0)
        d = 1.0 - a
        if a * d - abs(b) ** 2 < -STATE_TOL:
            raise InvalidInputError(
                f"not positive semidefinite: a*d - |b|^2 = {a * d - abs(b) ** 2!r}"
            )
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    @classmethod
    def from_amplitudes(cls, alpha: complex, beta: complex) -> "DensityMatrix":
        """Pure state ``alpha|0> + beta|1>`` (normalised on the way in)."""
        norm = math.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if norm == 0.0:
            raise InvalidInputError("zero state vector")
        alpha, beta = alpha / norm, beta / norm
        return cls(abs(alpha) ** 2, alpha * beta.conjugate())

    @classmethod
    def from_matrix(cls, rho) -> "DensityMatrix":
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (2, 2):
            raise InvalidInputError(f"expected a 2x2 matrix, got shape {rho.shape}")
        if abs(rho[1, 0] - np.conj(rho[0, 1])) > STATE_TOL:
            raise InvalidInputError("matrix is not Hermitian")
        if abs(rho[0, 0].imag) > STATE_TOL or abs(rho[1, 1].imag) > STATE_TOL:
            raise InvalidInputError("diagonal must be real")
        return cls(rho[0, 0].real, rho[0, 1], rho[1, 1].real)

    def to_matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b.conjugate(), self.d]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    """The 2x2 unitary ``R_z(theta)`` in the package convention."""
    return np.diag([cmath.exp(-0.5j * theta), cmath.exp(0.5j * theta)])


def apply_phase_rotation(state: DensityMatrix, theta: float) -> DensityMatrix:
    """Return ``R_z(theta) rho R_z(theta)^dagger``."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidInputError(f"rotation angle must be finite, got {theta!r}")
    return DensityMatrix(state.a, state.b * cmath.exp(-1j * theta))


def dephase(state: DensityMatrix, factor: complex) -> DensityMatrix:
    """Multiply the coherence by an averaged factor with ``|factor| <= 1``.

    The factor is applied as given (no conjugation).
    """
    factor = complex(factor)
    if not cmath.isfinite(factor):
        raise InvalidInputError(f"dephasing factor must be finite, got {factor!r}")
    if abs(factor) > 1.0 + STATE_TOL:
        raise ContractViolation(f"|factor| = {abs(factor)!r} > 1 would increase coherence")
    return DensityMatrix(state.a, state.b * factor)


def coherence_magnitude(state: DensityMatrix) -> float:
    return abs(state.b)


def purity(state: DensityMatrix) -> float:
    """``tr(rho^2) = a^2 + d^2 + 2|b|^2``; 1 for pure states, 1/2 at full mixing."""
    return state.a**2 + state.d**2 + 2.0 * abs(state.b) ** 2
