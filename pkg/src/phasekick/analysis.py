"""Decay-law fitting and the private-vs-mixed bath comparison."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InsufficientDataError
from .exact import CoherenceTrace, propagate_markov
from .noise import MarkovKickKernel, mix_kernels

MIN_POINTS = 3
MAGNITUDE_FLOOR = 1e-13
NOISE_FLOOR_SIGMAS = 5.0
NOISE_FLOOR_RULE = (
    f"points with |f| <= {MAGNITUDE_FLOOR:g} or |f| <= {NOISE_FLOOR_SIGMAS:g}*stderr excluded"
)

LINEAR = "linear"
QUADRATIC = "quadratic"


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of ``ln|f_k|`` to ``-rate*k`` or ``-rate*k**2``.

    ``rate`` belongs to the selected ``model``.  ``per_step_factor`` is
    ``exp(-rate_linear)`` whichever model wins.
    """

    model: str
    rate: float
    rate_linear: float
    rate_quadratic: float
    per_step_factor: float
    phase_per_step: float
    sse_linear: float
    sse_quadratic: float
    points_used: int
    noise_floor_rule: str = NOISE_FLOOR_RULE

    def as_dict(self) -> dict:
        return {
            "model": self.model,
            "lambda": self.rate,
            "lambda_linear": self.rate_linear,
            "lambda_quadratic": self.rate_quadratic,
            "gamma": self.per_step_factor,
            "phi": self.phase_per_step,
            "sse_linear": self.sse_linear,
            "sse_quadratic": self.sse_quadratic,
            "points_used": self.points_used,
            "noise_floor_rule": self.noise_floor_rule,
        }


def _through_origin(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope = float(np.dot(x, y) / np.dot(x, x))
    resid = y - slope * x
    return slope, float(np.dot(resid, resid))


def fit_decay(trace: CoherenceTrace) -> DecayFit:
    """Fit both decay laws to the usable points of ``trace`` and keep the one
    with the smaller sum of squared residuals.

    The ``k = 0`` point is excluded (both models pass through ``ln 1 = 0``).
    """
    k = trace.steps.astype(float)
    mag = np.abs(trace.factors)
    usable = (trace.steps > 0) & (mag > MAGNITUDE_FLOOR)
    se = trace.stderr()
    if se is not None:
        usable &= ~(mag <= NOISE_FLOOR_SIGMAS * np.nan_to_num(se, nan=0.0))
    n_used = int(usable.sum())
    if n_used < MIN_POINTS:
        raise InsufficientDataError(
            f"need at least {MIN_POINTS} usable points, have {n_used} ({NOISE_FLOOR_RULE})"
        )
    kk, y = k[usable], np.log(mag[usable])
    slope_lin, sse_lin = _through_origin(kk, y)
    slope_quad, sse_quad = _through_origin(kk * kk, y)
    rate_lin, rate_quad = max(-slope_lin, 0.0), max(-slope_quad, 0.0)

    order = np.argsort(trace.steps)
    steps = trace.steps[order]
    phases = np.unwrap(np.angle(trace.factors[order]))
    if steps[0] == 0:
        phases = phases - phases[0]
    sel = usable[order]
    phi, _ = _through_origin(steps[sel].astype(float), phases[sel])

    model = LINEAR if sse_lin <= sse_quad else QUADRATIC
    return DecayFit(
        model=model,
        rate=rate_lin if model == LINEAR else rate_quad,
        rate_linear=rate_lin,
        rate_quadratic=rate_quad,
        per_step_factor=math.exp(-rate_lin),
        phase_per_step=phi,
        sse_linear=sse_lin,
        sse_quadratic=sse_quad,
        points_used=n_used,
    )


@dataclass(frozen=True)
class ParrondoReport:
    gamma_a: float
    gamma_b: float
    gamma_mixed: float
    improvement: float
    verdict: bool
    tolerance: float

    def as_dict(self) -> dict:
        return {
            "gamma_a": self.gamma_a,
            "gamma_b": self.gamma_b,
            "gamma_mixed": self.gamma_mixed,
            "improvement": self.improvement,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }


def parrondo_report(
    kernel_a: MarkovKickKernel,
    kernel_b: MarkovKickKernel,
    weight_a: float,
    initial_a: float,
    initial_b: float,
    n: int,
    tolerance: float = 1e-6,
) -> ParrondoReport:
    """Compare the per-step decay factor of each private bath with that of
    their random per-step mixture (started from ``initial_a``).

    The mixture wins when its factor exceeds the better private bath's by
    more than ``tolerance``.
    """
    if n < 10:
        raise InsufficientDataError(f"parrondo_report needs n >= 10 steps, got {n}")
    if not 0.0 <= weight_a <= 1.0:
        raise ContractViolation(f"weight_a = {weight_a!r} outside [0, 1]")
    mixed = mix_kernels([(kernel_a, weight_a), (kernel_b, 1.0 - weight_a)])
    gamma_a = fit_decay(propagate_markov(kernel_a, initial_a, n)).per_step_factor
    gamma_b = fit_decay(propagate_markov(kernel_b, initial_b, n)).per_step_factor
    gamma_m = fit_decay(propagate_markov(mixed, initial_a, n)).per_step_factor
    improvement = gamma_m - max(gamma_a, gamma_b)
    return ParrondoReport(gamma_a, gamma_b, gamma_m, improvement, improvement > tolerance, tolerance)
