"""Deterministic coherence propagation.

For a kernel ``P(phi | theta)`` the averaged coherence after ``k`` kicks,
starting from a fixed previous angle ``theta``, obeys the backward recursion

    f_1(theta)     = sum_phi exp(i phi) P(phi | theta)
    f_{k+1}(theta) = sum_phi exp(i phi) f_k(phi) P(phi | theta)

and the coherence ``b`` of the state is multiplied by ``conj(f_k)`` (the mean
of ``exp(-i Theta)`` under the ``R_z`` convention of :mod:`phasekick.qubit`).
Traces store that conjugated multiplier.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, EnumerationLimitError, InvalidInputError, UnsupportedProcessError
from .noise import (
    DiscreteDistribution,
    FullyCorrelatedGaussian,
    IIDDiscrete,
    IIDGaussian,
    Markov,
    MarkovKickKernel,
    Mixture,
    canonical_angle,
    same_angle,
)
from .qubit import DensityMatrix, dephase

MAX_ENUMERATION_STEPS = 12


@dataclass(frozen=True)
class CoherenceTrace:
    """Per-step coherence multipliers ``factors[k]`` for ``k = steps[k]``.

    ``stderr_re`` / ``stderr_im`` are the standard errors of the real and
    imaginary parts (Monte Carlo only; ``None`` for exact traces).
    """

    steps: np.ndarray
    factors: np.ndarray
    stderr_re: np.ndarray | None = None
    stderr_im: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "steps", np.asarray(self.steps, dtype=np.int64))
        object.__setattr__(self, "factors", np.asarray(self.factors, dtype=complex))
        if self.steps.shape != self.factors.shape:
            raise InvalidInputError("steps and factors must have the same length")
        for name in ("stderr_re", "stderr_im"):
            val = getattr(self, name)
            if val is not None:
                val = np.asarray(val, dtype=float)
                if val.shape != self.steps.shape:
                    raise InvalidInputError(f"{name} has the wrong length")
                object.__setattr__(self, name, val)

    @property
    def has_stderr(self) -> bool:
        return self.stderr_re is not None

    def stderr(self) -> np.ndarray | None:
        """Combined standard error of the complex factor, per step."""
        if not self.has_stderr:
            return None
        return np.hypot(self.stderr_re, self.stderr_im)

    def __len__(self):
        return len(self.steps)

    @classmethod
    def from_factors(cls, factors) -> "CoherenceTrace":
        """Exact trace with ``factors[k]`` at step ``k``."""
        factors = np.asarray(factors, dtype=complex)
        return cls(np.arange(len(factors)), factors)


@dataclass(frozen=True)
class CoherenceFactorTable:
    """``f_k(theta)`` for every angle in ``support``."""

    support: tuple[float, ...]
    values: dict[float, complex]
    step_index: int


def _check_steps(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise InvalidInputError(f"step count must be a non-negative integer, got {n!r}")
    return int(n)


def coherence_factor_iid_gaussian(lam: float, n: int) -> float:
    """``exp(-n lam)``: n independent ``N(0, 2 lam)`` kicks on the real line."""
    if not lam > 0:
        raise InvalidInputError(f"lambda must be positive, got {lam!r}")
    return math.exp(-_check_steps(n) * lam)


def coherence_factor_fully_correlated(lam: float, n: int) -> float:
    """``exp(-n^2 lam)``: one ``N(0, 2 lam)`` angle repeated n times."""
    if not lam > 0:
        raise InvalidInputError(f"lambda must be positive, got {lam!r}")
    n = _check_steps(n)
    return math.exp(-n * n * lam)


def characteristic_value(dist: DiscreteDistribution) -> complex:
    """``sum_j w_j exp(i theta_j)``."""
    return sum(w * cmath.exp(1j * a) for a, w in dist.atoms)


def reachable_support(kernel: MarkovKickKernel, initial_angle: float) -> list[float]:
    """Angles that can occur as kicks when starting after ``initial_angle``.

    Breadth-first closure over emission atoms; the initial angle itself is
    included only if some kick can land on it.  Sorted ascending.
    """
    found: list[float] = []
    frontier = [canonical_angle(initial_angle)]
    while frontier:
        nxt = []
        for theta in frontier:
            for a, w in kernel.emission(theta).atoms:
                if w > 0.0 and not any(same_angle(a, s) for s in found):
                    found.append(a)
                    nxt.append(a)
        frontier = nxt
    return sorted(found)


class _EmissionRecursion:
    """The f_k recursion collapsed onto emission classes.

    Every angle conditions on exactly one emission (a branch or the default),
    so ``f_k(theta) = g_k[class(theta)]`` and the recursion only has to track
    one value per emission.
    """

    def __init__(self, kernel: MarkovKickKernel):
        self.kernel = kernel
        emissions = kernel.emissions
        self.rows = []
        for em in emissions:
            cls_idx = np.array([kernel.branch_index(a) % len(emissions) for a in em.angles])
            coef = np.array([w * cmath.exp(1j * a) for a, w in em.atoms])
            self.rows.append((cls_idx, coef))
        self.g = np.ones(len(emissions), dtype=complex)

    def class_of(self, theta: float) -> int:
        return self.kernel.branch_index(theta) % len(self.rows)

    def step(self) -> np.ndarray:
        g = self.g
        self.g = np.array([np.dot(coef, g[idx]) for idx, coef in self.rows])
        return self.g


def coherence_recursion(kernel: MarkovKickKernel, initial_angle: float, n: int) -> np.ndarray:
    """``[f_1(initial), ..., f_n(initial)]`` (unconjugated)."""
    n = _check_steps(n)
    rec = _EmissionRecursion(kernel)
    cls = rec.class_of(initial_angle)
    return np.array([rec.step()[cls] for _ in range(n)], dtype=complex)


def factor_tables(kernel: MarkovKickKernel, initial_angle: float, n: int):
    """Yield :class:`CoherenceFactorTable` for ``k = 1..n``.

    The support is the reachable set plus all conditioning angles plus the
    initial angle, so every lookup the recursion makes is covered.
    """
    support: list[float] = []
    for a in (
        reachable_support(kernel, initial_angle)
        + kernel.condition_angles()
        + [canonical_angle(initial_angle)]
    ):
        if not any(same_angle(a, s) for s in support):
            support.append(a)
    support.sort()
    rec = _EmissionRecursion(kernel)
    classes = [rec.class_of(a) for a in support]
    for k in range(1, _check_steps(n) + 1):
        g = rec.step()
        yield CoherenceFactorTable(
            tuple(support), {a: complex(g[c]) for a, c in zip(support, classes)}, k
        )


def propagate_markov(kernel: MarkovKickKernel, initial_angle: float, n: int) -> CoherenceTrace:
    """Exact trace for a one-step Markov kernel; ``factors[k] = conj(f_k)``."""
    if _check_steps(n) < 1:
        raise ContractViolation("propagate_markov needs n >= 1")
    f = coherence_recursion(kernel, initial_angle, n)
    return CoherenceTrace.from_factors(np.concatenate(([1.0 + 0j], np.conj(f))))


def enumerate_exact(kernel: MarkovKickKernel, initial_angle: float, n: int) -> complex:
    """Brute-force ``f_n``: sum over every kick sequence of its probability
    times ``exp(i * total angle)``.  Cost grows exponentially in ``n``."""
    n = _check_steps(n)
    if n > MAX_ENUMERATION_STEPS:
        raise EnumerationLimitError(
            f"enumeration limited to n <= {MAX_ENUMERATION_STEPS}, got {n}"
        )

    # forward accumulation of path weight and phase, not the backward recursion
    paths = [(canonical_angle(initial_angle), 1.0, 0.0)]
    for _ in range(n):
        nxt = []
        for prev, prob, theta in paths:
            for a, w in kernel.emission(prev).atoms:
                if w > 0.0:
                    nxt.append((a, prob * w, theta + a))
        paths = nxt
    return complex(math.fsum(p * math.cos(t) for _, p, t in paths),
                   math.fsum(p * math.sin(t) for _, p, t in paths))


def supports_exact(process) -> bool:
    return isinstance(process, (IIDGaussian, IIDDiscrete, FullyCorrelatedGaussian, Markov, Mixture))


def exact_trace(process, initial_state: DensityMatrix, n: int) -> tuple[CoherenceTrace, DensityMatrix]:
    """Exact coherence trace for ``n`` steps and the resulting final state."""
    n = _check_steps(n)
    k = np.arange(n + 1)
    if isinstance(process, IIDGaussian):
        factors = np.exp(-k * process.lam).astype(complex)
    elif isinstance(process, FullyCorrelatedGaussian):
        factors = np.exp(-(k * k) * process.lam).astype(complex)
    elif isinstance(process, IIDDiscrete):
        step = characteristic_value(process.dist).conjugate()
        factors = np.empty(n + 1, dtype=complex)
        factors[0] = 1.0
        for i in range(1, n + 1):
            factors[i] = factors[i - 1] * step
    elif isinstance(process, (Markov, Mixture)):
        kernel = process.kernel if isinstance(process, Markov) else process.mixed_kernel()
        if n == 0:
            factors = np.ones(1, dtype=complex)
        else:
            factors = propagate_markov(kernel, process.initial_angle, n).factors
    else:
        raise UnsupportedProcessError(
            f"no exact propagation for {type(process).__name__}; use Monte Carlo"
        )
    trace = CoherenceTrace(k, factors)
    return trace, dephase(initial_state, trace.factors[-1])
