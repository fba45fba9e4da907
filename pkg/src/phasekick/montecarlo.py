"""Monte Carlo trajectory sampling of the averaged coherence.

Each trajectory draws a kick sequence, accumulates ``Theta_k`` (the sum of
the first ``k`` kicks) and contributes ``exp(-i Theta_k)`` to the estimate
at step ``k``.

Random numbers come from Philox4x32-10 keyed by the master seed with counter
``(step, trajectory)``, so every draw is fixed by the ``SamplerSpec`` alone.
Trajectories are processed in fixed-size blocks whose partial sums are
combined by a pairwise tree in block order; the result does not depend on
how many worker threads ran the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend, _philox
from .errors import InvalidInputError, ResourceLimitError, UnsupportedProcessError
from .exact import CoherenceTrace
from .noise import (
    DiscreteDistribution,
    FullyCorrelatedGaussian,
    HistoryDependent,
    IIDDiscrete,
    IIDGaussian,
    Markov,
    MarkovKickKernel,
    Mixture,
    canonical_angle,
    same_angle,
)

BLOCK_SIZE = 8192
DEFAULT_MAX_WORK = 2_000_000_000
"""Cap on ``steps * trajectories`` for a single run."""


@dataclass(frozen=True)
class SamplerSpec:
    process: object
    steps: int
    trajectories: int
    seed: int

    def __post_init__(self):
        for name in ("steps", "trajectories"):
            val = getattr(self, name)
            if isinstance(val, bool) or int(val) != val or val < 1:
                raise InvalidInputError(f"{name} must be a positive integer, got {val!r}")
            object.__setattr__(self, name, int(val))
        seed = self.seed
        if isinstance(seed, bool) or int(seed) != seed or not 0 <= seed < 2**64:
            raise InvalidInputError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        object.__setattr__(self, "seed", int(seed))
        if self.steps >= 2**32:
            raise InvalidInputError("steps must fit in 32 bits")


@dataclass(frozen=True)
class McEstimate:
    trace: CoherenceTrace
    trajectories_used: int


# --- table compilation for discrete processes -------------------------------


@dataclass(frozen=True)
class _MarkovTables:
    angles: np.ndarray
    init_state: int
    comp_cum: np.ndarray
    row_ptr: np.ndarray
    atom_state: np.ndarray
    atom_cum: np.ndarray


def _components(process) -> tuple[list[tuple[MarkovKickKernel, float]], float]:
    if isinstance(process, IIDDiscrete):
        return [(MarkovKickKernel.iid(process.dist), 1.0)], 0.0
    if isinstance(process, Markov):
        return [(process.kernel, 1.0)], process.initial_angle
    if isinstance(process, Mixture):
        return list(process.components), process.initial_angle
    raise UnsupportedProcessError(type(process).__name__)


def _compile(process) -> _MarkovTables:
    comps, initial = _components(process)
    states = [canonical_angle(initial)]

    def index(angle: float) -> int:
        for i, s in enumerate(states):
            if same_angle(s, angle):
                return i
        states.append(angle)
        return len(states) - 1

    for kernel, _ in comps:
        for a in kernel.atom_angles():
            index(a)

    row_ptr = [0]
    atom_state: list[int] = []
    atom_cum: list[float] = []
    for kernel, _ in comps:
        for s in list(states):
            acc = 0.0
            for a, w in kernel.emission(s).atoms:
                if w > 0.0:
                    acc += w
                    atom_state.append(index(a))
                    atom_cum.append(acc)
            row_ptr.append(len(atom_state))

    comp_cum = np.cumsum([w for _, w in comps])
    return _MarkovTables(
        np.array(states, dtype=np.float64),
        0,
        np.ascontiguousarray(comp_cum, dtype=np.float64),
        np.array(row_ptr, dtype=np.int64),
        np.array(atom_state, dtype=np.int64),
        np.array(atom_cum, dtype=np.float64),
    )


def _pick(u: float, dist: DiscreteDistribution) -> float:
    atoms = [(a, w) for a, w in dist.atoms if w > 0.0]
    acc = 0.0
    for a, w in atoms[:-1]:
        acc += w
        if u < acc:
            return a
    return atoms[-1][0]


def _gaussian_kick(sigma: float, u1: float, u2: float) -> float:
    return sigma * (math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(2.0 * math.pi * u2))


def sample_trajectory(spec: SamplerSpec, trajectory_index: int) -> list[float]:
    """Kick angles ``theta_1..theta_n`` of one trajectory.

    Uses the same draws as :func:`mc_trace`, so summing these angles
    reproduces that trajectory's contribution.
    """
    t = int(trajectory_index)
    if not 0 <= t < spec.trajectories:
        raise InvalidInputError(f"trajectory index {t} outside [0, {spec.trajectories})")
    p, n, seed = spec.process, spec.steps, spec.seed
    if isinstance(p, IIDGaussian):
        sigma = math.sqrt(2.0 * p.lam)
        return [_gaussian_kick(sigma, *_philox.uniforms(seed, i, t)) for i in range(n)]
    if isinstance(p, FullyCorrelatedGaussian):
        return [_gaussian_kick(math.sqrt(2.0 * p.lam), *_philox.uniforms(seed, 0, t))] * n
    if isinstance(p, HistoryDependent):
        history: list[float] = []
        for i in range(n):
            _, u2 = _philox.uniforms(seed, i, t)
            history.append(_pick(u2, p.rule(tuple(history))))
        return history

    tables = _compile(p)
    comps, _ = _components(p)
    n_states = (len(tables.row_ptr) - 1) // len(comps)
    state = tables.init_state
    out = []
    for i in range(n):
        u1, u2 = _philox.uniforms(seed, i, t)
        j = 0
        while j < len(comps) - 1 and u1 >= tables.comp_cum[j]:
            j += 1
        row = j * n_states + state
        lo, hi = tables.row_ptr[row], tables.row_ptr[row + 1]
        k = lo
        while k < hi - 1 and u2 >= tables.atom_cum[k]:
            k += 1
        state = int(tables.atom_state[k])
        out.append(float(tables.angles[state]))
    return out


def _history_block(spec: SamplerSpec, t_start: int, t_count: int) -> np.ndarray:
    totals = np.empty((t_count, spec.steps))
    for row, t in enumerate(range(t_start, t_start + t_count)):
        totals[row] = np.cumsum(sample_trajectory(spec, t))
    c, s = np.cos(totals), np.sin(totals)
    return np.stack([c.sum(axis=0), s.sum(axis=0), (c * c).sum(axis=0), (s * s).sum(axis=0)], axis=1)


def _pairwise(parts: list[np.ndarray]) -> np.ndarray:
    while len(parts) > 1:
        merged = [parts[i] + parts[i + 1] for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            merged.append(parts[-1])
        parts = merged
    return parts[0]


def mc_trace(
    spec: SamplerSpec,
    *,
    workers: int = 1,
    backend: str | None = None,
    max_work: int = DEFAULT_MAX_WORK,
) -> McEstimate:
    """Ensemble estimate of ``E[exp(-i Theta_k)]`` for ``k = 0..steps``.

    Standard errors are per component (real, imaginary): sample standard
    deviation over trajectories divided by ``sqrt(T)``; NaN when ``T = 1``.
    """
    n, T = spec.steps, spec.trajectories
    if n * T > max_work:
        raise ResourceLimitError(
            f"steps * trajectories = {n * T} exceeds the cap of {max_work}"
        )
    if workers < 1:
        raise InvalidInputError("workers must be >= 1")
    p = spec.process
    kernels = _backend.get(backend)

    if isinstance(p, (IIDGaussian, FullyCorrelatedGaussian)):
        sigma = math.sqrt(2.0 * p.lam)
        correlated = isinstance(p, FullyCorrelatedGaussian)

        def run(t0, cnt):
            return kernels.gaussian_block(spec.seed, t0, cnt, n, sigma, correlated)

    elif isinstance(p, (IIDDiscrete, Markov, Mixture)):
        tb = _compile(p)

        def run(t0, cnt):
            return kernels.markov_block(
                spec.seed, t0, cnt, n, tb.angles, tb.init_state,
                tb.comp_cum, tb.row_ptr, tb.atom_state, tb.atom_cum,
            )

    elif isinstance(p, HistoryDependent):

        def run(t0, cnt):
            return _history_block(spec, t0, cnt)

    else:
        raise UnsupportedProcessError(f"cannot sample {type(p).__name__}")

    blocks = [(t0, min(BLOCK_SIZE, T - t0)) for t0 in range(0, T, BLOCK_SIZE)]
    if workers == 1 or len(blocks) == 1:
        parts = [run(t0, cnt) for t0, cnt in blocks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda b: run(*b), blocks))
    sums = _pairwise(parts)

    mean_c, mean_s = sums[:, 0] / T, sums[:, 1] / T
    if T > 1:
        var_c = np.maximum(sums[:, 2] - sums[:, 0] * mean_c, 0.0) / (T - 1)
        var_s = np.maximum(sums[:, 3] - sums[:, 1] * mean_s, 0.0) / (T - 1)
        se_re, se_im = np.sqrt(var_c / T), np.sqrt(var_s / T)
    else:
        se_re = se_im = np.full(n, np.nan)

    factors = np.concatenate(([1.0 + 0j], mean_c - 1j * mean_s))
    trace = CoherenceTrace(
        np.arange(n + 1),
        factors,
        np.concatenate(([0.0], se_re)),
        np.concatenate(([0.0], se_im)),
    )
    return McEstimate(trace, T)
