"""Kick-angle distributions, one-step Markov kick kernels and noise processes.

Angles are plain floats in radians, canonicalised to ``(-pi, pi]``.  Two
angles are treated as the same atom (or the same conditioning value) when
their circular distance is at most ``ANGLE_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .errors import ContractViolation, InvalidInputError

ANGLE_TOL = 1e-9
WEIGHT_TOL = 1e-12
TWO_PI = 2.0 * math.pi

IMPOSSIBLE = -math.inf
"""Log-probability of a trajectory the kernel can never produce."""


def canonical_angle(theta: float) -> float:
    """Wrap ``theta`` into ``(-pi, pi]``."""
    theta = float(theta)
    if not math.isfinite(theta):
        raise InvalidInputError(f"angle must be finite, got {theta!r}")
    r = math.remainder(theta, TWO_PI)
    if r <= -math.pi:
        r += TWO_PI
    return r


def angle_distance(x: float, y: float) -> float:
    """Distance between two angles on the circle."""
    return abs(math.remainder(x - y, TWO_PI))


def same_angle(x: float, y: float) -> bool:
    return angle_distance(x, y) <= ANGLE_TOL


def _check_weight(w) -> float:
    w = float(w)
    if not math.isfinite(w) or w < 0.0:
        raise InvalidInputError(f"weights must be finite and non-negative, got {w!r}")
    return w


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finite mixture of point masses ``sum_j w_j delta(theta - theta_j)``."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        atoms = tuple((canonical_angle(a), _check_weight(w)) for a, w in self.atoms)
        if not atoms:
            raise InvalidInputError("a distribution needs at least one atom")
        total = math.fsum(w for _, w in atoms)
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InvalidInputError(f"weights sum to {total!r}, not 1")
        for i in range(len(atoms)):
            for j in range(i):
                if angle_distance(atoms[i][0], atoms[j][0]) <= ANGLE_TOL:
                    raise InvalidInputError(
                        f"atoms {atoms[j][0]!r} and {atoms[i][0]!r} coincide"
                    )
        object.__setattr__(self, "atoms", atoms)

    @classmethod
    def merged(cls, pairs: Iterable[tuple[float, float]]) -> "DiscreteDistribution":
        """Build from possibly repeated angles, adding weights of coinciding
        atoms and dropping zero-weight ones."""
        out: list[list[float]] = []
        for angle, w in pairs:
            angle, w = canonical_angle(angle), _check_weight(w)
            if w == 0.0:
                continue
            for slot in out:
                if same_angle(slot[0], angle):
                    slot[1] += w
                    break
            else:
                out.append([angle, w])
        return cls(tuple((a, w) for a, w in out))

    @classmethod
    def point_mass(cls, angle: float) -> "DiscreteDistribution":
        return cls(((angle, 1.0),))

    @classmethod
    def uniform(cls, angles: Sequence[float]) -> "DiscreteDistribution":
        w = 1.0 / len(angles)
        return cls(tuple((a, w) for a in angles))

    @property
    def angles(self) -> tuple[float, ...]:
        return tuple(a for a, _ in self.atoms)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.atoms)

    def weight_at(self, theta: float) -> float:
        """Weight of the atom at ``theta``, 0 when there is none."""
        theta = canonical_angle(theta)
        for a, w in self.atoms:
            if same_angle(a, theta):
                return w
        return 0.0

    def same_law(self, other: "DiscreteDistribution", tol: float = WEIGHT_TOL) -> bool:
        """True when both put the same weight (within ``tol``) on every angle."""
        for a in set(self.angles) | set(other.angles):
            if abs(self.weight_at(a) - other.weight_at(a)) > tol:
                return False
        return True


@dataclass(frozen=True)
class Branch:
    conditions: tuple[float, ...]
    emission: DiscreteDistribution

    def __post_init__(self):
        conds = tuple(canonical_angle(c) for c in self.conditions)
        if not conds:
            raise InvalidInputError("a branch needs at least one conditioning angle")
        object.__setattr__(self, "conditions", conds)

    def matches(self, theta: float) -> bool:
        return any(same_angle(c, theta) for c in self.conditions)


@dataclass(frozen=True)
class MarkovKickKernel:
    """Conditional kick law ``P(theta_i | theta_{i-1})``.

    If the previous angle lies in a branch's condition set, the next angle is
    drawn from that branch's emission; otherwise from ``default``.
    """

    branches: tuple[Branch, ...]
    default: DiscreteDistribution

    def __post_init__(self):
        branches = tuple(
            b if isinstance(b, Branch) else Branch(tuple(b[0]), b[1]) for b in self.branches
        )
        seen: list[float] = []
        for br in branches:
            for c in br.conditions:
                if any(same_angle(c, s) for s in seen):
                    raise InvalidInputError(
                        f"conditioning angle {c!r} appears in more than one branch"
                    )
                seen.append(c)
        object.__setattr__(self, "branches", branches)

    @classmethod
    def iid(cls, dist: DiscreteDistribution) -> "MarkovKickKernel":
        """Kernel that ignores the previous angle."""
        return cls((), dist)

    def branch_index(self, theta: float) -> int:
        """Index of the branch conditioning on ``theta``; -1 for the default."""
        theta = canonical_angle(theta)
        for i, br in enumerate(self.branches):
            if br.matches(theta):
                return i
        return -1

    def emission(self, theta: float) -> DiscreteDistribution:
        i = self.branch_index(theta)
        return self.default if i < 0 else self.branches[i].emission

    @property
    def emissions(self) -> tuple[DiscreteDistribution, ...]:
        """All emission laws; the default comes last."""
        return tuple(br.emission for br in self.branches) + (self.default,)

    def condition_angles(self) -> list[float]:
        return [c for br in self.branches for c in br.conditions]

    def atom_angles(self) -> list[float]:
        """Every angle carrying positive weight in some emission (deduplicated)."""
        out: list[float] = []
        for em in self.emissions:
            for a, w in em.atoms:
                if w > 0.0 and not any(same_angle(a, s) for s in out):
                    out.append(a)
        return out


@dataclass(frozen=True)
class ParrondoParams:
    epsilon: float
    weight_a: float = 0.5

    def __post_init__(self):
        eps = float(self.epsilon)
        if not math.isfinite(eps) or eps <= 10 * ANGLE_TOL:
            raise ContractViolation(
                f"epsilon = {eps!r} must exceed {10 * ANGLE_TOL:g} so that it stays "
                "distinguishable from 0"
            )
        w = float(self.weight_a)
        if not 0.0 <= w <= 1.0:
            raise ContractViolation(f"weight_a = {w!r} outside [0, 1]")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "weight_a", w)


def parrondo_pair(params: ParrondoParams) -> tuple[MarkovKickKernel, MarkovKickKernel]:
    """The two private-bath kernels A and B.

    A: from {-pi/2, 0, pi/2} kick uniformly to one of {0, -pi/2, pi/2}, else
    stay at 0.  B: from {-3pi/4, eps, pi/4} kick uniformly to one of
    {eps, -3pi/4, pi/4}, else kick by eps.
    """
    eps = params.epsilon
    half, q = math.pi / 2, math.pi / 4
    kernel_a = MarkovKickKernel(
        (Branch((-half, 0.0, half), DiscreteDistribution.uniform((0.0, -half, half))),),
        DiscreteDistribution.point_mass(0.0),
    )
    kernel_b = MarkovKickKernel(
        (Branch((-3 * q, eps, q), DiscreteDistribution.uniform((eps, -3 * q, q))),),
        DiscreteDistribution.point_mass(eps),
    )
    return kernel_a, kernel_b


def _check_components(components) -> tuple[tuple[MarkovKickKernel, float], ...]:
    comps = tuple((k, _check_weight(w)) for k, w in components)
    if len(comps) < 2:
        raise InvalidInputError("a mixture needs at least two components")
    total = math.fsum(w for _, w in comps)
    if abs(total - 1.0) > WEIGHT_TOL:
        raise InvalidInputError(f"mixture weights sum to {total!r}, not 1")
    return comps


def mix_kernels(components: Sequence[tuple[MarkovKickKernel, float]]) -> MarkovKickKernel:
    """Kernel of choosing component ``j`` with probability ``w_j`` at every step.

    The emission conditioned on any angle is the weighted sum of the
    components' emissions at that angle.  Conditioning angles whose mixed
    emissions agree are grouped into one branch.
    """
    comps = _check_components(components)

    def mixed_at(theta: float | None) -> DiscreteDistribution:
        pairs = []
        for kernel, w in comps:
            em = kernel.default if theta is None else kernel.emission(theta)
            pairs.extend((a, w * p) for a, p in em.atoms)
        return DiscreteDistribution.merged(pairs)

    default = mixed_at(None)
    conds: list[float] = []
    for kernel, _ in comps:
        for c in kernel.condition_angles():
            if not any(same_angle(c, s) for s in conds):
                conds.append(c)

    groups: list[tuple[list[float], DiscreteDistribution]] = []
    for c in conds:
        em = mixed_at(c)
        for angles, existing in groups:
            if existing == em:
                angles.append(c)
                break
        else:
            groups.append(([c], em))
    branches = tuple(Branch(tuple(angles), em) for angles, em in groups if em != default)
    return MarkovKickKernel(branches, default)


def trajectory_log_probability(
    kernel: MarkovKickKernel, initial_angle: float, angles: Sequence[float]
) -> float:
    """Natural log of the probability of the kick sequence ``angles``.

    The initial angle is a deterministic condition, so ``k`` angles give
    ``k`` factors.  Returns ``IMPOSSIBLE`` (``-inf``) if any step is not an
    atom of its conditional emission.
    """
    if len(angles) == 0:
        raise InvalidInputError("angles must be non-empty")
    logp = 0.0
    prev = initial_angle
    for theta in angles:
        w = kernel.emission(prev).weight_at(theta)
        if w <= 0.0:
            return IMPOSSIBLE
        logp += math.log(w)
        prev = theta
    return logp


# --- noise processes --------------------------------------------------------


def _check_lambda(lam) -> float:
    lam = float(lam)
    if not math.isfinite(lam) or lam <= 0.0:
        raise InvalidInputError(f"lambda must be positive, got {lam!r}")
    return lam


@dataclass(frozen=True)
class IIDGaussian:
    """Independent kicks, each ``N(0, 2*lam)``."""

    lam: float

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_lambda(self.lam))


@dataclass(frozen=True)
class IIDDiscrete:
    dist: DiscreteDistribution


@dataclass(frozen=True)
class FullyCorrelatedGaussian:
    """One ``N(0, 2*lam)`` draw repeated at every step."""

    lam: float

    def __post_init__(self):
        object.__setattr__(self, "lam", _check_lambda(self.lam))


@dataclass(frozen=True)
class Markov:
    kernel: MarkovKickKernel
    initial_angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "initial_angle", canonical_angle(self.initial_angle))


@dataclass(frozen=True)
class Mixture:
    """Per-step random choice among kernels, all conditioned on the last angle."""

    components: tuple[tuple[MarkovKickKernel, float], ...]
    initial_angle: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "components", _check_components(self.components))
        object.__setattr__(self, "initial_angle", canonical_angle(self.initial_angle))

    def mixed_kernel(self) -> MarkovKickKernel:
        return mix_kernels(self.components)


@dataclass(frozen=True)
class HistoryDependent:
    """Arbitrary conditional chain: ``rule(history)`` gives the law of the next
    kick given all previous kicks (oldest first).  Monte Carlo only."""

    rule: Callable[[tuple[float, ...]], DiscreteDistribution] = field(compare=False)


NoiseProcess = Union[IIDGaussian, IIDDiscrete, FullyCorrelatedGaussian, Markov, Mixture]


def parrondo_mixture(params: ParrondoParams, initial_angle: float = 0.0) -> Mixture:
    kernel_a, kernel_b = parrondo_pair(params)
    return Mixture(((kernel_a, params.weight_a), (kernel_b, 1.0 - params.weight_a)), initial_angle)
