import cmath
import math

import numpy as np
import pytest
from scipy import integrate

from phasekick.errors import EnumerationLimitError, InvalidInputError, UnsupportedProcessError
from phasekick.exact import (
    characteristic_value,
    coherence_factor_fully_correlated,
    coherence_factor_iid_gaussian,
    coherence_recursion,
    enumerate_exact,
    exact_trace,
    factor_tables,
    propagate_markov,
    reachable_support,
)
from phasekick.noise import (
    DiscreteDistribution,
    FullyCorrelatedGaussian,
    HistoryDependent,
    IIDDiscrete,
    IIDGaussian,
    Markov,
    MarkovKickKernel,
    Mixture,
    ParrondoParams,
    mix_kernels,
    parrondo_pair,
)
from phasekick.qubit import DensityMatrix

from conftest import random_kernel

PI = math.pi


def gaussian_characteristic_by_quadrature(lam):
    """Oracle: E[exp(i theta)] for theta ~ N(0, 2 lam), integrated numerically."""
    pdf = lambda t: math.exp(-t * t / (4 * lam)) / math.sqrt(4 * PI * lam)
    re, _ = integrate.quad(lambda t: math.cos(t) * pdf(t), -np.inf, np.inf, epsabs=1e-14, epsrel=1e-13)
    im, _ = integrate.quad(lambda t: math.sin(t) * pdf(t), -np.inf, np.inf, epsabs=1e-14)
    return complex(re, im)


def parrondo(eps):
    a, b = parrondo_pair(ParrondoParams(eps))
    return a, b, mix_kernels([(a, 0.5), (b, 0.5)])


def test_gaussian_closed_forms():
    assert coherence_factor_iid_gaussian(0.02, 50) == pytest.approx(math.exp(-1), abs=1e-15)
    assert coherence_factor_iid_gaussian(0.3, 0) == 1.0
    assert coherence_factor_fully_correlated(0.001, 30) == pytest.approx(math.exp(-0.9), abs=1e-15)
    assert coherence_factor_fully_correlated(0.07, 1) == coherence_factor_iid_gaussian(0.07, 1)
    with pytest.raises(InvalidInputError):
        coherence_factor_iid_gaussian(0.0, 3)
    with pytest.raises(InvalidInputError):
        coherence_factor_fully_correlated(-1.0, 3)


@pytest.mark.parametrize("lam", [0.01, 0.05])
def test_gaussian_matches_quadrature(lam):
    chi = gaussian_characteristic_by_quadrature(lam)
    assert abs(chi.imag) < 1e-14
    for n in (1, 5, 50):
        assert abs(coherence_factor_iid_gaussian(lam, n) - chi.real**n) < 1e-10


def test_characteristic_values():
    eps = 1e-6
    assert characteristic_value(DiscreteDistribution.point_mass(0.0)) == 1
    assert abs(characteristic_value(DiscreteDistribution.uniform((0.0, -PI / 2, PI / 2))) - 1 / 3) < 1e-15
    b = DiscreteDistribution.uniform((eps, -3 * PI / 4, PI / 4))
    assert abs(characteristic_value(b) - cmath.exp(1j * eps) / 3) < 1e-15


def test_reachable_support():
    a, _, m = parrondo(1e-6)
    assert np.allclose(reachable_support(a, 0.0), [-PI / 2, 0.0, PI / 2])
    assert np.allclose(reachable_support(m, 0.0), sorted([-3 * PI / 4, -PI / 2, 0.0, 1e-6, PI / 4, PI / 2]))
    only_eps = MarkovKickKernel.iid(DiscreteDistribution.point_mass(0.5))
    assert reachable_support(only_eps, 2.0) == [0.5]


def test_private_bath_a_decay():
    a, _, _ = parrondo(1e-6)
    f = coherence_recursion(a, 0.0, 30)
    k = np.arange(1, 31)
    assert np.max(np.abs(np.abs(f) * 3.0**k - 1)) < 1e-10
    for n in range(1, 9):
        assert abs(enumerate_exact(a, 0.0, n) - f[n - 1]) < 1e-12


def test_enumeration_small_cases():
    a, _, m = parrondo(0.3)
    assert abs(enumerate_exact(a, 0.0, 3) - 1 / 27) < 1e-15
    assert enumerate_exact(a, 0.0, 0) == 1
    assert abs(enumerate_exact(m, 0.0, 1) - characteristic_value(m.emission(0.0))) < 1e-15
    with pytest.raises(EnumerationLimitError):
        enumerate_exact(a, 0.0, 13)


def test_combined_recursion_explicit_values():
    eps = 0.3
    _, _, m = parrondo(eps)
    e = cmath.exp(1j * eps)
    f1_0, f1_eps = e / 2 + 1 / 6, 0.5 + e / 6
    f = coherence_recursion(m, 0.0, 2)
    assert abs(f[0].real - f1_0.real) < 1e-12 and abs(f[0].imag - f1_0.imag) < 1e-12
    assert abs(coherence_recursion(m, eps, 1)[0] - f1_eps) < 1e-12
    f2_0 = e / 2 * f1_eps + f1_0 / 6
    assert abs(f[1] - f2_0) < 1e-12
    assert abs(enumerate_exact(m, 0.0, 2) - f2_0) < 1e-12


def test_mixed_per_step_factor_two_thirds():
    _, _, m = parrondo(1e-6)
    mag = np.abs(coherence_recursion(m, 0.0, 30))
    assert np.max(np.abs(mag - (2 / 3) ** np.arange(1, 31))) < 1e-4
    assert np.max(np.abs(mag[1:] / mag[:-1] - 2 / 3)) < 1e-4


def test_factor_tables_cover_condition_angles():
    _, _, m = parrondo(1e-6)
    tables = list(factor_tables(m, 0.0, 3))
    assert [t.step_index for t in tables] == [1, 2, 3]
    assert len(tables[0].support) == 6
    vals = tables[2].values
    # angles in one condition set share f_k
    assert vals[-PI / 2] == vals[0.0] == vals[PI / 2]
    assert abs(vals[0.0] - coherence_recursion(m, 0.0, 3)[-1]) < 1e-15


def test_propagate_markov_trace_is_conjugated():
    eps = 0.01
    _, b, _ = parrondo(eps)
    trace = propagate_markov(b, eps, 4)
    assert trace.factors[0] == 1
    expected = (cmath.exp(-1j * eps) / 3) ** 4
    assert abs(trace.factors[4] - expected) < 1e-15
    assert abs(abs(trace.factors[4]) - 3.0**-4) < 1e-15


def test_exact_trace_dispatch():
    state = DensityMatrix(0.5, 0.5)
    trace, final = exact_trace(IIDGaussian(0.02), state, 50)
    assert abs(abs(final.b) - 0.5 * math.exp(-1)) < 1e-15
    trace, final = exact_trace(FullyCorrelatedGaussian(0.001), state, 30)
    assert abs(trace.factors[-1] - math.exp(-0.9)) < 1e-12
    eps = 1e-3
    a, b, m = parrondo(eps)
    trace, final = exact_trace(Markov(b, eps), state, 4)
    assert abs(abs(trace.factors[-1]) - 3.0**-4) < 1e-15
    assert cmath.phase(trace.factors[-1]) == pytest.approx(-4 * eps, rel=1e-9)
    mixed, _ = exact_trace(Mixture(((a, 0.5), (b, 0.5)), 0.0), state, 10)
    direct = propagate_markov(m, 0.0, 10)
    assert np.array_equal(mixed.factors, direct.factors)
    t0, s0 = exact_trace(IIDGaussian(0.02), state, 0)
    assert list(t0.factors) == [1] and s0 == state
    t0, _ = exact_trace(Markov(a, 0.0), state, 0)
    assert list(t0.factors) == [1]
    with pytest.raises(UnsupportedProcessError):
        exact_trace(HistoryDependent(lambda h: DiscreteDistribution.point_mass(0.0)), state, 3)


@pytest.mark.parametrize("seed", range(10))
def test_iid_discrete_geometric(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 6))
    dist = DiscreteDistribution(tuple(zip(rng.uniform(-3, 3, k), rng.dirichlet(np.ones(k)))))
    chi = characteristic_value(dist)
    trace, _ = exact_trace(IIDDiscrete(dist), DensityMatrix(0.5, 0.5), 50)
    for n in range(51):
        assert abs(trace.factors[n] - chi.conjugate() ** n) < 1e-12
    markov = propagate_markov(MarkovKickKernel.iid(dist), 0.0, 50)
    assert np.max(np.abs(markov.factors - trace.factors)) < 1e-12


def test_fully_correlated_variance_bookkeeping():
    lam = 0.004
    trace, _ = exact_trace(FullyCorrelatedGaussian(lam), DensityMatrix(0.5, 0.5), 25)
    n = trace.steps[1:]
    assert np.allclose(-np.log(np.abs(trace.factors[1:])) / n**2, lam, rtol=0, atol=1e-12)


@pytest.mark.parametrize("seed", range(20))
def test_recursion_equals_enumeration_random(seed):
    rng = np.random.default_rng(1000 + seed)
    kernel, pool = random_kernel(rng)
    start = float(rng.choice(pool))
    f = coherence_recursion(kernel, start, 7)
    for n in range(1, 8):
        assert abs(enumerate_exact(kernel, start, n) - f[n - 1]) < 1e-12


@pytest.mark.parametrize("seed", range(20))
def test_contraction_random(seed):
    rng = np.random.default_rng(2000 + seed)
    kernel, _ = random_kernel(rng)
    prev = 1.0
    for table in factor_tables(kernel, 0.0, 20):
        cur = max(abs(v) for v in table.values.values())
        assert cur <= prev + 1e-12
        prev = cur
