import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from markovfi import instances
from markovfi.chain import random_generator, random_measure, steady_state
from markovfi.errors import DeltaTooLarge, DensityUnderflow, LambdaOutOfRange, NonPositiveValue
from markovfi.functionals import (
    centred_entropy,
    classical_fisher,
    dirichlet_pairing,
    gen_dirichlet,
    gen_fisher,
    gen_fisher_lambda,
    phi_divergence,
    psi_entropy,
    relative_entropy,
    taylor_audit,
    variance,
)

seeds = st.integers(0, 100_000)
sizes = st.integers(2, 6)


def case(seed, n):
    rng = np.random.default_rng(seed)
    M = random_generator(rng, n, 0.6)
    z = random_measure(rng, n)
    return rng, M, z


def density(rng, z, spread=0.9):
    phi = rng.uniform(1 - spread, 1 + spread, z.size)
    return phi / (z @ phi)


# --- reference values -------------------------------------------------------


def test_cyclic_variances(cyc):
    assert abs(variance(cyc.zeta, cyc.f) - 0.5) <= 1e-12
    assert abs(variance(cyc.zeta, cyc.g) - 1.5) <= 1e-12


def test_variance_of_constant_is_zero(cyc):
    assert variance(cyc.zeta, np.full(3, 5.0)) == 0.0


def test_cyclic_dirichlet_forms(cyc):
    assert abs(gen_dirichlet(cyc.zeta, cyc.f, cyc.generator) - 7 / 8) <= 1e-12
    assert abs(gen_dirichlet(cyc.zeta, cyc.g, cyc.generator) - 23 / 8) <= 1e-12


@pytest.mark.parametrize("N", [4, 16, 64])
def test_cyclic_family_dirichlet_is_four_zeta_min(N):
    fam = instances.cyclic_2n(N, 1e-3)
    val = gen_dirichlet(fam.zeta, fam.f, fam.generator)
    assert abs(val - 4 * fam.zeta_min) <= 1e-15


@pytest.mark.parametrize("N", [4, 16, 64])
def test_cyclic_family_fisher_is_log3_zeta_min(N):
    fam = instances.cyclic_2n(N, 1e-3)
    val = gen_fisher(fam.zeta, fam.phi, fam.generator)
    closed = 0.5 * fam.zeta_min * (3 * phi_divergence(1 / 3) + phi_divergence(3.0))
    assert abs(closed - fam.zeta_min * math.log(3)) <= 1e-16
    assert abs(val - fam.zeta_min * math.log(3)) <= 1e-15


def test_relative_entropy_two_state():
    val = relative_entropy([0.5, 0.5], [0.5, 1.5])
    expected = 0.25 * math.log(0.5) + 0.75 * math.log(1.5)
    assert abs(val - expected) <= 1e-15
    assert abs(val - 0.130812) < 1e-6


def test_relative_entropy_three_state():
    z = np.array([0.5, 0.25, 0.25])
    phi = np.array([0.5, 1.5, 1.5])
    expected = sum(zi * p * math.log(p) for zi, p in zip(z, phi))
    assert abs(relative_entropy(z, phi) - expected) <= 1e-15


def test_relative_entropy_of_one_is_zero():
    assert relative_entropy([0.3, 0.7], [1.0, 1.0]) == 0.0


def test_centred_entropy_identities():
    z = np.array([0.5, 0.25, 0.25])
    phi = np.array([0.5, 1.5, 1.5])
    H = relative_entropy(z, phi)
    assert centred_entropy(z, np.full(3, 7.0)) == 0.0
    assert abs(centred_entropy(z, 3 * phi) - 3 * H) <= 1e-15
    assert abs(centred_entropy(z, phi) - H) <= 1e-16
    with pytest.raises(NonPositiveValue):
        centred_entropy(z, [1.0, 0.0, 1.0])


def test_psi_and_phi_near_one():
    h = 1e-6
    assert abs(psi_entropy(1 + h) - h * h / 2) <= 1e-6 * h * h
    assert abs(phi_divergence(1 + h) - h * h / 2) <= 1e-6 * h * h
    assert psi_entropy(0.0) == 1.0


def test_gen_fisher_of_one_is_zero(cyc):
    assert gen_fisher(cyc.zeta, np.ones(3), cyc.generator) == 0.0
    assert gen_fisher_lambda(cyc.zeta, np.ones(3), cyc.generator, 0.3) == 0.0


def test_lambda_out_of_range(cyc):
    for lam in (0.0, 1.0, -0.2):
        with pytest.raises(LambdaOutOfRange):
            gen_fisher_lambda(cyc.zeta, np.ones(3), cyc.generator, lam)


def test_density_underflow():
    M = instances.cyclic3().generator
    with pytest.raises(DensityUnderflow):
        gen_fisher([1 / 3] * 3, [1.0, 1e-308, 1.0], M)


@given(seeds, sizes)
def test_lambda_limit(seed, n):
    rng, M, z = case(seed, n)
    phi = density(rng, z)
    exact = gen_fisher(z, phi, M)
    approx = gen_fisher_lambda(z, phi, M, 1e-6)
    assert abs(approx - exact) <= 1e-4 * exact


@given(seeds, sizes, st.floats(0.05, 0.95))
def test_lambda_quadratic_expansion(seed, n, lam):
    rng, M, z = case(seed, n)
    f = rng.normal(size=n)
    f -= z @ f
    f /= np.abs(f).max()
    delta = 1e-3
    val = gen_fisher_lambda(z, 1 + delta * f, M, lam)
    lead = delta ** 2 * (1 - lam) * gen_dirichlet(z, f, M)
    assert abs(val - lead) <= 10 * delta ** 3 * np.abs(M.rates).max() * n


def test_classical_fisher_direct_two_state():
    M = np.array([[-2.0, 2.0], [1.0, -1.0]])
    pi = np.array([1 / 3, 2 / 3])
    phi = np.array([1.5, 0.75])
    direct = -(pi[0] * phi[0] * (2 * (math.log(0.75) - math.log(1.5)))
               + pi[1] * phi[1] * (1 * (math.log(1.5) - math.log(0.75))))
    assert abs(classical_fisher(pi, phi, M) - direct) <= 1e-15
    assert abs(classical_fisher(pi, phi, M) - gen_fisher(pi, phi, M)) <= 1e-14


@given(seeds, st.integers(2, 5))
def test_classical_fisher_matches_at_stationarity(seed, n):
    from markovfi.constants import symmetrise
    rng, M, z = case(seed, n)
    R = symmetrise(M, z).generator  # reversible with steady state z
    phi = density(rng, z)
    assert abs(classical_fisher(z, phi, R) - gen_fisher(z, phi, R)) <= 1e-10


def test_classical_fisher_warns_off_stationarity(cyc):
    with pytest.warns(RuntimeWarning):
        classical_fisher(cyc.zeta, np.ones(3), cyc.generator)


# --- zero sets and positivity ----------------------------------------------


@given(seeds, sizes)
def test_nonnegativity_and_zero_sets(seed, n):
    rng, M, z = case(seed, n)
    f = rng.normal(size=n)
    phi = density(rng, z)
    assert gen_dirichlet(z, f, M) > 0
    assert gen_fisher(z, phi, M) > 0
    assert relative_entropy(z, phi) > 0
    assert gen_dirichlet(z, np.full(n, 2.5), M) == 0.0
    assert gen_fisher(z, np.ones(n), M) == 0.0


# --- convexity --------------------------------------------------------------


@given(seeds, sizes, st.sampled_from([0.25, 0.5, 0.75]))
def test_convexity(seed, n, theta):
    rng, M, z = case(seed, n)
    f, g = rng.normal(size=n), rng.normal(size=n)
    mix = theta * f + (1 - theta) * g
    E = lambda v: gen_dirichlet(z, v, M)  # noqa: E731
    assert E(mix) <= theta * E(f) + (1 - theta) * E(g) + 1e-10
    p, q = density(rng, z), density(rng, z)
    pq = theta * p + (1 - theta) * q
    R = lambda v: gen_fisher(z, v, M)  # noqa: E731
    H = lambda v: relative_entropy(z, v)  # noqa: E731
    assert R(pq) <= theta * R(p) + (1 - theta) * R(q) + 1e-10
    assert H(pq) <= theta * H(p) + (1 - theta) * H(q) + 1e-10


# --- stationarity identities -----------------------------------------------


@given(seeds, sizes)
def test_dirichlet_pairing_at_stationarity(seed, n):
    rng, M, _ = case(seed, n)
    pi = steady_state(M).weights
    f = rng.normal(size=n)
    assert abs(gen_dirichlet(pi, f, M) - dirichlet_pairing(pi, f, M)) <= 1e-10
    assert abs(pi @ (M.rates @ (f * f))) <= 1e-10


@given(seeds, sizes, st.floats(0.1, 10.0))
def test_fisher_is_one_homogeneous(seed, n, c):
    rng, M, z = case(seed, n)
    phi = density(rng, z)
    assert abs(gen_fisher(z, c * phi, M) - c * gen_fisher(z, phi, M)) <= 1e-12 * c


# --- Taylor expansions ------------------------------------------------------


def test_taylor_audit_cyclic(cyc):
    for f in (cyc.f, cyc.g):
        f = f - cyc.zeta.weights @ f
        fisher, entropy = taylor_audit(cyc.zeta, f, cyc.generator, 0.01)
        assert fisher.passed and entropy.passed


def test_taylor_audit_at_zero(cyc):
    fisher, entropy = taylor_audit(cyc.zeta, cyc.f, cyc.generator, 0.0)
    assert fisher.predicted == fisher.actual == 0.0
    assert entropy.predicted == entropy.actual == 0.0


def test_taylor_audit_at_boundary(cyc):
    delta = 0.5 / np.abs(cyc.g).max()
    for sign in (1, -1):
        fisher, entropy = taylor_audit(cyc.zeta, cyc.g, cyc.generator, sign * delta)
        assert fisher.passed and entropy.passed
    with pytest.raises(DeltaTooLarge):
        taylor_audit(cyc.zeta, cyc.g, cyc.generator, 1.01 * delta)


# |scale| > 1e-100 keeps delta^2 out of the subnormal range
@given(seeds, sizes, st.floats(-1.0, 1.0).filter(lambda s: s == 0 or abs(s) > 1e-100))
def test_taylor_audit_random(seed, n, scale):
    rng, M, z = case(seed, n)
    f = rng.normal(size=n)
    f -= z @ f
    delta = scale * 0.5 / np.abs(f).max()
    for check in taylor_audit(z, f, M, delta):
        assert check.passed


@pytest.mark.parametrize("which,limit", [("f", 7 / 2), ("g", 23 / 6)])
def test_ratio_limit_cyclic(cyc, which, limit):
    f = getattr(cyc, which)
    delta = 1e-4
    phi = 1 + delta * f
    ratio = gen_fisher(cyc.zeta, phi, cyc.generator) / relative_entropy(cyc.zeta, phi)
    two_e_over_var = 2 * gen_dirichlet(cyc.zeta, f, cyc.generator) / variance(cyc.zeta, f)
    assert abs(two_e_over_var - limit) <= 1e-12
    assert abs(ratio - limit) <= 1e-3 * limit


def test_no_warning_at_steady_state():
    M = instances.six_state(1.0)
    pi = steady_state(M)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        classical_fisher(pi, np.ones(6), M)
