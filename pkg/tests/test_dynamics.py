import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_chain
from markovfi import instances
from markovfi.chain import random_measure, steady_state, validate_generator
from markovfi.dynamics import (
    decay_envelope,
    dissipation_audit,
    evolve,
    fitted_decay_rate,
    nonequilibrium_entropy,
    nonequilibrium_variance,
    propagate,
)
from markovfi.errors import DimensionMismatch, StepSizeUnderflow, ValidationError

seeds = st.integers(0, 100_000)
SIX_MU0 = np.array([0.3, 0.05, 0.15, 0.1, 0.25, 0.15])


def test_two_state_closed_form():
    M = validate_generator([[-1.0, 1.0], [1.0, -1.0]])
    t = np.linspace(0, 3, 31)
    traj = evolve(M, [1.0, 0.0], t)
    np.testing.assert_allclose(traj.states[:, 0], 0.5 + 0.5 * np.exp(-2 * t), atol=1e-14)


@given(seeds, st.integers(2, 6))
def test_expm_and_rk4_agree(seed, n):
    M, _ = random_chain(seed, n)
    mu0 = random_measure(np.random.default_rng(seed + 1), n)
    t = [0.0, 0.3, 1.0, 2.5]
    a = evolve(M, mu0, t).states
    b = evolve(M, mu0, t, method="rk4").states
    assert np.abs(a - b).max() <= 1e-8


@given(seeds, st.floats(0.0, 3.0), st.floats(0.0, 3.0))
def test_semigroup_property(seed, s, t):
    M, mu0 = random_chain(seed, 4)
    lhs = propagate(M, mu0, s + t)
    rhs = propagate(M, propagate(M, mu0, s), t)
    assert np.abs(lhs - rhs).max() <= 1e-9


def test_mass_and_positivity(cyc):
    traj = evolve(cyc.generator, [1.0, 0.0, 0.0], np.linspace(0, 5, 51))
    assert np.all(traj.states >= 0)
    assert np.abs(traj.states.sum(axis=1) - 1).max() <= 1e-12
    buf = io.StringIO()
    traj.to_csv(buf)
    assert buf.getvalue().splitlines()[0] == "time,1,2,3"


def test_input_checks(cyc):
    with pytest.raises(DimensionMismatch):
        evolve(cyc.generator, [0.5, 0.5], [0.0])
    with pytest.raises(ValidationError):
        evolve(cyc.generator, [0.5, 0.5, 0.5], [0.0])
    with pytest.raises(ValidationError):
        evolve(cyc.generator, [1.0, 0.0, 0.0], [1.0, 0.5])
    with pytest.raises(StepSizeUnderflow):
        evolve(cyc.generator, [1.0, 0.0, 0.0], [1.0], method="rk4", rk4_step=1e-12)


def test_equal_initial_data_give_zero_series(cyc):
    mu = [0.2, 0.5, 0.3]
    audit = dissipation_audit(cyc.generator, mu, mu, np.linspace(0, 2, 11))
    assert np.abs(audit.variance_series).max() <= 1e-15
    assert np.abs(audit.entropy_series).max() <= 1e-15


def test_nonequilibrium_functionals():
    assert nonequilibrium_variance([0.5, 0.5], [0.25, 0.75]) == pytest.approx(1 / 3)
    assert nonequilibrium_entropy([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2))


def test_cyclic_dissipation_audit(cyc):
    times = np.linspace(0.1, 2.0, 20)
    audit = dissipation_audit(cyc.generator, [0.2, 0.3, 0.5], cyc.zeta, times, dt=1e-3)
    ev, ee = audit.max_rel_error()
    assert ev <= 1e-4 and ee <= 1e-4
    assert audit.monotone()


def test_six_state_dissipation_audit():
    M = instances.six_state(0.1)
    zeta0 = np.full(6, 1 / 6)
    audit = dissipation_audit(M, SIX_MU0, zeta0, np.linspace(0.25, 2.0, 15), dt=1e-3)
    ev, ee = audit.max_rel_error()
    assert ev <= 1e-4 and ee <= 1e-4
    assert audit.monotone()


def test_envelopes_hold(cyc):
    times = np.linspace(0, 6, 121)
    audit = decay_envelope(cyc.generator, [0.9, 0.05, 0.05], cyc.zeta, times, 0.2)
    assert audit.envelope_holds()
    assert audit.alpha_star > 0
    buf = io.StringIO()
    audit.to_csv(buf)
    assert buf.getvalue().startswith("time,variance,entropy")


def test_envelope_requires_delta(cyc):
    with pytest.raises(ValidationError):
        decay_envelope(cyc.generator, [1.0, 0.0, 0.0], cyc.zeta, [0.0, 1.0], 1.5)
    with pytest.raises(ValidationError):
        dissipation_audit(cyc.generator, [1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0])


def test_long_horizon_rate_beats_alpha_star(cyc):
    times = np.linspace(0, 12, 241)
    audit = decay_envelope(cyc.generator, [0.9, 0.05, 0.05], cyc.zeta, times, 0.2)
    rate = fitted_decay_rate(times, audit.entropy_series, 4.0)
    assert rate >= audit.alpha_star


@given(seeds, st.integers(2, 5))
def test_random_pairs_decay(seed, n):
    M, _ = random_chain(seed, n)
    rng = np.random.default_rng(seed + 7)
    mu0 = random_measure(rng, n)
    z0 = random_measure(rng, n)
    audit = dissipation_audit(M, mu0, z0, np.linspace(0, 3, 16))
    assert audit.monotone(tol=1e-10)


def test_steady_reference_is_constant():
    M = instances.six_state(1.0)
    pi = steady_state(M).weights
    audit = dissipation_audit(M, SIX_MU0, pi, [0.0, 1.0, 2.0])
    np.testing.assert_allclose(audit.alpha_gpi_series, audit.alpha_gpi_series[0], rtol=1e-9)
