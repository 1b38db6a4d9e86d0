import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from markovfi import instances
from markovfi.chain import (
    Density,
    Observable,
    ProbMeasure,
    StateSpace,
    chain_from_dict,
    chain_to_dict,
    generator_from_offdiagonal,
    is_reversible,
    load_chain,
    measure_from_data,
    random_generator,
    steady_state,
    total_variation,
    validate_generator,
)
from markovfi.dynamics import propagate
from markovfi.errors import (
    DimensionMismatch,
    InvalidDensity,
    InvalidMeasure,
    NegativeOffDiagonal,
    NotIrreducible,
    RowSumNonzero,
    ValidationError,
)


def test_state_space_rules():
    assert StateSpace.of_size(3).labels == ("1", "2", "3")
    with pytest.raises(ValidationError):
        StateSpace(("a",))
    with pytest.raises(ValidationError):
        StateSpace(("a", "a"))
    assert StateSpace(("x", "y")).index("y") == 1


def test_cyclic_chain_is_valid():
    M = validate_generator(instances.cyclic_rates(3))
    assert M.size == 3
    assert M.min_rate == 1.0
    assert M.sup_norm == 1.0


def test_zero_matrix_is_reducible():
    with pytest.raises(NotIrreducible, match="unreachable"):
        validate_generator(np.zeros((2, 2)))


def test_negative_offdiagonal():
    rates = np.array([[0.5, -0.5], [1.0, -1.0]])
    with pytest.raises(NegativeOffDiagonal, match=r"\(1, 2\)"):
        validate_generator(rates)


def test_row_sum_reported_with_state():
    rates = np.array([[-1.0, 1.0], [1.0, -0.9]])
    with pytest.raises(RowSumNonzero, match="RowSumNonzero at state 2"):
        validate_generator(rates)


def test_one_way_chain_reports_pair():
    rates = np.array([[-1.0, 1.0, 0.0], [0.0, -1.0, 1.0], [0.0, 0.0, 0.0]])
    with pytest.raises(NotIrreducible, match="state 1 is unreachable from state 2"):
        validate_generator(rates)


def test_generator_is_read_only():
    M = validate_generator(instances.cyclic_rates(3))
    with pytest.raises(ValueError):
        M.rates[0, 0] = 2.0


def test_symmetric_two_state_steady_state():
    pi = steady_state(validate_generator([[-1.0, 1.0], [1.0, -1.0]]))
    np.testing.assert_allclose(pi.weights, [0.5, 0.5], atol=1e-15)


def test_six_state_steady_state_at_eps_one():
    pi = steady_state(instances.six_state(1.0))
    np.testing.assert_allclose(pi.weights, np.array([11, 13, 10, 10, 12, 13]) / 69,
                               atol=1e-14)


@pytest.mark.parametrize("eps", [1.0, 0.1, 1e-3])
def test_six_state_steady_state_closed_form(eps):
    pi = steady_state(instances.six_state(eps))
    np.testing.assert_allclose(pi.weights, instances.six_state_steady_state(eps),
                               atol=1e-13)


@given(st.integers(2, 7), st.integers(0, 10_000), st.floats(0.0, 1.0))
def test_steady_state_residual(n, seed, density):
    M = random_generator(np.random.default_rng(seed), n, density)
    pi = steady_state(M)
    assert np.all(pi.weights > 0)
    assert np.abs(M.rates.T @ pi.weights).max() <= 1e-10


@given(st.integers(2, 6), st.integers(0, 10_000))
def test_validation_round_trip(n, seed):
    M = random_generator(np.random.default_rng(seed), n, 0.5)
    again = validate_generator(M.rates, M.space)
    np.testing.assert_array_equal(again.rates, M.rates)
    np.testing.assert_allclose(M.rates.sum(axis=1), 0.0, atol=1e-12)


@given(st.integers(2, 6), st.integers(0, 10_000), st.floats(0.01, 20.0))
def test_steady_state_is_fixed_point(n, seed, t):
    M = random_generator(np.random.default_rng(seed), n, 0.7)
    pi = steady_state(M).weights
    np.testing.assert_allclose(propagate(M.rates, pi, t), pi, atol=1e-12)


def test_reversibility_examples():
    sym = validate_generator([[-1.0, 1.0], [1.0, -1.0]])
    assert is_reversible(sym, [0.5, 0.5])
    L = instances.six_state(1.0)
    assert not is_reversible(L, steady_state(L))


def birth_death(rates_up, rates_down):
    n = len(rates_up) + 1
    off = np.zeros((n, n))
    for i, (u, d) in enumerate(zip(rates_up, rates_down)):
        off[i, i + 1] = u
        off[i + 1, i] = d
    return generator_from_offdiagonal(off)


@given(st.lists(st.floats(0.1, 5.0), min_size=1, max_size=5), st.data())
def test_birth_death_is_reversible(up, data):
    down = data.draw(st.lists(st.floats(0.1, 5.0), min_size=len(up), max_size=len(up)))
    M = birth_death(up, down)
    w = np.cumprod([1.0] + [u / d for u, d in zip(up, down)])
    pi = w / w.sum()
    assert is_reversible(M, pi)
    np.testing.assert_allclose(steady_state(M).weights, pi, atol=1e-10)


@given(st.integers(2, 5), st.integers(0, 10_000))
def test_reversible_implies_stationary(n, seed):
    # symmetrising any chain against a measure gives a reversible pair
    from markovfi.constants import symmetrise
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.1, 1, n)
    z /= z.sum()
    S = symmetrise(random_generator(rng, n, 0.6), z)
    assert is_reversible(S.generator, z)
    np.testing.assert_allclose(steady_state(S.generator).weights, z, atol=1e-10)


def test_measure_and_density_checks():
    space = StateSpace.of_size(2)
    with pytest.raises(InvalidMeasure):
        ProbMeasure(space, [0.0, 1.0])
    with pytest.raises(InvalidMeasure):
        ProbMeasure(space, [0.5, 0.6])
    with pytest.raises(DimensionMismatch):
        ProbMeasure(space, [1.0])
    zeta = ProbMeasure(space, [0.25, 0.75])
    assert zeta.minimum == 0.25
    with pytest.raises(InvalidDensity):
        Density(zeta, [1.0, 1.0 + 1e-6])
    d = Density.of_measure(ProbMeasure(space, [0.5, 0.5]), zeta)
    np.testing.assert_allclose(d.values, [2.0, 2.0 / 3.0])
    assert Observable.constant(space, 2.0).values.tolist() == [2.0, 2.0]


def test_total_variation():
    assert total_variation([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert total_variation([0.3, 0.7], [0.3, 0.7]) == 0.0


def test_chain_file_round_trip(tmp_path):
    cf = chain_from_dict(chain_to_dict(instances.cyclic3().generator,
                                       instances.cyclic3().zeta))
    path = tmp_path / "c.json"
    path.write_text(json.dumps(chain_to_dict(cf.generator, cf.measure)))
    again = load_chain(path)
    np.testing.assert_array_equal(again.generator.rates, cf.generator.rates)
    np.testing.assert_array_equal(again.measure.weights, [0.5, 0.25, 0.25])
    with pytest.raises(ValidationError):
        chain_from_dict({"rates": [[0]]})


def test_measure_file_formats():
    space = StateSpace.of_size(2)
    assert measure_from_data([0.5, 0.5], space).minimum == 0.5
    assert measure_from_data({"measure": [0.2, 0.8]}, space).minimum == 0.2
    with pytest.raises(ValidationError):
        measure_from_data({"states": ["a", "b"], "measure": [0.5, 0.5]}, space)
