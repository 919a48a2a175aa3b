import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nhwalk import (
    DensityMatrix,
    InitialStateKind,
    WalkState,
    dimer_coin,
    hermitian_coin,
    measure,
    new_state,
    nm_witness,
    nm_witness_grid,
    nonhermitian_coin,
    norm2,
    position_distribution,
    reduced_coin_density,
    reduced_position_density,
    trace_distance,
    von_neumann_entropy_avg,
)
from nhwalk.analysis import binary_entropy, hermitian_nm_witness
from nhwalk.experiments import table1_expected
from conftest import admissible_pairs, position_density_two_step, run


def random_state(rng, bound=6, steps=3):
    a = np.zeros((2, 2 * bound + 1), dtype=complex)
    w = slice(bound - steps, bound + steps + 1)
    a[:, w] = rng.normal(size=(2, 2 * steps + 1)) + 1j * rng.normal(size=(2, 2 * steps + 1))
    a *= rng.uniform(0.2, 1.0) / np.linalg.norm(a)
    return WalkState(a, bound, steps)


def random_density(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real, tuple(range(d)))


def coin_density_three_steps(a1, a2):
    """Printed coin-reduced matrix after three steps."""
    n = a1**2 + a2**2
    off = a1 * a2**3 * (a1**2 - 4 * a2**2) / 4
    return np.array([[n * (3 * a1**4 + 8 * a2**2 * a1**2 + 2 * a2**4) / 4, off],
                     [off, n * (a1**4 + 2 * a2**4) / 4]])


def test_coin_density_hadamard_three_steps():
    h = 1 / math.sqrt(2)
    rho = reduced_coin_density(run(nonhermitian_coin(h, h), 3).final)
    np.testing.assert_allclose(rho.eigenvalues(), [0.17374, 0.82626], atol=1e-5)
    assert rho.trace == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("a1, a2", admissible_pairs(5, seed=5) + [(0.7, 0.4)])
def test_coin_density_closed_form(a1, a2):
    rho = reduced_coin_density(run(nonhermitian_coin(a1, a2), 3).final)
    np.testing.assert_allclose(rho.matrix, coin_density_three_steps(a1, a2), atol=1e-12)


@pytest.mark.parametrize("r", [0.2, 0.5, 0.8, 0.95])
def test_coin_density_unit_circle_eigen_sum(r):
    rho = reduced_coin_density(run(nonhermitian_coin(r, math.sqrt(1 - r * r)), 3).final)
    assert rho.eigenvalues().sum() == pytest.approx(1.0, abs=1e-12)
    # printed closed form of the eigenvalues on the unit circle
    f = math.sqrt(r**2 * (-25 * r**10 + 115 * r**8 - 202 * r**6 + 169 * r**4 - 72 * r**2 + 16))
    np.testing.assert_allclose(rho.eigenvalues(), [(2 - f) / 4, (2 + f) / 4], atol=1e-12)


@pytest.mark.parametrize("r", [0.3, 0.5, 0.7])
@pytest.mark.parametrize("t", [0.0, 0.1, 0.3])
def test_coin_density_dissipative_eigen_sum(r, t):
    rho = reduced_coin_density(run(nonhermitian_coin(r, math.sqrt(1 - r * r - t)), 3).final)
    assert rho.eigenvalues().sum() == pytest.approx(1 - 3 * t + 3 * t**2 - t**3, abs=1e-12)


@pytest.mark.parametrize("a1, a2", admissible_pairs(6, seed=8))
def test_position_density_two_steps(a1, a2):
    rho = reduced_position_density(run(nonhermitian_coin(a1, a2), 2).final)
    assert rho.labels == (-2, -1, 0, 1, 2)
    np.testing.assert_allclose(rho.matrix, position_density_two_step(a1, a2), atol=1e-12)
    assert rho[-2, -2] == pytest.approx(a1**4 / 4)
    assert rho[-2, -1] == pytest.approx(-(a1**3) * a2 / 4)


def test_position_density_fresh_state():
    rho = reduced_position_density(new_state("localized", 4))
    assert rho.labels == (0,)
    np.testing.assert_array_equal(rho.matrix, [[1]])


def test_position_density_hadamard_trace():
    h = 1 / math.sqrt(2)
    assert reduced_position_density(run(nonhermitian_coin(h, h), 2).final).trace == pytest.approx(1, abs=1e-12)


def test_position_density_custom_window():
    final = run(hermitian_coin(0.4), 3, bound=6).final
    full = reduced_position_density(final, window=(-6, 6))
    np.testing.assert_allclose(np.diag(full.matrix).real, position_distribution(final), atol=1e-14)
    with pytest.raises(ValueError):
        reduced_position_density(final, window=(-7, 0))


def test_partial_traces_consistent(rng):
    for _ in range(20):
        s = random_state(rng)
        n = norm2(s)
        rc, rp = reduced_coin_density(s), reduced_position_density(s)
        assert rc.trace == pytest.approx(n, abs=1e-12)
        assert rp.trace == pytest.approx(n, abs=1e-12)
        assert rc.eigenvalues().min() >= -1e-10
        assert rp.eigenvalues().min() >= -1e-10
        np.testing.assert_allclose(rc.matrix, rc.matrix.conj().T, atol=1e-12)
        np.testing.assert_allclose(rp.matrix, rp.matrix.conj().T, atol=1e-12)


def test_position_density_diagonal_is_distribution():
    final = run(dimer_coin(1.0, 0.5, 0.6), 10).final
    rp = reduced_position_density(final)
    np.testing.assert_allclose(np.diag(rp.matrix).real, position_distribution(final), atol=1e-14)


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(2), (0, 1, 2))


def test_binary_entropy():
    np.testing.assert_array_equal(binary_entropy([0.0, 1.0]), [0.0, 0.0])
    assert binary_entropy([0.5])[0] == pytest.approx(math.log(2))


def test_entropy_delta_is_zero():
    assert von_neumann_entropy_avg([0, 0, 1, 0, 0], 2) == 0.0


def test_entropy_uniform_pair():
    assert von_neumann_entropy_avg([0.5, 0.5], 1) == pytest.approx(2 * math.log(2))
    assert von_neumann_entropy_avg([0.5, 0.5], 4) == pytest.approx(math.log(2) / 2)


def test_entropy_rejects():
    with pytest.raises(ValueError):
        von_neumann_entropy_avg([1.1], 1)
    with pytest.raises(ValueError):
        von_neumann_entropy_avg([0.5], 0)


def _entropy(lam, tau, steps=50):
    return von_neumann_entropy_avg(position_distribution(run(dimer_coin(1.0, lam, tau), steps).final), steps)


def test_entropy_vanishes_at_exceptional_point():
    assert _entropy(4.0, 1.0) < 1e-3


def test_entropy_falls_with_walk_time():
    assert _entropy(1.0, 1 / 50) > _entropy(1.0, 1 / 25) > _entropy(1.0, 1 / 5)


def test_trace_distance_basics(rng):
    rho = random_density(rng, 4)
    assert trace_distance(rho, rho) == 0
    a = DensityMatrix(np.diag([1, 0]), (0, 1))
    b = DensityMatrix(np.diag([0, 1]), (0, 1))
    assert trace_distance(a, b) == pytest.approx(1.0)


def test_trace_distance_label_mismatch():
    with pytest.raises(ValueError):
        trace_distance(DensityMatrix(np.eye(2), (0, 1)), DensityMatrix(np.eye(2), (1, 2)))
    with pytest.raises(ValueError):
        trace_distance(DensityMatrix(np.eye(2), (0, 1)), DensityMatrix(np.eye(3), (0, 1, 2)))


def test_trace_distance_matches_svd(rng):
    for d in (2, 3, 5, 7):
        for _ in range(10):
            g1 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            g2 = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            a = DensityMatrix(g1 + g1.conj().T, tuple(range(d)))
            b = DensityMatrix(g2 + g2.conj().T, tuple(range(d)))
            nuclear = np.linalg.svd(a.matrix - b.matrix, compute_uv=False).sum()
            assert trace_distance(a, b) == pytest.approx(0.5 * nuclear, abs=1e-10)


def test_trace_distance_metric(rng):
    for _ in range(50):
        a, b, c = (random_density(rng, 3) for _ in range(3))
        assert trace_distance(a, b) == trace_distance(b, a)
        assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10
        assert trace_distance(a, b) >= 0


def test_nm_witness_zero_lapse():
    for lam in (0.0, 1.5, 3.0):
        assert nm_witness(1.0, lam, 0.0, 0.3) == 0.0


def test_nm_witness_finds_backflow_without_leak():
    g = np.linspace(0.05, 0.5, 10)
    D = nm_witness_grid(1.0, 0.0, g, g)
    assert D.min() < -1e-6


def test_nm_witness_grid_matches_pointwise():
    Ts, taus = [0.1, 0.2, 0.35], [0.05, 0.25]
    D = nm_witness_grid(1.0, 0.7, Ts, taus)
    for i, T in enumerate(Ts):
        for j, tau in enumerate(taus):
            assert D[i, j] == pytest.approx(nm_witness(1.0, 0.7, T, tau), abs=1e-15)


def test_nm_witness_leak_suppresses_backflow():
    g = np.linspace(0.05, 0.5, 12)
    neg0 = (nm_witness_grid(1.0, 0.0, g, g) < 0).sum()
    neg3 = (nm_witness_grid(1.0, 3.0, g, g) < 0).sum()
    assert neg3 <= neg0


def test_nm_witness_time_independent_coin_is_zero():
    # a coin that does not depend on time gives identical states at every argument
    assert hermitian_nm_witness(lambda x: 1 / math.sqrt(2), 0.4, 0.2) == 0.0


def test_nm_witness_longer_walk_runs():
    assert math.isfinite(nm_witness(1.0, 0.5, 0.2, 0.2, n_steps=3))


def test_measure_table_one():
    a1, a2 = 0.6, 0.3
    records = measure(run(nonhermitian_coin(a1, a2), 2).final)
    expected = table1_expected(a1, a2)
    assert [(r.coin_outcome, r.position_outcome) for r in records] == sorted(expected)
    beta2 = (a1**2 + a2**2) ** 2
    by_key = {(r.coin_outcome, r.position_outcome): r for r in records}
    assert by_key[(0, -2)].probability == pytest.approx(a1**4 / (4 * beta2), abs=1e-12)
    assert by_key[(0, 0)].probability == pytest.approx((a1**2 / 2 + a2**2) ** 2 / beta2, abs=1e-12)
    assert by_key[(0, -1)].state_sign == -1
    for key, (p, sign) in expected.items():
        assert by_key[key].probability == pytest.approx(p, abs=1e-12)
        assert by_key[key].state_sign == sign
    assert sum(r.probability for r in records) == pytest.approx(1.0, abs=1e-12)


def test_measure_marginals_match_coin_density(rng):
    for _ in range(10):
        s = random_state(rng)
        records = measure(s)
        rc = reduced_coin_density(s)
        for c in (0, 1):
            marg = sum(r.probability for r in records if r.coin_outcome == c)
            assert marg == pytest.approx(rc.matrix[c, c].real / norm2(s), abs=1e-12)


def test_measure_equals_projector_expectation(rng):
    s = random_state(rng)
    v = s.amplitudes.ravel()
    for r in measure(s):
        k = r.coin_outcome * s.amplitudes.shape[1] + r.position_outcome + s.bound
        proj = np.zeros(v.size)
        proj[k] = 1
        assert r.probability == pytest.approx(np.vdot(v, proj * v).real / norm2(s), abs=1e-12)


def test_measure_complex_amplitudes_sign():
    records = measure(new_state(InitialStateKind.SYMMETRIC, 1))
    assert [(r.coin_outcome, r.state_sign) for r in records] == [(0, 1), (1, 1)]


def test_measure_rejects_zero_state():
    with pytest.raises(ValueError):
        measure(WalkState(np.zeros((2, 3)), 1))


@settings(max_examples=50, deadline=None)
@given(st.floats(0.0, 1.0), st.integers(1, 8))
def test_densities_positive_for_walks(alpha, n):
    final = run(hermitian_coin(alpha), n).final
    assert reduced_coin_density(final).eigenvalues().min() >= -1e-10
    assert reduced_position_density(final).eigenvalues().min() >= -1e-10
