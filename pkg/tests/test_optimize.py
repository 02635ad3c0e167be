import numpy as np
import pytest

from onenorm import (
    LocalizationRequest,
    OptimizerConfig,
    jacobi_rotation_norm_scan,
    lambda_q,
    localize,
    minimize_norm,
    objective,
    rotate_hamiltonian,
)
from onenorm.errors import InputError

from conftest import random_aux, random_hamiltonian


def test_config_validation():
    with pytest.raises(InputError, match="fd_step"):
        OptimizerConfig(fd_step=1.0)
    with pytest.raises(InputError, match="gradient_scheme"):
        OptimizerConfig(gradient_scheme="spectral")
    with pytest.raises(InputError, match="algorithm"):
        OptimizerConfig(algorithm="adam")
    with pytest.raises(InputError, match="start_from"):
        OptimizerConfig(start_from="somewhere")
    assert OptimizerConfig(algorithm="SLSQP").scipy_method == "SLSQP"
    assert OptimizerConfig().start_scheme() == "er"
    assert OptimizerConfig(start_from="current").start_scheme() is None
    assert OptimizerConfig(start_from="localized:pm").start_scheme() == "pm"


def test_objective_at_zero_equals_lambda_q(rng):
    ham = random_hamiltonian(4, rng)
    assert objective(ham, np.zeros(6)) == lambda_q(ham)


def test_objective_wrong_length(rng):
    ham = random_hamiltonian(3, rng)
    with pytest.raises(InputError, match="length"):
        objective(ham, np.zeros(2), window=(0, 1))


def test_objective_half_rotation_composition(rng):
    ham = random_hamiltonian(4, rng)
    kvec = 0.3 * rng.standard_normal(6)
    from onenorm.optimize import _window_rotation

    half = _window_rotation(4, tuple(range(4)), 0.5 * kvec)
    twice = rotate_hamiltonian(rotate_hamiltonian(ham, half), half)
    assert lambda_q(twice) == pytest.approx(objective(ham, kvec), abs=1e-9)


def test_objective_matches_jacobi_scan(rng):
    ham = random_hamiltonian(3, rng)
    thetas = np.linspace(-0.7, 0.7, 11)
    scan = jacobi_rotation_norm_scan(ham, 0, 1, thetas)
    for theta, expected in zip(thetas, scan):
        assert objective(ham, [theta], window=(0, 1)) == pytest.approx(
            expected, abs=1e-10
        )


def test_minimizer_never_regresses(rng):
    for algorithm in ("quasi-newton-bounded", "sequential-quadratic"):
        for _ in range(5):
            n = int(rng.integers(2, 5))
            ham = random_hamiltonian(n, rng)
            config = OptimizerConfig(
                start_from="current", algorithm=algorithm, max_iterations=40,
                restarts=0,
            )
            result = minimize_norm(ham, config)
            assert result.lambda_final <= result.lambda_start + 1e-9
            assert result.lambda_start == pytest.approx(lambda_q(ham), abs=1e-12)


def test_minimizer_beats_er_start(rng):
    ham = random_hamiltonian(4, rng)
    er = localize(ham, None, None, LocalizationRequest(scheme="er"))
    config = OptimizerConfig(start_from="localized:er", max_iterations=150)
    result = minimize_norm(ham, config)
    assert result.lambda_final <= lambda_q(er.hamiltonian) + 1e-9
    assert result.start_scheme == "er"
    # returned Hamiltonian consistent with reported value
    assert lambda_q(result.hamiltonian) == pytest.approx(result.lambda_final, abs=1e-9)
    # rotation folds in the localization pre-rotation
    rebuilt = rotate_hamiltonian(ham, result.rotation)
    assert lambda_q(rebuilt) == pytest.approx(result.lambda_final, abs=1e-9)


def test_minimizer_beats_best_localization(rng):
    ham = random_hamiltonian(4, rng)
    aux = random_aux(4, rng)
    coeff = aux.mo_coefficients
    values = {}
    for scheme in ("er", "pm", "fb", "oao"):
        res = localize(ham, coeff, aux, LocalizationRequest(scheme=scheme))
        values[scheme] = lambda_q(res.hamiltonian)
    best = min(values, key=values.get)
    config = OptimizerConfig(start_from=f"localized:{best}", max_iterations=200)
    result = minimize_norm(ham, config, aux=aux, coeff=coeff)
    assert result.lambda_final <= min(values.values()) + 1e-9


def test_window_restriction(rng):
    ham = random_hamiltonian(5, rng)
    window = (1, 3)
    config = OptimizerConfig(window=window, start_from="current", max_iterations=60)
    result = minimize_norm(ham, config)
    u = result.rotation.matrix
    outside = [0, 2, 4]
    assert np.array_equal(u[np.ix_(outside, outside)], np.eye(3))
    assert np.max(np.abs(u[np.ix_(outside, list(window))])) == 0.0


def test_stationary_start_returns_identity():
    # isotropic tensors are invariant under every orbital rotation, so the
    # objective is flat and the optimizer must return the identity
    n = 2
    eye = np.eye(n)
    g = 0.2 * (
        np.einsum("pq,rs->pqrs", eye, eye)
        + np.einsum("pr,qs->pqrs", eye, eye)
        + np.einsum("ps,qr->pqrs", eye, eye)
    )
    from onenorm import MolecularHamiltonian

    ham = MolecularHamiltonian.from_dense(0.0, 0.7 * eye, g)
    result = minimize_norm(
        ham, OptimizerConfig(start_from="current", window=(0, 1), max_iterations=50)
    )
    assert np.array_equal(result.rotation.matrix, np.eye(n))
    assert result.hamiltonian is ham
    assert result.lambda_final == result.lambda_start


def test_reoptimization_never_regresses(rng):
    ham = random_hamiltonian(3, rng)
    first = minimize_norm(
        ham, OptimizerConfig(start_from="current", max_iterations=200)
    )
    second = minimize_norm(
        first.hamiltonian,
        OptimizerConfig(start_from="current", max_iterations=200),
    )
    assert second.lambda_start == pytest.approx(first.lambda_final, abs=1e-9)
    assert second.lambda_final <= second.lambda_start + 1e-9


def test_empty_window_returns_identity(rng):
    ham = random_hamiltonian(3, rng)
    result = minimize_norm(
        ham, OptimizerConfig(window=(1,), start_from="current")
    )
    assert np.array_equal(result.rotation.matrix, np.eye(3))
    assert result.hamiltonian is ham
    assert result.converged


def test_finite_difference_gradient_matches_stencil(rng):
    # compare the optimizer's central difference against a 5-point stencil
    # on a smooth instance (no |.| argument near zero)
    from onenorm.optimize import _fd_gradient

    ham = random_hamiltonian(3, rng)

    def fun(kvec):
        return objective(ham, kvec)

    x0 = 0.1 * rng.standard_normal(3)
    grad = _fd_gradient(fun, x0, 1e-5, "central")
    h = 1e-3
    for k in range(3):
        probes = []
        for offset in (-2, -1, 1, 2):
            x = x0.copy()
            x[k] += offset * h
            probes.append(fun(x))
        stencil = (probes[0] - 8 * probes[1] + 8 * probes[2] - probes[3]) / (12 * h)
        assert grad[k] == pytest.approx(stencil, rel=1e-4, abs=1e-8)


def test_trace_records_monotone_best(rng):
    ham = random_hamiltonian(4, rng)
    result = minimize_norm(
        ham, OptimizerConfig(start_from="current", max_iterations=60)
    )
    best = [record.best_so_far for record in result.trace]
    assert all(b2 <= b1 + 1e-15 for b1, b2 in zip(best, best[1:]))
    for record in result.trace:
        assert record.best_so_far <= record.lambda_value + 1e-15


def test_bit_reproducible(rng):
    ham = random_hamiltonian(4, rng)
    config = OptimizerConfig(start_from="localized:er", max_iterations=60)
    first = minimize_norm(ham, config)
    second = minimize_norm(ham, config)
    assert first.lambda_final == second.lambda_final
    assert np.array_equal(first.rotation.matrix, second.rotation.matrix)
    assert first.n_objective_calls == second.n_objective_calls


def test_forward_gradient_scheme_runs(rng):
    ham = random_hamiltonian(3, rng)
    config = OptimizerConfig(
        start_from="current", gradient_scheme="forward", max_iterations=30,
    )
    result = minimize_norm(ham, config)
    assert result.lambda_final <= result.lambda_start + 1e-9


def test_reduction_percent(rng):
    ham = random_hamiltonian(3, rng)
    result = minimize_norm(
        ham, OptimizerConfig(start_from="current", max_iterations=50)
    )
    expected = 100.0 * (1.0 - result.lambda_final / result.lambda_initial)
    assert result.reduction_percent == pytest.approx(expected, abs=1e-12)
