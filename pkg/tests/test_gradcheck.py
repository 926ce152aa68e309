import numpy as np
import pytest

from bench.gradcheck import numerical_grads, relative_error, run_gradcheck
from config_manager import GradcheckConfig
from data_models import WindowConfig
from errors import KernelError


def test_default_settings_pass():
    report = run_gradcheck(42, GradcheckConfig())
    assert [case.name for case in report.cases] == [
        'd_input', 'd_theta.w', 'd_theta.bias', 'd_phi.w', 'd_phi.bias', 'd_omega.w', 'd_omega.bias']
    assert report.passed, [(c.name, c.max_abs_diff) for c in report.failures]


def test_other_seed_passes():
    assert run_gradcheck(7, GradcheckConfig()).passed


def test_impossible_tolerance_fails():
    report = run_gradcheck(42, GradcheckConfig(tol=1e-14))
    assert not report.passed


def test_rejects_non_positive_settings():
    with pytest.raises(KernelError):
        run_gradcheck(42, GradcheckConfig(eps=0.0))
    with pytest.raises(KernelError):
        run_gradcheck(42, GradcheckConfig(tol=-1.0))


def test_relative_error_floor():
    assert relative_error(np.zeros(3), np.zeros(3)) == 0.0
    assert relative_error(np.array([1.0]), np.array([1.1])) == pytest.approx(0.1 / 1.1)
    assert relative_error(np.array([1e-12]), np.array([0.0])) == pytest.approx(1e-4)


def test_numerical_grads_restore_parameters(rng):
    arrays = {'input': rng.uniform((1, 2, 3, 3))}
    for name in ('theta', 'phi', 'omega'):
        arrays[f"{name}.w"] = rng.uniform((2, 2))
        arrays[f"{name}.bias"] = np.zeros(2)
    before = {name: a.copy() for name, a in arrays.items()}
    upstream = rng.uniform((1, 2, 3, 3))
    grads = numerical_grads(arrays, upstream, WindowConfig(1), 1e-5)
    for name in arrays:
        np.testing.assert_array_equal(arrays[name], before[name])
    # with a single-slot window the output ignores theta and phi
    np.testing.assert_allclose(grads['theta.w'], 0.0, atol=1e-10)
    np.testing.assert_allclose(grads['omega.bias'], upstream.sum(axis=(0, 2, 3)), atol=1e-8)
