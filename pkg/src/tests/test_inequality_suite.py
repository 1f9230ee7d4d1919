import numpy as np
import pytest

from exceptions import DomainError, NegativeInput
from inequality_suite import (
    TOLERANCE,
    max_residual,
    phi_derivative_3d,
    residual_cos,
    residual_cos3d,
    residual_sin,
)
from models import InequalityKind


def test_residual_values():
    assert residual_sin(0.0, 0.0) == 0.0
    assert residual_sin(1.0, 1.0) == pytest.approx(-1.48321, abs=1e-4)
    assert residual_cos3d(0.0, 0.0) == 0.0
    assert residual_cos3d(1.0, 0.0) == pytest.approx(-1.2622, abs=1e-3)
    assert residual_cos(0.0, 0.0) == pytest.approx(-2.0)
    assert phi_derivative_3d(0.0, 0.0) == pytest.approx(0.0)


def test_residuals_are_symmetric():
    rng = np.random.default_rng(7)
    p, q = rng.uniform(0, 10, (2, 1000))
    for residual in (residual_sin, residual_cos3d, residual_cos):
        assert np.allclose(residual(p, q), residual(q, p), rtol=0, atol=1e-15)


def test_scalar_and_array_inputs():
    assert isinstance(residual_sin(0.5, 0.25), float)
    assert residual_sin(np.array([0.5, 1.0]), np.array([0.25, 1.0])).shape == (2,)


@pytest.mark.parametrize("which", list(InequalityKind))
def test_random_sampler_finds_no_violation(which):
    sample = max_residual(which, sampler="random", n=1000000, pmax=30.0, seed=0)
    assert sample.which == which
    assert sample.residual <= TOLERANCE
    assert 0.0 <= sample.p <= 30.0 and 0.0 <= sample.q <= 30.0


@pytest.mark.parametrize("which", ["sin_1d", "cos_3d", "cos_remark"])
def test_grid_sampler_finds_no_violation(which):
    sample = max_residual(which, sampler="grid", n=250000)
    assert sample.residual <= TOLERANCE


def test_grid_sampler_reaches_equality_at_origin():
    sample = max_residual("cos_3d", sampler="grid", n=10000)
    assert sample.residual == pytest.approx(0.0, abs=1e-12)


def test_phi_derivative_uses_ordered_pairs():
    sample = max_residual("phi_derivative", n=50000, seed=3)
    assert sample.p <= sample.q


def test_max_residual_is_reproducible():
    first = max_residual("sin_1d", n=100000, seed=11)
    second = max_residual("sin_1d", n=100000, seed=11)
    assert first == second


def test_errors():
    with pytest.raises(NegativeInput):
        residual_sin(-1.0, 0.0)
    with pytest.raises(NegativeInput):
        residual_cos3d(np.array([0.0, 1.0]), np.array([1.0, -0.5]))
    with pytest.raises(DomainError):
        phi_derivative_3d(2.0, 1.0)
    with pytest.raises(DomainError):
        max_residual("tan_2d")
    with pytest.raises(DomainError):
        max_residual("sin_1d", sampler="sobol")
    with pytest.raises(DomainError):
        max_residual("sin_1d", n=0)
