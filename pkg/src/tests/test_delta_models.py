import numpy as np
import pytest

from delta_models import (
    MatchingDeterminant,
    boundary_residual_3d,
    boundary_sweep,
    convergence_ladder,
    default_region,
    delta_eps_1d,
    delta_eps_3d,
    eigenfunction_1d,
    exact_1d,
    exact_3d,
    fundamental_system,
    jump_residual_1d,
)
from exceptions import DomainError, NoRootInRegion, WrongDimension

THETAS = np.linspace(0.0, 2 * np.pi, 73)[:-1] + 0.01


def test_exact_1d():
    spectrum = exact_1d(-1.0)
    assert spectrum.has_eigenvalue
    assert spectrum.eigenvalue == pytest.approx(-0.25)
    assert spectrum.k == pytest.approx(np.exp(0.25j * np.pi) / np.sqrt(2))
    assert not exact_1d(1.0).has_eigenvalue
    assert not exact_1d(1.0 + 0.5j).has_eigenvalue


def test_exact_3d():
    spectrum = exact_3d(-1.0)
    assert spectrum.eigenvalue == pytest.approx(-0.25)
    assert spectrum.k == pytest.approx(np.exp(0.25j * np.pi) / np.sqrt(2))
    assert not exact_3d(-1.0 + 2j).has_eigenvalue
    with pytest.raises(DomainError):
        exact_3d(complex(np.nan, 0.0))


@pytest.mark.parametrize("d", [1, 3])
def test_boundary_sweep_lies_on_circle(d):
    for spectrum in boundary_sweep(d, THETAS):
        if spectrum.has_eigenvalue:
            assert abs(spectrum.eigenvalue) == pytest.approx(0.25, rel=1e-12)
            assert spectrum.k.real > 0 and spectrum.k.imag > 0
            assert spectrum.k ** 4 == pytest.approx(spectrum.eigenvalue, rel=1e-12)


def test_boundary_sweep_existence():
    spectra = boundary_sweep(1, THETAS)
    for theta, spectrum in zip(THETAS, spectra):
        assert spectrum.has_eigenvalue == (np.cos(theta) < abs(np.sin(theta)))
    spectra = boundary_sweep(3, THETAS)
    for theta, spectrum in zip(THETAS, spectra):
        assert spectrum.has_eigenvalue == (np.cos(theta) < -abs(np.sin(theta)))
    with pytest.raises(WrongDimension):
        boundary_sweep(2, THETAS)


@pytest.mark.parametrize("alpha", [-1.0, -2 + 1j, 0.5 + 3j, np.exp(0.6j * np.pi)])
def test_eigenfunction_1d(alpha):
    spectrum = exact_1d(alpha)
    assert jump_residual_1d(spectrum) < 1e-12
    x = np.array([-0.7, 0.3, 2.0])
    psi = eigenfunction_1d(spectrum, x)
    assert eigenfunction_1d(spectrum, x, order=4) == pytest.approx(spectrum.eigenvalue * psi, rel=1e-12)
    assert eigenfunction_1d(spectrum, np.array([-0.3]))[0] == pytest.approx(psi[1])
    assert abs(eigenfunction_1d(spectrum, np.array([200.0]))[0]) < 1e-6


def test_eigenfunction_without_eigenvalue():
    with pytest.raises(DomainError):
        eigenfunction_1d(exact_1d(1.0), np.array([0.0]))
    with pytest.raises(DomainError):
        jump_residual_1d(exact_1d(1.0))


@pytest.mark.parametrize("alpha", [-1.0, -2 + 1j, -3 - 0.5j])
def test_boundary_residual_3d(alpha):
    assert boundary_residual_3d(exact_3d(alpha)) < 1e-12


def test_fundamental_system_without_potential():
    x = 0.5
    assert fundamental_system(0.0, x, 0) == pytest.approx([1.0, x, x ** 2 / 2, x ** 3 / 6])
    assert fundamental_system(0.0, x, 2) == pytest.approx([0.0, 0.0, 1.0, x])


def test_fundamental_system_unit_mass():
    x = 0.8
    values = fundamental_system(1.0, x, 0)
    expected = [
        (np.cosh(x) + np.cos(x)) / 2,
        (np.sinh(x) + np.sin(x)) / 2,
        (np.cosh(x) - np.cos(x)) / 2,
        (np.sinh(x) - np.sin(x)) / 2,
    ]
    assert values == pytest.approx(expected, rel=1e-14)
    assert fundamental_system(1.0, x, 1)[0] == pytest.approx(expected[3], rel=1e-14)
    assert fundamental_system(1.0, x, 4) == pytest.approx(values, rel=1e-14)


def test_matching_determinant_errors():
    with pytest.raises(WrongDimension):
        MatchingDeterminant(2, -1.0, 0.01, 1j)
    with pytest.raises(DomainError):
        MatchingDeterminant(1, -1.0, 0.2, 1j)
    with pytest.raises(DomainError):
        MatchingDeterminant(1, -1.0, 0.0, 1j)


def test_default_region():
    region = default_region(1, -1.0)
    assert region.re_range == (-0.5, 0.5)
    assert region.contains(-0.25)
    with pytest.raises(DomainError):
        default_region(1, 0.0)


@pytest.mark.parametrize("d, tolerance", [(1, 0.005), (3, 0.01)])
def test_convergence_ladder(d, tolerance):
    table = convergence_ladder(d, -1.0, [1e-2, 5e-3, 2.5e-3, 1.25e-3], threads=1)
    assert list(table.columns) == ["eps", "eigenvalue_re", "eigenvalue_im", "error"]
    assert table["error"].iloc[-1] / 0.25 < tolerance
    assert table["error"].is_monotonic_decreasing


def test_convergence_ladder_complex_alpha():
    table = convergence_ladder(1, -2 + 1j, [1e-2, 5e-3], threads=2)
    exact = exact_1d(-2 + 1j).eigenvalue
    assert (table["error"] / abs(exact) < 0.01).all()


def test_repulsive_delta_eps_has_no_eigenvalue():
    with pytest.raises(NoRootInRegion):
        delta_eps_1d(1.0, 1e-2)
    with pytest.raises(WrongDimension):
        convergence_ladder(2, -1.0, [1e-2])


def test_delta_eps_3d_real_coupling():
    lam = delta_eps_3d(-1.0, 2.5e-3)
    assert abs(lam.imag) < 1e-6
    assert abs(lam + 0.25) / 0.25 < 0.02


def test_delta_eps_3d_complex_coupling_converges():
    alpha = np.exp(0.9j * np.pi)
    exact = exact_3d(alpha).eigenvalue
    errors = [abs(delta_eps_3d(alpha, eps) - exact) / abs(exact) for eps in (1e-2, 1e-3)]
    assert errors[1] < 0.005
    assert errors[1] < errors[0]


def test_delta_eps_3d_repulsive_has_no_root():
    with pytest.raises(NoRootInRegion):
        delta_eps_3d(1.0, 1e-2)
