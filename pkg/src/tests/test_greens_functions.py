import numpy as np
import pytest
from scipy import integrate

from branch_arith import spectral_point
from exceptions import DiagonalSingularity, DimensionUnsupported, DomainError, MissingC2, StencilTouchesDiagonal
from greens_functions import (
    C1_POINTWISE,
    C3_POINTWISE,
    DIAGONAL_THRESHOLD,
    biharmonic_green,
    biharmonic_kernel,
    bound_ratio,
    bound_ratios,
    estimate_c2,
    green_bound,
    green_l2_norm_sq,
    laplace_green,
    pde_residual,
    rollnik_green_bound,
    s_wave_green,
)
from models import GreenRegime

LAMBDAS = [-1 + 0.5j, 2 + 3j, -0.3 - 2j, 5 + 0.01j, 0.1 - 4j]


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("lam", LAMBDAS)
def test_conjugation_symmetry(d, lam):
    for r in (0.0, 0.5, 2.0):
        value = biharmonic_green(d, spectral_point(lam), r).value
        mirrored = biharmonic_green(d, spectral_point(np.conj(lam)), r).value
        assert mirrored == pytest.approx(np.conj(value), rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("lam", [-1.0, -1 + 0.5j, 2 + 3j])
@pytest.mark.parametrize("r", [0.3, 1.0, 2.5])
def test_resolvent_splitting(d, lam, r):
    sp = spectral_point(lam)
    split = (laplace_green(d, sp.k, r) - laplace_green(d, -sp.k, r)) / (2 * sp.k)
    assert biharmonic_green(d, sp, r).value == pytest.approx(split, rel=1e-9)


def test_laplace_green_diagonal():
    with pytest.raises(DiagonalSingularity):
        laplace_green(3, 1j, 0.0)
    assert laplace_green(1, -1.0, 0.0) == pytest.approx(0.5)


def test_diagonal_values_on_negative_axis():
    sp = spectral_point(-1.0)
    assert biharmonic_green(1, sp, 0.0).value == pytest.approx(np.sqrt(2) / 4, rel=1e-15)
    assert biharmonic_green(3, sp, 0.0).value == pytest.approx(C3_POINTWISE, rel=1e-14)
    assert abs(biharmonic_green(2, sp, 0.0).value) == pytest.approx(1 / 8, rel=1e-14)


def test_diagonal_regime_labels():
    sp = spectral_point(-1.0)
    assert biharmonic_green(3, sp, 0.0).regime == GreenRegime.DIAGONAL_SERIES
    assert biharmonic_green(3, sp, 1.0).regime == GreenRegime.GENERIC
    assert biharmonic_green(1, sp, 0.0).regime == GreenRegime.GENERIC


@pytest.mark.parametrize("lam", [-1.0, 3 - 1j, -0.5 + 2j])
def test_2d_regime_follows_k0_series(lam):
    sp = spectral_point(lam)
    crossover = 2.0 / abs(sp.sqrt_k)
    assert biharmonic_green(2, sp, 0.5 * crossover).regime == GreenRegime.DIAGONAL_SERIES
    assert biharmonic_green(2, sp, 0.999 * crossover).regime == GreenRegime.DIAGONAL_SERIES
    assert biharmonic_green(2, sp, 1.001 * crossover).regime == GreenRegime.GENERIC


@pytest.mark.parametrize("lam", [-1.0, 3 - 1j, -0.5 + 2j])
def test_3d_regime_switch_is_continuous(lam):
    sp = spectral_point(lam)
    crossover = DIAGONAL_THRESHOLD / abs(sp.sqrt_k)
    below = biharmonic_green(3, sp, crossover * (1 - 1e-12))
    above = biharmonic_green(3, sp, crossover * (1 + 1e-12))
    assert below.regime == GreenRegime.DIAGONAL_SERIES
    assert above.regime == GreenRegime.GENERIC
    assert abs(below.value - above.value) <= 1e-10 * abs(above.value)


def test_3d_diagonal_closed_form():
    sp = spectral_point(2 + 3j)
    expected = (sp.sqrt_k - sp.sqrt_neg_k) / (8 * np.pi * sp.k)
    assert biharmonic_green(3, sp, 0.0).value == pytest.approx(expected, rel=1e-14)


def test_2d_diagonal_continuity():
    sp = spectral_point(-1 + 0.5j)
    center = biharmonic_green(2, sp, 0.0).value
    assert biharmonic_green(2, sp, 1e-8).value == pytest.approx(center, abs=1e-12)


def test_bound_ratio_values():
    assert bound_ratio(1, spectral_point(-1.0), 0.0) == pytest.approx(1.0, rel=1e-14)
    assert bound_ratio(3, spectral_point(-1.0), 0.0) == pytest.approx(1.0, rel=1e-14)
    value = bound_ratio(1, spectral_point(1j), 3.0)
    assert 0.0 < value < 1.0


@pytest.mark.parametrize("d", [1, 3])
def test_pointwise_bound_random_sweep(d):
    rng = np.random.default_rng(2024 + d)
    n = 1000000
    theta = rng.uniform(-np.pi, np.pi, n)
    rho = 10.0 ** rng.uniform(-3, 3, n)
    lams = rho * np.exp(1j * theta)
    r = rng.uniform(0.0, 5.0, n) / rho ** 0.25
    r[:1000] = 0.0
    lams = np.append(lams, -1.0)
    r = np.append(r, 0.0)

    ratios = np.concatenate([bound_ratios(d, l, x) for l, x in zip(np.array_split(lams, 10), np.array_split(r, 10))])
    assert np.all(np.isfinite(ratios))
    assert ratios.max() <= 1 + 1e-10
    assert ratios.max() >= 0.999


def test_bound_ratios_rejects_planar_case():
    with pytest.raises(DimensionUnsupported):
        bound_ratios(2, np.array([-1.0]), np.array([0.0]))


def test_green_bound_constants():
    sp = spectral_point(-16.0)
    assert green_bound(1, sp) == pytest.approx(C1_POINTWISE / 8)
    assert green_bound(3, sp) == pytest.approx(C3_POINTWISE / 2)
    assert green_bound(2, sp, c2_estimate=0.2) == pytest.approx(0.05)
    with pytest.raises(MissingC2):
        green_bound(2, sp)


def test_distance_bound_holds():
    rng = np.random.default_rng(11)
    n = 20000
    lams = 10.0 ** rng.uniform(-2, 2, n) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    r = 10.0 ** rng.uniform(-3, 1, n)
    values = np.abs(biharmonic_kernel(3, lams, r))
    bound = 1.0 / (4 * np.sqrt(2) * np.pi * np.abs(lams) ** 0.5 * r)
    assert np.all(values <= bound * (1 + 1e-12))


def test_distance_bound_needs_positive_distance():
    sp = spectral_point(-1.0)
    assert rollnik_green_bound(sp, 2.0) == pytest.approx(1 / (8 * np.sqrt(2) * np.pi))
    with pytest.raises(DiagonalSingularity):
        rollnik_green_bound(sp, 0.0)


def test_pde_residual_second_order():
    sp = spectral_point(-1.0)
    coarse = pde_residual(1, sp, 2.0, 2e-2)
    fine = pde_residual(1, sp, 2.0, 1e-2)
    assert fine < 1e-4
    assert 3.5 < coarse / fine < 4.5


def test_pde_residual_stencil_guard():
    with pytest.raises(StencilTouchesDiagonal):
        pde_residual(1, spectral_point(-1.0), 0.05, 1e-2)
    with pytest.raises(DimensionUnsupported):
        pde_residual(3, spectral_point(-1.0), 2.0, 1e-2)


def test_negative_distance_rejected():
    with pytest.raises(DomainError):
        biharmonic_green(1, spectral_point(-1.0), -0.1)


@pytest.mark.parametrize("d, z", [(1, -1 + 1j), (1, 0.5 + 2j), (3, -1 + 1j), (3, -2 - 1j)])
def test_green_l2_norm_matches_direct_integral(d, z):
    sp = spectral_point(z)

    def integrand(r):
        value = abs(biharmonic_green(d, sp, r).value) ** 2
        return 2.0 * value if d == 1 else 4.0 * np.pi * r ** 2 * value

    direct = integrate.quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-11, limit=500)[0]
    assert green_l2_norm_sq(d, z) == pytest.approx(direct, rel=1e-7)


def test_s_wave_kernel_3d_is_spherical_average():
    sp = spectral_point(-1 + 0.5j)
    r, rp = 0.7, 1.3

    def integrand(t, part):
        distance = np.sqrt(r ** 2 + rp ** 2 - 2 * r * rp * t)
        value = biharmonic_green(3, sp, distance).value
        return value.real if part == "re" else value.imag

    average = 0.5 * complex(
        integrate.quad(integrand, -1, 1, args=("re",), epsabs=0.0, epsrel=1e-12)[0],
        integrate.quad(integrand, -1, 1, args=("im",), epsabs=0.0, epsrel=1e-12)[0],
    )
    assert complex(s_wave_green(3, sp, r, rp)) == pytest.approx(4 * np.pi * r * rp * average, rel=1e-9)


def test_s_wave_kernel_2d_is_circle_average():
    sp = spectral_point(2 - 1j)
    r, rp = 0.4, 1.1

    def integrand(phi, part):
        distance = np.sqrt(r ** 2 + rp ** 2 - 2 * r * rp * np.cos(phi))
        value = biharmonic_green(2, sp, distance).value
        return value.real if part == "re" else value.imag

    average = complex(
        integrate.quad(integrand, 0, 2 * np.pi, args=("re",), epsabs=0.0, epsrel=1e-12)[0],
        integrate.quad(integrand, 0, 2 * np.pi, args=("im",), epsabs=0.0, epsrel=1e-12)[0],
    ) / (2 * np.pi)
    expected = 2 * np.pi * np.sqrt(r * rp) * average
    assert complex(s_wave_green(2, sp, r, rp)) == pytest.approx(expected, rel=1e-9)


def test_s_wave_kernel_symmetry_and_boundary():
    sp = spectral_point(-2 + 1j)
    r = np.array([0.0, 0.3, 1.0, 2.0])
    kernel = s_wave_green(3, sp, r[:, None], r[None, :])
    assert np.allclose(kernel, kernel.T, rtol=1e-14, atol=0)
    assert np.all(kernel[0] == 0)
    with pytest.raises(DimensionUnsupported):
        s_wave_green(1, sp, r, r)


def test_estimate_c2_stabilizes():
    coarse = estimate_c2(64, 64, 2)
    fine = estimate_c2(64, 64, 3)
    assert coarse.value >= 0.125 * (1 - 1e-12)
    assert fine.value >= coarse.value
    assert fine.value - coarse.value <= 1e-3 * fine.value
    assert fine.evaluations > coarse.evaluations


def test_estimate_c2_grid_minimum():
    with pytest.raises(DomainError):
        estimate_c2(32, 64, 1)
