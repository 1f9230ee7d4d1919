import numpy as np
import pytest
from scipy import special

from branch_arith import (
    fourth_root_upper,
    macdonald_k0,
    macdonald_k0_difference,
    principal_sqrt,
    spectral_point,
    spectral_roots,
)
from exceptions import DomainError, LambdaOnPositiveAxis

LAMBDAS = [-1.0, -1 + 0.5j, 2 + 3j, -0.3 - 2j, 5 + 0.01j, 1e-6j, -1e4 + 1e-3j]


@pytest.mark.parametrize("z, expected", [(-1, 1j), (4, 2), (2j, 1 + 1j)])
def test_principal_sqrt_values(z, expected):
    assert principal_sqrt(z) == pytest.approx(expected, rel=1e-15)


def test_principal_sqrt_negative_zero_stays_on_upper_bank():
    assert principal_sqrt(complex(-1.0, -0.0)) == 1j


def test_principal_sqrt_array():
    z = np.array([-4.0, 9.0, -2j])
    roots = principal_sqrt(z)
    assert np.all(roots.real >= 0)
    assert np.allclose(roots ** 2, z, rtol=1e-15)


@pytest.mark.parametrize("lam", LAMBDAS)
def test_spectral_point_invariants(lam):
    sp = spectral_point(lam)
    assert abs(sp.k ** 2 - lam) <= 1e-14 * abs(lam)
    assert np.angle(sp.k) == pytest.approx(np.angle(complex(lam)) / 2, abs=1e-15)
    assert sp.sqrt_k.real >= 0 and sp.sqrt_neg_k.real >= 0
    assert abs(sp.sqrt_k ** 2 - sp.k) <= 1e-14 * abs(sp.k)
    assert abs(sp.sqrt_neg_k ** 2 + sp.k) <= 1e-14 * abs(sp.k)


def test_spectral_point_negative_axis():
    sp = spectral_point(-1.0)
    assert sp.k == pytest.approx(1j)


@pytest.mark.parametrize("lam", [0.0, 1.0, 3 + 0j, complex(2.0, -0.0)])
def test_spectral_point_rejects_positive_axis(lam):
    with pytest.raises(LambdaOnPositiveAxis):
        spectral_point(lam)


def test_spectral_point_rejects_nan():
    with pytest.raises(DomainError):
        spectral_point(complex(np.nan, 1.0))


def test_spectral_roots_matches_scalar():
    k, sqrt_k, sqrt_neg_k = spectral_roots(np.array(LAMBDAS, dtype=complex))
    for i, lam in enumerate(LAMBDAS):
        sp = spectral_point(lam)
        assert k[i] == pytest.approx(sp.k, rel=1e-15)
        assert sqrt_k[i] == pytest.approx(sp.sqrt_k, rel=1e-15)
        assert sqrt_neg_k[i] == pytest.approx(sp.sqrt_neg_k, rel=1e-15)


def test_spectral_roots_rejects_axis_point():
    with pytest.raises(LambdaOnPositiveAxis):
        spectral_roots(np.array([-1.0, 0.5]))


@pytest.mark.parametrize("lam", [-1.0, -1j, 1j, -3 + 4j, 2 - 0.1j])
def test_fourth_root_upper(lam):
    k = fourth_root_upper(lam)
    assert k.real > 0 and k.imag > 0
    assert abs(k ** 4 - lam) <= 1e-13 * abs(lam)


def test_fourth_root_upper_of_minus_one():
    assert fourth_root_upper(-1.0) == pytest.approx(np.exp(0.25j * np.pi), rel=1e-15)


@pytest.mark.parametrize("z", [0.1, 0.5 + 0.5j, 1.9j + 0.05, 1.5 - 1.2j, 2.0, 3 + 4j, 0.01 + 10j])
def test_macdonald_k0_matches_scipy(z):
    assert macdonald_k0(z) == pytest.approx(complex(special.kv(0, z)), rel=1e-12)


def test_macdonald_k0_rejects_left_half_plane():
    with pytest.raises(DomainError):
        macdonald_k0(-1 + 1j)


@pytest.mark.parametrize("lam", [-1.0, -1 + 0.5j, 2 + 3j, 0.5 - 0.2j])
@pytest.mark.parametrize("r", [0.05, 0.3, 1.5, 4.0])
def test_k0_difference_matches_direct(lam, r):
    sp = spectral_point(lam)
    direct = special.kv(0, sp.sqrt_neg_k * r) - special.kv(0, sp.sqrt_k * r)
    value = macdonald_k0_difference(sp.sqrt_neg_k, sp.sqrt_k, r)
    assert value == pytest.approx(complex(direct), rel=1e-10, abs=1e-14)


def test_k0_difference_on_diagonal():
    sp = spectral_point(-1.0)
    value = macdonald_k0_difference(sp.sqrt_neg_k, sp.sqrt_k, 0.0)
    assert value == pytest.approx(np.log(sp.sqrt_k) - np.log(sp.sqrt_neg_k), abs=1e-15)
    assert value == pytest.approx(0.5j * np.pi, abs=1e-15)
