import numpy as np
import pytest

from birman_schwinger import (
    assemble,
    fredholm_det,
    hs_norm,
    kernel_summary,
    log_det,
    m_eps_hs,
    op_norm,
    positive_axis_probe,
    radial_reduce_2d,
    radial_reduce_3d,
    rank_one_limit,
)
from branch_arith import spectral_point
from exceptions import DimensionUnsupported, DomainError, LambdaOnPositiveAxis, WrongDimension
from greens_functions import green_bound
from models import KernelMatrix
from potentials import default_quadrature, delta, delta_eps, gaussian_well, l1_norm, square_well
from quadrature import cube_quadrature, line_quadrature, radial_quadrature


def random_lambdas(n, seed):
    rng = np.random.default_rng(seed)
    radius = 10 ** rng.uniform(-1, 1.5, n)
    angle = rng.uniform(0.05, 2 * np.pi - 0.05, n)
    return radius * np.exp(1j * angle)


@pytest.mark.parametrize("lam, expected", [(-1.0, 1 - np.sqrt(2) / 4), (-0.25, 0.0)])
def test_rank_one_oracle_1d(lam, expected):
    V = delta_eps(1, -1.0, 1e-3)
    det = fredholm_det(assemble(V, lam, default_quadrature(V)))
    assert det.value == pytest.approx(rank_one_limit(-1.0, lam), abs=1e-4)
    assert det.value == pytest.approx(expected, abs=1e-4)


def test_rank_one_oracle_3d():
    V = delta_eps(3, -1.0, 1e-3)
    det = fredholm_det(assemble(V, -1.0, default_quadrature(V)))
    assert rank_one_limit(-1.0, -1.0, d=3) == pytest.approx(1 - np.sqrt(2) / 2, abs=1e-12)
    assert det.value == pytest.approx(1 - np.sqrt(2) / 2, abs=2e-3)


@pytest.mark.parametrize(
    "V",
    [
        gaussian_well(1, -1 + 0.5j),
        square_well(1, 2 - 1j, 0.7),
        square_well(3, -1 + 0.5j, 1.0),
        gaussian_well(3, 1 + 1j, 0.8),
    ],
    ids=["gauss_1d", "well_1d", "well_3d", "gauss_3d"],
)
def test_hilbert_schmidt_bound(V):
    quad = default_quadrature(V)
    l1 = l1_norm(V, quad)
    for lam in random_lambdas(20, seed=V.dimension):
        K = assemble(V, lam, quad)
        bound = green_bound(V.dimension, K.point) * l1
        assert hs_norm(K) <= bound * (1 + 1e-10)
        assert op_norm(K) <= hs_norm(K) * (1 + 1e-9)


@pytest.mark.parametrize("V", [square_well(1, -1 + 0.5j, 0.5), square_well(3, -2 + 1j, 1.0)])
def test_determinant_conjugation(V):
    quad = default_quadrature(V)
    lam = -1.5 + 0.7j
    det = fredholm_det(assemble(V, lam, quad))
    det_conj = fredholm_det(assemble(V.conjugate(), np.conj(lam), quad))
    assert det_conj.log_abs == pytest.approx(det.log_abs, abs=1e-12)
    assert det_conj.arg == pytest.approx(-det.arg, abs=1e-10)


def test_real_potential_gives_real_determinant():
    V = square_well(1, -1.0, 0.5)
    det = fredholm_det(assemble(V, -2.0, default_quadrature(V)))
    assert abs(det.value.imag) < 1e-12


def test_log_det_diagonal():
    det = log_det(np.diag([2.0, 3j]))
    assert det.log_abs == pytest.approx(np.log(6.0))
    assert det.arg == pytest.approx(np.pi / 2)
    assert not det.singular


def test_log_det_counts_row_swaps():
    det = log_det(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert det.log_abs == pytest.approx(0.0, abs=1e-15)
    assert det.value == pytest.approx(-1.0)


def test_log_det_singular():
    det = log_det(np.array([[1.0, 2.0], [2.0, 4.0]]))
    assert det.singular
    assert det.log_abs == -np.inf


def test_op_norm():
    n = 2
    K = KernelMatrix(np.diag([3.0, 1.0]).astype(complex), np.zeros(n), np.ones(n), spectral_point(-1.0), 1, "line")
    assert op_norm(K) == pytest.approx(3.0, rel=1e-9)
    assert hs_norm(K) == pytest.approx(np.sqrt(10.0))
    empty = KernelMatrix(np.zeros((n, n), dtype=complex), np.zeros(n), np.ones(n), spectral_point(-1.0), 1, "line")
    assert op_norm(empty) == 0.0


@pytest.mark.parametrize("d", [1, 2, 3])
@pytest.mark.parametrize("lam, eps", [(1.0, 0.1), (4.0, 1e-2), (0.3, -0.05)])
def test_m_eps_closed_form_is_upper_bound(d, lam, eps):
    V = square_well(d, -1 + 1j, 0.5)
    closed, direct = m_eps_hs(V, 1.0, lam, eps, d)
    assert direct > 0
    assert direct <= closed * (1 + 1e-6)


def test_m_eps_scales_with_mass():
    small, _ = m_eps_hs(square_well(1, -1.0, 0.5), 1.0, 1.0, 0.1, 1)
    large, _ = m_eps_hs(square_well(1, -2.0, 0.5), 1.0, 1.0, 0.1, 1)
    assert large == pytest.approx(2 * small, rel=1e-12)


def test_m_eps_restricts_to_omega():
    V = square_well(1, -1.0, 2.0)
    inside, _ = m_eps_hs(V, 0.5, 1.0, 0.1, 1)
    whole, _ = m_eps_hs(V, 2.0, 1.0, 0.1, 1)
    assert inside == pytest.approx(whole / 4, rel=1e-12)


def test_m_eps_errors():
    V = square_well(1, -1.0)
    with pytest.raises(DomainError):
        m_eps_hs(V, 1.0, -1.0, 0.1, 1)
    with pytest.raises(DomainError):
        m_eps_hs(V, 1.0, 1.0, 0.0, 1)
    with pytest.raises(DomainError):
        m_eps_hs(V, 0.0, 1.0, 0.1, 1)
    with pytest.raises(WrongDimension):
        m_eps_hs(V, 1.0, 1.0, 0.1, 3)


def test_positive_axis_probe():
    V = square_well(1, -1 + 0.5j, 0.5)
    limit = positive_axis_probe(V, 1.0, default_quadrature(V))
    assert limit.eps_values == (1e-3, 1e-4, 1e-5)
    assert len(limit.op_norms) == 3
    assert all(np.isfinite(limit.op_norms))
    assert np.isfinite(limit.op_norm_limit)
    with pytest.raises(DomainError):
        positive_axis_probe(V, -1.0, default_quadrature(V))
    with pytest.raises(DomainError):
        positive_axis_probe(V, 1.0, default_quadrature(V), eps_values=[1e-3])


def test_kernel_summary():
    V = square_well(1, -1.0, 0.5)
    summary = kernel_summary(assemble(V, -1 + 1j, default_quadrature(V)))
    assert set(summary) == {"lambda", "size", "hs_norm", "op_norm", "log_abs_det", "arg_det", "singular"}
    assert summary["size"] == 80
    assert summary["op_norm"] <= summary["hs_norm"] * (1 + 1e-9)


def test_assemble_errors():
    line = line_quadrature(1.0, 4, 8)
    with pytest.raises(LambdaOnPositiveAxis):
        assemble(square_well(1, -1.0), 1.0, line)
    with pytest.raises(DomainError):
        assemble(delta(1, -1.0), -1.0, line)
    with pytest.raises(DimensionUnsupported):
        assemble(gaussian_well(2, -1.0, anisotropy=(1.0, 2.0)), -1.0, line)
    with pytest.raises(WrongDimension):
        radial_reduce_3d(square_well(1, -1.0), -1.0, radial_quadrature(1.0, 4, 8, 3))
    with pytest.raises(WrongDimension):
        assemble(square_well(1, -1.0), -1.0, radial_quadrature(1.0, 4, 8, 3))
    with pytest.raises(WrongDimension):
        assemble(square_well(3, -1.0), -1.0, line_quadrature(1.0, 4, 8))
    with pytest.raises(DomainError):
        assemble(square_well(3, -1.0), -1.0, cube_quadrature(1.0, 2, 4, 3))


def test_assemble_2d_radial():
    V = square_well(2, -1.0, 1.0)
    K = assemble(V, -1 + 1j, radial_quadrature(1.0, 4, 8, 2))
    assert K.entries.shape == (32, 32)
    assert K.reduction == "s_wave"
    assert np.all(np.isfinite(K.entries))
    direct = radial_reduce_2d(V, -1 + 1j, radial_quadrature(1.0, 4, 8, 2))
    assert np.array_equal(direct.entries, K.entries)


@pytest.mark.parametrize("d, growth", [(1, 2 ** 1.75), (3, 2 ** 1.25)])
def test_m_eps_growth_as_eps_shrinks(d, growth):
    V = square_well(d, 1.0, 1.0)
    for eps in [1e-1, 1e-2, 1e-3]:
        closed, direct = m_eps_hs(V, 1.0, 1.0, eps, d)
        assert direct <= closed * (1 + 1e-6)
        halved, _ = m_eps_hs(V, 1.0, 1.0, eps / 2, d)
        assert halved / closed <= growth * 1.05
