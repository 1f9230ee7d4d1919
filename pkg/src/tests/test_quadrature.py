import numpy as np
import pytest

from exceptions import DomainError
from quadrature import (
    composite_rule,
    cube_quadrature,
    domain_measure,
    gauss_legendre,
    line_quadrature,
    radial_measure,
    radial_quadrature,
)


def test_gauss_legendre_weights():
    nodes, weights = gauss_legendre(5)
    assert weights.sum() == pytest.approx(2.0, rel=1e-15)
    assert np.all(np.abs(nodes) < 1)


def test_composite_rule_is_exact_for_polynomials():
    nodes, weights = composite_rule(0.0, 1.0, 4, 6)
    assert np.sum(weights * nodes ** 5) == pytest.approx(1 / 6, rel=1e-14)
    assert np.sum(weights * nodes ** 11) == pytest.approx(1 / 12, rel=1e-13)


@pytest.mark.parametrize("left, right, panels", [(1.0, 1.0, 2), (1.0, 0.0, 2), (0.0, 1.0, 0)])
def test_composite_rule_rejects_bad_input(left, right, panels):
    with pytest.raises(DomainError):
        composite_rule(left, right, panels, 4)


def test_gauss_legendre_rejects_zero_order():
    with pytest.raises(DomainError):
        gauss_legendre(0)


def test_line_quadrature():
    quad = line_quadrature(2.5, 8, 10)
    assert quad.size == 80
    assert quad.weights.sum() == pytest.approx(domain_measure(quad), rel=1e-12)
    assert np.all(quad.weights > 0)


@pytest.mark.parametrize("d", [2, 3])
def test_radial_quadrature_measure(d):
    quad = radial_quadrature(1.5, 4, 8, d)
    ball = np.sum(quad.weights * radial_measure(d, quad.nodes))
    assert ball == pytest.approx(domain_measure(quad), rel=1e-12)


def test_cube_quadrature():
    quad = cube_quadrature(1.0, 2, 4, 3)
    assert quad.nodes.shape == (512, 3)
    assert quad.weights.sum() == pytest.approx(8.0, rel=1e-12)
    assert np.sum(quad.weights * quad.nodes[:, 0] ** 2) == pytest.approx(8.0 / 3.0, rel=1e-12)
