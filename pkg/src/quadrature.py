"""
Составные квадратуры Гаусса-Лежандра для отрезка, радиальной полуоси и куба
"""
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.special import roots_legendre

from exceptions import DomainError
from models import Quadrature

# Площадь единичной сферы S^{d−1}
SPHERE_AREA = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}


@lru_cache(maxsize=64)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Узлы и веса Гаусса-Лежандра на [−1, 1]
    """
    if order < 1:
        raise DomainError(f"Порядок квадратуры должен быть положительным, получено {order}")
    nodes, weights = roots_legendre(order)
    return nodes, weights


def composite_rule(left: float, right: float, panels: int, order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Составное правило: отрезок делится на panels равных панелей, на каждой Гаусс порядка order

    :return: узлы и веса
    """
    if not right > left:
        raise DomainError(f"Пустой отрезок интегрирования [{left}, {right}]")
    if panels < 1:
        raise DomainError(f"Число панелей должно быть положительным, получено {panels}")
    base_nodes, base_weights = gauss_legendre(order)
    edges = np.linspace(left, right, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    nodes = (mid[:, None] + half[:, None] * base_nodes[None, :]).ravel()
    weights = (half[:, None] * base_weights[None, :]).ravel()
    return nodes, weights


def line_quadrature(truncation: float, panels: int, order: int) -> Quadrature:
    """
    Квадратура на [−L, L] для d=1
    """
    nodes, weights = composite_rule(-truncation, truncation, panels, order)
    return Quadrature(nodes, weights, truncation, panels, order, "line", 1)


def radial_quadrature(truncation: float, panels: int, order: int, dimension: int) -> Quadrature:
    """
    Квадратура по радиальной переменной на (0, L). Веса не содержат меры |S^{d−1}| r^{d−1}:
    она добавляется там, где интегрируется по шару
    """
    nodes, weights = composite_rule(0.0, truncation, panels, order)
    return Quadrature(nodes, weights, truncation, panels, order, "half_line", dimension)


def cube_quadrature(truncation: float, panels: int, order: int, dimension: int = 3) -> Quadrature:
    """
    Тензорная квадратура на [−L, L]^d, узлы формы (N, d)
    """
    nodes_1d, weights_1d = composite_rule(-truncation, truncation, panels, order)
    grids = np.meshgrid(*([nodes_1d] * dimension), indexing="ij")
    weight_grids = np.meshgrid(*([weights_1d] * dimension), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=1)
    weights = np.prod(np.stack([w.ravel() for w in weight_grids], axis=1), axis=1)
    return Quadrature(nodes, weights, truncation, panels, order, "cube", dimension)


def radial_measure(dimension: int, r: np.ndarray) -> np.ndarray:
    """
    Плотность |S^{d−1}| r^{d−1} радиальной меры
    """
    return SPHERE_AREA[dimension] * np.asarray(r, dtype=float) ** (dimension - 1)


def domain_measure(quad: Quadrature) -> float:
    """
    Мера области, которую покрывает квадратура (длина, площадь шара или объем куба)
    """
    if quad.geometry == "line":
        return 2.0 * quad.truncation
    if quad.geometry == "cube":
        return (2.0 * quad.truncation) ** quad.dimension
    return float(SPHERE_AREA[quad.dimension] * quad.truncation ** quad.dimension / quad.dimension)
