"""
Численная проверка элементарных неравенств, на которых держатся точные константы c₁ и c₃
"""
from typing import Callable, Dict, Iterator, Tuple, Union

import numpy as np
from tqdm import tqdm

import config
from exceptions import DomainError, NegativeInput
from logger import logging
from models import InequalityKind, ResidualSample

ArrayLike = Union[float, np.ndarray]

PMAX: float = 30.0
CHUNK: int = 250000
# Невязки выше этого порога считаются нарушением
TOLERANCE: float = 1e-12


def _check(p: ArrayLike, q: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(p < 0) or np.any(q < 0):
        raise NegativeInput("p и q должны быть неотрицательными")
    return p, q


def _out(value: np.ndarray) -> ArrayLike:
    return float(value) if value.ndim == 0 else value


def residual_sin(p: ArrayLike, q: ArrayLike) -> ArrayLike:
    """
    e^{−2p} + e^{−2q} + 2e^{−(p+q)}sin(p+q) − 2, неположительна при p, q ≥ 0
    """
    p, q = _check(p, q)
    s = p + q
    return _out(np.exp(-2 * p) + np.exp(-2 * q) + 2 * np.exp(-s) * np.sin(s) - 2)


def _cos_lhs(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    s = p + q
    return np.exp(-2 * p) + np.exp(-2 * q) - 2 * np.exp(-s) * np.cos(s)


def residual_cos3d(p: ArrayLike, q: ArrayLike) -> ArrayLike:
    """
    e^{−2p} + e^{−2q} − 2e^{−(p+q)}cos(p+q) − 2(p² + q²)
    """
    p, q = _check(p, q)
    return _out(_cos_lhs(p, q) - 2 * (p ** 2 + q ** 2))


def residual_cos(p: ArrayLike, q: ArrayLike) -> ArrayLike:
    """
    e^{−2p} + e^{−2q} − 2e^{−(p+q)}cos(p+q) − 2
    """
    p, q = _check(p, q)
    return _out(_cos_lhs(p, q) - 2)


def phi_derivative_3d(p0: ArrayLike, q: ArrayLike) -> ArrayLike:
    """
    Φ′(q) = −2e^{−2q} + 2e^{−(p₀+q)}(cos(p₀+q) + sin(p₀+q)) − 4q при q ≥ p₀ ≥ 0,
    где Φ(q) - левая часть минус правая часть неравенства с cos при фиксированном p₀.

    :raises DomainError: если q < p₀
    """
    p0, q = _check(p0, q)
    if np.any(q < p0):
        raise DomainError("Нужно q ≥ p₀")
    s = p0 + q
    return _out(-2 * np.exp(-2 * q) + 2 * np.exp(-s) * (np.cos(s) + np.sin(s)) - 4 * q)


RESIDUALS: Dict[InequalityKind, Callable[[np.ndarray, np.ndarray], ArrayLike]] = {
    InequalityKind.SIN_1D: residual_sin,
    InequalityKind.COS_3D: residual_cos3d,
    InequalityKind.COS_REMARK: residual_cos,
    InequalityKind.PHI_DERIVATIVE: phi_derivative_3d,
}


def _random_pairs(n: int, pmax: float, seed: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    rng = np.random.default_rng(seed)
    left = n
    while left > 0:
        size = min(CHUNK, left)
        pairs = rng.uniform(0.0, pmax, size=(size, 2))
        left -= size
        yield pairs[:, 0], pairs[:, 1]


def _grid_pairs(n: int, pmax: float, near_equality: bool) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    side = max(2, int(np.ceil(np.sqrt(n))))
    axes = [np.linspace(0.0, pmax, side)]
    if near_equality:
        # Окрестность (0, 0), где неравенство с cos почти обращается в равенство
        axes.append(np.concatenate(([0.0], np.geomspace(1e-8, 1.0, side - 1))))
    for axis in axes:
        rows = max(1, CHUNK // side)
        for start in range(0, side, rows):
            p, q = np.meshgrid(axis[start:start + rows], axis, indexing="ij")
            yield p.ravel(), q.ravel()


def max_residual(
    which: Union[str, InequalityKind],
    sampler: str = "random",
    n: int = 1000000,
    pmax: float = PMAX,
    seed: int = 0,
) -> ResidualSample:
    """
    Наибольшая невязка неравенства по n точкам (p, q) из [0, pmax]²

    :param which: sin_1d, cos_3d, cos_remark или phi_derivative
    :param sampler: random (равномерно, seed) или grid (равномерная сетка, для cos_3d
        дополнительно логарифмическая сетка около нуля)
    :param n: число точек
    :param pmax: сторона квадрата
    :param seed: зерно генератора
    :return: ResidualSample в точке максимума
    """
    try:
        kind = InequalityKind(which)
    except ValueError:
        raise DomainError(f"Неизвестное неравенство '{which}'")
    if n <= 0 or pmax <= 0:
        raise DomainError("n и pmax должны быть положительными")

    if sampler == "random":
        chunks = _random_pairs(n, pmax, seed)
    elif sampler == "grid":
        chunks = _grid_pairs(n, pmax, near_equality=kind == InequalityKind.COS_3D)
    else:
        raise DomainError(f"Неизвестный способ выборки '{sampler}'")

    residual = RESIDUALS[kind]
    best = ResidualSample(p=0.0, q=0.0, residual=-np.inf, which=kind)
    for p, q in tqdm(chunks, desc=kind.value, disable=not config.SPECTRAL_PROGRESS):
        if kind == InequalityKind.PHI_DERIVATIVE:
            p, q = np.minimum(p, q), np.maximum(p, q)
        values = np.asarray(residual(p, q))
        index = int(np.argmax(values))
        if values[index] > best.residual:
            best = ResidualSample(p=float(p[index]), q=float(q[index]), residual=float(values[index]), which=kind)

    if best.residual > TOLERANCE:
        logging.warning(f"Неравенство {kind.value} нарушено: невязка {best.residual:.3g} в ({best.p}, {best.q})")
    else:
        logging.info(f"Неравенство {kind.value}: максимальная невязка {best.residual:.3g}")
    return best
