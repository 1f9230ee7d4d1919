"""
Комплексная арифметика с фиксированными ветвями корней и функция Макдональда K₀.

Все решения о ветвях принимаются здесь: главный корень с аргументом в (−π/2, π/2],
arg λ ∈ (−π, π], k² = λ, √k и √(−k) берутся главными.
"""
from typing import Tuple, Union

import numpy as np
from scipy import special

from exceptions import DomainError, LambdaOnPositiveAxis
from models import SpectralPoint

ArrayLike = Union[complex, float, np.ndarray]

# Ряд по возрастающим степеням используется при |z| < SERIES_RADIUS
SERIES_RADIUS: float = 2.0
SERIES_TERMS: int = 30


def _as_complex(z: ArrayLike) -> np.ndarray:
    """
    Приводит вход к complex и убирает отрицательный ноль у мнимой части,
    чтобы точки отрицательной полуоси всегда лежали на верхнем берегу разреза
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    out.real = z.real
    out.imag = z.imag + 0.0
    if not np.all(np.isfinite(out)):
        raise DomainError("Ожидалось конечное комплексное число")
    return out


def _unwrap(value: np.ndarray) -> ArrayLike:
    return complex(value) if np.ndim(value) == 0 else value


def principal_sqrt(z: ArrayLike) -> ArrayLike:
    """
    Главная ветвь квадратного корня: Re ≥ 0, на отрицательной полуоси Im > 0

    :param z: число или массив
    :return: корень той же формы
    """
    return _unwrap(np.sqrt(_as_complex(z)))


def _check_off_positive_axis(lam: np.ndarray) -> None:
    on_axis = (lam.imag == 0.0) & (lam.real >= 0.0)
    if np.any(on_axis):
        raise LambdaOnPositiveAxis(
            "λ лежит на [0, ∞): сдвиньте спектральный параметр на iε"
        )


def spectral_point(lam: complex) -> SpectralPoint:
    """
    Строит λ вместе с корнями k, √k, √(−k)

    :param lam: спектральный параметр вне [0, ∞)
    :return: SpectralPoint
    :raises LambdaOnPositiveAxis: если Im λ = 0 и Re λ ≥ 0
    """
    z = _as_complex(lam)
    _check_off_positive_axis(z)
    k = np.sqrt(z)
    return SpectralPoint(
        lam=complex(z),
        k=complex(k),
        sqrt_k=complex(np.sqrt(k)),
        sqrt_neg_k=complex(np.sqrt(_as_complex(-k))),
    )


def spectral_roots(lams: ArrayLike) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Векторный вариант spectral_point

    :return: массивы k, √k, √(−k)
    """
    z = _as_complex(lams)
    _check_off_positive_axis(z)
    k = np.sqrt(z)
    return k, np.sqrt(k), np.sqrt(_as_complex(-k))


def fourth_root_upper(lam: complex) -> complex:
    """
    Корень четвертой степени с Re k > 0, Im k > 0 (arg k ∈ (0, π/2))

    :param lam: λ вне [0, ∞)
    :return: k, k⁴ = λ
    """
    z = complex(_as_complex(lam))
    _check_off_positive_axis(np.asarray(z))
    theta = np.angle(z)
    if theta <= 0.0:
        theta += 2.0 * np.pi
    return complex(abs(z) ** 0.25 * np.exp(0.25j * theta))


def _k0_series(z: np.ndarray) -> np.ndarray:
    u = (0.5 * z) ** 2
    term = np.ones_like(z)
    i0 = np.ones_like(z)
    tail = np.zeros_like(z)
    harmonic = 0.0
    for n in range(1, SERIES_TERMS):
        term = term * u / (n * n)
        harmonic += 1.0 / n
        i0 = i0 + term
        tail = tail + harmonic * term
    return -(np.log(0.5 * z) + np.euler_gamma) * i0 + tail


def macdonald_k0(z: ArrayLike) -> ArrayLike:
    """
    Функция Макдональда K₀ комплексного аргумента, Re z > 0.

    При |z| < 2 - ряд по возрастающим степеням с постоянной Эйлера,
    при |z| ≥ 2 - scipy.special.kv (AMOS)

    :raises DomainError: если Re z ≤ 0
    """
    z = _as_complex(z)
    if np.any(z.real <= 0.0):
        raise DomainError("K₀ определена здесь только при Re z > 0")
    small = np.abs(z) < SERIES_RADIUS
    out = np.empty_like(z)
    if np.any(small):
        out[small] = _k0_series(z[small])
    if np.any(~small):
        out[~small] = special.kv(0, z[~small])
    return _unwrap(out)


def _odd_series(u: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    I₀ при аргументе² = −4u и нечетные части рядов Σ u^n/(n!)², Σ H_n u^n/(n!)²
    """
    term = np.ones_like(u)
    i0_neg = np.ones_like(u)
    s_odd = np.zeros_like(u)
    t_odd = np.zeros_like(u)
    harmonic = 0.0
    for n in range(1, SERIES_TERMS):
        term = term * u / (n * n)
        harmonic += 1.0 / n
        if n % 2:
            i0_neg = i0_neg - term
            s_odd = s_odd + term
            t_odd = t_odd + harmonic * term
        else:
            i0_neg = i0_neg + term
    return i0_neg, s_odd, t_odd


def macdonald_k0_difference(sqrt_neg_k: ArrayLike, sqrt_k: ArrayLike, r: ArrayLike) -> ArrayLike:
    """
    K₀(√(−k)·r) − K₀(√k·r) без потери точности при малых r.

    Логарифмические члены двух рядов сокращаются аналитически, поэтому разность
    конечна и при r = 0, где она равна ln √k − ln √(−k)

    :param sqrt_neg_k: √(−k) (Re ≥ 0)
    :param sqrt_k: √k
    :param r: расстояние ≥ 0
    """
    a = np.asarray(sqrt_neg_k, dtype=complex)
    b = np.asarray(sqrt_k, dtype=complex)
    r = np.asarray(r, dtype=float)
    a, b, r = np.broadcast_arrays(a, b, r)
    out = np.empty(a.shape, dtype=complex)

    small = np.abs(b) * r < SERIES_RADIUS
    if np.any(small):
        aa, bb, rr = a[small], b[small], r[small]
        u = (0.5 * bb * rr) ** 2
        i0_a, s_odd, t_odd = _odd_series(u)
        value = (np.log(bb) - np.log(aa)) * i0_a - 2.0 * t_odd
        nonzero = rr > 0.0
        log_term = np.zeros_like(u)
        log_term[nonzero] = np.log(0.5 * bb[nonzero] * rr[nonzero]) + np.euler_gamma
        out[small] = value + 2.0 * log_term * s_odd
    if np.any(~small):
        out[~small] = macdonald_k0(a[~small] * r[~small]) - macdonald_k0(b[~small] * r[~small])
    return _unwrap(out)
