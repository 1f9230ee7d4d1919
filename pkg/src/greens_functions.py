"""
Функции Грина оператора Лапласа и бигармонического оператора в d = 1, 2, 3.

Резольвента раскладывается как (Δ² − z)⁻¹ = (1/2k)[(−Δ − k)⁻¹ − (−Δ + k)⁻¹], k² = z.
"""
from typing import Optional, Tuple

import numpy as np
from scipy import integrate, special

from branch_arith import (
    SERIES_RADIUS,
    ArrayLike,
    macdonald_k0,
    macdonald_k0_difference,
    principal_sqrt,
    spectral_roots,
)
from exceptions import (
    DiagonalSingularity,
    DimensionUnsupported,
    DomainError,
    LambdaOnPositiveAxis,
    MissingC2,
    StencilTouchesDiagonal,
)
from logger import logging
from models import C2Estimate, GreenRegime, GreenValue, SpectralPoint
from quadrature import SPHERE_AREA

# Точные константы поточечной оценки |G̃| ≤ c_d/|k|^{2−d/2}
C1_POINTWISE: float = 1.0 / (2.0 * np.sqrt(2.0))
C3_POINTWISE: float = 1.0 / (4.0 * np.sqrt(2.0) * np.pi)

# Порог перехода на ряд у диагонали
DIAGONAL_THRESHOLD: float = 1e-4


def _check_dimension(d: int) -> None:
    if d not in (1, 2, 3):
        raise DimensionUnsupported(f"Поддерживаются d = 1, 2, 3, получено d={d}")


def laplace_green(d: int, k: complex, r: float) -> complex:
    """
    Функция Грина (−Δ − k)⁻¹ как функция расстояния r

    :param d: размерность
    :param k: параметр вне [0, ∞)
    :param r: расстояние, при d ∈ {2, 3} строго положительное
    """
    _check_dimension(d)
    k = complex(k)
    if k.imag == 0.0 and k.real >= 0.0:
        raise LambdaOnPositiveAxis(f"k = {k} лежит на [0, ∞)")
    if r < 0:
        raise DomainError("Расстояние должно быть неотрицательным")
    if r == 0 and d != 1:
        raise DiagonalSingularity(f"G при d={d} сингулярна на диагонали")

    a = principal_sqrt(-k)
    if d == 1:
        return complex(np.exp(-a * r) / (2.0 * a))
    if d == 2:
        return complex(macdonald_k0(a * r)) / (2.0 * np.pi)
    return complex(np.exp(-a * r) / (4.0 * np.pi * r))


def _diagonal_mask(a: np.ndarray, r: np.ndarray) -> np.ndarray:
    # |√k| = |√(−k)|, поэтому достаточно одного модуля
    return np.abs(a) * r < DIAGONAL_THRESHOLD


def _kernel_3d(k: np.ndarray, a: np.ndarray, b: np.ndarray, r: np.ndarray) -> np.ndarray:
    diagonal = _diagonal_mask(a, r)
    delta = (b - a) * r
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        near = np.exp(-b * r) * np.expm1(delta)
        far = np.exp(-a * r) - np.exp(-b * r)
        generic = np.where(np.abs(delta) < 1.0, near, far) / (8.0 * np.pi * k * r)

    # (e^{−ar} − e^{−br})/r = Σ ((−a)^n − (−b)^n) r^{n−1}/n!
    series = np.zeros_like(k)
    power_a = np.ones_like(k)
    power_b = np.ones_like(k)
    r_power = np.ones_like(r)
    factorial = 1.0
    for n in range(1, 6):
        power_a = power_a * (-a)
        power_b = power_b * (-b)
        factorial *= n
        series = series + (power_a - power_b) * r_power / factorial
        r_power = r_power * r
    series = series / (8.0 * np.pi * k)
    return np.where(diagonal, series, generic)


def _kernel(d: int, k: np.ndarray, b: np.ndarray, a: np.ndarray, r: np.ndarray) -> np.ndarray:
    if d == 1:
        return (np.exp(-a * r) / (2.0 * a) - np.exp(-b * r) / (2.0 * b)) / (2.0 * k)
    if d == 2:
        return macdonald_k0_difference(a, b, r) / (4.0 * np.pi * k)
    return _kernel_3d(k, a, b, r)


def biharmonic_kernel(d: int, lams: ArrayLike, r: ArrayLike) -> np.ndarray:
    """
    Векторное вычисление G̃_λ(r) для массивов λ и r с общим broadcasting

    :param d: размерность
    :param lams: значения λ вне [0, ∞)
    :param r: расстояния ≥ 0
    :return: комплексный массив
    """
    _check_dimension(d)
    k, b, a = spectral_roots(lams)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("Расстояние должно быть неотрицательным")
    k, b, a, r = np.broadcast_arrays(k, b, a, r)
    return np.asarray(_kernel(d, k, b, a, r))


def point_kernel(d: int, sp: SpectralPoint, r: ArrayLike) -> np.ndarray:
    """
    G̃ в фиксированной спектральной точке для массива расстояний
    """
    _check_dimension(d)
    r = np.asarray(r, dtype=float)
    k = np.full(r.shape, sp.k)
    b = np.full(r.shape, sp.sqrt_k)
    a = np.full(r.shape, sp.sqrt_neg_k)
    return np.asarray(_kernel(d, k, b, a, r))


def biharmonic_green(d: int, sp: SpectralPoint, r: float) -> GreenValue:
    """
    Бигармоническая функция Грина G̃_λ(r), конечная и на диагонали

    :param d: размерность
    :param sp: спектральная точка
    :param r: расстояние ≥ 0
    :return: GreenValue с режимом вычисления
    """
    _check_dimension(d)
    if r < 0:
        raise DomainError("Расстояние должно быть неотрицательным")
    value = complex(point_kernel(d, sp, r))
    # Те же пороги, что и в ядре: ряд K₀ при d=2, разложение экспонент при d=3
    threshold = {2: SERIES_RADIUS, 3: DIAGONAL_THRESHOLD}.get(d, 0.0)
    regime = GreenRegime.GENERIC
    if abs(sp.sqrt_k) * r < threshold:
        regime = GreenRegime.DIAGONAL_SERIES
    return GreenValue(value=value, regime=regime)


def green_bound(d: int, sp: SpectralPoint, c2_estimate: Optional[float] = None) -> float:
    """
    Правая часть поточечной оценки c_d/|k|^{2−d/2}

    :param c2_estimate: ĉ₂ для d=2, например из estimate_c2
    """
    _check_dimension(d)
    modulus = abs(sp.k)
    if d == 1:
        return C1_POINTWISE / modulus ** 1.5
    if d == 3:
        return C3_POINTWISE / modulus ** 0.5
    if c2_estimate is None:
        raise MissingC2("Для d=2 нужна оценка ĉ₂ (команда estimate-c2)")
    return float(c2_estimate) / modulus


def bound_ratio(d: int, sp: SpectralPoint, r: float, c2_estimate: Optional[float] = None) -> float:
    """
    |G̃_λ(r)| / (c_d/|k|^{2−d/2}); не превосходит 1 при d ∈ {1, 3}
    """
    return abs(biharmonic_green(d, sp, r).value) / green_bound(d, sp, c2_estimate)


def bound_ratios(d: int, lams: np.ndarray, r: np.ndarray) -> np.ndarray:
    """
    Векторный bound_ratio для d ∈ {1, 3}
    """
    if d not in (1, 3):
        raise DimensionUnsupported("Векторная проверка оценки реализована для d = 1, 3")
    values = np.abs(biharmonic_kernel(d, lams, r))
    modulus = np.abs(np.asarray(lams, dtype=complex)) ** 0.5
    if d == 1:
        return values * modulus ** 1.5 / C1_POINTWISE
    return values * modulus ** 0.5 / C3_POINTWISE


def rollnik_green_bound(sp: SpectralPoint, r: float) -> float:
    """
    Оценка |G̃_λ(x, y)| ≤ 1/(4√2π|k||x − y|) в d=3
    """
    if r <= 0:
        raise DiagonalSingularity("Оценка через |x − y| не определена при r = 0")
    return 1.0 / (4.0 * np.sqrt(2.0) * np.pi * abs(sp.k) * r)


def pde_residual(d: int, sp: SpectralPoint, r: float, h: float) -> float:
    """
    Относительная невязка уравнения G̃'''' = λG̃ вне диагонали
    по центральной пятиточечной разностной схеме четвертой производной

    :param d: только 1
    :param r: точка, r > 10h
    :param h: шаг схемы
    """
    if d != 1:
        raise DimensionUnsupported("Разностная проверка реализована только для d=1")
    if h <= 0:
        raise DomainError("Шаг должен быть положительным")
    if r <= 10.0 * h:
        raise StencilTouchesDiagonal(f"r={r} ≤ 10h={10.0 * h}: шаблон задевает диагональ")

    stencil = r + h * np.arange(-2, 3)
    g = point_kernel(1, sp, stencil)
    fourth = (g[0] - 4.0 * g[1] + 6.0 * g[2] - 4.0 * g[3] + g[4]) / h ** 4
    target = sp.lam * g[2]
    return float(abs(fourth - target) / abs(target))


def s_wave_green(d: int, sp: SpectralPoint, r: ArrayLike, rp: ArrayLike) -> np.ndarray:
    """
    Радиальное ядро на полуоси.

    d=3: g̃ = (1/2k)[g_k − g_{−k}], g_k(r, r′) = (e^{−a|r−r′|} − e^{−a(r+r′)})/(2a), a = √(−k)
    (метод отражений, f(0) = 0), связь с полным ядром: g̃ = 4π r r′ ⟨G̃⟩_{S²}.

    d=2: g̃ = √(r r′)(1/2k)[I₀(a r<)K₀(a r>) − I₀(b r<)K₀(b r>)], b = √k,
    связь с полным ядром: g̃ = 2π√(r r′)⟨G̃⟩_{S¹}.
    """
    r = np.asarray(r, dtype=float)
    rp = np.asarray(rp, dtype=float)
    r, rp = np.broadcast_arrays(r, rp)
    a, b, k = sp.sqrt_neg_k, sp.sqrt_k, sp.k
    lower = np.minimum(r, rp)
    upper = np.maximum(r, rp)

    if d == 3:
        def images(root: complex) -> np.ndarray:
            return np.exp(-root * (upper - lower)) * (-np.expm1(-2.0 * root * lower)) / (2.0 * root)

        return (images(a) - images(b)) / (2.0 * k)

    if d == 2:
        def bessel_pair(root: complex) -> np.ndarray:
            inner = root * lower
            outer = root * upper
            with np.errstate(invalid="ignore", over="ignore"):
                scaled = special.ive(0, inner) * special.kve(0, outer)
                return scaled * np.exp(np.abs(inner.real) - outer)

        return np.sqrt(r * rp) * (bessel_pair(a) - bessel_pair(b)) / (2.0 * k)

    raise DimensionUnsupported(f"Радиальное ядро определено для d = 2, 3, получено d={d}")


def green_l2_norm_sq(d: int, z: complex) -> float:
    """
    ∫|G̃_z|² по ℝ^d, вычисленный через преобразование Фурье:
    |S^{d−1}|(2π)^{−d} ∫₀^∞ p^{d−1}/|p⁴ − z|² dp
    """
    _check_dimension(d)
    z = complex(z)
    if z.imag == 0.0 and z.real >= 0.0:
        raise LambdaOnPositiveAxis("Норма не определена на [0, ∞)")

    def integrand(p: float) -> float:
        return p ** (d - 1) / abs(p ** 4 - z) ** 2

    peak = abs(z) ** 0.25
    edges = [0.0, 0.5 * peak, peak, 2.0 * peak]
    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        total += integrate.quad(integrand, left, right, epsabs=0.0, epsrel=1e-11, limit=500)[0]
    total += integrate.quad(integrand, edges[-1], np.inf, epsabs=0.0, epsrel=1e-11, limit=500)[0]
    return float(SPHERE_AREA[d] * (2.0 * np.pi) ** (-d) * total)


def _slice_values(thetas: np.ndarray, s: np.ndarray) -> np.ndarray:
    """
    |k|·|G̃_λ(s)| на срезе |k| = 1, λ = e^{iθ}
    """
    theta_grid, s_grid = np.meshgrid(thetas, s, indexing="ij")
    lams = np.exp(1j * theta_grid)
    return np.abs(biharmonic_kernel(2, lams, s_grid))


def _c2_grid(center_theta: float, center_s: float, half_theta: float, half_s: float,
             arg_grid: int, radius_grid: int, smax: float) -> Tuple[np.ndarray, np.ndarray]:
    thetas = np.linspace(center_theta - half_theta, center_theta + half_theta, arg_grid)
    thetas = thetas[(thetas > -np.pi) & (thetas <= np.pi) & (thetas != 0.0)]
    s = np.linspace(max(0.0, center_s - half_s), min(smax, center_s + half_s), radius_grid)
    return thetas, s


def estimate_c2(arg_grid: int, radius_grid: int, refinement_levels: int, smax: float = 40.0) -> C2Estimate:
    """
    Оценка снизу для c₂: максимум |k|·|G̃_λ| по (arg λ, s) ∈ (−π, π] × [0, smax]
    при |k| = 1 с диадическим уточнением вокруг текущего максимума

    :param arg_grid: число узлов по arg λ
    :param radius_grid: число узлов по s
    :param refinement_levels: число уровней уточнения
    :return: C2Estimate
    """
    if arg_grid < 64 or radius_grid < 64:
        raise DomainError("Сетки для оценки c₂ должны быть не меньше 64")
    if refinement_levels < 0:
        raise DomainError("Число уровней уточнения не может быть отрицательным")

    thetas = np.linspace(-np.pi, np.pi, arg_grid + 1)[1:]
    thetas = thetas[thetas != 0.0]
    s = np.linspace(0.0, smax, radius_grid)

    # Точка arg λ = π, s = 0 всегда входит в выборку, значение в ней 1/8
    best_value = float(_slice_values(np.array([np.pi]), np.array([0.0]))[0, 0])
    best_theta, best_s = np.pi, 0.0
    evaluations = 1

    half_theta = np.pi
    half_s = 0.5 * smax
    for level in range(refinement_levels + 1):
        values = _slice_values(thetas, s)
        evaluations += values.size
        i, j = np.unravel_index(int(np.argmax(values)), values.shape)
        if values[i, j] > best_value:
            best_value = float(values[i, j])
            best_theta, best_s = float(thetas[i]), float(s[j])
        logging.info(f"c₂: уровень {level}, максимум {best_value:.12g} при θ={best_theta:.6g}, s={best_s:.6g}")

        half_theta = 4.0 * np.pi / arg_grid * 2.0 ** (-level)
        half_s = 2.0 * smax / (radius_grid - 1) * 2.0 ** (-level)
        thetas, s = _c2_grid(best_theta, best_s, half_theta, half_s, arg_grid, radius_grid, smax)

    return C2Estimate(value=best_value, arg_lambda=best_theta, s=best_s, evaluations=evaluations)
