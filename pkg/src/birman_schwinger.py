"""
Дискретизация оператора Бирмана-Швингера K_λ = |V|^{1/2}(Δ² − λ)⁻¹V_{1/2} по Нистрёму,
его нормы, определитель Фредгольма det(I + K_λ) и диагностика M_ε
"""
import warnings
from typing import Iterable, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor

from branch_arith import spectral_point
from exceptions import (
    DimensionUnsupported,
    DomainError,
    NoConvergence,
    NotRadial,
    WrongDimension,
)
from greens_functions import green_l2_norm_sq, point_kernel, s_wave_green
from logger import logging
from models import FredholmDeterminant, KernelMatrix, PositiveAxisProbe, Quadrature
from potentials import Potential, PotentialKind, integrate_values, truncation_radius
from quadrature import cube_quadrature, line_quadrature, radial_quadrature

POSITIVE_AXIS_EPS: Tuple[float, ...] = (1e-3, 1e-4, 1e-5)


def split_sqrt(values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    |V|^{1/2} и V_{1/2} = |V|^{1/2}·sgn V, sgn 0 = 0
    """
    magnitude = np.abs(values)
    root = np.sqrt(magnitude)
    with np.errstate(divide="ignore", invalid="ignore"):
        signed = np.where(magnitude > 0, values / np.where(root > 0, root, 1.0), 0.0)
    return root, signed


def _weighted(kernel: np.ndarray, values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    root, signed = split_sqrt(values)
    sw = np.sqrt(weights)
    return (sw * root)[:, None] * kernel * (signed * sw)[None, :]


def _check_quadrature(V: Potential, quad: Quadrature, geometry: str) -> None:
    if quad.dimension != V.dimension:
        raise WrongDimension(f"Квадратура для d={quad.dimension}, потенциал d={V.dimension}")
    if quad.geometry != geometry:
        raise DomainError(f"Нужна квадратура '{geometry}', получено '{quad.geometry}'")


def assemble(V: Potential, lam: complex, quad: Quadrature) -> KernelMatrix:
    """
    Матрица Нистрёма K_ij = √w_i |V|^{1/2}(x_i) G̃_λ(|x_i − x_j|) V_{1/2}(x_j) √w_j.

    d=1 собирается на прямой, d=3 и d=2 - через радиальное s-волновое ядро

    :param V: потенциал
    :param lam: λ вне [0, ∞)
    :param quad: квадратура
    :raises LambdaOnPositiveAxis: если λ ∈ [0, ∞)
    """
    if V.kind == PotentialKind.DELTA:
        raise DomainError("δ-потенциал собирается аналитически (delta_models)")
    if V.dimension == 3:
        return radial_reduce_3d(V, lam, quad)
    if V.dimension == 2:
        if not V.is_radial:
            raise DimensionUnsupported("При d=2 ядро собирается только для радиальных потенциалов")
        return radial_reduce_2d(V, lam, quad)
    if V.dimension != 1:
        raise DimensionUnsupported(f"Сборка ядра для d={V.dimension} не поддерживается")

    sp = spectral_point(lam)
    _check_quadrature(V, quad, "line")
    x = quad.nodes
    kernel = point_kernel(1, sp, np.abs(x[:, None] - x[None, :]))
    entries = _weighted(kernel, V.evaluate(x), quad.weights)
    return KernelMatrix(entries, x, quad.weights, sp, 1, "line")


def _radial(V: Potential, lam: complex, quad: Quadrature, d: int) -> KernelMatrix:
    if V.dimension != d:
        raise WrongDimension(f"Радиальная редукция для d={d}, потенциал d={V.dimension}")
    if not V.is_radial:
        raise NotRadial(f"{V!r}: s-волновая редукция требует радиального потенциала")
    sp = spectral_point(lam)
    _check_quadrature(V, quad, "half_line")
    r = quad.nodes
    kernel = s_wave_green(d, sp, r[:, None], r[None, :])
    entries = _weighted(kernel, V.radial_values(r), quad.weights)
    return KernelMatrix(entries, r, quad.weights, sp, d, "s_wave")


def radial_reduce_3d(V: Potential, lam: complex, quad: Quadrature) -> KernelMatrix:
    """
    s-волновое ядро на полуоси для f = r·g:
    g̃(r, r′) = (1/2k)[g_k − g_{−k}], g_k = (e^{−a|r−r′|} − e^{−a(r+r′)})/(2a), a = √(−k)
    """
    return _radial(V, lam, quad, 3)


def radial_reduce_2d(V: Potential, lam: complex, quad: Quadrature) -> KernelMatrix:
    """
    Радиальное ядро при d=2 на функциях √r·g(r)
    """
    return _radial(V, lam, quad, 2)


def hs_norm(K: KernelMatrix) -> float:
    """
    Норма Гильберта-Шмидта (Фробениуса)
    """
    return float(np.linalg.norm(K.entries))


def op_norm(K: KernelMatrix, tol: float = 1e-12, max_iter: int = 10000, seed: int = 0) -> float:
    """
    Наибольшее сингулярное число степенным методом для K*K

    :param tol: относительная точность
    :param max_iter: предел итераций
    :raises NoConvergence: если точность не достигнута за max_iter итераций
    """
    A = K.entries
    if not np.any(A):
        return 0.0

    rng = np.random.default_rng(seed)
    x = rng.standard_normal(A.shape[1]) + 1j * rng.standard_normal(A.shape[1])
    x /= np.linalg.norm(x)
    sigma = 0.0
    for _ in range(max_iter):
        y = A @ x
        sigma_next = float(np.linalg.norm(y))
        z = A.conj().T @ y
        size = np.linalg.norm(z)
        if size == 0.0:
            return sigma_next
        x = z / size
        if abs(sigma_next - sigma) <= tol * sigma_next:
            return sigma_next
        sigma = sigma_next
    raise NoConvergence(f"Степенной метод не сошелся за {max_iter} итераций")


def log_det(matrix: np.ndarray) -> FredholmDeterminant:
    """
    log|det A| и arg det A через LU с частичным выбором ведущего элемента

    :param matrix: квадратная матрица
    :return: FredholmDeterminant; singular=True, если диагональ U вырождена до машинной точности
    """
    matrix = np.asarray(matrix, dtype=complex)
    n = matrix.shape[0]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(matrix)
    diagonal = np.diag(lu)
    magnitudes = np.abs(diagonal)
    swaps = int(np.count_nonzero(piv != np.arange(n)))
    singular = bool(magnitudes.min() <= n * np.finfo(float).eps * magnitudes.max())

    with np.errstate(divide="ignore"):
        log_abs = float(np.sum(np.log(magnitudes)))
    total_arg = float(np.sum(np.angle(diagonal))) + np.pi * swaps
    arg = float(np.angle(np.exp(1j * total_arg)))
    return FredholmDeterminant(log_abs=log_abs, arg=arg, singular=singular)


def fredholm_det(K: KernelMatrix) -> FredholmDeterminant:
    """
    det(I + K_λ): нули соответствуют собственным значениям H_V
    """
    identity = np.eye(K.entries.shape[0], dtype=complex)
    return log_det(identity + K.entries)


def _region_quadrature(V: Potential, omega_radius: float) -> Quadrature:
    radius = min(omega_radius, truncation_radius(V))
    if V.dimension == 1:
        return line_quadrature(radius, 16, 10)
    if V.is_radial:
        return radial_quadrature(radius, 16, 10, V.dimension)
    return cube_quadrature(radius, 4, 8, V.dimension)


def m_eps_hs(V: Potential, omega_radius: float, lam: float, eps: float, d: int) -> Tuple[float, float]:
    """
    Квадрат нормы Гильберта-Шмидта M_ε = 𝟙_Ω|V|^{1/2}(Δ² − λ − iε)⁻¹: явная оценка сверху
    и прямое значение ∫|G̃|²·∫_Ω|V|

    d=1: (1/(8|k|³))[1/Re√(−k) + 1/Re√k]∫_Ω|V|
    d=2: (π/(64|k|²))[1/(Re√(−k))² + 1/(Re√k)²]∫_Ω|V|
    d=3: (1/(16π|k|²))[1/Re√(−k) + 1/Re√k]∫_Ω|V|

    :return: (closed_form, quadrature)
    """
    if lam <= 0:
        raise DomainError("λ должно быть положительным")
    if eps == 0:
        raise DomainError("ε должно быть ненулевым")
    if omega_radius <= 0:
        raise DomainError("Радиус Ω должен быть положительным")
    if V.dimension != d:
        raise WrongDimension(f"Потенциал d={V.dimension}, запрошено d={d}")

    if truncation_radius(V) == 0.0:
        return 0.0, 0.0
    mass = integrate_values(V, _region_quadrature(V, omega_radius), np.abs)
    if mass == 0.0:
        return 0.0, 0.0

    z = complex(lam, eps)
    sp = spectral_point(z)
    modulus = abs(sp.k)
    re_a, re_b = sp.sqrt_neg_k.real, sp.sqrt_k.real
    if d == 1:
        closed = (1.0 / re_a + 1.0 / re_b) / (8.0 * modulus ** 3) * mass
    elif d == 2:
        closed = np.pi * (1.0 / re_a ** 2 + 1.0 / re_b ** 2) / (64.0 * modulus ** 2) * mass
    else:
        closed = (1.0 / re_a + 1.0 / re_b) / (16.0 * np.pi * modulus ** 2) * mass
    direct = green_l2_norm_sq(d, z) * mass
    return float(closed), float(direct)


def positive_axis_probe(
    V: Potential,
    lam: float,
    quad: Quadrature,
    eps_values: Iterable[float] = POSITIVE_AXIS_EPS,
) -> PositiveAxisProbe:
    """
    ‖K_{λ+iε}‖ и log|det(I + K_{λ+iε})| для λ ≥ 0 при убывающих ε,
    линейная экстраполяция по двум наименьшим ε к ε → 0
    """
    if lam < 0:
        raise DomainError("Зонд предназначен для λ ≥ 0")
    eps_values = tuple(sorted((float(e) for e in eps_values), reverse=True))
    if len(eps_values) < 2 or eps_values[-1] <= 0:
        raise DomainError("Нужно хотя бы два положительных ε")

    norms, dets = [], []
    for eps in eps_values:
        K = assemble(V, complex(lam, eps), quad)
        norms.append(op_norm(K))
        dets.append(fredholm_det(K).log_abs)

    def extrapolate(values: list) -> float:
        (e1, v1), (e2, v2) = (eps_values[-2], values[-2]), (eps_values[-1], values[-1])
        return float(v2 - e2 * (v1 - v2) / (e1 - e2))

    probe = PositiveAxisProbe(
        lam=float(lam),
        eps_values=eps_values,
        op_norms=tuple(norms),
        log_abs_dets=tuple(dets),
        op_norm_limit=extrapolate(norms),
        log_abs_det_limit=extrapolate(dets),
    )
    logging.info(f"Зонд положительной оси λ={lam}: ‖K‖ → {probe.op_norm_limit:.6g}")
    return probe


def rank_one_limit(alpha: complex, lam: complex, d: int = 1) -> complex:
    """
    Предел det(I + K_λ) для α·δ_ε при ε → 0: 1 + α·G̃_λ(0) (d=3: 1 + 4πα·G̃_λ(0))
    """
    sp = spectral_point(lam)
    weight = 4.0 * np.pi if d == 3 else 1.0
    return complex(1.0 + weight * alpha * complex(point_kernel(d, sp, 0.0)))


def kernel_summary(K: KernelMatrix, tol: Optional[float] = None) -> dict:
    """
    Нормы и определитель одной матрицы для вывода CLI
    """
    det = fredholm_det(K)
    return {
        "lambda": K.point.lam,
        "size": int(K.entries.shape[0]),
        "hs_norm": hs_norm(K),
        "op_norm": op_norm(K, tol=tol or 1e-12),
        "log_abs_det": det.log_abs,
        "arg_det": det.arg,
        "singular": det.singular,
    }
