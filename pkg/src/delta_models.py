"""
Точно решаемые δ-модели в d=1 и d=3 и их регуляризации δ_ε,
для которых собственное значение находится как нуль определителя сшивки
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

import config
from birman_schwinger import log_det
from branch_arith import fourth_root_upper
from enclosures import l1_disk
from exceptions import DomainError, NoRootInRegion, WrongDimension
from logger import logging
from models import DeltaSpectrum, FredholmDeterminant, ScanRegion
from spectral_locator import locate_function

EPS_MAX: float = 0.1
SERIES_TERMS: int = 60


def exact_1d(alpha: complex) -> DeltaSpectrum:
    """
    Спектр Δ² + αδ на прямой: k³ = 2^{−3/2}αe^{−iπ/4}, выбирается корень с Re k > 0, Im k > 0.
    Собственное значение существует тогда и только тогда, когда Re α < |Im α|

    :param alpha: сила δ-потенциала
    """
    alpha = complex(alpha)
    if not np.isfinite(alpha.real) or not np.isfinite(alpha.imag):
        raise DomainError("α должно быть конечным")
    if not alpha.real < abs(alpha.imag):
        return DeltaSpectrum(alpha=alpha, dimension=1)

    w = 2.0 ** -1.5 * alpha * np.exp(-0.25j * np.pi)
    theta = float(np.angle(w)) % (2.0 * np.pi)
    modulus = abs(w)
    k = modulus ** (1.0 / 3.0) * np.exp(1j * theta / 3.0)
    eigenvalue = modulus ** (4.0 / 3.0) * np.exp(4j * theta / 3.0)
    return DeltaSpectrum(alpha=alpha, dimension=1, eigenvalue=complex(eigenvalue), k=complex(k))


def exact_3d(alpha: complex) -> DeltaSpectrum:
    """
    Радиальный спектр Δ² + 4παδ в ℝ³: λ = −α⁴/4, k = −αe^{iπ/4}/√2
    (корень с Re k > 0, Im k > 0 для условия f″(0) − αf′(0) = 0).
    Существует тогда и только тогда, когда Re α < −|Im α|
    """
    alpha = complex(alpha)
    if not np.isfinite(alpha.real) or not np.isfinite(alpha.imag):
        raise DomainError("α должно быть конечным")
    if not alpha.real < -abs(alpha.imag):
        return DeltaSpectrum(alpha=alpha, dimension=3)
    k = -alpha * np.exp(0.25j * np.pi) / np.sqrt(2.0)
    return DeltaSpectrum(alpha=alpha, dimension=3, eigenvalue=complex(-0.25 * alpha ** 4), k=complex(k))


def boundary_sweep(d: int, thetas: Sequence[float]) -> List[DeltaSpectrum]:
    """
    Спектры для α = e^{iθ}: собственные значения лежат на окружности |λ| = 1/4
    """
    solver = {1: exact_1d, 3: exact_3d}.get(d)
    if solver is None:
        raise WrongDimension("δ-модель определена для d = 1 и d = 3")
    return [solver(np.exp(1j * theta)) for theta in thetas]


def eigenfunction_1d(spectrum: DeltaSpectrum, x: np.ndarray, order: int = 0) -> np.ndarray:
    """
    Производная порядка order собственной функции ψ(x) = e^{−k|x|} − i·e^{ik|x|}
    """
    if spectrum.k is None:
        raise DomainError(f"У α={spectrum.alpha} нет собственного значения")
    k = spectrum.k
    x = np.asarray(x, dtype=float)
    t = np.abs(x)
    right = (-k) ** order * np.exp(-k * t) - 1j * (1j * k) ** order * np.exp(1j * k * t)
    return np.where(x >= 0, right, (-1) ** order * right)


def jump_residual_1d(spectrum: DeltaSpectrum) -> float:
    """
    Относительная невязка условий в нуле: ψ′(0±) = 0 и ψ‴(0⁺) − ψ‴(0⁻) = −αψ(0)
    """
    k = spectrum.k
    if k is None:
        raise DomainError(f"У α={spectrum.alpha} нет собственного значения")
    psi0 = 1.0 - 1j
    first = -k - 1j * (1j * k)
    third_right = (-k) ** 3 - 1j * (1j * k) ** 3
    jump = 2.0 * third_right
    scale = max(abs(jump), abs(spectrum.alpha * psi0))
    return float(max(abs(first) / abs(k), abs(jump + spectrum.alpha * psi0) / scale))


def boundary_residual_3d(spectrum: DeltaSpectrum) -> float:
    """
    Невязка f(0) = 0 и f″(0) − αf′(0) = 0 для f(r) = e^{−kr} − e^{ikr}
    """
    k = spectrum.k
    if k is None:
        raise DomainError(f"У α={spectrum.alpha} нет собственного значения")
    f1 = -k - 1j * k
    f2 = k ** 2 - (1j * k) ** 2
    scale = max(abs(f2), abs(spectrum.alpha * f1))
    return float(abs(f2 - spectrum.alpha * f1) / scale)


def fundamental_system(m: complex, x: float, order: int) -> np.ndarray:
    """
    Производные порядка order базиса φ_j(x) = Σ_n m^n x^{4n+j}/(4n+j)!, j = 0..3,
    решений ψ'''' = m·ψ. Базис аналитичен по m и не вырождается при m → 0
    """
    values = np.zeros(4, dtype=complex)
    for j in range(4):
        source = j - order
        factor = 1.0 + 0j
        while source < 0:
            source += 4
            factor *= m
        term = x ** source / float(np.prod(np.arange(1, source + 1))) if source > 0 else 1.0 + 0j
        total = term
        power = source
        for _ in range(SERIES_TERMS):
            term = term * m * x ** 4 / ((power + 1) * (power + 2) * (power + 3) * (power + 4))
            power += 4
            total += term
            if abs(term) <= 1e-17 * abs(total):
                break
        values[j] = factor * total
    return values


def _exterior(x: float, order: int, decay: complex) -> complex:
    return decay ** order * np.exp(decay * x)


class MatchingDeterminant:
    """
    Определитель сшивки решений внутри и вне носителя δ_ε.

    d=1: 8×8, неизвестные - коэффициенты при e^{kx}, e^{−ikx} (x < −ε/2), φ_0..φ_3 (|x| < ε/2),
    e^{−kx}, e^{ikx} (x > ε/2); непрерывность ψ, ψ′, ψ″, ψ‴ в ±ε/2.
    d=3: 4×4 для f = r·g, внутри φ_1, φ_3 (f(0) = f″(0) = 0), снаружи e^{−kr}, e^{ikr}, сшивка в r = ε.

    Строки масштабируются постоянными множителями, найденными в опорной точке,
    поэтому определитель остается аналитической функцией λ
    """

    def __init__(self, d: int, alpha: complex, eps: float, reference: complex):
        if d not in (1, 3):
            raise WrongDimension("δ_ε-модель определена для d = 1 и d = 3")
        if not 0.0 < eps <= EPS_MAX:
            raise DomainError(f"ε должно лежать в (0, {EPS_MAX}], получено {eps}")
        self.d = d
        self.alpha = complex(alpha)
        self.eps = float(eps)
        # Высота ямы: α/ε при d=1, 3α/ε³ при d=3
        self.height = self.alpha / eps if d == 1 else 3.0 * self.alpha / eps ** 3
        self.row_scale = np.ones(8 if d == 1 else 4)
        raw = self.matrix(reference)
        self.row_scale = 1.0 / np.max(np.abs(raw), axis=1)

    def matrix(self, lam: complex) -> np.ndarray:
        k = fourth_root_upper(lam)
        m = complex(lam) - self.height
        if self.d == 1:
            rows = self._rows_1d(k, m)
        else:
            rows = self._rows_3d(k, m)
        return rows * self.row_scale[:, None]

    def _rows_1d(self, k: complex, m: complex) -> np.ndarray:
        left, right = -0.5 * self.eps, 0.5 * self.eps
        rows = np.zeros((8, 8), dtype=complex)
        for order in range(4):
            rows[order, 0] = -_exterior(left, order, k)
            rows[order, 1] = -_exterior(left, order, -1j * k)
            rows[order, 2:6] = fundamental_system(m, left, order)
            rows[4 + order, 2:6] = fundamental_system(m, right, order)
            rows[4 + order, 6] = -_exterior(right, order, -k)
            rows[4 + order, 7] = -_exterior(right, order, 1j * k)
        return rows

    def _rows_3d(self, k: complex, m: complex) -> np.ndarray:
        rows = np.zeros((4, 4), dtype=complex)
        for order in range(4):
            inside = fundamental_system(m, self.eps, order)
            rows[order, 0] = inside[1]
            rows[order, 1] = inside[3]
            rows[order, 2] = -_exterior(self.eps, order, -k)
            rows[order, 3] = -_exterior(self.eps, order, 1j * k)
        return rows

    def __call__(self, lam: complex) -> FredholmDeterminant:
        return log_det(self.matrix(lam))


def _exact(d: int, alpha: complex) -> DeltaSpectrum:
    return exact_1d(alpha) if d == 1 else exact_3d(alpha)


def default_region(d: int, alpha: complex) -> ScanRegion:
    """
    Квадрат вокруг круга радиуса 2|λ_exact| (или 2·C_d‖αδ‖^{4/(4−d)}, если точного значения нет)
    """
    exact = _exact(d, alpha)
    if exact.eigenvalue is not None:
        radius = 2.0 * abs(exact.eigenvalue)
    else:
        l1 = abs(alpha) * (4.0 * np.pi if d == 3 else 1.0)
        radius = 2.0 * l1_disk(d, l1).radius
    if radius == 0.0:
        raise DomainError("α = 0: область поиска пуста")
    return ScanRegion.around_disk(radius, eps_shift=1e-6 * radius)


def _delta_eps(d: int, alpha: complex, eps: float, region: Optional[ScanRegion]) -> complex:
    region = region or default_region(d, alpha)
    reference = 1j * region.re_range[1]
    determinant = MatchingDeterminant(d, alpha, eps, reference)
    candidates = locate_function(determinant, region, threads=1)
    if not candidates:
        raise NoRootInRegion(f"δ_ε (d={d}, α={alpha}, ε={eps}): нулей определителя сшивки нет")

    exact = _exact(d, alpha).eigenvalue
    if exact is not None:
        best = min(candidates, key=lambda c: abs(c.lam - exact))
    else:
        best = min(candidates, key=lambda c: c.residual_log_abs_det)
    logging.info(f"δ_ε (d={d}, α={alpha}, ε={eps}): λ={best.lam}")
    return best.lam


def delta_eps_1d(alpha: complex, eps: float, region: Optional[ScanRegion] = None) -> complex:
    """
    Собственное значение Δ² + αδ_ε на прямой как нуль 8×8 определителя сшивки

    :raises NoRootInRegion: если нуля в области нет
    """
    return _delta_eps(1, alpha, eps, region)


def delta_eps_3d(alpha: complex, eps: float, region: Optional[ScanRegion] = None) -> complex:
    """
    Радиальное собственное значение Δ² + 4παδ_ε в ℝ³ как нуль 4×4 определителя сшивки

    :raises NoRootInRegion: если нуля в области нет
    """
    return _delta_eps(3, alpha, eps, region)


def convergence_ladder(
    d: int,
    alpha: complex,
    eps_values: Sequence[float],
    threads: int = config.SPECTRAL_THREADS,
) -> pd.DataFrame:
    """
    Таблица (ε, λ_ε, |λ_ε − λ|) для CSV команды delta-eps
    """
    solver: Callable[[complex, float], complex] = delta_eps_1d if d == 1 else delta_eps_3d
    if d not in (1, 3):
        raise WrongDimension("δ_ε-модель определена для d = 1 и d = 3")
    exact = _exact(d, alpha).eigenvalue

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        eigenvalues = list(
            tqdm(
                executor.map(lambda eps: solver(alpha, eps), eps_values),
                total=len(eps_values),
                disable=not config.SPECTRAL_PROGRESS,
                desc="delta-eps",
            )
        )

    return pd.DataFrame(
        {
            "eps": [float(e) for e in eps_values],
            "eigenvalue_re": [lam.real for lam in eigenvalues],
            "eigenvalue_im": [lam.imag for lam in eigenvalues],
            "error": [abs(lam - exact) if exact is not None else np.nan for lam in eigenvalues],
        }
    )
