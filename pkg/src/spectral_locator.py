"""
Поиск кандидатов в собственные значения как нулей λ ↦ det(I + K_λ)
и исследование режима слабой связи
"""
import cmath
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence

import numpy as np
import pandas as pd
from scipy import optimize
from tqdm import tqdm

import config
from birman_schwinger import assemble, fredholm_det
from enclosures import disks_for_potential, l1_disk, verify
from exceptions import (
    DivergedOutOfRegion,
    DomainError,
    EmptySpectrum,
    LambdaOnPositiveAxis,
    NoConvergence,
)
from logger import logging
from models import EigenvalueCandidate, FredholmDeterminant, NormReport, Quadrature, ScanRegion, ScanResult, WeakCouplingFit
from potentials import Potential, default_quadrature, l1_norm, norm_report

DetFunction = Callable[[complex], FredholmDeterminant]

# Кандидат принимается при |det| ≤ 1e−8
RESIDUAL_GATE: float = float(np.log(1e-8))
MAX_ITER: int = 100
STEP_TOL: float = 1e-10
DEDUPE_RADIUS: float = 1e-6
# Допустимый выход итераций Мюллера за область сканирования (доля размера области)
REGION_SLACK: float = 0.5

ONE_SIDED_LABEL = "candidate (one-sided principle only)"


def determinant_function(V: Potential, quad: Quadrature) -> DetFunction:
    """
    λ ↦ det(I + K_λ) для фиксированных потенциала и квадратуры
    """
    return lambda lam: fredholm_det(assemble(V, lam, quad))


def _grid(region: ScanRegion) -> np.ndarray:
    re = np.linspace(region.re_range[0], region.re_range[1], region.grid[0])
    im = np.linspace(region.im_range[0], region.im_range[1], region.grid[1])
    lambdas = re[None, :] + 1j * im[:, None]
    on_axis = (lambdas.imag == 0.0) & (lambdas.real >= 0.0)
    return np.where(on_axis, lambdas + 1j * region.eps_shift, lambdas)


def _strict_minima(field: np.ndarray) -> np.ndarray:
    padded = np.pad(field, 1, constant_values=np.inf)
    rows, cols = field.shape
    is_min = np.ones(field.shape, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbour = padded[1 + di: 1 + di + rows, 1 + dj: 1 + dj + cols]
            is_min &= field < neighbour
    return is_min


def scan_function(det_fn: DetFunction, region: ScanRegion, threads: int = config.SPECTRAL_THREADS) -> ScanResult:
    """
    Значения log|det| на сетке области; строгие локальные минимумы - затравки

    :param det_fn: λ ↦ FredholmDeterminant
    :param region: область сканирования
    :param threads: число потоков
    :return: ScanResult, затравки упорядочены по глубине минимума
    """
    lambdas = _grid(region)
    flat = lambdas.ravel()
    logging.info(f"Сканирование {region.grid[0]}x{region.grid[1]}: Re {region.re_range}, Im {region.im_range}")

    def log_abs(lam: complex) -> float:
        return det_fn(complex(lam)).log_abs

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        values = list(
            tqdm(executor.map(log_abs, flat), total=flat.size, disable=not config.SPECTRAL_PROGRESS, desc="scan")
        )
    field = np.asarray(values, dtype=float).reshape(lambdas.shape)

    minima = np.argwhere(_strict_minima(field))
    order = sorted(range(len(minima)), key=lambda i: (field[tuple(minima[i])], i))
    seeds = [complex(lambdas[tuple(minima[i])]) for i in order]
    return ScanResult(lambdas=lambdas, log_abs_det=field, seeds=seeds)


def det_scan(V: Potential, region: ScanRegion, quad: Quadrature) -> ScanResult:
    """
    Сетка (λ, log|det(I + K_λ)|) с отмеченными локальными минимумами
    """
    return scan_function(determinant_function(V, quad), region)


def _off_axis(lam: complex) -> complex:
    if lam.imag == 0.0 and lam.real >= 0.0:
        return complex(lam.real, 1e-12 * max(1.0, abs(lam)))
    return lam


def _on_positive_axis(lam: complex) -> bool:
    return lam.real >= 0.0 and abs(lam.imag) <= 1e-6 * max(1.0, abs(lam))


def refine_function(
    det_fn: DetFunction,
    seed: complex,
    region: Optional[ScanRegion] = None,
    max_iter: int = MAX_ITER,
) -> EigenvalueCandidate:
    """
    Уточнение нуля методом Мюллера по трем точкам seed − h, seed + h, seed

    :param det_fn: λ ↦ FredholmDeterminant
    :param seed: начальное приближение
    :param region: область; выход итераций за нее, расширенную на 50%, - расходимость
    :raises NoConvergence: если сходимость не достигнута за max_iter итераций
    :raises DivergedOutOfRegion: если итерации покинули область
    """
    seed = complex(seed)

    def evaluate(lam: complex):
        try:
            det = det_fn(_off_axis(lam))
        except LambdaOnPositiveAxis:
            det = det_fn(lam + 1e-12j)
        return det.value, det.log_abs

    h = 1e-3 * abs(seed) + 1e-12
    x0, x1, x2 = seed - h, seed + h, seed
    (f0, _), (f1, _), (f2, residual) = evaluate(x0), evaluate(x1), evaluate(x2)

    for iteration in range(1, max_iter + 1):
        if f2 == 0:
            break
        h1, h2 = x1 - x0, x2 - x1
        if h1 == 0 or h2 == 0 or h1 + h2 == 0:
            raise NoConvergence("Вырожденные узлы метода Мюллера")
        d1 = (f1 - f0) / h1
        d2 = (f2 - f1) / h2
        a = (d2 - d1) / (h2 + h1)
        b = a * h2 + d2
        root = cmath.sqrt(b * b - 4.0 * a * f2)
        denominator = b + root if abs(b + root) >= abs(b - root) else b - root
        step = -2.0 * f2 / denominator if denominator != 0 else h2
        x3 = x2 + step

        if not cmath.isfinite(x3):
            raise NoConvergence("Итерации Мюллера дали нечисловое значение")
        if region is not None and not region.contains(x3, margin=REGION_SLACK):
            raise DivergedOutOfRegion(f"Итерация λ={x3} покинула область")

        x0, x1, x2 = x1, x2, x3
        f0, f1 = f1, f2
        f2, residual = evaluate(x3)
        if abs(step) <= STEP_TOL * max(1.0, abs(x3)):
            break
    else:
        raise NoConvergence(f"Метод Мюллера не сошелся за {max_iter} итераций от λ={seed}")

    accepted = residual <= RESIDUAL_GATE
    label = ONE_SIDED_LABEL if _on_positive_axis(x2) else "eigenvalue candidate"
    return EigenvalueCandidate(
        lam=complex(x2),
        residual_log_abs_det=float(residual),
        refine_iters=iteration,
        accepted=bool(accepted),
        label=label,
    )


def refine(V: Potential, seed_lambda: complex, quad: Quadrature, region: Optional[ScanRegion] = None) -> EigenvalueCandidate:
    """
    Уточнение затравки det_scan методом Мюллера
    """
    return refine_function(determinant_function(V, quad), seed_lambda, region)


def dedupe(candidates: Sequence[EigenvalueCandidate]) -> List[EigenvalueCandidate]:
    """
    Склеивает кандидатов на относительном расстоянии ≤ 1e−6, оставляя меньшую невязку
    """
    kept: List[EigenvalueCandidate] = []
    for candidate in sorted(candidates, key=lambda c: c.residual_log_abs_det):
        duplicate = any(
            abs(candidate.lam - other.lam) <= DEDUPE_RADIUS * max(abs(candidate.lam), abs(other.lam), 1e-300)
            for other in kept
        )
        if not duplicate:
            kept.append(candidate)
    return sorted(kept, key=lambda c: (c.lam.real, c.lam.imag))


def locate_function(
    det_fn: DetFunction,
    region: ScanRegion,
    threads: int = config.SPECTRAL_THREADS,
) -> List[EigenvalueCandidate]:
    """
    Сканирование, уточнение всех затравок и склейка дубликатов.
    Возвращаются только принятые кандидаты внутри области
    """
    scan = scan_function(det_fn, region, threads)

    def attempt(seed: complex) -> Optional[EigenvalueCandidate]:
        try:
            return refine_function(det_fn, seed, region)
        except (NoConvergence, DivergedOutOfRegion) as e:
            logging.warning(f"Затравка λ={seed} отброшена: {e}")
            return None

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        results = list(executor.map(attempt, scan.seeds))

    accepted = []
    for candidate in results:
        if candidate is None:
            continue
        if not candidate.accepted:
            logging.warning(f"Кандидат {candidate} не прошел порог невязки")
            continue
        if not region.contains(candidate.lam):
            continue
        accepted.append(candidate)
    candidates = dedupe(accepted)
    logging.info(f"Найдено кандидатов: {len(candidates)} из {len(scan.seeds)} затравок")
    return candidates


def locate(
    V: Potential,
    region: ScanRegion,
    quad: Quadrature,
    norms: Optional[NormReport] = None,
    threads: int = config.SPECTRAL_THREADS,
) -> List[EigenvalueCandidate]:
    """
    Кандидаты в собственные значения с отчетом о принадлежности всем применимым кругам
    """
    candidates = locate_function(determinant_function(V, quad), region, threads)
    disks = disks_for_potential(V, norms or norm_report(V, quad))
    for candidate in candidates:
        candidate.enclosure_report = verify([candidate], disks).entries
    return candidates


def _real_det(V: Potential, quad: Quadrature, lam: float) -> float:
    return fredholm_det(assemble(V, complex(lam, 0.0), quad)).value.real


def ground_state(V: Potential, quad: Quadrature, radius: float, points: int = 80) -> float:
    """
    Нижнее собственное значение вещественного неположительного потенциала:
    первая смена знака det(I + K_λ) при движении от −radius к нулю, уточненная методом Брента

    :raises EmptySpectrum: если смены знака нет
    """
    for _ in range(6):
        if _real_det(V, quad, -radius) > 0:
            break
        radius *= 4.0
    else:
        raise EmptySpectrum("Определитель не положителен даже далеко на отрицательной полуоси")

    lams = -radius * np.geomspace(1.0, 1e-4, points)
    previous = _real_det(V, quad, lams[0])
    for left, right in zip(lams[:-1], lams[1:]):
        current = _real_det(V, quad, right)
        if previous > 0 >= current:
            return float(
                optimize.brentq(
                    lambda lam: _real_det(V, quad, lam),
                    left,
                    right,
                    xtol=radius * 1e-13,
                    rtol=1e-14,
                    maxiter=200,
                )
            )
        previous = current
    raise EmptySpectrum(f"На [−{radius:.3g}, −{radius * 1e-4:.3g}] нет собственного значения")


def weak_coupling_fit(
    V: Potential,
    betas: Sequence[float],
    quad: Optional[Quadrature] = None,
) -> WeakCouplingFit:
    """
    Нижнее собственное значение H_{βV} для каждого β и подгонка log|λ| = p·log β + log C

    :param V: вещественный неположительный потенциал
    :param betas: значения константы связи
    :return: показатель p, константа C и таблица по β
    """
    if V.dimension not in (1, 2, 3):
        raise DomainError(f"Слабая связь для d={V.dimension} не поддерживается")
    if len(betas) < 2 or min(betas) <= 0:
        raise DomainError("Нужно хотя бы два положительных β")

    quad = quad or default_quadrature(V)
    values = V.evaluate(quad.nodes) if quad.geometry != "half_line" else V.radial_values(quad.nodes)
    if np.any(np.abs(values.imag) > 0) or np.any(values.real > 0):
        raise DomainError("Потенциал слабой связи должен быть вещественным и неположительным")
    l1 = l1_norm(V, quad)
    if l1 == 0.0:
        raise EmptySpectrum("Нулевой потенциал не имеет собственных значений")

    rows = []
    for beta in tqdm(betas, disable=not config.SPECTRAL_PROGRESS, desc="weak coupling"):
        predicted = l1_disk(V.dimension, beta * l1).radius
        lam = ground_state(V.scaled(beta), quad, 2.0 * predicted)
        rows.append({"beta": float(beta), "eigenvalue": lam, "predicted": -predicted})
        logging.info(f"β={beta:.3g}: λ={lam:.6g}, предсказание {-predicted:.6g}")

    table = pd.DataFrame(rows)
    slope, intercept = np.polyfit(np.log(table["beta"]), np.log(np.abs(table["eigenvalue"])), 1)
    fit = WeakCouplingFit(exponent=float(slope), constant=float(np.exp(intercept)), table=table)
    logging.info(f"Слабая связь: {fit}")
    return fit
