"""
Комплексные потенциалы и все нормы, которые используются в оценках собственных значений
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

import config
import data
from exceptions import (
    ConfigError,
    DomainError,
    NotRadial,
    ReversedBracket,
    UnboundedSupportWithoutTail,
    WrongDimension,
)
from logger import logging
from models import NormReport, Quadrature
from quadrature import cube_quadrature, line_quadrature, radial_measure, radial_quadrature

# Относительный порог |V| < TAIL_TOLERANCE·max|V| для радиуса усечения
TAIL_TOLERANCE: float = 1e-12
# Допустимый хвост за границей квадратуры
TAIL_BOUND: float = 1e-10
# Радиус, до которого ищем убывание потенциала без компактного носителя
MAX_TRUNCATION: float = 1e4

MC_BLOCK: int = 50000
# Допуск округления, в пределах которого нижняя оценка вилки прижимается к верхней
BRACKET_RTOL: float = 1e-9

Profile = Callable[[np.ndarray], np.ndarray]


class PotentialKind(str, Enum):
    ANALYTIC = "analytic"
    GRID = "grid"
    DELTA = "delta"
    DELTA_EPS = "delta_eps"


@dataclass(frozen=True, eq=False)
class Potential:
    """
    Потенциал V в ℝ^d.

    profile для d=1 принимает координату x, для радиальных потенциалов при d ≥ 2
    принимает радиус, для остальных - массив точек формы (N, d).
    Вне support_radius потенциал равен нулю.
    """

    dimension: int
    kind: PotentialKind
    profile: Profile
    support_radius: float
    is_radial: bool
    params: Dict[str, Any] = field(default_factory=dict)
    name: str = "potential"
    decaying: bool = True

    def __repr__(self):
        return "Potential(name='%s', d=%s, kind='%s', support=%s, radial=%s)" % (
            self.name,
            self.dimension,
            self.kind.value,
            self.support_radius,
            self.is_radial,
        )

    def _mask(self, values: np.ndarray, radius: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=complex) * np.ones(radius.shape)
        if np.isfinite(self.support_radius):
            values = np.where(radius < self.support_radius, values, 0.0)
        return values

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """
        Значения V в точках: при d=1 массив координат, иначе массив формы (N, d)
        """
        if self.kind == PotentialKind.DELTA:
            raise DomainError("δ-потенциал не имеет поточечных значений")
        points = np.asarray(points, dtype=float)
        if self.dimension == 1:
            x = points.reshape(points.shape[:-1]) if points.ndim > 1 else points
            return self._mask(self.profile(x), np.abs(x))
        points = np.atleast_2d(points)
        radius = np.linalg.norm(points, axis=-1)
        values = self.profile(radius) if self.is_radial else self.profile(points)
        return self._mask(values, radius)

    def radial_values(self, r: np.ndarray) -> np.ndarray:
        """
        Профиль радиального потенциала (для d=1 - четного) как функция |x|
        """
        if self.kind == PotentialKind.DELTA:
            raise DomainError("δ-потенциал не имеет поточечных значений")
        if self.dimension > 1 and not self.is_radial:
            raise NotRadial(f"{self!r} не радиальный")
        r = np.asarray(r, dtype=float)
        return self._mask(self.profile(r), np.abs(r))

    def scaled(self, c: complex) -> "Potential":
        """
        Потенциал c·V
        """
        profile = self.profile
        params = dict(self.params)
        params["scale"] = complex(params.get("scale", 1.0)) * c
        if "alpha" in params:
            params["alpha"] = complex(params["alpha"]) * c
        return replace(self, profile=lambda x: c * profile(x), params=params)

    def conjugate(self) -> "Potential":
        """
        Комплексно сопряженный потенциал V̄
        """
        profile = self.profile
        params = dict(self.params)
        if "alpha" in params:
            params["alpha"] = complex(params["alpha"]).conjugate()
        return replace(self, profile=lambda x: np.conj(profile(x)), params=params)

    def dilated(self, s: float) -> "Potential":
        """
        Растяжение V_s(x) = V(x/s)
        """
        if s <= 0:
            raise DomainError("Коэффициент растяжения должен быть положительным")
        if self.kind == PotentialKind.DELTA:
            raise DomainError("Растяжение δ-потенциала не поддерживается")
        profile = self.profile
        params = dict(self.params)
        params["dilation"] = float(params.get("dilation", 1.0)) * s
        return replace(
            self,
            profile=lambda x: profile(np.asarray(x) / s),
            support_radius=self.support_radius * s,
            params=params,
        )


# Фабрики потенциалов


def square_well(dimension: int, depth: complex, radius: float = 0.5) -> Potential:
    """
    depth·𝟙_{|x| < radius}
    """
    if radius <= 0:
        raise DomainError("Радиус ямы должен быть положительным")
    depth = complex(depth)
    return Potential(
        dimension=dimension,
        kind=PotentialKind.ANALYTIC,
        profile=lambda x: np.full(np.shape(x), depth),
        support_radius=float(radius),
        is_radial=True,
        params={"depth": depth, "radius": float(radius)},
        name="square_well",
    )


def gaussian_well(
    dimension: int,
    amplitude: complex,
    width: float = 1.0,
    anisotropy: Optional[Tuple[float, ...]] = None,
) -> Potential:
    """
    amplitude·exp(−|x|²/width²); при заданной anisotropy - exp(−Σ (x_i/(width·a_i))²)
    """
    if width <= 0:
        raise DomainError("Ширина гауссовой ямы должна быть положительной")
    amplitude = complex(amplitude)
    params: Dict[str, Any] = {"amplitude": amplitude, "width": float(width)}

    if anisotropy is None or dimension == 1:
        return Potential(
            dimension=dimension,
            kind=PotentialKind.ANALYTIC,
            profile=lambda r: amplitude * np.exp(-(np.asarray(r) / width) ** 2),
            support_radius=np.inf,
            is_radial=True,
            params=params,
            name="gaussian_well",
        )

    scales = width * np.asarray(anisotropy, dtype=float)
    if scales.shape != (dimension,) or np.any(scales <= 0):
        raise DomainError(f"anisotropy должна содержать {dimension} положительных чисел")
    params["anisotropy"] = tuple(float(a) for a in anisotropy)
    return Potential(
        dimension=dimension,
        kind=PotentialKind.ANALYTIC,
        profile=lambda p: amplitude * np.exp(-np.sum((np.asarray(p) / scales) ** 2, axis=-1)),
        support_radius=np.inf,
        is_radial=False,
        params=params,
        name="gaussian_well",
    )


def delta_eps(dimension: int, alpha: complex, eps: float) -> Potential:
    """
    Регуляризация α·δ с единичной массой: α/ε на |x| < ε/2 при d=1,
    4πα·3/(4πε³) = 3α/ε³ на |x| < ε при d=3
    """
    if eps <= 0:
        raise DomainError("ε должно быть положительным")
    alpha = complex(alpha)
    if dimension == 1:
        height, support = alpha / eps, 0.5 * eps
    elif dimension == 3:
        height, support = 3.0 * alpha / eps ** 3, float(eps)
    else:
        raise WrongDimension("δ_ε определена для d = 1 и d = 3")
    return Potential(
        dimension=dimension,
        kind=PotentialKind.DELTA_EPS,
        profile=lambda x: np.full(np.shape(x), height),
        support_radius=support,
        is_radial=True,
        params={"alpha": alpha, "eps": float(eps)},
        name="delta_eps",
    )


def delta(dimension: int, alpha: complex) -> Potential:
    """
    Точечный потенциал: α·δ при d=1 и 4πα·δ при d=3
    """
    if dimension not in (1, 3):
        raise WrongDimension("δ-модель определена для d = 1 и d = 3")

    def no_values(_: np.ndarray) -> np.ndarray:
        raise DomainError("δ-потенциал не имеет поточечных значений")

    return Potential(
        dimension=dimension,
        kind=PotentialKind.DELTA,
        profile=no_values,
        support_radius=0.0,
        is_radial=True,
        params={"alpha": complex(alpha)},
        name="delta",
    )


def inverse_square(strength: complex = 1.0, dimension: int = 3) -> Potential:
    """
    strength/|x|², потенциал без убывания по L¹ (нормы L¹ и Роллника бесконечны)
    """
    strength = complex(strength)

    def profile(r: np.ndarray) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return strength / r ** 2

    return Potential(
        dimension=dimension,
        kind=PotentialKind.ANALYTIC,
        profile=profile,
        support_radius=np.inf,
        is_radial=True,
        params={"strength": strength},
        name="inverse_square",
        decaying=False,
    )


def zero(dimension: int) -> Potential:
    return Potential(
        dimension=dimension,
        kind=PotentialKind.ANALYTIC,
        profile=lambda x: np.zeros(np.shape(x), dtype=complex),
        support_radius=0.0,
        is_radial=True,
        params={},
        name="zero",
    )


def grid_potential(dimension: int, positions: np.ndarray, values: np.ndarray, radial: bool = True) -> Potential:
    """
    Кусочно-линейная интерполяция табличного потенциала, ноль вне таблицы.
    При d=1 узлы - координаты x, при d ≥ 2 - радиусы
    """
    positions = np.asarray(positions, dtype=float)
    values = np.asarray(values, dtype=complex)
    if positions.shape != values.shape or positions.ndim != 1:
        raise ConfigError("Узлы и значения сеточного потенциала должны быть одномерными и одной длины")
    if dimension > 1 and not radial:
        raise ConfigError("Сеточные потенциалы при d ≥ 2 задаются только радиальным профилем")

    def profile(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        re = np.interp(x, positions, values.real, left=0.0, right=0.0)
        im = np.interp(x, positions, values.imag, left=0.0, right=0.0)
        return re + 1j * im

    support = float(np.max(np.abs(positions)))
    is_even = dimension > 1 or bool(
        np.allclose(positions, -positions[::-1]) and np.allclose(values, values[::-1])
    )
    return Potential(
        dimension=dimension,
        kind=PotentialKind.GRID,
        profile=profile,
        support_radius=support,
        is_radial=is_even,
        params={"nodes": int(len(positions))},
        name="grid",
    )


FACTORIES: Dict[str, Callable[..., Potential]] = {
    "square_well": square_well,
    "gaussian_well": gaussian_well,
    "delta_eps": delta_eps,
    "delta": delta,
    "inverse_square": lambda dimension, **kw: inverse_square(dimension=dimension, **kw),
    "zero": zero,
}

COMPLEX_PARAMS = {"depth", "amplitude", "alpha", "strength"}


def from_descriptor(dimension: int, descriptor: Mapping[str, Any]) -> Potential:
    """
    Строит потенциал по описанию из конфигурации: {"type": имя, параметры...}
    или {"type": "grid", "path": файл CSV}

    :raises ConfigError: неизвестный тип или параметры
    """
    if not isinstance(descriptor, Mapping) or "type" not in descriptor:
        raise ConfigError("Описание потенциала должно содержать поле type")
    kind = descriptor["type"]
    params = {k: v for k, v in descriptor.items() if k != "type"}

    if kind == "grid":
        if set(params) - {"path"} or "path" not in params:
            raise ConfigError("Сеточный потенциал задается единственным параметром path")
        axis, positions, values = data.read_grid_potential(params["path"])
        if (axis == "x") != (dimension == 1):
            raise ConfigError(f"Колонка {axis} не соответствует размерности d={dimension}")
        return grid_potential(dimension, positions, values)

    if kind not in FACTORIES:
        raise ConfigError(f"Неизвестный тип потенциала: {kind}")
    for name in COMPLEX_PARAMS & set(params):
        params[name] = data.parse_complex(params[name])
    if "anisotropy" in params:
        params["anisotropy"] = tuple(params["anisotropy"])
    try:
        return FACTORIES[kind](dimension, **params)
    except TypeError as e:
        raise ConfigError(f"Неверные параметры потенциала {kind}: {e}")


# Усечение и квадратуры


def fibonacci_sphere(n: int) -> np.ndarray:
    """
    n почти равномерных направлений на S²
    """
    i = np.arange(n) + 0.5
    polar = np.arccos(1.0 - 2.0 * i / n)
    azimuth = np.pi * (1.0 + 5.0 ** 0.5) * i
    return np.stack(
        [np.cos(azimuth) * np.sin(polar), np.sin(azimuth) * np.sin(polar), np.cos(polar)], axis=1
    )


def _directions(dimension: int, n: int = 64) -> np.ndarray:
    if dimension == 3:
        return fibonacci_sphere(n)
    angles = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _ray_magnitudes(V: Potential, r: np.ndarray) -> np.ndarray:
    """
    max |V| по сфере радиуса r (по набору направлений для нерадиальных потенциалов)
    """
    r = np.asarray(r, dtype=float)
    if V.dimension == 1:
        return np.maximum(np.abs(V.evaluate(r)), np.abs(V.evaluate(-r)))
    if V.is_radial:
        return np.abs(V.radial_values(r))
    directions = _directions(V.dimension)
    points = r[:, None, None] * directions[None, :, :]
    values = np.abs(V.evaluate(points.reshape(-1, V.dimension))).reshape(len(r), -1)
    return values.max(axis=1)


def truncation_radius(V: Potential) -> float:
    """
    Радиус усечения L: носитель, если он конечен, иначе радиус, за которым
    |V| < 1e−12·max|V|; +∞, если убывания нет до 1e4
    """
    if V.kind == PotentialKind.DELTA:
        return 0.0
    if np.isfinite(V.support_radius):
        return float(V.support_radius)
    if not V.decaying:
        return np.inf

    radii = np.geomspace(1e-6, MAX_TRUNCATION, 2001)
    magnitudes = _ray_magnitudes(V, radii)
    peak = float(np.max(magnitudes))
    if peak == 0.0:
        return 0.0
    threshold = TAIL_TOLERANCE * peak
    above = np.nonzero(magnitudes >= threshold)[0]
    last = int(above[-1])
    if last == len(radii) - 1:
        return np.inf

    def excess(r: float) -> float:
        return float(_ray_magnitudes(V, np.array([r]))[0]) - threshold

    return float(optimize.brentq(excess, radii[last], radii[last + 1], xtol=1e-12 * radii[last + 1]))


def default_quadrature(
    V: Potential,
    panels: int = config.SPECTRAL_PANELS,
    order: int = config.SPECTRAL_ORDER,
) -> Quadrature:
    """
    Квадратура по умолчанию: [−L, L] при d=1, радиальная полуось (0, L) для
    радиальных потенциалов, куб [−L, L]^d для остальных
    """
    if V.kind == PotentialKind.DELTA:
        raise DomainError("Для δ-потенциала квадратура не строится")
    truncation = truncation_radius(V)
    if not np.isfinite(truncation):
        raise UnboundedSupportWithoutTail(f"{V!r}: нет компактного носителя и убывания")
    if truncation == 0.0:
        truncation = 1.0
    if V.dimension == 1:
        return line_quadrature(truncation, panels, order)
    if V.is_radial:
        return radial_quadrature(truncation, panels, order, V.dimension)
    return cube_quadrature(truncation, min(panels, 4), min(order, 8), V.dimension)


def _check_tail(V: Potential, quad: Quadrature) -> None:
    truncation = truncation_radius(V)
    if not np.isfinite(truncation):
        raise UnboundedSupportWithoutTail(f"{V!r}: интеграл по бесконечной области не сходится")
    if quad.truncation >= truncation * (1.0 - 1e-12):
        return
    peak = float(np.max(_ray_magnitudes(V, np.geomspace(1e-6, truncation, 512))))
    edge = float(_ray_magnitudes(V, np.array([quad.truncation]))[0])
    if peak > 0 and edge > TAIL_BOUND * peak:
        raise UnboundedSupportWithoutTail(
            f"Квадратура обрезана на L={quad.truncation}, хвост {edge / peak:.3g} > {TAIL_BOUND}"
        )


def integrate_values(V: Potential, quad: Quadrature, transform: Callable[[np.ndarray], np.ndarray]) -> float:
    """
    ∫ transform(V(x)) dx по квадратуре quad
    """
    if quad.dimension != V.dimension:
        raise WrongDimension(f"Квадратура для d={quad.dimension}, потенциал d={V.dimension}")
    _check_tail(V, quad)
    if quad.geometry == "half_line":
        values = V.radial_values(quad.nodes)
        return float(np.sum(quad.weights * radial_measure(V.dimension, quad.nodes) * transform(values)))
    return float(np.sum(quad.weights * transform(V.evaluate(quad.nodes))))


# Нормы


def l1_norm(V: Potential, quad: Optional[Quadrature] = None) -> float:
    """
    ‖V‖_{L¹}. Для δ-модели: |α| при d=1 и 4π|α| при d=3

    :raises UnboundedSupportWithoutTail: если хвост потенциала не укладывается в квадратуру
    """
    if V.kind == PotentialKind.DELTA:
        alpha = abs(complex(V.params["alpha"]))
        return 4.0 * np.pi * alpha if V.dimension == 3 else alpha
    quad = quad or default_quadrature(V)
    return integrate_values(V, quad, np.abs)


def lp32_norm(V: Potential, quad: Optional[Quadrature] = None) -> float:
    """
    ‖V‖_{L^{3/2}}
    """
    if V.kind == PotentialKind.DELTA:
        raise DomainError("Норма L^{3/2} δ-потенциала бесконечна")
    quad = quad or default_quadrature(V)
    return integrate_values(V, quad, lambda v: np.abs(v) ** 1.5) ** (2.0 / 3.0)


def _rollnik_radial(V: Potential, quad: Quadrature) -> float:
    truncation = quad.truncation
    outer = np.abs(V.radial_values(quad.nodes))

    def density(rp: float, r: float) -> float:
        magnitude = abs(complex(V.radial_values(np.array([rp]))[0]))
        return magnitude * rp * np.log((r + rp) / abs(r - rp))

    total = 0.0
    for node, weight, value in zip(quad.nodes, quad.weights, outer):
        if value == 0.0:
            continue
        inner = integrate.quad(density, 0.0, truncation, args=(node,), points=[node], limit=200)[0]
        total += weight * value * node * inner
    return 8.0 * np.pi ** 2 * total


def _sample_abs(V: Potential, n: int, rng: np.random.Generator, truncation: float) -> np.ndarray:
    """
    n точек в ℝ³ с плотностью ∝ |V|
    """
    if V.is_radial:
        grid = np.linspace(0.0, truncation, 4097)
        density = grid ** 2 * np.abs(V.radial_values(grid))
        cdf = integrate.cumulative_trapezoid(density, grid, initial=0.0)
        cdf /= cdf[-1]
        radius = np.interp(rng.uniform(0.0, 1.0, n), cdf, grid)
        directions = rng.standard_normal((n, 3))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        return radius[:, None] * directions

    coarse = cube_quadrature(truncation, 4, 8, 3)
    envelope = 1.05 * float(np.max(np.abs(V.evaluate(coarse.nodes))))
    accepted = []
    count = 0
    while count < n:
        candidates = rng.uniform(-truncation, truncation, (2 * n, 3))
        keep = rng.uniform(0.0, envelope, 2 * n) < np.abs(V.evaluate(candidates))
        accepted.append(candidates[keep])
        count += int(np.sum(keep))
    return np.concatenate(accepted)[:n]


def _rollnik_monte_carlo(V: Potential, samples: int, seed: int, l1: float) -> Tuple[float, float]:
    truncation = truncation_radius(V)
    reach = 2.0 * truncation
    blocks = max(1, int(np.ceil(samples / MC_BLOCK)))
    children = np.random.SeedSequence(seed).spawn(blocks)

    total = 0.0
    total_sq = 0.0
    drawn = 0
    # Блоки суммируются в фиксированном порядке
    for i, child in enumerate(children):
        rng = np.random.default_rng(child)
        size = min(MC_BLOCK, samples - i * MC_BLOCK)
        x = _sample_abs(V, size, rng, truncation)
        # Смещение u с плотностью 1/(4π R |u|²) на шаре радиуса R
        length = rng.uniform(0.0, reach, size)
        directions = rng.standard_normal((size, 3))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        y = x + length[:, None] * directions
        values = 4.0 * np.pi * reach * np.abs(V.evaluate(y))
        total += float(np.sum(values))
        total_sq += float(np.sum(values ** 2))
        drawn += size

    mean = total / drawn
    variance = max(total_sq / drawn - mean ** 2, 0.0)
    norm_sq = l1 * mean
    stderr_sq = l1 * np.sqrt(variance / drawn)
    if norm_sq == 0.0:
        return 0.0, 0.0
    norm = float(np.sqrt(norm_sq))
    return norm, float(stderr_sq / (2.0 * norm))


def rollnik_norm(
    V: Potential,
    samples: int = config.SPECTRAL_MC_SAMPLES,
    seed: int = 0,
    quad: Optional[Quadrature] = None,
    method: str = "auto",
) -> Tuple[float, float]:
    """
    Норма Роллника ‖V‖_R = (∬|V(x)||V(y)|/|x−y|² dx dy)^{1/2} в ℝ³.

    Для радиальных потенциалов сферическое усреднение 1/|x−y|² берется точно,
    (2π/(r r′)) ln((r+r′)/|r−r′|), и остается двойной интеграл по радиусам.
    Иначе - Монте-Карло с выборкой x ∝ |V| и смещением с плотностью ∝ |u|⁻²

    :param method: "auto", "radial" или "monte_carlo"
    :return: (норма, стандартная ошибка); у квадратурной ветки ошибка 0
    """
    if V.dimension != 3:
        raise WrongDimension(f"Норма Роллника определена в ℝ³, получено d={V.dimension}")
    if V.kind == PotentialKind.DELTA:
        raise DomainError("Норма Роллника δ-потенциала бесконечна")
    if method not in ("auto", "radial", "monte_carlo"):
        raise ConfigError(f"Неизвестный метод нормы Роллника: {method}")
    if truncation_radius(V) == 0.0:
        return 0.0, 0.0

    if method == "radial" or (method == "auto" and V.is_radial):
        if not V.is_radial:
            raise NotRadial(f"{V!r}: квадратурная ветка требует радиального потенциала")
        quad = quad if quad is not None and quad.geometry == "half_line" else default_quadrature(V)
        norm_sq = _rollnik_radial(V, quad)
        return float(np.sqrt(max(norm_sq, 0.0))), 0.0

    l1 = l1_norm(V, quad)
    if l1 == 0.0:
        return 0.0, 0.0
    norm, stderr = _rollnik_monte_carlo(V, samples, seed, l1)
    logging.info(f"Норма Роллника (Монте-Карло, {samples} точек): {norm:.6g} ± {stderr:.2g}")
    return norm, stderr


def hardy_norm(V: Potential, sample_grid: int = 4096) -> float:
    """
    ‖V‖_H = esssup |x|²|V(x)| по радиальной (и угловой) выборке с одним проходом
    уточнения вокруг максимума
    """
    if V.dimension != 3:
        raise WrongDimension(f"Норма Харди определена в ℝ³, получено d={V.dimension}")
    if V.kind == PotentialKind.DELTA:
        raise DomainError("Норма Харди δ-потенциала бесконечна")
    if V.support_radius == 0.0:
        return 0.0

    support = V.support_radius
    if np.isfinite(support):
        radii = support * np.arange(1, sample_grid + 1) / sample_grid
    else:
        radii = np.geomspace(1e-6, 1e6, sample_grid)

    def weighted(r: np.ndarray) -> np.ndarray:
        return r ** 2 * _ray_magnitudes(V, r)

    values = weighted(radii)
    j = int(np.argmax(values))
    best = float(values[j])

    if np.isfinite(support):
        step = support / sample_grid
        refined = np.linspace(max(radii[j] - step, 1e-12), min(radii[j] + step, support), sample_grid)
    else:
        ratio = radii[1] / radii[0]
        refined = np.geomspace(radii[j] / ratio, radii[j] * ratio, sample_grid)
    return max(best, float(np.max(weighted(refined))))


def rayleigh_sup_bracket(V: Potential, trial_family_size: int = 64) -> Tuple[float, float]:
    """
    Вилка для sup ∫|V||ψ|²/∫|∇ψ|²: снизу - максимум по пробным функциям e^{−t|x|},
    сверху - 4‖V‖_H (неравенство Харди)

    :return: (lower, upper)
    :raises ReversedBracket: если нижняя оценка больше верхней сверх округления
    """
    if V.dimension != 3:
        raise WrongDimension(f"Отношение Рэлея считается в ℝ³, получено d={V.dimension}")
    if not V.is_radial:
        raise NotRadial(f"{V!r}: семейство пробных функций радиальное")
    hardy = hardy_norm(V)
    if not np.isfinite(hardy):
        raise DomainError("Норма Харди бесконечна, вилка не определена")
    if hardy == 0.0:
        return 0.0, 0.0

    support = V.support_radius
    scale = support if np.isfinite(support) else 1.0
    upper_limit = support if np.isfinite(support) else np.inf

    def numerator(t: float) -> float:
        def integrand(r: float) -> float:
            with np.errstate(divide="ignore", invalid="ignore"):
                magnitude = abs(complex(V.radial_values(np.array([r]))[0])) * r ** 2
            return magnitude * np.exp(-2.0 * t * r)

        return 4.0 * np.pi * integrate.quad(integrand, 0.0, upper_limit, limit=200)[0]

    # ∫|∇e^{−t|x|}|² dx = π/t
    lower = max(numerator(t) * t / np.pi for t in np.geomspace(1e-3, 1e3, trial_family_size) / scale)
    upper = 4.0 * hardy
    if lower > upper * (1.0 + BRACKET_RTOL):
        logging.error(f"{V!r}: нижняя оценка {lower:.6g} больше верхней {upper:.6g}")
        raise ReversedBracket(f"Вилка отношения Рэлея перевернута: {lower:.6g} > {upper:.6g}")
    if lower > upper:
        logging.warning(f"{V!r}: нижняя оценка {lower:.12g} превышает верхнюю {upper:.12g} в пределах округления")
        lower = upper
    return float(lower), float(upper)


def norm_report(
    V: Potential,
    quad: Optional[Quadrature] = None,
    samples: int = config.SPECTRAL_MC_SAMPLES,
    seed: int = 0,
) -> NormReport:
    """
    Все применимые нормы потенциала; бесконечные нормы не вычисляются
    """
    try:
        l1 = l1_norm(V, quad)
    except UnboundedSupportWithoutTail:
        l1 = np.inf

    if V.dimension != 3 or V.kind == PotentialKind.DELTA:
        return NormReport(l1=l1)

    rollnik, stderr, l32 = None, None, None
    if np.isfinite(l1):
        rollnik, stderr = rollnik_norm(V, samples, seed, quad)
        l32 = lp32_norm(V, quad)
    hardy = hardy_norm(V)
    return NormReport(
        l1=l1,
        rollnik=rollnik,
        rollnik_stderr=stderr,
        hardy=hardy if np.isfinite(hardy) else None,
        l32=l32,
    )
