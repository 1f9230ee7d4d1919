from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from exceptions import InvalidRegion


class GreenRegime(str, Enum):
    GENERIC = "generic"
    DIAGONAL_SERIES = "diagonal_series"


class DiskSource(str, Enum):
    L1 = "L1_Thm11"
    ROLLNIK = "Rollnik_Thm12"
    L32 = "L32_Cor13"
    RAYLEIGH = "Rayleigh_Thm14_bracket"
    HARDY = "Hardy_Cor15"


class InequalityKind(str, Enum):
    SIN_1D = "sin_1d"
    COS_3D = "cos_3d"
    COS_REMARK = "cos_remark"
    PHI_DERIVATIVE = "phi_derivative"


@dataclass(frozen=True)
class SpectralPoint:
    """
    Спектральный параметр λ вместе с согласованными корнями k² = λ, √k, √(−k)
    """

    lam: complex
    k: complex
    sqrt_k: complex
    sqrt_neg_k: complex

    def __repr__(self):
        return "SpectralPoint(lam=%s, k=%s, sqrt_k=%s, sqrt_neg_k=%s)" % (
            self.lam,
            self.k,
            self.sqrt_k,
            self.sqrt_neg_k,
        )


@dataclass(frozen=True)
class GreenValue:
    value: complex
    regime: GreenRegime

    def __repr__(self):
        return "GreenValue(value=%s, regime='%s')" % (self.value, self.regime.value)


@dataclass(frozen=True)
class C2Estimate:
    """
    Оценка константы c₂ снизу: максимум |k|·|G̃| на срезе |k| = 1 и точка, где он достигнут
    """

    value: float
    arg_lambda: float
    s: float
    evaluations: int

    def __repr__(self):
        return "C2Estimate(value=%.12g, arg_lambda=%.6g, s=%.6g)" % (
            self.value,
            self.arg_lambda,
            self.s,
        )


@dataclass(frozen=True)
class NormReport:
    l1: float
    rollnik: Optional[float] = None
    rollnik_stderr: Optional[float] = None
    hardy: Optional[float] = None
    l32: Optional[float] = None

    def as_dict(self) -> Dict[str, Optional[float]]:
        return {
            "l1": self.l1,
            "rollnik": self.rollnik,
            "rollnik_stderr": self.rollnik_stderr,
            "hardy": self.hardy,
            "l32": self.l32,
        }


@dataclass(frozen=True, repr=False)
class Quadrature:
    """
    Составная квадратура Гаусса-Лежандра.

    geometry: "line" - отрезок [−L, L] (d=1), "half_line" - радиальная переменная на (0, L),
    "cube" - тензорная сетка на [−L, L]^d
    """

    nodes: np.ndarray
    weights: np.ndarray
    truncation: float
    panels: int
    order: int
    geometry: str
    dimension: int

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])

    def __repr__(self):
        return "Quadrature(geometry='%s', d=%s, L=%s, panels=%s, order=%s, size=%s)" % (
            self.geometry,
            self.dimension,
            self.truncation,
            self.panels,
            self.order,
            self.size,
        )


@dataclass(frozen=True, repr=False)
class KernelMatrix:
    entries: np.ndarray
    nodes: np.ndarray
    weights: np.ndarray
    point: SpectralPoint
    dimension: int
    reduction: str

    def __repr__(self):
        return "KernelMatrix(N=%s, d=%s, reduction='%s', lam=%s)" % (
            self.entries.shape[0],
            self.dimension,
            self.reduction,
            self.point.lam,
        )


@dataclass(frozen=True)
class FredholmDeterminant:
    log_abs: float
    arg: float
    singular: bool = False

    @property
    def value(self) -> complex:
        return complex(np.exp(self.log_abs) * np.exp(1j * self.arg))


@dataclass(frozen=True)
class PositiveAxisProbe:
    lam: float
    eps_values: Tuple[float, ...]
    op_norms: Tuple[float, ...]
    log_abs_dets: Tuple[float, ...]
    op_norm_limit: float
    log_abs_det_limit: float


@dataclass(frozen=True)
class ScanRegion:
    re_range: Tuple[float, float]
    im_range: Tuple[float, float]
    grid: Tuple[int, int] = (16, 16)
    eps_shift: float = 1e-6

    def __post_init__(self):
        if self.re_range[0] >= self.re_range[1] or self.im_range[0] >= self.im_range[1]:
            raise InvalidRegion(f"Пустая область сканирования: {self.re_range} x {self.im_range}")
        if self.grid[0] < 8 or self.grid[1] < 8:
            raise InvalidRegion(f"Сетка сканирования должна быть не меньше 8x8, получено {self.grid}")
        if self.touches_positive_axis and self.eps_shift <= 0:
            raise InvalidRegion("Область пересекает [0, ∞), нужен eps_shift > 0")

    @property
    def touches_positive_axis(self) -> bool:
        return self.im_range[0] <= 0.0 <= self.im_range[1] and self.re_range[1] >= 0.0

    def contains(self, lam: complex, margin: float = 0.0) -> bool:
        dx = margin * (self.re_range[1] - self.re_range[0])
        dy = margin * (self.im_range[1] - self.im_range[0])
        return (
            self.re_range[0] - dx <= lam.real <= self.re_range[1] + dx
            and self.im_range[0] - dy <= lam.imag <= self.im_range[1] + dy
        )

    @classmethod
    def around_disk(cls, radius: float, grid: Tuple[int, int] = (24, 24), eps_shift: float = 1e-6) -> "ScanRegion":
        return cls((-radius, radius), (-radius, radius), grid, eps_shift)


@dataclass(frozen=True, repr=False)
class ScanResult:
    lambdas: np.ndarray
    log_abs_det: np.ndarray
    seeds: List[complex]

    def __repr__(self):
        return "ScanResult(grid=%s, seeds=%s)" % (self.lambdas.shape, len(self.seeds))


@dataclass(frozen=True)
class EnclosureDisk:
    """
    Круг |λ| ≤ radius с центром в нуле
    """

    radius: float
    source: DiskSource
    conjectural: bool = False
    lower_estimate: bool = False

    @property
    def rigorous(self) -> bool:
        return not (self.conjectural or self.lower_estimate)

    def __repr__(self):
        return "EnclosureDisk(radius=%.12g, source='%s', conjectural=%s)" % (
            self.radius,
            self.source.value,
            self.conjectural,
        )


@dataclass(frozen=True)
class MembershipEntry:
    lam: complex
    source: DiskSource
    radius: float
    inside: bool
    margin: float
    rigorous: bool


@dataclass(frozen=True)
class VerificationReport:
    entries: List[MembershipEntry]
    tolerance: float = 0.0

    @property
    def violations(self) -> List[MembershipEntry]:
        return [e for e in self.entries if e.rigorous and e.margin < -self.tolerance]

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass
class EigenvalueCandidate:
    lam: complex
    residual_log_abs_det: float
    refine_iters: int
    accepted: bool
    label: str = "eigenvalue candidate"
    enclosure_report: List[MembershipEntry] = field(default_factory=list)

    def __repr__(self):
        return "EigenvalueCandidate(lam=%s, residual=%.3g, iters=%s, accepted=%s)" % (
            self.lam,
            self.residual_log_abs_det,
            self.refine_iters,
            self.accepted,
        )


@dataclass(frozen=True, repr=False)
class WeakCouplingFit:
    exponent: float
    constant: float
    table: pd.DataFrame

    def __repr__(self):
        return "WeakCouplingFit(exponent=%.6g, constant=%.6g, points=%s)" % (
            self.exponent,
            self.constant,
            len(self.table),
        )


@dataclass(frozen=True)
class DeltaSpectrum:
    alpha: complex
    dimension: int
    eigenvalue: Optional[complex] = None
    k: Optional[complex] = None

    @property
    def has_eigenvalue(self) -> bool:
        return self.eigenvalue is not None


@dataclass(frozen=True)
class ResidualSample:
    p: float
    q: float
    residual: float
    which: InequalityKind


@dataclass
class ResultRecord:
    """
    Одна строка NDJSON-вывода
    """

    command: str
    inputs: Dict[str, Any]
    outputs: Dict[str, Any]
    provenance: str
    tool_version: str
    wall_time: float
    created_at: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def as_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "provenance": self.provenance,
            "tool_version": self.tool_version,
            "wall_time": self.wall_time,
            "created_at": self.created_at,
        }
