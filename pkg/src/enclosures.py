"""
Круги с центром в нуле, гарантированно содержащие точечный спектр Δ² + V
"""
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from exceptions import DimensionUnsupported, NegativeInput
from logger import logging
from models import (
    DiskSource,
    EigenvalueCandidate,
    EnclosureDisk,
    MembershipEntry,
    NormReport,
    VerificationReport,
)
from potentials import Potential, rayleigh_sup_bracket

# Константы C_d в |λ| ≤ C_d ‖V‖₁^{4/(4−d)}
C1: float = 0.25
C3: float = 0.25 * (4.0 * np.pi) ** -4
# Гипотетическое значение, не доказано
C2_CONJECTURE: float = 1.0 / 64.0


def l1_disk(d: int, l1: float, c2_choice: Optional[float] = None) -> EnclosureDisk:
    """
    Круг радиуса C_d·‖V‖₁^{4/(4−d)}; при d=2 всегда помечен как гипотетический

    :param d: размерность
    :param l1: ‖V‖_{L¹}
    :param c2_choice: значение C₂ (по умолчанию 1/64)
    """
    if l1 < 0:
        raise NegativeInput("Норма не может быть отрицательной")
    if d == 1:
        return EnclosureDisk(C1 * l1 ** (4.0 / 3.0), DiskSource.L1)
    if d == 3:
        return EnclosureDisk(C3 * l1 ** 4, DiskSource.L1)
    if d == 2:
        c2 = C2_CONJECTURE if c2_choice is None else c2_choice
        return EnclosureDisk(c2 * l1 ** 2, DiskSource.L1, conjectural=True)
    raise DimensionUnsupported(f"Круг L¹ определен для d = 1, 2, 3, получено d={d}")


def rollnik_disk(norm_r: float) -> EnclosureDisk:
    """
    |λ| ≤ ½‖V‖²_R/(4π)²
    """
    return EnclosureDisk(0.5 * norm_r ** 2 / (4.0 * np.pi) ** 2, DiskSource.ROLLNIK)


def l32_disk(norm: float) -> EnclosureDisk:
    """
    |λ| ≤ ⅛(4π)^{−2/3}‖V‖²_{L^{3/2}}
    """
    return EnclosureDisk(0.125 * (4.0 * np.pi) ** (-2.0 / 3.0) * norm ** 2, DiskSource.L32)


def hardy_disk(norm_h: float) -> EnclosureDisk:
    """
    |λ| ≤ 16‖V‖²_H
    """
    return EnclosureDisk(16.0 * norm_h ** 2, DiskSource.HARDY)


def rayleigh_disk(bracket: Tuple[float, float]) -> Tuple[EnclosureDisk, EnclosureDisk]:
    """
    Круги по вилке отношения Рэлея: нижний - подмножество истинного круга, верхний - надмножество
    """
    lower, upper = bracket
    return (
        EnclosureDisk(lower ** 2, DiskSource.RAYLEIGH, lower_estimate=True),
        EnclosureDisk(upper ** 2, DiskSource.RAYLEIGH),
    )


def disks_for_potential(V: Potential, norms: NormReport, c2_choice: Optional[float] = None) -> List[EnclosureDisk]:
    """
    Все применимые круги для потенциала по его нормам
    """
    disks = []
    if np.isfinite(norms.l1):
        disks.append(l1_disk(V.dimension, norms.l1, c2_choice))
    if V.dimension == 3:
        if norms.rollnik is not None:
            disks.append(rollnik_disk(norms.rollnik))
        if norms.l32 is not None:
            disks.append(l32_disk(norms.l32))
        if norms.hardy is not None:
            disks.append(hardy_disk(norms.hardy))
            if V.is_radial and np.isfinite(norms.hardy):
                disks.extend(rayleigh_disk(rayleigh_sup_bracket(V)))
    return disks


def verify(
    candidates: Iterable[Union[complex, EigenvalueCandidate]],
    disks: Iterable[EnclosureDisk],
    tolerance: float = 0.0,
) -> VerificationReport:
    """
    Проверяет |λ| ≤ radius для каждого кандидата и каждого негипотетического круга.
    Круги замкнутые: нулевой запас - это попадание

    :param tolerance: допустимый отрицательный запас (точность локализации)
    :return: VerificationReport
    """
    disks = [disk for disk in disks if not disk.conjectural]
    entries = []
    for candidate in candidates:
        lam = candidate.lam if isinstance(candidate, EigenvalueCandidate) else complex(candidate)
        for disk in disks:
            margin = disk.radius - abs(lam)
            entries.append(
                MembershipEntry(
                    lam=lam,
                    source=disk.source,
                    radius=disk.radius,
                    inside=margin >= 0.0,
                    margin=margin,
                    rigorous=disk.rigorous,
                )
            )

    report = VerificationReport(entries=entries, tolerance=tolerance)
    for entry in report.violations:
        logging.warning(f"λ={entry.lam} вне круга {entry.source.value}: запас {entry.margin:.3g}")
    return report
