import argparse
import json
import re
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

import numpy as np

import config
import data
from birman_schwinger import assemble, kernel_summary, positive_axis_probe
from branch_arith import spectral_point
from delta_models import boundary_residual_3d, boundary_sweep, convergence_ladder, exact_1d, exact_3d, jump_residual_1d
from enclosures import C2_CONJECTURE, disks_for_potential, l1_disk, verify
from exceptions import ConfigError, SpectralError
from greens_functions import biharmonic_green, estimate_c2, green_bound, rollnik_green_bound
from inequality_suite import TOLERANCE, max_residual
from logger import logging
from models import DeltaSpectrum, DiskSource, EnclosureDisk, InequalityKind, Quadrature, ResultRecord, ScanRegion
from potentials import (
    Potential,
    PotentialKind,
    default_quadrature,
    from_descriptor,
    l1_norm,
    norm_report,
    rayleigh_sup_bracket,
)
from quadrature import cube_quadrature, line_quadrature, radial_quadrature
from spectral_locator import locate, weak_coupling_fit

# Теги утверждений, на которых основан результат команды
PROVENANCE: Dict[str, str] = {
    "norms": "Thm1.1,Thm1.2,Cor1.3,Thm1.4,Cor1.5",
    "enclosure": "Thm1.1",
    "green": "Sec4.1",
    "estimate-c2": "Sec4.1",
    "bs-norm": "Cor3.2",
    "locate": "Lem3.1",
    "weak-coupling": "Thm1.1",
    "delta": "Sec5.1,Sec5.2",
    "delta-eps": "Rem5.1,Rem5.2",
    "verify-inequalities": "Lem4.1,Lem4.2,Rem4.3",
    "verify": "Cor3.2",
}

# Записи с кругом несут тег утверждения, давшего этот круг
DISK_PROVENANCE: Dict[DiskSource, str] = {
    DiskSource.L1: "Thm1.1",
    DiskSource.ROLLNIK: "Thm1.2",
    DiskSource.L32: "Cor1.3",
    DiskSource.RAYLEIGH: "Thm1.4",
    DiskSource.HARDY: "Cor1.5",
}

QUADRATURE_KEYS = {"panels", "order", "truncation"}
REGION_KEYS = {"re_range", "im_range", "grid", "eps_shift"}

EXIT_OK = 0
EXIT_VIOLATION = 3


def _real_list(value: Any, key: str) -> List[float]:
    try:
        if isinstance(value, str):
            return [float(v) for v in value.split(",") if v.strip()]
        if isinstance(value, (list, tuple)):
            return [float(v) for v in value]
        return [float(value)]
    except (TypeError, ValueError):
        raise ConfigError(f"Поле {key}: ожидается число или список чисел, получено {value!r}")


def _complex_list(value: Any) -> List[complex]:
    if isinstance(value, str):
        return [data.parse_complex(v) for v in value.split(";") if v.strip()]
    if isinstance(value, (list, tuple)):
        return [data.parse_complex(v) for v in value]
    return [data.parse_complex(value)]


@dataclass
class RunConfig:
    """
    Параметры запуска. Собираются из JSON-файла и флагов командной строки,
    проверяются до начала вычислений
    """

    dimension: int = 1
    potential: Optional[Dict[str, Any]] = None
    quadrature: Dict[str, Any] = field(default_factory=dict)
    region: Optional[Dict[str, Any]] = None
    seed: int = 0
    output: Optional[str] = None
    table: Optional[str] = None
    lam: Optional[complex] = None
    r: List[float] = field(default_factory=lambda: [0.0])
    alpha: Optional[complex] = None
    eps: List[float] = field(default_factory=lambda: [1e-2, 5e-3, 2.5e-3, 1.25e-3])
    thetas: Optional[List[float]] = None
    betas: Optional[List[float]] = None
    which: str = "all"
    n: int = 1000000
    pmax: float = 30.0
    sampler: str = "random"
    samples: int = config.SPECTRAL_MC_SAMPLES
    arg_grid: int = 64
    radius_grid: int = 64
    refinement_levels: int = 2
    candidates: Optional[List[complex]] = None
    c2: Optional[float] = None
    l1: Optional[float] = None
    tolerance: float = 0.0

    # В JSON поле lam называется lambda
    ALIASES = {"lambda": "lam"}

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Any]) -> "RunConfig":
        """
        :raises ConfigError: неизвестные ключи или неверные значения
        """
        if not isinstance(mapping, Mapping):
            raise ConfigError("Конфигурация должна быть JSON-объектом")
        names = {f.name for f in fields(cls)}
        values = {}
        for key, value in mapping.items():
            name = cls.ALIASES.get(key, key)
            if name not in names:
                raise ConfigError(f"Неизвестный ключ конфигурации: {key}")
            if value is not None:
                values[name] = value
        run = cls(**values)
        run._normalize()
        return run

    def _normalize(self) -> None:
        try:
            self.dimension = int(self.dimension)
            self.seed = int(self.seed)
            self.n = int(self.n)
            self.samples = int(self.samples)
            self.arg_grid = int(self.arg_grid)
            self.radius_grid = int(self.radius_grid)
            self.refinement_levels = int(self.refinement_levels)
            self.pmax = float(self.pmax)
            self.tolerance = float(self.tolerance)
            self.c2 = None if self.c2 is None else float(self.c2)
            self.l1 = None if self.l1 is None else float(self.l1)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"Неверное значение в конфигурации: {e}")

        if self.dimension not in (1, 2, 3):
            raise ConfigError(f"Размерность должна быть 1, 2 или 3, получено {self.dimension}")
        if self.potential is not None and not isinstance(self.potential, Mapping):
            raise ConfigError("potential должен быть объектом с полем type")
        if not isinstance(self.quadrature, Mapping) or set(self.quadrature) - QUADRATURE_KEYS:
            raise ConfigError(f"quadrature допускает только ключи {sorted(QUADRATURE_KEYS)}")
        if self.region is not None and (not isinstance(self.region, Mapping) or set(self.region) - REGION_KEYS):
            raise ConfigError(f"region допускает только ключи {sorted(REGION_KEYS)}")
        if self.n <= 0 or self.samples <= 0 or self.pmax <= 0:
            raise ConfigError("n, samples и pmax должны быть положительными")

        self.lam = None if self.lam is None else data.parse_complex(self.lam)
        self.alpha = None if self.alpha is None else data.parse_complex(self.alpha)
        self.r = _real_list(self.r, "r")
        self.eps = _real_list(self.eps, "eps")
        self.thetas = None if self.thetas is None else _real_list(self.thetas, "thetas")
        self.betas = None if self.betas is None else _real_list(self.betas, "betas")
        self.candidates = None if self.candidates is None else _complex_list(self.candidates)

    def as_dict(self) -> Dict[str, Any]:
        values = asdict(self)
        values["lambda"] = values.pop("lam")
        return values

    def require(self, name: str) -> Any:
        value = getattr(self, name)
        if value is None:
            raise ConfigError(f"Для команды нужен параметр {name}")
        return value


def load_config(path: Optional[str]) -> Dict[str, Any]:
    """
    Читает JSON-конфигурацию; без пути - пустая конфигурация
    """
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise ConfigError(f"Не удалось открыть конфигурацию {path}: {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Некорректный JSON в {path}: {e}")


# Сборка объектов из конфигурации


def build_potential(run: RunConfig) -> Potential:
    return from_descriptor(run.dimension, run.require("potential"))


def build_quadrature(run: RunConfig, V: Potential) -> Optional[Quadrature]:
    if V.kind == PotentialKind.DELTA:
        return None
    panels = int(run.quadrature.get("panels", config.SPECTRAL_PANELS))
    order = int(run.quadrature.get("order", config.SPECTRAL_ORDER))
    if panels <= 0 or order <= 0:
        raise ConfigError("panels и order должны быть положительными")
    if "truncation" not in run.quadrature:
        return default_quadrature(V, panels, order)

    truncation = float(run.quadrature["truncation"])
    if truncation <= 0:
        raise ConfigError("Радиус усечения должен быть положительным")
    if V.dimension == 1:
        return line_quadrature(truncation, panels, order)
    if V.is_radial:
        return radial_quadrature(truncation, panels, order, V.dimension)
    return cube_quadrature(truncation, panels, order, V.dimension)


def build_region(run: RunConfig, disks: Sequence[EnclosureDisk]) -> ScanRegion:
    """
    Область из конфигурации или квадрат вокруг наименьшего строгого круга с запасом 20%.
    Каждый строгий круг содержит весь спектр
    """
    if run.region:
        try:
            return ScanRegion(
                re_range=tuple(float(v) for v in run.region["re_range"]),
                im_range=tuple(float(v) for v in run.region["im_range"]),
                grid=tuple(int(v) for v in run.region.get("grid", (16, 16))),
                eps_shift=float(run.region.get("eps_shift", 1e-6)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Неверная область сканирования: {e}")

    radii = [disk.radius for disk in disks if disk.rigorous and disk.radius > 0.0]
    if not radii:
        raise ConfigError("Нет строгого круга для области по умолчанию, задайте region")
    radius = 1.2 * min(radii)
    return ScanRegion.around_disk(radius, eps_shift=1e-6 * radius)


def _disk(disk: EnclosureDisk) -> Dict[str, Any]:
    return {
        "radius": disk.radius,
        "source": disk.source,
        "conjectural": disk.conjectural,
        "rigorous": disk.rigorous,
    }


def _disks(run: RunConfig) -> List[EnclosureDisk]:
    if run.l1 is not None:
        return [l1_disk(run.dimension, run.l1, run.c2)]
    V = build_potential(run)
    norms = norm_report(V, build_quadrature(run, V), run.samples, run.seed)
    return disks_for_potential(V, norms, run.c2)


# Команды


def run_norms(run: RunConfig) -> List[Dict[str, Any]]:
    V = build_potential(run)
    report = norm_report(V, build_quadrature(run, V), run.samples, run.seed)
    outputs = {"potential": V.name, "dimension": V.dimension, **report.as_dict()}
    if V.dimension == 3 and V.is_radial and report.hardy is not None:
        outputs["rayleigh_bracket"] = rayleigh_sup_bracket(V)
    return [outputs]


def run_enclosure(run: RunConfig) -> List[Dict[str, Any]]:
    return [_disk(disk) for disk in _disks(run)]


def run_green(run: RunConfig) -> List[Dict[str, Any]]:
    sp = spectral_point(run.require("lam"))
    d = run.dimension
    bound = green_bound(d, sp, run.c2) if d != 2 or run.c2 is not None else None
    outputs = []
    for r in run.r:
        green = biharmonic_green(d, sp, r)
        row = {
            "lambda": sp.lam,
            "r": r,
            "value": green.value,
            "regime": green.regime,
            "bound": bound,
            "ratio": abs(green.value) / bound if bound else None,
        }
        if d == 3 and r > 0:
            row["distance_bound"] = rollnik_green_bound(sp, r)
        outputs.append(row)
    return outputs


def run_estimate_c2(run: RunConfig) -> List[Dict[str, Any]]:
    estimate = estimate_c2(run.arg_grid, run.radius_grid, run.refinement_levels)
    return [
        {
            "c2": estimate.value,
            "arg_lambda": estimate.arg_lambda,
            "s": estimate.s,
            "evaluations": estimate.evaluations,
            "disk_constant": estimate.value ** 2,
            "conjectured_disk_constant": C2_CONJECTURE,
        }
    ]


def run_bs_norm(run: RunConfig) -> List[Dict[str, Any]]:
    V = build_potential(run)
    quad = build_quadrature(run, V)
    lam = run.require("lam")
    if lam.imag == 0.0 and lam.real >= 0.0:
        return [asdict(positive_axis_probe(V, lam.real, quad))]

    K = assemble(V, lam, quad)
    outputs = kernel_summary(K)
    if V.dimension != 2 or run.c2 is not None:
        outputs["hs_bound"] = green_bound(V.dimension, K.point, run.c2) * l1_norm(V, quad)
    return [outputs]


def run_locate(run: RunConfig) -> List[Dict[str, Any]]:
    V = build_potential(run)
    quad = build_quadrature(run, V)
    norms = norm_report(V, quad, run.samples, run.seed)
    region = build_region(run, disks_for_potential(V, norms, run.c2))
    candidates = locate(V, region, quad, norms, config.SPECTRAL_THREADS)
    if not candidates:
        return [{"candidates": 0, "re_range": region.re_range, "im_range": region.im_range}]
    return [
        {
            "lambda": c.lam,
            "residual_log_abs_det": c.residual_log_abs_det,
            "refine_iters": c.refine_iters,
            "accepted": c.accepted,
            "label": c.label,
            "enclosure": c.enclosure_report,
        }
        for c in candidates
    ]


def run_weak_coupling(run: RunConfig) -> List[Dict[str, Any]]:
    V = build_potential(run)
    quad = build_quadrature(run, V)
    fit = weak_coupling_fit(V, run.require("betas"), quad)
    if run.table:
        data.write_table(run.table, fit.table)
    d = V.dimension
    return [
        {
            "exponent": fit.exponent,
            "constant": fit.constant,
            "expected_exponent": 4.0 / (4.0 - d),
            "expected_constant": l1_disk(d, l1_norm(V, quad)).radius,
            "table": fit.table,
        }
    ]


def _delta_row(spectrum: DeltaSpectrum) -> Dict[str, Any]:
    d = spectrum.dimension
    mass = abs(spectrum.alpha) * (4.0 * np.pi if d == 3 else 1.0)
    radius = l1_disk(d, mass).radius
    row = {
        "alpha": spectrum.alpha,
        "dimension": d,
        "has_eigenvalue": spectrum.has_eigenvalue,
        "eigenvalue": spectrum.eigenvalue,
        "k": spectrum.k,
        "disk_radius": radius,
    }
    if spectrum.has_eigenvalue:
        row["margin"] = radius - abs(spectrum.eigenvalue)
        row["residual"] = jump_residual_1d(spectrum) if d == 1 else boundary_residual_3d(spectrum)
    return row


def run_delta(run: RunConfig) -> List[Dict[str, Any]]:
    if run.thetas is not None:
        return [_delta_row(s) for s in boundary_sweep(run.dimension, run.thetas)]
    spectra = {1: exact_1d, 3: exact_3d}
    if run.dimension not in spectra:
        raise ConfigError("δ-модель определена для d = 1 и d = 3")
    return [_delta_row(spectra[run.dimension](run.require("alpha")))]


def run_delta_eps(run: RunConfig) -> List[Dict[str, Any]]:
    ladder = convergence_ladder(run.dimension, run.require("alpha"), run.eps, config.SPECTRAL_THREADS)
    if run.table:
        data.write_table(run.table, ladder)
    return [
        {"eps": row.eps, "eigenvalue": complex(row.eigenvalue_re, row.eigenvalue_im), "error": row.error}
        for row in ladder.itertuples()
    ]


def run_verify_inequalities(run: RunConfig) -> List[Dict[str, Any]]:
    kinds = list(InequalityKind) if run.which == "all" else [run.which]
    outputs = []
    for kind in kinds:
        sample = max_residual(kind, run.sampler, run.n, run.pmax, run.seed)
        outputs.append({**asdict(sample), "ok": sample.residual <= TOLERANCE})
    return outputs


def run_verify(run: RunConfig) -> List[Dict[str, Any]]:
    report = verify(run.require("candidates"), _disks(run), run.tolerance)
    return [{"ok": report.ok, "violations": len(report.violations), "entries": report.entries}]


COMMANDS: Dict[str, Callable[[RunConfig], List[Dict[str, Any]]]] = {
    "norms": run_norms,
    "enclosure": run_enclosure,
    "green": run_green,
    "estimate-c2": run_estimate_c2,
    "bs-norm": run_bs_norm,
    "locate": run_locate,
    "weak-coupling": run_weak_coupling,
    "delta": run_delta,
    "delta-eps": run_delta_eps,
    "verify-inequalities": run_verify_inequalities,
    "verify": run_verify,
}


# Командная строка


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(f"Ошибка аргументов: {message}")


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON-файл конфигурации")
    common.add_argument("--dim", dest="dimension", type=int)
    common.add_argument("--potential", help='JSON, например {"type": "square_well", "depth": -1}')
    common.add_argument("--panels", type=int)
    common.add_argument("--order", type=int)
    common.add_argument("--truncation", type=float)
    common.add_argument("--re-range", help="min,max")
    common.add_argument("--im-range", help="min,max")
    common.add_argument("--grid", help="n_re,n_im")
    common.add_argument("--eps-shift", type=float)
    common.add_argument("--seed", type=int)
    common.add_argument("--output", help="файл NDJSON, по умолчанию stdout")
    common.add_argument("--table", help="файл CSV для таблиц")
    common.add_argument("--lambda", dest="lam", help="re,im")
    common.add_argument("--r", help="r1,r2,...")
    common.add_argument("--alpha", help="re,im")
    common.add_argument("--eps", help="eps1,eps2,...")
    common.add_argument("--thetas", help="θ1,θ2,...")
    common.add_argument("--betas", help="β1,β2,...")
    common.add_argument("--which", choices=["all"] + [k.value for k in InequalityKind])
    common.add_argument("--n", type=int)
    common.add_argument("--pmax", type=float)
    common.add_argument("--sampler", choices=["random", "grid"])
    common.add_argument("--samples", type=int)
    common.add_argument("--arg-grid", type=int)
    common.add_argument("--radius-grid", type=int)
    common.add_argument("--refinement-levels", type=int)
    common.add_argument("--candidates", help="re,im;re,im;...")
    common.add_argument("--c2", type=float)
    common.add_argument("--l1", type=float)
    common.add_argument("--tolerance", type=float)

    parser = ArgumentParser(description="Спектральные оценки для Δ² + V с комплексным потенциалом")
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        subparsers.add_parser(name, parents=[common])
    return parser


def _join_negative_values(argv: Sequence[str]) -> List[str]:
    """
    --alpha -1,0 → --alpha=-1,0: argparse иначе принимает значение за флаг
    """
    joined: List[str] = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        following = argv[i + 1] if i + 1 < len(argv) else None
        if token.startswith("--") and "=" not in token and following and re.match(r"^-\.?\d", following):
            joined.append(f"{token}={following}")
            skip = True
        else:
            joined.append(token)
    return joined


def flags_to_mapping(args: argparse.Namespace) -> Dict[str, Any]:
    """
    Непустые флаги в виде ключей RunConfig
    """
    mapping: Dict[str, Any] = {}
    quadrature = {k: getattr(args, k) for k in ("panels", "order", "truncation") if getattr(args, k) is not None}
    if quadrature:
        mapping["quadrature"] = quadrature

    region: Dict[str, Any] = {}
    for key in ("re_range", "im_range"):
        if getattr(args, key) is not None:
            region[key] = _real_list(getattr(args, key), key)
    if args.grid is not None:
        region["grid"] = [int(v) for v in _real_list(args.grid, "grid")]
    if args.eps_shift is not None:
        region["eps_shift"] = args.eps_shift
    if region:
        mapping["region"] = region

    if args.potential is not None:
        try:
            mapping["potential"] = json.loads(args.potential)
        except json.JSONDecodeError as e:
            raise ConfigError(f"--potential: некорректный JSON: {e}")

    skip = {"command", "config", "potential", "panels", "order", "truncation", "re_range", "im_range", "grid", "eps_shift"}
    for key, value in vars(args).items():
        if key not in skip and value is not None:
            mapping[key] = value
    return mapping


def merge(base: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in overrides.items():
        if key in ("quadrature", "region") and isinstance(merged.get(key), Mapping):
            merged[key] = {**merged[key], **value}
        else:
            merged[key] = value
    return merged


def emit(run: Optional[RunConfig], records: List[ResultRecord]) -> None:
    if run is not None and run.output and run.output != "-":
        with open(run.output, "w", encoding="utf-8") as stream:
            data.write_records(stream, records)
    else:
        data.write_records(sys.stdout, records)


def main(argv: Sequence[str]) -> int:
    started = time.perf_counter()
    command = argv[0] if argv else ""
    run: Optional[RunConfig] = None
    inputs: Dict[str, Any] = {}
    try:
        args = build_parser().parse_args(_join_negative_values(list(argv)))
        command = args.command
        run = RunConfig.from_mapping(merge(load_config(args.config), flags_to_mapping(args)))
        inputs = data.to_jsonable(run.as_dict())
        logging.info(f"Команда {command}: d={run.dimension}")

        outputs = COMMANDS[command](run)
    except SpectralError as e:
        logging.error(f"Команда {command} завершилась ошибкой {e.reason}: {e}")
        record = ResultRecord(
            command=command,
            inputs=inputs,
            outputs={"error": e.reason, "message": str(e)},
            provenance=PROVENANCE.get(command, "error"),
            tool_version=config.TOOL_VERSION,
            wall_time=time.perf_counter() - started,
        )
        emit(run, [record])
        return e.exit_code

    wall_time = time.perf_counter() - started
    records = [
        ResultRecord(
            command=command,
            inputs=inputs,
            outputs=out,
            provenance=DISK_PROVENANCE.get(out.get("source"), PROVENANCE[command]),
            tool_version=config.TOOL_VERSION,
            wall_time=wall_time,
        )
        for out in outputs
    ]
    emit(run, records)

    if any(out.get("ok") is False for out in outputs):
        logging.error(f"Команда {command}: обнаружено нарушение")
        return EXIT_VIOLATION
    logging.info(f"Команда {command} выполнена за {wall_time:.3g} с, записей: {len(records)}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
