import json
import math
from dataclasses import asdict, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, TextIO, Tuple, Union

import numpy as np
import pandas as pd

from exceptions import ConfigError
from logger import logging

GRID_COLUMNS = {("x", "re_v", "im_v"), ("r", "re_v", "im_v")}


def parse_complex(value: Any) -> complex:
    """
    Разбирает комплексное число из конфигурации: число, пара [re, im] или строка "re,im"

    :param value: значение из JSON или командной строки
    :return: complex
    """
    try:
        if isinstance(value, (list, tuple)):
            if len(value) != 2:
                raise ValueError
            return complex(float(value[0]), float(value[1]))
        if isinstance(value, str):
            parts = value.split(",")
            if len(parts) == 2:
                return complex(float(parts[0]), float(parts[1]))
            return complex(value.replace(" ", ""))
        return complex(value)
    except (TypeError, ValueError):
        raise ConfigError(f"Не удалось разобрать комплексное число: {value!r}")


def read_grid_potential(path: Union[str, Path]) -> Tuple[str, np.ndarray, np.ndarray]:
    """
    Читает сеточный потенциал из CSV с заголовком x,re_v,im_v (d=1) или r,re_v,im_v (радиальный)

    :param path: путь к CSV
    :return: имя координатной колонки, узлы, комплексные значения
    """
    try:
        frame = pd.read_csv(path)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigError(f"Не удалось прочитать сеточный потенциал {path}: {e}")

    columns = tuple(c.strip() for c in frame.columns)
    if columns not in GRID_COLUMNS:
        raise ConfigError(f"Неверный заголовок сеточного потенциала: {columns}")

    axis = columns[0]
    positions = frame.iloc[:, 0].to_numpy(dtype=float)
    values = frame.iloc[:, 1].to_numpy(dtype=float) + 1j * frame.iloc[:, 2].to_numpy(dtype=float)

    if len(positions) < 2 or np.any(np.diff(positions) <= 0):
        raise ConfigError("Узлы сеточного потенциала должны строго возрастать")
    if axis == "r" and positions[0] < 0:
        raise ConfigError("Радиальные узлы должны быть неотрицательными")
    if not (np.all(np.isfinite(positions)) and np.all(np.isfinite(values))):
        raise ConfigError("Сеточный потенциал содержит NaN или бесконечность")

    logging.info(f"Прочитан сеточный потенциал {path}: {len(positions)} узлов по {axis}")
    return axis, positions, values


def to_jsonable(value: Any) -> Any:
    """
    Приводит результат к виду, пригодному для json: complex -> [re, im],
    numpy -> python, dataclass -> dict, нечисловые float -> None
    """
    if isinstance(value, Enum):
        return value.value
    if is_dataclass(value) and not isinstance(value, type):
        return to_jsonable(asdict(value))
    if isinstance(value, pd.DataFrame):
        return to_jsonable(value.to_dict(orient="records"))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [to_jsonable(float(value.real)), to_jsonable(float(value.imag))]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def write_records(stream: TextIO, records: Iterable[Any]) -> int:
    """
    Пишет записи в поток по одной json-строке на запись (NDJSON)

    :return: число записанных строк
    """
    count = 0
    for record in records:
        payload = record.as_dict() if hasattr(record, "as_dict") else record
        stream.write(json.dumps(to_jsonable(payload), ensure_ascii=False) + "\n")
        count += 1
    stream.flush()
    return count


def write_table(path: Union[str, Path], frame: pd.DataFrame) -> None:
    """
    Сохраняет таблицу (лестницу сходимости, слабую связь) в CSV
    """
    frame.to_csv(path, index=False)
    logging.info(f"Таблица сохранена в {path} ({len(frame)} строк)")
