import os

from dotenv import load_dotenv

# .env необязателен: у всех переменных есть значения по умолчанию
DOTENV_FOUND: bool = load_dotenv()

TOOL_VERSION: str = "1.0.0"

# Количество потоков для сканирования сеток и уточнения корней
SPECTRAL_THREADS: int = int(os.environ.get("SPECTRAL_THREADS", 1))

# Уровень и файл логирования
SPECTRAL_LOG_LEVEL: str = os.environ.get("SPECTRAL_LOG_LEVEL", "INFO")
SPECTRAL_LOG_FILE: str = os.environ.get("SPECTRAL_LOG_FILE", "spectral.log")

# Квадратура Гаусса-Лежандра по умолчанию: число панелей и порядок на панели
SPECTRAL_PANELS: int = int(os.environ.get("SPECTRAL_PANELS", 8))
SPECTRAL_ORDER: int = int(os.environ.get("SPECTRAL_ORDER", 10))

# Объем выборки Монте-Карло для нормы Роллника
SPECTRAL_MC_SAMPLES: int = int(os.environ.get("SPECTRAL_MC_SAMPLES", 200000))

# Показывать ли прогресс-бары tqdm
SPECTRAL_PROGRESS: bool = os.environ.get("SPECTRAL_PROGRESS", "0").lower() in ("1", "true", "yes")
