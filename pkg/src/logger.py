import logging

import config

logging.basicConfig(
    level=getattr(logging, config.SPECTRAL_LOG_LEVEL.upper(), logging.INFO),
    format="%(asctime)s %(levelname)s %(message)s",
    handlers=[logging.FileHandler(config.SPECTRAL_LOG_FILE), logging.StreamHandler()],
)

if not config.DOTENV_FOUND:
    logging.info(".env не найден, используются значения по умолчанию")
