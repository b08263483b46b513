import os
from pathlib import Path
from typing import Dict, Union

from dotenv import load_dotenv, dotenv_values

load_dotenv()


class Settings:
    ITERATIONS: int = int(os.getenv("RRP_ITERATIONS", "2000"))
    SEED: int = int(os.getenv("RRP_SEED", "2025"))
    NETWORKS_PER_ITERATION: int = int(os.getenv("RRP_NETWORKS", "8"))
    GWO_PACK_SIZE: int = int(os.getenv("GWO_PACK_SIZE", "30"))
    GWO_ITERATIONS: int = int(os.getenv("GWO_ITERATIONS", "100"))
    GWO_PENALTY: float = float(os.getenv("GWO_PENALTY", "10.0"))
    HYBRID_ALPHA: float = float(os.getenv("HYBRID_ALPHA", "0.2"))
    HYBRID_BETA: float = float(os.getenv("HYBRID_BETA", "0.8"))
    WORKERS: int = int(os.getenv("RRP_WORKERS", "1"))
    OUTPUT_FORMAT: str = os.getenv("RRP_OUTPUT_FORMAT", "csv")
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")


settings = Settings()


# Keys accepted in a --config file; they mirror the long flag names.
CONFIG_FILE_KEYS = {
    "iterations",
    "seed",
    "method",
    "weighting",
    "class",
    "removal",
    "chain",
    "alpha",
    "beta",
    "pack_size",
    "gwo_iters",
    "penalty",
    "networks",
    "out",
    "format",
    "reweight_per_step",
    "workers",
}

PROFILE_KEY_PREFIX = "profile_"


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """
    Read a flat key=value config file.

    Args:
        path: Location of the file

    Returns:
        Mapping of normalized keys (lower case, dashes as underscores) to raw values

    Raises:
        ConfigError: if the file is missing or holds an unknown or empty key
    """
    # Imported here so config.py stays importable before models.py
    from models import ConfigError

    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")

    values = {}
    for raw_key, raw_value in dotenv_values(path).items():
        key = raw_key.strip().lower().replace("-", "_")
        if raw_value is None or raw_value.strip() == "":
            raise ConfigError(f"Config key '{raw_key}' has no value")
        if key not in CONFIG_FILE_KEYS and not key.startswith(PROFILE_KEY_PREFIX):
            raise ConfigError(f"Unknown config key '{raw_key}'")
        values[key] = raw_value.strip()
    return values
