import logging
import os
import sys
from typing import Dict

from dotenv import dotenv_values, load_dotenv
from pydantic import BaseModel, Field

load_dotenv(override=True)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


class Settings(BaseModel):
    """Process-wide settings read from the environment (or a .env file)."""

    log_level: str = Field(default="INFO", description="ISING_EVO_LOG_LEVEL")
    workers: int = Field(default=1, ge=1, description="ISING_EVO_WORKERS")
    base_seed: int = Field(default=0, description="ISING_EVO_BASE_SEED")

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            log_level=os.getenv("ISING_EVO_LOG_LEVEL", "INFO"),
            workers=int(os.getenv("ISING_EVO_WORKERS", "1")),
            base_seed=int(os.getenv("ISING_EVO_BASE_SEED", "0")),
        )


def configure_logging(level: str = "INFO") -> None:
    """Single stderr handler; stdout stays free for summary lines."""
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level.upper())


def read_flag_file(path: str) -> Dict[str, str]:
    """key=value pairs keyed by flag name, dashes normalised to underscores."""
    if not os.path.isfile(path):
        raise FileNotFoundError(f"config file not found: {path}")
    values = dotenv_values(path)
    return {key.strip().lstrip("-").replace("-", "_"): value for key, value in values.items() if value is not None}
