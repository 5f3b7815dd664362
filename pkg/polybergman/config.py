import os
import logging
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _float_env(name: str, default: str) -> float:
    return float(os.getenv(name, default))


def _int_env(name: str, default: str) -> int:
    return int(os.getenv(name, default))


class Config:

    # Series evaluation
    SERIES_TOL: float = _float_env("DISC_SERIES_TOL", "1e-13")
    SERIES_TERM_CAP: int = _int_env("DISC_SERIES_TERM_CAP", "100000")

    # Truncation of basis expansions and of the series kernel
    TRUNCATION: int = _int_env("DISC_TRUNCATION", "32")
    KERNEL_TRUNCATION: int = _int_env("DISC_KERNEL_TRUNCATION", "400")

    # Disc quadrature
    RADIAL_NODES: int = _int_env("DISC_RADIAL_NODES", "64")
    ANGULAR_NODES: int = _int_env("DISC_ANGULAR_NODES", "128")

    # Checks and reproducibility
    CHECK_TOL: float = _float_env("DISC_CHECK_TOL", "1e-10")
    SEED: int = _int_env("DISC_SEED", "0")

    # API Configuration
    API_HOST: str = os.getenv("API_HOST", "0.0.0.0")
    API_PORT: int = _int_env("API_PORT", "8000")
    DEBUG: bool = os.getenv("DEBUG", "False").lower() == "true"

    # Logging Configuration
    LOG_LEVEL: str = os.getenv("LOG_LEVEL", "INFO")

    @classmethod
    def validate_config(cls) -> tuple[bool, list[str]]:
        errors = []

        if not cls.SERIES_TOL > 0:
            errors.append("DISC_SERIES_TOL must be positive")
        if not cls.CHECK_TOL > 0:
            errors.append("DISC_CHECK_TOL must be positive")

        for name in ("SERIES_TERM_CAP", "TRUNCATION", "KERNEL_TRUNCATION", "RADIAL_NODES", "ANGULAR_NODES"):
            if getattr(cls, name) < 1:
                errors.append(f"DISC_{name} must be at least 1")

        if not isinstance(logging.getLevelName(cls.LOG_LEVEL.upper()), int):
            errors.append(f"LOG_LEVEL '{cls.LOG_LEVEL}' is not a logging level")

        return len(errors) == 0, errors

    @classmethod
    def setup_logging(cls):
        logging.basicConfig(
            level=getattr(logging, cls.LOG_LEVEL.upper(), logging.INFO),
            format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

# Create a singleton instance
config = Config()
