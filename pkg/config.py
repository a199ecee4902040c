"""
Centralized configuration for the quartica command-line tools.

This file defines process-wide settings that can be overridden
via environment variables (or a .env file next to this module).
"""

import os
from dataclasses import dataclass
from pathlib import Path

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    # Load from .env file in the project root
    env_path = Path(__file__).parent / ".env"
    load_dotenv(dotenv_path=env_path)
except ImportError:
    # python-dotenv not installed, skip
    pass


@dataclass
class QuarticaConfig:
    """Centralized configuration for all commands"""

    # Parallelism
    THREADS: int = int(os.getenv("QUARTICA_THREADS", str(os.cpu_count() or 1)))

    # Linear algebra backend: auto | exact | modular
    RANK_METHOD: str = os.getenv("QUARTICA_RANK_METHOD", "auto")
    EXACT_CELLS: int = int(os.getenv("QUARTICA_EXACT_CELLS", "12000"))

    # Randomized steps and numerics
    SEED: int = int(os.getenv("QUARTICA_SEED", "20240601"))
    TOL: float = float(os.getenv("QUARTICA_TOL", "1e-8"))

    # Logging
    LOG_LEVEL: str = os.getenv("QUARTICA_LOG_LEVEL", "WARNING")
    LOG_DIR: str = os.getenv("QUARTICA_LOG_DIR", "")

    @property
    def LOG_FILE(self) -> str:
        return str(Path(self.LOG_DIR) / "quartica.log") if self.LOG_DIR else ""

    def engine_config(self, **overrides):
        """Build the library-side EngineConfig from these settings"""
        from quartica.config import EngineConfig

        values = dict(
            rank_method=self.RANK_METHOD,
            exact_cells=self.EXACT_CELLS,
            threads=self.THREADS,
            seed=self.SEED,
            tol=self.TOL,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return EngineConfig(**values)


# Global config instance
config = QuarticaConfig()


def get_config() -> QuarticaConfig:
    """Get the global configuration instance"""
    return config


def reload_config() -> QuarticaConfig:
    """Reload configuration from environment variables"""
    global config
    # class attributes were evaluated at import time; rebuild them from os.environ
    config = QuarticaConfig(
        THREADS=int(os.getenv("QUARTICA_THREADS", str(os.cpu_count() or 1))),
        RANK_METHOD=os.getenv("QUARTICA_RANK_METHOD", "auto"),
        EXACT_CELLS=int(os.getenv("QUARTICA_EXACT_CELLS", "12000")),
        SEED=int(os.getenv("QUARTICA_SEED", "20240601")),
        TOL=float(os.getenv("QUARTICA_TOL", "1e-8")),
        LOG_LEVEL=os.getenv("QUARTICA_LOG_LEVEL", "WARNING"),
        LOG_DIR=os.getenv("QUARTICA_LOG_DIR", ""),
    )
    return config
