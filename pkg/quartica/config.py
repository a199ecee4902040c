"""Configuration for the quartica engine"""

from dataclasses import dataclass, field
import logging
import os

from .llogger import setup_logger
from .methods import RankMethod


def print_color(msg, color="yellow", bold=True, stream=None):
    colors = {"red": "\033[91m", "green": "\033[92m", "yellow": "\033[93m", "blue": "\033[94m",
        "magenta": "\033[95m", "cyan": "\033[96m", "white": "\033[97m", "reset": "\033[0m" }

    color_code = colors.get(color.lower(), colors["yellow"])
    bold_code = "\033[1m" if bold else ""
    reset = colors["reset"]

    print(f"{bold_code}{color_code}{msg}{reset}", file=stream)


def print_logfile_name(logger, stream=None):
    """Finds the first FileHandler in the logger and prints its base filename."""
    for handler in logger.handlers:
        if isinstance(handler, logging.FileHandler):
            print_color(f"LOGGING TO FILE: {handler.baseFilename}", "blue", stream=stream)
            return handler.baseFilename
    return None


def _default_threads() -> int:
    return max(1, int(os.getenv("QUARTICA_THREADS", str(os.cpu_count() or 1))))


logger = setup_logger(__name__)


@dataclass
class EngineConfig:
    """Knobs shared by the exact and numeric engines"""

    # Linear algebra
    rank_method: str = field(
        default_factory=lambda: RankMethod.parse(os.getenv("QUARTICA_RANK_METHOD", "auto"))
    )
    exact_cells: int = field(default_factory=lambda: int(os.getenv("QUARTICA_EXACT_CELLS", "12000")))
    degree_cap: int = 12

    # Parallelism
    threads: int = field(default_factory=_default_threads)

    # Randomized steps (prime choice, root-finder starts, random inputs)
    seed: int = field(default_factory=lambda: int(os.getenv("QUARTICA_SEED", "20240601")))

    # Numerics
    tol: float = field(default_factory=lambda: float(os.getenv("QUARTICA_TOL", "1e-8")))
    root_max_iter: int = 1000
    digits: int = 40

    def __post_init__(self):
        self.rank_method = RankMethod.parse(self.rank_method)
        if self.threads < 1:
            raise ValueError(f"threads must be positive, got {self.threads}")
        if self.tol <= 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
