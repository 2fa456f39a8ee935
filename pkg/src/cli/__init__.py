from .commands import EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION, build_parser, main
from .config import ExperimentConfig, resolve_fixture

__all__ = [
    "EXIT_NUMERIC",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "ExperimentConfig",
    "build_parser",
    "main",
    "resolve_fixture",
]
