"""Exact zeta functions, Mobius inversion and incidence algebras."""
from pathlib import Path

from .kernels import BACKEND

__version__ = "0.1.0"

FIXTURES = Path(__file__).with_name("fixtures")


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture such as ``boundary_delta3.json``."""
    path = FIXTURES / name
    if not path.is_file():
        raise FileNotFoundError(f"no bundled fixture named {name!r}")
    return path


__all__ = ["BACKEND", "FIXTURES", "fixture_path", "__version__"]
