"""Third-order WENO-Z reconstructions, finite-difference solvers and their verification harness."""
from src.config import LIBRARY_VERSION as __version__

__all__ = ["__version__"]
