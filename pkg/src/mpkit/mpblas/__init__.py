"""Precision-generic BLAS subset over binary64 and double-double elements."""

from .elem import get_backend
from .level1 import Raxpy, Rdot, Rnrm2, iRamax
from .level23 import Cgemm, Rgemm, Rgemv, Rsyrk, Rtrsm
from .matrix import BlasError, Matrix, Vector
from .parallel import Raxpy_par, Rdot_par, Rgemm_par, resolve_threads

__all__ = [
    "BlasError",
    "Matrix",
    "Vector",
    "get_backend",
    "Raxpy",
    "Rdot",
    "Rnrm2",
    "iRamax",
    "Rgemv",
    "Rgemm",
    "Rsyrk",
    "Rtrsm",
    "Cgemm",
    "Raxpy_par",
    "Rdot_par",
    "Rgemm_par",
    "resolve_threads",
]
