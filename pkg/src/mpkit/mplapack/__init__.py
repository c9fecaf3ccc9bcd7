"""Dense LAPACK-style driver subset, precision-generic.

LU (factor/solve/invert), Cholesky, symmetric eigensolver, real Schur
decomposition, and SVD, all over the same element backends as the BLAS
layer, with the classic workspace-query protocol (lwork == -1).
"""

from .chol import Rpotrf
from .eigsym import EigenResult, Rsyev
from .lu import PivotVector, Rgetrf, Rgetri, Rgetrs
from .schur import Rgees, SchurResult
from .svd import Rgesvd, SvdResult
from .workspace import workspace_query

__all__ = [
    "EigenResult",
    "PivotVector",
    "Rgees",
    "Rgesvd",
    "Rgetrf",
    "Rgetri",
    "Rgetrs",
    "Rpotrf",
    "Rsyev",
    "SchurResult",
    "SvdResult",
    "workspace_query",
    ]
