"""Workspace sizing via the lwork = -1 query convention."""

from __future__ import annotations

from ..mpblas.matrix import Matrix, Vector
from .eigsym import Rsyev
from .lu import PivotVector, Rgetri


def workspace_query(routine, n):
    """Optimal lwork for a workspace-bearing driver at problem size n.

    Runs the driver's lwork = -1 protocol on a dummy problem and reads
    the size back out of work[0].  Knows the lwork-bearing drivers
    only; anything else raises ValueError.
    """
    if n < 0:
        raise ValueError(f"workspace_query: n must be nonnegative, got {n}")
    work = Vector(1, "f64")
    a = Matrix(max(1, n), max(1, n), "f64")
    if routine == "Rsyev":
        w = Vector(max(1, n), "f64")
        res, info = Rsyev("N", "U", n, a, a.ld, w, work, -1)
        if info != 0:
            raise RuntimeError(f"Rsyev query failed: info={info}")
    elif routine == "Rgetri":
        ipiv = PivotVector(list(range(1, n + 1)))
        info = Rgetri(n, a, a.ld, ipiv, work, -1)
        if info != 0:
            raise RuntimeError(f"Rgetri query failed: info={info}")
    else:
        raise ValueError(f"workspace_query: unknown routine {routine!r}")
    return int(work.get(0))
