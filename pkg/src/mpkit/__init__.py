"""mpkit: precision-generic dense linear algebra with double-double arithmetic."""

from .ddarith import (
    DDouble,
    DDComplex,
    TWO_PROD_SCHEME,
    dd_add,
    dd_sub,
    dd_mul,
    dd_div,
    dd_sqrt,
    dd_from_string,
    dd_to_string,
    machine_params,
)

__version__ = "0.1.0"

__all__ = [
    "DDouble",
    "DDComplex",
    "TWO_PROD_SCHEME",
    "dd_add",
    "dd_sub",
    "dd_mul",
    "dd_div",
    "dd_sqrt",
    "dd_from_string",
    "dd_to_string",
    "machine_params",
    "__version__",
]
