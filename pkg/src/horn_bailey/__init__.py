"""Exact verification of Bailey-type factorisations of the Horn functions
H1, H4 and H5."""
from .exact import MultiPoly, Q, QuadExtElement, RationalFunction, ratfunc_eq
from .hyper import HypergeometricSpec, hyper_series, pde_system
from .series import TruncatedSeries

__version__ = "0.1.0"

__all__ = [
    "MultiPoly", "Q", "QuadExtElement", "RationalFunction", "ratfunc_eq",
    "HypergeometricSpec", "hyper_series", "pde_system", "TruncatedSeries",
]
