"""Exact computation of the Rees algebra equations of a height-two ideal of
three forms in Q[x1, x2], cross-checked through D-module methods."""

__version__ = "0.1.0"

from .poly_core import CommPoly, CommVector, MonomialOrder, ModuleOrder, RingContext, R_CTX, S_CTX  # noqa: E402
from .weyl import WeylOp, fourier, transpose_std, initial_form, weyl_mul, weyl_module_gb  # noqa: E402
from .rees import HilbertBurchData, analyze_input, rees_ideal, k_table, random_hb_ideal  # noqa: E402
from .bfun import restriction_matrices, module_bfunction, ideal_bfunction  # noqa: E402
from .parser import parse_polynomial  # noqa: E402

__all__ = [
    "CommPoly", "CommVector", "MonomialOrder", "ModuleOrder", "RingContext", "R_CTX", "S_CTX",
    "WeylOp", "fourier", "transpose_std", "initial_form", "weyl_mul", "weyl_module_gb",
    "HilbertBurchData", "analyze_input", "rees_ideal", "k_table", "random_hb_ideal",
    "restriction_matrices", "module_bfunction", "ideal_bfunction", "parse_polynomial",
]
