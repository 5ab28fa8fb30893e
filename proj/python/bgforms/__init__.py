"""Branson-Gover form operators on flat and conformally flat tori.

Thin wrapper over the compiled module: numpy in, numpy out.  Forms are
(ncomp, npts) arrays with components in lexicographic multi-index order and
grid points in row-major order.
"""

try:
    from ._core import (
        GuardError,
        apply_operator,
        coeff_ck,
        coeff_ckl,
        curvature,
        random_form,
        run_suite,
    )
except ImportError:  # test tree: module next to the build products
    from _core import (
        GuardError,
        apply_operator,
        coeff_ck,
        coeff_ckl,
        curvature,
        random_form,
        run_suite,
    )

__all__ = [
    "GuardError",
    "apply_operator",
    "coeff_ck",
    "coeff_ckl",
    "curvature",
    "random_form",
    "run_suite",
]
