"""Kernel selection.

Set ``SHORTDUAL_DISABLE_NUMBA=1`` before import to force the numpy path.
"""

import os

import numpy as np

from . import _kernels

_disabled = os.environ.get("SHORTDUAL_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}
USE_NUMBA = _kernels.HAVE_NUMBA and not _disabled
BACKEND = "numba" if USE_NUMBA else "numpy"

if USE_NUMBA:
    _bspline = _kernels.bspline_numba
    _cramer = _kernels.cramer_dual_numba
    _interp = _kernels.interp_uniform_numba
else:
    _bspline = _kernels.bspline_numpy
    _cramer = _kernels.cramer_dual_numpy
    _interp = _kernels.interp_uniform_numpy


def bspline(x, order):
    x = np.ascontiguousarray(x, dtype=np.float64).ravel()
    return _bspline(x, int(order))


def cramer_dual(E, b):
    E = np.ascontiguousarray(E, dtype=np.float64).reshape(-1, 3, 3)
    return _cramer(E, float(b))


def interp_uniform(xq, x0, step, values):
    xq = np.ascontiguousarray(xq, dtype=np.float64).ravel()
    values = np.ascontiguousarray(values, dtype=np.float64)
    return _interp(xq, float(x0), float(step), values)
