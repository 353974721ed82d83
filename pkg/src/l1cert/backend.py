"""Kernel lane selection.

The hot loops exist twice: jitted with numba and as pure-numpy fallbacks.
``L1CERT_BACKEND=numpy`` forces the fallback lane, ``L1CERT_BACKEND=numba``
requires the jitted lane (raising if numba cannot be imported).  Default is
numba when available.
"""

from __future__ import annotations

import os

_ENV_VAR = "L1CERT_BACKEND"


def load_backend(name: str):
    """Import one lane explicitly ("numba" or "numpy")."""
    if name == "numpy":
        from . import _kernels_numpy

        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    raise ValueError(f"unknown backend {name!r}")


def _select():
    forced = os.environ.get(_ENV_VAR, "").strip().lower()
    if forced == "numpy":
        return load_backend("numpy")
    if forced == "numba":
        return load_backend("numba")
    if forced:
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {forced!r}")
    try:
        return load_backend("numba")
    except ImportError:
        return load_backend("numpy")


kernels = _select()


def active_backend() -> str:
    return kernels.NAME
