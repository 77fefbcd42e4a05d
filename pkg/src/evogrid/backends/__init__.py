"""Kernel backend selection.

Two interchangeable implementations of the hot loops exist: ``pykernels``
(pure numpy, always available) and ``_kernels`` (compiled Cython extension,
built when a C compiler is present).  They are bit-identical by contract.
The compiled backend is preferred when importable; set EVOGRID_BACKEND to
``python`` or ``compiled`` to force one.
"""

from __future__ import annotations

import os

from . import pykernels

_BACKENDS = {"python": pykernels}

try:
    from . import _kernels  # type: ignore[attr-defined]

    _BACKENDS["compiled"] = _kernels
except ImportError:
    _kernels = None

_requested = os.environ.get("EVOGRID_BACKEND", "").strip().lower()
if _requested:
    if _requested not in _BACKENDS:
        raise ImportError(
            f"EVOGRID_BACKEND={_requested!r} is not available; "
            f"choices: {sorted(_BACKENDS)}"
        )
    _active_name = _requested
else:
    _active_name = "compiled" if "compiled" in _BACKENDS else "python"


def available():
    """Names of importable backends."""
    return sorted(_BACKENDS)


def active_name():
    return _active_name


def active():
    """The module providing the kernel functions currently in use."""
    return _BACKENDS[_active_name]


def use(name):
    """Switch the active backend; returns the kernel module."""
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choices: {sorted(_BACKENDS)}")
    _active_name = name
    return _BACKENDS[name]


def get(name):
    """Fetch a backend module by name without switching."""
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choices: {sorted(_BACKENDS)}")
    return _BACKENDS[name]
