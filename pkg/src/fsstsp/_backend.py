"""Kernel selection: the compiled module when importable, else pure Python.

Set ``FSSTSP_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

kernels = _pykernels
if os.environ.get("FSSTSP_PURE_PYTHON") != "1":
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:
        pass

NAME = kernels.NAME
