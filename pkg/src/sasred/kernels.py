"""Kernel selection: the compiled extension when importable, else numpy.

Set ``SASRED_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels
if not os.environ.get("SASRED_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass

residual_jacobian = _impl.residual_jacobian
admissible_triples = _impl.admissible_triples
