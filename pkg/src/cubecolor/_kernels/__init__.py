"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
module takes over.  Set ``CUBECOLOR_PURE=1`` to force the fallback.
"""

import os

from . import pure

BACKENDS = {"python": pure}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels

if os.environ.get("CUBECOLOR_PURE") == "1" or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

_impl = BACKENDS[BACKEND]

enumerate_proper = _impl.enumerate_proper
count_avoiding_pairs = _impl.count_avoiding_pairs
independent_masks = _impl.independent_masks
count_independent = _impl.count_independent
count_disjoint_pairs = _impl.count_disjoint_pairs


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active one)."""
    if name is None:
        name = BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError("kernel backend %r is not available" % name) from None
