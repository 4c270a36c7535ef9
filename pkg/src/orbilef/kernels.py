"""Kernel backend selection.

The compiled extension is used when it imports; setting ``ORBILEF_PURE_PYTHON=1``
forces the pure-Python fallback.
"""
import os

from orbilef import _kernels_py

if os.environ.get("ORBILEF_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from orbilef import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "python" if _impl is _kernels_py else "cython"

perm_closure = _impl.perm_closure
table_from_right = _impl.table_from_right
is_associative = _impl.is_associative
twisted_action_table = _impl.twisted_action_table
twisted_centralizer_sizes = _impl.twisted_centralizer_sizes


def action_orbits(act):
    if act.size and act.min() < 0:
        raise ValueError("action table has entries outside the point set")
    return _impl.action_orbits(act)
