"""Kernel backend selection.

Two hot loops live here, with a compiled implementation and a numpy one
each. Under the default ``auto`` policy each kernel gets the
implementation that measures fastest for its shape of work:

* ``em_accumulate`` (Euler-Maruyama stepping) is loop-bound with a tiny
  body, where the compiled version wins by one to two orders of
  magnitude; it uses the extension when built.
* ``two_leader_totals`` (all-pairs sweep) reduces to one Gram matrix
  product, so the numpy/BLAS formulation beats a scalar loop from a few
  hundred nodes up and is used regardless (see benchmarks/bench_kernels).

Set ``COHERENCE_LAB_KERNELS`` to ``numpy`` or ``compiled`` to force one
implementation for everything (``compiled`` raises if the extension is
missing).
"""

from __future__ import annotations

import os

from . import _numpy_impl

_requested = os.environ.get("COHERENCE_LAB_KERNELS", "auto").strip().lower()

_compiled = None
if _requested in ("auto", "compiled"):
    try:
        from . import _speedups as _compiled
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "COHERENCE_LAB_KERNELS=compiled but the extension is not built; "
                "reinstall the package or drop the variable"
            )
        _compiled = None

if _requested == "numpy":
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "numpy"

em_accumulate = (_compiled or _numpy_impl).em_accumulate
if _requested == "compiled":
    two_leader_totals = _compiled.two_leader_totals
else:
    two_leader_totals = _numpy_impl.two_leader_totals
