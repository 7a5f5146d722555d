"""Selects the compiled kernels when available, else the pure-Python ones."""

import os

if os.environ.get("BETTISTAB_PURE_PYTHON"):
    from . import _pykernels as _impl
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        from . import _pykernels as _impl

BACKEND = "cython" if _impl.__name__.endswith("_ckernels") else "python"

lcm_closure = _impl.lcm_closure
betti_batch = _impl.betti_batch
homology_from_faces = _impl.homology_from_faces
