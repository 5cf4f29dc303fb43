"""Kernel backend selection.

The hot loops live twice: in the compiled extension `_ckernels` and in the
pure-Python `_pykernels`.  The compiled module is preferred when it imported
successfully; set BETADOUBLING_DISABLE_EXT=1 to force the pure kernels
(useful for benchmarking and debugging).  Both backends are exact.
"""

import os

if os.environ.get("BETADOUBLING_DISABLE_EXT"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "c"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"

substitute_word = _impl.substitute_word
refine_weights = _impl.refine_weights
max_pair_ratio = _impl.max_pair_ratio
max_adjacent_ratio = _impl.max_adjacent_ratio
