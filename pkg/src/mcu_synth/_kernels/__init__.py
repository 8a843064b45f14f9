"""Gate-application kernel selection.

Imports the compiled Cython core when available, otherwise the pure-numpy
fallback. Set MCU_SYNTH_FORCE_FALLBACK=1 to force the numpy path (used by
the kernel benchmark and equivalence tests).
"""

import os

if os.environ.get("MCU_SYNTH_FORCE_FALLBACK"):
    from . import fallback as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import fallback as _impl

BACKEND = _impl.BACKEND
apply_1q = _impl.apply_1q
apply_cnot = _impl.apply_cnot
apply_toffoli = _impl.apply_toffoli
apply_cu = _impl.apply_cu
run_tracks = _impl.run_tracks
