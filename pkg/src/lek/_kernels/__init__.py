"""Hot per-pixel kernels: compiled core with a numpy fallback.

The compiled module is preferred when its import succeeds; set
``LEK_PURE_PYTHON=1`` to force the fallback. Both backends produce
bit-identical outputs, so pipeline results do not depend on which one
loaded. ``BACKEND`` names the active one.
"""

import os

if os.environ.get("LEK_PURE_PYTHON"):
    from . import _pure as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

BACKEND = _impl.BACKEND
fill_holes = _impl.fill_holes
label_components = _impl.label_components
confusion_counts = _impl.confusion_counts
resize_nearest_u8 = _impl.resize_nearest_u8
resize_bilinear_rgb = _impl.resize_bilinear_rgb
