"""Kernel selection: compiled extension when available, else pure Python.

Set GREENLEM_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging); otherwise the compiled `_esym` module is preferred.
"""

from __future__ import annotations

import os

if os.environ.get("GREENLEM_PURE_PYTHON"):
    from . import _esym_py as _impl
else:
    try:
        from . import _esym as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _esym_py as _impl

esym_log_complex = _impl.esym_log_complex
esym_log_complex_batch = _impl.esym_log_complex_batch


def backend_name() -> str:
    return "compiled" if _impl.__name__.endswith("_esym") else "pure-python"
