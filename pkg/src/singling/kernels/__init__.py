"""Kernel backend selection.

Two interchangeable implementations of the hot loops exist:

* ``singling.kernels._fast`` -- Cython extension built at install time,
* ``singling.kernels.pure``  -- pure-Python reference implementation.

They are written to produce bit-identical float64 output.  The compiled
backend is preferred when importable; set the environment variable
``SINGLING_BACKEND`` to ``pure`` or ``compiled`` to force a choice (forcing
``compiled`` raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import pure

_requested = os.environ.get("SINGLING_BACKEND", "").strip().lower()
if _requested not in ("", "pure", "compiled"):
    raise ImportError(
        f"SINGLING_BACKEND={_requested!r} not recognised; use 'pure' or 'compiled'"
    )

_compiled = None
if _requested != "pure":
    try:
        from . import _fast as _compiled  # type: ignore[attr-defined]
    except ImportError:
        _compiled = None
if _requested == "compiled" and _compiled is None:
    raise ImportError(
        "SINGLING_BACKEND=compiled but singling.kernels._fast is not built; "
        "reinstall with Cython and a C compiler available"
    )

active = _compiled if _compiled is not None else pure
BACKEND_NAME: str = active.BACKEND_NAME


def available_backends() -> dict[str, object]:
    """Importable backend modules keyed by name."""
    found: dict[str, object] = {"pure": pure}
    if _compiled is not None:
        found["compiled"] = _compiled
    return found


def get_backend(name: str):
    """Fetch a backend module by name; raises KeyError when unavailable."""
    try:
        return available_backends()[name]
    except KeyError:
        raise KeyError(f"backend {name!r} not available") from None
