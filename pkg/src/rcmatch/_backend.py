"""Kernel selection: the compiled ``_core`` extension when importable,
otherwise the pure-Python kernels. ``RCMATCH_BACKEND=python`` forces the
fallback."""
from __future__ import annotations

import os

from . import _pykernels

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_forced = os.environ.get("RCMATCH_BACKEND", "").strip().lower()
if _forced not in ("", "python", "compiled"):
    raise ImportError(f"RCMATCH_BACKEND must be 'python' or 'compiled', got {_forced!r}")
if _forced == "compiled" and _core is None:
    raise ImportError("RCMATCH_BACKEND=compiled but the _core extension is not built")

DEFAULT = "python" if _forced == "python" or _core is None else "compiled"


def available() -> list[str]:
    return ["python"] + (["compiled"] if _core is not None else [])


def resolve(backend: str | None) -> str:
    name = backend or DEFAULT
    if name not in ("python", "compiled"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "compiled" and _core is None:
        raise RuntimeError("compiled backend requested but _core is not built")
    return name


def kernels(backend: str | None = None):
    return _core if resolve(backend) == "compiled" else _pykernels
