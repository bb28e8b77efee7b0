"""Kernel lane selection: compiled extension if built, pure Python otherwise.

Set PUZZLEGRAPH_PURE=1 to force the interpreted lane even when the compiled
extension is available (used by the parity tests and the benchmark).
"""
import importlib.util
import os
from pathlib import Path

_PURE_ENV = "PUZZLEGRAPH_PURE"


def load_pure_lane():
    """Import the kernel source as plain Python, bypassing any extension."""
    path = Path(__file__).with_name("solvers.py")
    spec = importlib.util.spec_from_file_location(
        "puzzlegraph._kernels._solvers_pure", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def load_compiled_lane():
    """Import whatever `solvers` resolves to (the .so when built)."""
    from . import solvers
    return solvers


if os.environ.get(_PURE_ENV):
    kernels = load_pure_lane()
else:
    kernels = load_compiled_lane()

KERNELS_COMPILED = bool(getattr(kernels, "COMPILED", False))
