"""Symplectic invariants of the coupled angular momenta on S^2 x S^2.

Set SEMITORIC_NO_NUMBA=1 to run the compiled kernels as plain numpy.
"""
from importlib import import_module

__version__ = "0.1.0"

from . import errors, params, elliptic, reduced, series, abelian, taylor  # noqa: E402
from . import global_invariants  # noqa: E402
from .params import ModelParams, ParamChart  # noqa: E402

# ``global`` is a keyword, so the module is also reachable under this alias
global_ = global_invariants

__all__ = ["errors", "params", "elliptic", "reduced", "series", "abelian", "taylor",
           "global_invariants", "global_", "ModelParams", "ParamChart", "cli", "verify", "__version__"]


def __getattr__(name):
    if name in ("cli", "verify"):
        return import_module(f".{name}", __name__)
    raise AttributeError(name)
