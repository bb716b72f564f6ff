"""Perturbation-tolerant structural controllability for single-input systems.

The main entry points are :func:`verify_ptsc` (combinatorial decision) and
:func:`oracle_verdict` (numeric cross-check on sampled realizations).
"""

__version__ = "0.1.0"

from .dm import DMDecomposition, dm_decompose  # noqa: E402
from .engine import PtscVerdict, scrp_feasible, verify_ptsc  # noqa: E402
from .instances import GenConfig, load_instance, parse_instance, random_instance  # noqa: E402
from .structural import is_structurally_controllable  # noqa: E402
from .structured import PerturbedStructuredSystem, StructuredMatrix, generic_rank  # noqa: E402


def __getattr__(name):
    # the numeric side pulls in numpy; keep it off the verify path
    if name in ("NumericConfig", "oracle_verdict"):
        from . import oracle

        return getattr(oracle, name)
    raise AttributeError(f"module 'ptsc' has no attribute {name!r}")

__all__ = [
    "__version__",
    "DMDecomposition",
    "dm_decompose",
    "PtscVerdict",
    "verify_ptsc",
    "scrp_feasible",
    "GenConfig",
    "load_instance",
    "parse_instance",
    "random_instance",
    "NumericConfig",
    "oracle_verdict",
    "is_structurally_controllable",
    "PerturbedStructuredSystem",
    "StructuredMatrix",
    "generic_rank",
]
