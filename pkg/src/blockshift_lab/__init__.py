"""blockshift-lab: window-scoped verification of 2x2 bilateral block-shift
operators and diagonal reproducing kernels, cross-validated against dense
matrix oracles.
"""

__version__ = "0.1.0"

from .seqcore import (
    Constant,
    MobiusRational,
    NegatedShiftedReflection,
    Periodic,
    PointwiseProduct,
    ReciprocalOf,
    SequenceSpec,
    SqrtRatio,
    Table,
    Window,
    eval_seq,
    window_values,
)
from .blockshift import BlockShiftSpec, Reflection, IdentityMap, TableMap

__all__ = [
    "__version__",
    "BlockShiftSpec",
    "Constant",
    "IdentityMap",
    "MobiusRational",
    "NegatedShiftedReflection",
    "Periodic",
    "PointwiseProduct",
    "ReciprocalOf",
    "Reflection",
    "SequenceSpec",
    "SqrtRatio",
    "Table",
    "TableMap",
    "Window",
    "eval_seq",
    "window_values",
]
