"""JSON encoding of the on-disk formats: complex scalars, sequence specs,
dense matrices.  Parsing is strict; unknown fields are rejected so that case
files cannot silently drift from the schema.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .blockshift import BlockShiftSpec
from .kernels import (
    DEFAULT_TRUNCATION,
    GammaKernel,
    KernelSpec,
    LambdaKernel,
    MobiusMap,
    ProductKernel,
    TableKernel,
)
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
)


class SchemaError(ValueError):
    """A JSON document does not match the documented file format."""


def check_keys(obj: dict, required: set[str], optional: set[str] = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"expected a JSON object, got {type(obj).__name__}")
    keys = set(obj)
    missing = required - keys
    unknown = keys - required - optional
    if missing:
        raise SchemaError(f"missing fields: {sorted(missing)}")
    if unknown:
        raise SchemaError(f"unknown fields: {sorted(unknown)}")


def complex_to_json(z: complex) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def complex_from_json(obj: Any) -> complex:
    if isinstance(obj, (int, float)):
        return complex(obj)
    check_keys(obj, {"re", "im"})
    return complex(float(obj["re"]), float(obj["im"]))


def seq_to_json(spec: SequenceSpec) -> dict:
    match spec:
        case Constant(value):
            return {"kind": "constant", "value": complex_to_json(value)}
        case Table(entries, default):
            return {
                "kind": "table",
                "entries": {str(n): complex_to_json(v) for n, v in sorted(entries.items())},
                "default": None if default is None else complex_to_json(default),
            }
        case MobiusRational(c1, c2, s):
            return {"kind": "mobius-rational", "c1": c1, "c2": c2, "s": complex_to_json(s)}
        case SqrtRatio(a, b):
            return {"kind": "sqrt-ratio", "a": a, "b": b}
        case Periodic(cycle):
            return {"kind": "periodic", "cycle": [complex_to_json(v) for v in cycle]}
        case ReciprocalOf(inner):
            return {"kind": "reciprocal-of", "inner": seq_to_json(inner)}
        case NegatedShiftedReflection(inner, shift):
            return {
                "kind": "negated-shifted-reflection",
                "inner": seq_to_json(inner),
                "shift": shift,
            }
        case PointwiseProduct(left, right):
            return {
                "kind": "pointwise-product",
                "left": seq_to_json(left),
                "right": seq_to_json(right),
            }
    raise TypeError(f"not a sequence spec: {spec!r}")


def seq_from_json(obj: Any) -> SequenceSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("sequence spec must be an object with a 'kind' field")
    kind = obj["kind"]
    if kind == "constant":
        check_keys(obj, {"kind", "value"})
        return Constant(complex_from_json(obj["value"]))
    if kind == "table":
        check_keys(obj, {"kind", "entries"}, {"default"})
        try:
            entries = {int(k): complex_from_json(v) for k, v in obj["entries"].items()}
        except (AttributeError, ValueError) as exc:
            raise SchemaError(f"bad table entries: {exc}") from exc
        default = obj.get("default")
        return Table(entries, None if default is None else complex_from_json(default))
    if kind == "mobius-rational":
        check_keys(obj, {"kind", "c1", "c2", "s"})
        return MobiusRational(float(obj["c1"]), float(obj["c2"]), complex_from_json(obj["s"]))
    if kind == "sqrt-ratio":
        check_keys(obj, {"kind", "a", "b"})
        return SqrtRatio(float(obj["a"]), float(obj["b"]))
    if kind == "periodic":
        check_keys(obj, {"kind", "cycle"})
        return Periodic(tuple(complex_from_json(v) for v in obj["cycle"]))
    if kind == "reciprocal-of":
        check_keys(obj, {"kind", "inner"})
        return ReciprocalOf(seq_from_json(obj["inner"]))
    if kind == "negated-shifted-reflection":
        check_keys(obj, {"kind", "inner", "shift"})
        return NegatedShiftedReflection(seq_from_json(obj["inner"]), int(obj["shift"]))
    if kind == "pointwise-product":
        check_keys(obj, {"kind", "left", "right"})
        return PointwiseProduct(seq_from_json(obj["left"]), seq_from_json(obj["right"]))
    raise SchemaError(f"unknown sequence kind {kind!r}")


def blockshift_to_json(spec: BlockShiftSpec) -> dict:
    return {"w": seq_to_json(spec.w), "v": seq_to_json(spec.v), "d": seq_to_json(spec.d)}


def blockshift_from_json(obj: Any) -> BlockShiftSpec:
    check_keys(obj, {"w", "v", "d"})
    return BlockShiftSpec(
        w=seq_from_json(obj["w"]), v=seq_from_json(obj["v"]), d=seq_from_json(obj["d"])
    )


def kernel_to_json(kernel: KernelSpec) -> dict:
    match kernel:
        case LambdaKernel(lam, truncation):
            return {"kind": "lambda", "lam": lam, "truncation": truncation}
        case GammaKernel(gamma, truncation):
            return {"kind": "gamma", "gamma": gamma, "truncation": truncation}
        case TableKernel(coeffs, truncation):
            return {"kind": "table", "coefficients": list(coeffs), "truncation": truncation}
        case ProductKernel(left, right, truncation):
            return {
                "kind": "product",
                "left": kernel_to_json(left),
                "right": kernel_to_json(right),
                "truncation": truncation,
            }
    raise TypeError(f"not a kernel spec: {kernel!r}")


def kernel_from_json(obj: Any) -> KernelSpec:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SchemaError("kernel spec must be an object with a 'kind' field")
    kind = obj["kind"]
    trunc = int(obj.get("truncation", DEFAULT_TRUNCATION))
    if kind == "lambda":
        check_keys(obj, {"kind", "lam"}, {"truncation"})
        return LambdaKernel(float(obj["lam"]), trunc)
    if kind == "gamma":
        check_keys(obj, {"kind", "gamma"}, {"truncation"})
        return GammaKernel(float(obj["gamma"]), trunc)
    if kind == "table":
        check_keys(obj, {"kind", "coefficients"}, {"truncation"})
        return TableKernel(tuple(float(c) for c in obj["coefficients"]), trunc)
    if kind == "product":
        check_keys(obj, {"kind", "left", "right"}, {"truncation"})
        return ProductKernel(
            kernel_from_json(obj["left"]), kernel_from_json(obj["right"]), trunc
        )
    raise SchemaError(f"unknown kernel kind {kind!r}")


def mobius_from_json(obj: Any) -> MobiusMap:
    check_keys(obj, {"theta", "a"})
    return MobiusMap(theta=float(obj["theta"]), a=complex_from_json(obj["a"]))


def matrix_to_json(m: np.ndarray) -> list:
    """Dense matrix as an array of rows of {re, im} objects."""
    m = np.asarray(m, dtype=complex)
    return [[complex_to_json(v) for v in row] for row in m]


def matrix_from_json(obj: Any) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise SchemaError("matrix must be a non-empty array of rows")
    rows = []
    width = None
    for row in obj:
        if not isinstance(row, list):
            raise SchemaError("matrix rows must be arrays")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise SchemaError("matrix rows have inconsistent lengths")
        rows.append([complex_from_json(v) for v in row])
    return np.array(rows, dtype=complex)
