import numpy as np
import pytest

from blockshift_lab.blockshift import BlockShiftSpec
from blockshift_lab.jsonio import (
    SchemaError,
    blockshift_from_json,
    blockshift_to_json,
    complex_from_json,
    complex_to_json,
    kernel_from_json,
    kernel_to_json,
    matrix_from_json,
    matrix_to_json,
    seq_from_json,
    seq_to_json,
)
from blockshift_lab.kernels import GammaKernel, LambdaKernel, ProductKernel, TableKernel
from blockshift_lab.seqcore import (
    Constant,
    MobiusRational,
    NegatedShiftedReflection,
    Periodic,
    PointwiseProduct,
    ReciprocalOf,
    SqrtRatio,
    Table,
)

ROUNDTRIP_SEQS = [
    Constant(1.5 - 0.5j),
    Table({0: 1.0, -3: 2.0 + 1.0j}, default=0.5),
    Table({1: 4.0}),
    MobiusRational(0.5, 0.5, 1j),
    SqrtRatio(0.3, 0.7),
    Periodic((1.0, 2.0 + 1j)),
    ReciprocalOf(MobiusRational(0.25, 0.75, 0.5 + 0.5j)),
    NegatedShiftedReflection(Table({0: 5.0, -1: 7.0}), shift=1),
    PointwiseProduct(Constant(0.5), SqrtRatio(0.3, 0.7)),
]


@pytest.mark.parametrize("spec", ROUNDTRIP_SEQS, ids=lambda s: type(s).__name__)
def test_sequence_roundtrip(spec):
    assert seq_from_json(seq_to_json(spec)) == spec


def test_complex_roundtrip():
    assert complex_from_json(complex_to_json(1.5 - 2.5j)) == 1.5 - 2.5j
    assert complex_from_json(3) == 3.0 + 0.0j


def test_unknown_sequence_kind_rejected():
    with pytest.raises(SchemaError):
        seq_from_json({"kind": "mystery"})


def test_unknown_fields_rejected():
    with pytest.raises(SchemaError):
        seq_from_json({"kind": "constant", "value": {"re": 1, "im": 0}, "extra": 1})
    with pytest.raises(SchemaError):
        complex_from_json({"re": 1.0, "im": 0.0, "phase": 0.0})


def test_blockshift_roundtrip():
    spec = BlockShiftSpec.t_class(MobiusRational(0.5, 0.5, 1j), Constant(1.0))
    again = blockshift_from_json(blockshift_to_json(spec))
    assert again == spec
    assert again.class_td


def test_kernel_roundtrip():
    for kernel in (
        LambdaKernel(2.0),
        GammaKernel(-1.5, truncation=64),
        TableKernel((1.0, 0.5, 0.25)),
        ProductKernel(LambdaKernel(1.0), GammaKernel(0.5)),
    ):
        assert kernel_from_json(kernel_to_json(kernel)) == kernel


def test_kernel_unknown_kind():
    with pytest.raises(SchemaError):
        kernel_from_json({"kind": "bessel"})


def test_matrix_roundtrip():
    m = np.array([[1.0 + 2j, 0.0], [-1.5j, 3.0]])
    assert np.array_equal(matrix_from_json(matrix_to_json(m)), m)


def test_matrix_rejects_ragged():
    with pytest.raises(SchemaError):
        matrix_from_json([[{"re": 1, "im": 0}], []])
