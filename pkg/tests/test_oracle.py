import math

import numpy as np
import pytest

from blockshift_lab import oracle
from blockshift_lab.blockshift import (
    BlockShiftSpec,
    Window,
    scalar_shift_matrix,
    truncate,
)
from blockshift_lab.kernels import MobiusMap, mobius_apply, mobius_compose
from blockshift_lab.seqcore import Constant, Periodic, Table

from conftest import (
    mobius_rational_spec,
    random_general_spec,
    random_td_spec,
    random_unitary,
)


def test_gram_check_reciprocal_class():
    spec = BlockShiftSpec.t_class(Constant(2.0), Constant(1.0))
    assert oracle.dense_gram_check(spec, 0) < 1e-14


def test_gram_check_unimodular_display():
    spec = BlockShiftSpec(
        w=Constant(complex(math.cos(0.8), math.sin(0.8))),
        v=Constant(complex(math.cos(-0.4), math.sin(-0.4))),
        d=Constant(1.0),
    )
    assert oracle.dense_gram_check(spec, 0) < 1e-14


def test_gram_check_random_specs(rng):
    for _ in range(200):
        spec = random_general_spec(rng)
        assert oracle.dense_gram_check(spec, int(rng.integers(-2, 3))) < 1e-12


def test_commutator_antihermitian(rng):
    for _ in range(100):
        spec = random_td_spec(rng)
        c = oracle.commutator_direct(spec, int(rng.integers(-2, 3)))
        assert np.max(np.abs(c + c.conj().T)) < 1e-12


def test_commutator_vanishes_for_reciprocal_pair():
    # t_n = 1/t_{n-1} kills the sign obstruction: commutator must vanish
    t = Table({-1: 2.0, 0: 0.5, 1: 2.0, 2: 0.5})
    spec = BlockShiftSpec.t_class(t, Constant(1.0))
    assert np.max(np.abs(oracle.commutator_direct(spec, 0))) < 1e-13


def test_commutator_zero_for_diagonal_free_unimodular():
    spec = BlockShiftSpec(
        w=Constant(complex(math.cos(0.8), math.sin(0.8))),
        v=Constant(complex(math.cos(2.1), math.sin(2.1))),
        d=Constant(0.0),
    )
    assert np.max(np.abs(oracle.commutator_direct(spec, 0))) < 1e-14


def test_commutator_nonzero_for_rational_weights():
    spec = mobius_rational_spec()
    assert np.max(np.abs(oracle.commutator_direct(spec, 1))) > 1e-2


def test_identity_check_exact(rng):
    for _ in range(20):
        spec = random_td_spec(rng, span=14)
        assert oracle.similarity_identity_check(spec, Window(-12, 12)) <= 1e-13


def test_identity_check_diagonal_free():
    spec = BlockShiftSpec(w=Constant(1.3), v=Constant(0.7), d=Constant(0.0))
    assert oracle.similarity_identity_check(spec, Window(-6, 6)) == 0.0


def test_conjugation_scalar_intertwiner(rng):
    u = random_unitary(rng, 5)
    x = 0.7 * np.eye(5, dtype=complex)
    report = oracle.unitary_conjugation_check(u, u, x)
    assert report.conjugation_unitary
    assert report.intertwining_residual < 1e-12
    assert report.iff_consistent


def test_conjugation_identity_representations():
    eye = np.eye(4, dtype=complex)
    x = np.arange(16, dtype=complex).reshape(4, 4)
    report = oracle.unitary_conjugation_check(eye, eye, x)
    assert report.conjugation_unitary
    assert report.iff_consistent


def test_conjugation_sign_flip_counterexample():
    u = np.diag([1.0, -1.0]).astype(complex)
    v = np.eye(2, dtype=complex)
    x = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    report = oracle.unitary_conjugation_check(u, v, x)
    assert not report.conjugation_unitary
    assert report.intertwining_residual > 1.0
    assert report.iff_consistent


def test_conjugation_rejects_non_unitary():
    with pytest.raises(ValueError):
        oracle.unitary_conjugation_check(
            2.0 * np.eye(2), np.eye(2), np.eye(2)
        )


def test_mobius_matrix_identity_map():
    m = np.array([[0.1, 0.4], [-0.2, 0.3]], dtype=complex)
    assert np.allclose(oracle.mobius_of_matrix(MobiusMap(0.0, 0.0), m), m)


def test_mobius_matrix_scalar():
    phi = MobiusMap(0.9, 0.3 + 0.1j)
    c = 0.4 - 0.2j
    out = oracle.mobius_of_matrix(phi, c * np.eye(3))
    assert np.allclose(out, mobius_apply(phi, c) * np.eye(3), atol=1e-13)


def test_mobius_matrix_nilpotent():
    m = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    out = oracle.mobius_of_matrix(MobiusMap(0.0, 0.5), m)
    assert np.allclose(out, [[-0.5, 0.75], [0.0, -0.5]], atol=1e-14)


def test_mobius_matrix_roundtrip(rng):
    for _ in range(20):
        m = (rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))) * 0.2
        phi = MobiusMap(rng.uniform(-3, 3), 0.5 * (rng.uniform() + 1j * rng.uniform()))
        assert oracle.mobius_roundtrip_residual(phi, m) < 1e-10 * max(
            1.0, float(np.max(np.abs(m)))
        )


def test_mobius_matrix_group_law(rng):
    for _ in range(20):
        m = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
        m *= 0.9 / np.linalg.norm(m, 2)
        phi1 = MobiusMap(rng.uniform(-3, 3), 0.4 * (rng.uniform() + 1j * rng.uniform()))
        phi2 = MobiusMap(rng.uniform(-3, 3), 0.4 * (rng.uniform() + 1j * rng.uniform()))
        via_compose = oracle.mobius_of_matrix(mobius_compose(phi2, phi1), m)
        stepwise = oracle.mobius_of_matrix(phi2, oracle.mobius_of_matrix(phi1, m))
        assert np.max(np.abs(via_compose - stepwise)) < 1e-9


def test_reducing_search_diagonal():
    result = oracle.reducing_search(np.diag([1.0, 2.0]).astype(complex))
    assert result.commutant_dim == 2
    p = result.nontrivial_projection
    assert p is not None
    assert np.allclose(p, np.diag([1.0, 0.0])) or np.allclose(p, np.diag([0.0, 1.0]))


def test_reducing_search_unweighted_circulant():
    m = scalar_shift_matrix(Constant(1.0), Window(0, 3), "circulant")
    result = oracle.reducing_search(m)
    p = result.nontrivial_projection
    assert p is not None
    assert np.max(np.abs(m @ p - p @ m)) < 1e-9


def test_reducing_search_period2_circulant_certified():
    m = scalar_shift_matrix(Periodic((1.0, 2.0)), Window(0, 7), "circulant")
    result = oracle.reducing_search(m, tol=1e-10)
    p = result.nontrivial_projection
    assert p is not None
    for value in result.residuals.values():
        assert value <= 1e-9
    rank = int(round(np.trace(p).real))
    assert 0 < rank < 8


def test_reducing_search_hard_truncation_finds_nothing():
    spec = mobius_rational_spec()
    matrix = truncate(spec, Window(-8, 8), "hard").m
    result = oracle.reducing_search(matrix, tol=1e-10, boundary_band=4)
    assert result.nontrivial_projection is None


def test_reducing_search_projection_contract(rng):
    # certified residuals for a matrix with a designed reducing split
    block_a = np.diag([1.0, 2.0, 3.0]).astype(complex)
    block_b = random_unitary(rng, 3)
    m = np.block(
        [[block_a, np.zeros((3, 3))], [np.zeros((3, 3)), 5.0 * block_b]]
    )
    result = oracle.reducing_search(m)
    p = result.nontrivial_projection
    assert p is not None
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    assert np.max(np.abs(p @ p - p)) <= 1e-9 * scale
    assert np.max(np.abs(p - p.conj().T)) <= 1e-9 * scale
    assert np.max(np.abs(m @ p - p @ m)) <= 1e-9 * scale


def test_reducing_search_size_budget():
    with pytest.raises(oracle.SizeBudgetError):
        oracle.reducing_search(np.eye(300, dtype=complex))
    with pytest.raises(oracle.SizeBudgetError):
        oracle.commutant_basis(np.eye(120, dtype=complex), max_size=96)


def test_commutant_basis_residuals():
    m = scalar_shift_matrix(Periodic((1.0, 2.0)), Window(0, 7), "circulant")
    basis = oracle.commutant_basis(m)
    assert basis.dim == 8  # distinct eigenvalues: commutant = polynomials in m
    for residual in basis.residuals:
        assert residual <= 1e-10 * max(1.0, float(np.linalg.norm(m, 2)))
