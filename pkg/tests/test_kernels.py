import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from blockshift_lab.kernels import (
    GammaKernel,
    KernelDomainError,
    LambdaKernel,
    MobiusMap,
    ProductKernel,
    TableKernel,
    TruncationError,
    coefficients,
    curvature,
    eval_diag,
    eval_kernel,
    jk_kernel,
    kernel_ratio_profile,
    metric_det_ratio,
    mobius_apply,
    mobius_compose,
    mobius_inverse,
    multiplier_bound_witness,
    tail_bound,
)
from blockshift_lab.seqcore import Constant, Table


def test_lambda_coefficients():
    assert coefficients(LambdaKernel(1.0), 5) == pytest.approx([1, 1, 1, 1, 1])
    assert coefficients(LambdaKernel(2.0), 5) == pytest.approx([1, 2, 3, 4, 5])
    # lam=0.5: a_1 = 0.5, a_2 = 0.5*1.5/2 = 0.375
    assert coefficients(LambdaKernel(0.5), 3) == pytest.approx([1, 0.5, 0.375])


def test_gamma_coefficients():
    assert coefficients(GammaKernel(1.0), 4) == pytest.approx([1, 2, 3, 4])
    assert coefficients(GammaKernel(0.0), 4) == pytest.approx([1, 1, 1, 1])


def test_product_coefficients_convolve():
    prod = ProductKernel(LambdaKernel(1.0), LambdaKernel(1.0))
    assert coefficients(prod, 5) == pytest.approx(coefficients(LambdaKernel(2.0), 5))


def test_eval_at_origin():
    assert eval_kernel(LambdaKernel(3.7), 0.0, 0.0).value == pytest.approx(1.0)


def test_eval_closed_form_values():
    got = eval_kernel(LambdaKernel(2.0), 0.5, 0.5)
    assert got.value == pytest.approx(16.0 / 9.0, abs=1e-12)
    assert got.closed_form == pytest.approx(16.0 / 9.0, abs=1e-12)
    assert eval_kernel(GammaKernel(0.0), 0.5, 0.5).value == pytest.approx(4.0 / 3.0, abs=1e-12)


def test_eval_rejects_boundary():
    with pytest.raises(KernelDomainError):
        eval_kernel(LambdaKernel(1.0), 1.0, 0.5)


@settings(max_examples=60, deadline=None)
@given(
    st.floats(min_value=0.1, max_value=3.5),
    st.complex_numbers(max_magnitude=0.9),
    st.complex_numbers(max_magnitude=0.9),
)
def test_series_matches_closed_form_within_tail(lam, z, w):
    result = eval_kernel(LambdaKernel(lam), z, w)
    assert abs(result.value - result.closed_form) <= result.tail_bound + 1e-9 * abs(
        result.closed_form
    )


def test_tail_bound_is_genuine_upper_bound():
    kernel = LambdaKernel(2.0, truncation=32)
    q = 0.8
    bound = tail_bound(kernel, q, 32)
    exact_tail = sum((n + 1) * q**n for n in range(33, 4000))
    assert 0 < exact_tail <= bound


def test_table_kernel_tail_is_exact():
    kernel = TableKernel((1.0, 2.0, 3.0), truncation=1)
    assert tail_bound(kernel, 0.5, 1) == pytest.approx(3.0 * 0.25)


def test_mobius_identity_and_zero():
    ident = MobiusMap(0.0, 0.0)
    assert mobius_apply(ident, 0.3 + 0.4j) == 0.3 + 0.4j
    phi = MobiusMap(1.1, 0.4 - 0.2j)
    assert abs(mobius_apply(phi, phi.a)) == 0.0


def test_mobius_basic_value():
    assert mobius_apply(MobiusMap(0.0, 0.5), 0.0) == pytest.approx(-0.5)


@settings(max_examples=80, deadline=None)
@given(
    st.floats(min_value=-3.0, max_value=3.0),
    st.complex_numbers(max_magnitude=0.8),
    st.complex_numbers(max_magnitude=0.95),
)
def test_mobius_preserves_disc_and_inverts(theta, a, z):
    phi = MobiusMap(theta, a)
    image = mobius_apply(phi, z)
    assert abs(image) < 1.0 + 1e-12
    back = mobius_apply(mobius_inverse(phi), image)
    assert abs(back - z) < 1e-11


def test_mobius_compose_matches_pointwise():
    phi1 = MobiusMap(0.9, 0.2 + 0.3j)
    phi2 = MobiusMap(-1.7, -0.5 + 0.1j)
    comp = mobius_compose(phi2, phi1)
    for z in (0.0, 0.5, -0.3 + 0.6j, 0.1 - 0.7j):
        assert abs(
            mobius_apply(comp, z) - mobius_apply(phi2, mobius_apply(phi1, z))
        ) < 1e-12


def test_curvature_unit_kernel_at_origin():
    assert curvature(LambdaKernel(1.0), 0.0) == pytest.approx(-1.0, abs=1e-8)


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 3.7])
def test_curvature_closed_form_on_radius(lam):
    kernel = LambdaKernel(lam)
    for r in (0.0, 0.25, 0.5, 0.8):
        want = -lam / (1.0 - r * r) ** 2
        assert curvature(kernel, complex(r, 0.0)) == pytest.approx(want, abs=1e-6)


def test_curvature_additive_under_product():
    prod = ProductKernel(LambdaKernel(1.0), LambdaKernel(1.0))
    w = 0.3 + 0.2j
    total = curvature(prod, w)
    assert total == pytest.approx(2.0 * curvature(LambdaKernel(1.0), w), abs=2e-6)


def test_curvature_grid_guard():
    with pytest.raises(KernelDomainError):
        curvature(LambdaKernel(1.0), 0.999)


def test_jk_zero_order_equals_product():
    j0 = jk_kernel(LambdaKernel(1.0), LambdaKernel(2.0), 0)
    prod = ProductKernel(LambdaKernel(1.0), LambdaKernel(2.0))
    for z, w in ((0.0, 0.0), (0.3 + 0.2j, -0.1 + 0.4j), (0.5, 0.5)):
        assert abs(j0.entry(0, 0, z, w) - eval_kernel(prod, z, w).value) < 1e-12


def test_jk_first_derivative_entry_at_origin():
    j1 = jk_kernel(LambdaKernel(1.0), LambdaKernel(1.0), 1)
    # d dbar of sum z^n wbar^n at 0 picks out the n=1 coefficient
    assert j1.entry(1, 1, 0.0, 0.0) == pytest.approx(1.0)


def test_jk_gram_positive():
    j1 = jk_kernel(LambdaKernel(1.0), LambdaKernel(1.0), 1)
    gram = j1.gram([0.0, 0.3, 0.5j])
    assert gram.shape == (6, 6)
    assert np.max(np.abs(gram - gram.conj().T)) < 1e-12
    assert np.linalg.eigvalsh(gram)[0] >= -1e-9


def test_jk_order_cap():
    with pytest.raises(ValueError):
        jk_kernel(LambdaKernel(1.0), LambdaKernel(1.0), 5)


def test_jk_truncation_gate():
    with pytest.raises(TruncationError):
        jk_kernel(LambdaKernel(1.0), LambdaKernel(1.0, truncation=16), 4, max_radius=0.95)


def test_multiplier_witness_coordinate_unit_bound():
    points = [0.0, 0.3, -0.25, 0.5j, -0.2 - 0.2j, 0.4 + 0.1j]
    report = multiplier_bound_witness(LambdaKernel(1.0), "coordinate", 1.0, points)
    assert report.nonnegative
    # (1 - z wbar) K = the all-ones kernel on these samples
    assert report.min_eigenvalue >= -1e-12


def test_multiplier_witness_detects_small_bound():
    report = multiplier_bound_witness(LambdaKernel(1.0), "coordinate", 0.2, [0.0, 0.5])
    assert not report.nonnegative


def test_multiplier_witness_zero_multiplier():
    report = multiplier_bound_witness(LambdaKernel(2.0), 0.0, 0.7, [0.1, 0.4j, -0.3])
    assert report.nonnegative


def test_multiplier_witness_empty_samples():
    with pytest.raises(ValueError):
        multiplier_bound_witness(LambdaKernel(1.0), "coordinate", 1.0, [])


def test_ratio_profile_equal_kernels():
    radii = list(np.linspace(0.05, 0.9, 20))
    report = kernel_ratio_profile(LambdaKernel(2.0), LambdaKernel(2.0), radii)
    assert report.limit_class == "bounded"
    assert report.bounded_above and report.bounded_from_zero
    assert report.values == pytest.approx([1.0] * 20)


def test_ratio_profile_growth():
    radii = list(np.linspace(0.1, 0.99, 60))
    report = kernel_ratio_profile(LambdaKernel(2.0), LambdaKernel(1.0), radii)
    assert report.limit_class == "infinity"
    assert not report.bounded_above


def test_ratio_profile_decay():
    radii = list(np.linspace(0.1, 0.99, 60))
    report = kernel_ratio_profile(LambdaKernel(1.0), LambdaKernel(2.0), radii)
    assert report.limit_class == "zero"
    assert not report.bounded_from_zero


def test_ratio_profile_first_power_comparison():
    # coefficients (n+1)^1 equal the order-2 binomial coefficients exactly
    radii = list(np.linspace(0.1, 0.97, 40))
    report = kernel_ratio_profile(GammaKernel(1.0), LambdaKernel(2.0), radii)
    assert report.limit_class == "bounded"
    assert report.values == pytest.approx([1.0] * 40)


def test_ratio_profile_rejects_bad_radii():
    with pytest.raises(ValueError):
        kernel_ratio_profile(LambdaKernel(1.0), LambdaKernel(1.0), [0.5, 0.4])
    with pytest.raises(KernelDomainError):
        kernel_ratio_profile(LambdaKernel(1.0), LambdaKernel(1.0), [0.5, 1.0])


def test_metric_ratio_zero_intertwiner():
    for r in (0.0, 0.4, 0.85):
        assert metric_det_ratio(1.0, LambdaKernel(2.0), Constant(0.0), r) == pytest.approx(
            1.0, abs=1e-12
        )


def test_metric_ratio_identity_bounds():
    values = [
        metric_det_ratio(1.0, LambdaKernel(2.0), Constant(1.0), complex(r, 0.0))
        for r in np.linspace(0.0, 0.9, 50)
    ]
    assert min(values) >= 1.0 - 1e-9
    assert max(values) <= 2.0 + 1e-9


def test_metric_ratio_sandwich_random(rng):
    for _ in range(10):
        xs = Table(
            {n: complex(rng.uniform(-1.2, 1.2), rng.uniform(-1.2, 1.2)) for n in range(300)}
        )
        sup = max(abs(v) for v in xs.entries.values())
        for r in (0.2, 0.6, 0.85):
            ratio = metric_det_ratio(1.5, LambdaKernel(2.5), xs, r)
            assert 1.0 - 1e-9 <= ratio <= 1.0 + sup**2 + 1e-9


def test_metric_ratio_phase_independent():
    v1 = metric_det_ratio(1.0, LambdaKernel(2.0), Constant(1.0), 0.5)
    v2 = metric_det_ratio(1.0, LambdaKernel(2.0), Constant(1.0), 0.5 * cmath.exp(2.1j))
    assert v1 == pytest.approx(v2, abs=1e-13)
