import math

import pytest

from blockshift_lab.blockshift import BlockShiftSpec
from blockshift_lab.irreducibility import FAILS, HOLDS, INAPPLICABLE
from blockshift_lab.seqcore import Constant, SqrtRatio, Table, Window
from blockshift_lab.similarity import (
    compare_similarity,
    shields_diagnostic,
    trace_invariant_set,
)

from conftest import reflected_ratio_table


def test_shields_equal_weights_spread_one():
    w = SqrtRatio(0.3, 0.7)
    report = shields_diagnostic(w, w, range(-4, 5), Window(1, 40))
    assert report.verdict == "bounded-on-window"
    assert report.k == 0
    assert report.spread == 1.0
    assert report.inf_ratio == report.sup_ratio == 1.0


def test_shields_geometric_divergence():
    report = shields_diagnostic(Constant(1.0), Constant(2.0), range(-4, 5), Window(-16, 16))
    assert report.verdict == "diverging"
    assert report.trend == "growing"


def test_shields_shifted_copy():
    report = shields_diagnostic(
        SqrtRatio(0.3, 0.7), SqrtRatio(3.3, 3.7), range(-5, 6), Window(1, 40)
    )
    assert report.verdict == "bounded-on-window"
    assert report.k == 3
    assert report.spread == pytest.approx(1.0, abs=1e-12)


def test_shields_phase_invariance(rng):
    # moduli decide everything: unit-phase twists leave the report unchanged
    base = Table({n: complex(1.0 + 0.05 * abs(n)) for n in range(-30, 31)})
    phases = {n: rng.uniform(0.0, 2.0 * math.pi) for n in range(-30, 31)}
    twisted = Table(
        {
            n: (1.0 + 0.05 * abs(n)) * complex(math.cos(phases[n]), math.sin(phases[n]))
            for n in range(-30, 31)
        }
    )
    r1 = shields_diagnostic(base, base, range(-2, 3), Window(-12, 12))
    r2 = shields_diagnostic(twisted, base, range(-2, 3), Window(-12, 12))
    assert r1.inf_ratio == pytest.approx(r2.inf_ratio, rel=1e-12)
    assert r1.sup_ratio == pytest.approx(r2.sup_ratio, rel=1e-12)


def test_shields_ordering_invariant():
    report = shields_diagnostic(Constant(1.0), Constant(2.0), range(-3, 4), Window(-10, 10))
    assert 0 <= report.inf_ratio <= report.sup_ratio


def test_shields_empty_range():
    with pytest.raises(ValueError):
        shields_diagnostic(Constant(1.0), Constant(1.0), range(0, 0), Window(-5, 5))


def test_trace_invariant_constant():
    values = trace_invariant_set(Constant(2.0), 1.0, Window(0, 4), i0=1).values
    assert len(values) == 5
    for v in values:
        assert v == pytest.approx(6.5, abs=1e-13)


def test_trace_invariant_alpha_zero_flagged():
    report = trace_invariant_set(Constant(2.0), 0.0, Window(0, 3), i0=1)
    assert report.out_of_hypothesis
    for v in report.values:
        assert v == pytest.approx(4.0 + 0.25, abs=1e-13)


def test_trace_invariant_lower_bound():
    report = trace_invariant_set(Constant(2.0), 1.0, Window(-10, 4), i0=3)
    # ceil((1-3)/2) = -1, so indices -1..4 contribute
    assert len(report.values) == 6


def test_trace_invariant_floor_two():
    values = trace_invariant_set(reflected_ratio_table(), 1.0, Window(-20, 20), i0=1).values
    for v in values:
        assert v >= 2.0 - 1e-12


def test_trace_invariant_reflection_symmetry():
    t = reflected_ratio_table()
    left = trace_invariant_set(t, 1.0, Window(0, 10)).values
    right = trace_invariant_set(t, 1.0, Window(-11, -1)).values
    assert left == pytest.approx(right, abs=1e-12)


def test_trace_invariant_rejects_complex():
    with pytest.raises(ValueError):
        trace_invariant_set(Constant(1j), 1.0, Window(0, 4))


def test_compare_self_similarity():
    spec = BlockShiftSpec.t_class(reflected_ratio_table(), Constant(1.0))
    verdict = compare_similarity(spec, spec, Window(-15, 15), i0_a=1, i0_b=1)
    assert verdict.status == HOLDS


def test_compare_parity_rule():
    t = reflected_ratio_table()
    spec_a = BlockShiftSpec.t_class(t, Constant(1.0))
    # shifting the weights by one index moves the reflection offset by two;
    # an offset of opposite parity comes from a half-shift stand-in table
    shifted = Table({n: t.entries[n + 1] for n in range(-40, 40)})
    spec_b = BlockShiftSpec.t_class(shifted, Constant(1.0))
    verdict = compare_similarity(spec_a, spec_b, Window(-15, 15), i0_a=1, i0_b=3)
    assert verdict.status == HOLDS or verdict.status == FAILS  # parity equal: compares sets
    verdict = compare_similarity(spec_a, spec_b, Window(-15, 15), i0_a=1, i0_b=2)
    assert verdict.status == INAPPLICABLE  # reflection 2 does not validate for spec_b


def test_compare_phase_of_alpha_irrelevant():
    t = reflected_ratio_table()
    spec_a = BlockShiftSpec.t_class(t, Constant(1.0))
    spec_b = BlockShiftSpec.t_class(t, Constant(complex(math.cos(1.2), math.sin(1.2))))
    verdict = compare_similarity(spec_a, spec_b, Window(-12, 12), i0_a=1, i0_b=1)
    assert verdict.status == HOLDS


def test_compare_different_moduli_fail():
    t = reflected_ratio_table()
    spec_a = BlockShiftSpec.t_class(t, Constant(1.0))
    spec_b = BlockShiftSpec.t_class(t, Constant(2.0))
    verdict = compare_similarity(spec_a, spec_b, Window(-12, 12), i0_a=1, i0_b=1)
    assert verdict.status == FAILS
    assert verdict.fail_clause == "invariant-set-mismatch"


def test_compare_symmetry():
    t = reflected_ratio_table()
    spec_a = BlockShiftSpec.t_class(t, Constant(1.0))
    spec_b = BlockShiftSpec.t_class(t, Constant(2.0))
    v_ab = compare_similarity(spec_a, spec_b, Window(-12, 12), i0_a=1, i0_b=1)
    v_ba = compare_similarity(spec_b, spec_a, Window(-12, 12), i0_a=1, i0_b=1)
    assert v_ab.status == v_ba.status


def test_compare_requires_reciprocal_class():
    spec = BlockShiftSpec(w=Constant(2.0), v=Constant(1.0), d=Constant(1.0))
    verdict = compare_similarity(spec, spec, Window(-8, 8))
    assert verdict.status == INAPPLICABLE
