"""Window-scoped checkers for the sufficient irreducibility conditions.

Each checker evaluates one criterion index by index over a finite window
and returns a structured Verdict.  A verdict never claims irreducibility of
the bilateral operator outright: "holds-on-window" records that the
hypotheses were confirmed at every checked index, which is finite evidence
for hypotheses that quantify over all of Z.

Indices where the local Gram commutator vanishes outright are special: no
local obstruction exists there, so the index is flagged in the witnesses
and the verdict rests on the remaining indices.  A window where every index
degenerates fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .blockshift import (
    BlockShiftSpec,
    PairingMap,
    Reflection,
    coupling,
    coupling_vanishes,
    is_unimodular,
    search_reflection,
    trace_pairing,
)
from .seqcore import (
    DEFAULT_TOL,
    SequenceSpec,
    Window,
    WindowTooShortError,
    Constant,
    eval_seq,
    is_modulus_periodic,
    ratio_product_decay,
)

HOLDS = "holds-on-window"
FAILS = "fails-at"
INAPPLICABLE = "inapplicable"


@dataclass(frozen=True)
class Verdict:
    """Structured outcome of a window-scoped check."""

    status: str
    witnesses: tuple[dict, ...] = ()
    tolerances: dict = field(default_factory=dict)
    fail_index: int | None = None
    fail_clause: str | None = None
    fail_value: float | None = None
    reason: str | None = None
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "fail_index": self.fail_index,
            "fail_clause": self.fail_clause,
            "fail_value": self.fail_value,
            "reason": self.reason,
            "notes": list(self.notes),
            "tolerances": dict(self.tolerances),
            "witnesses": [dict(w) for w in self.witnesses],
        }


def _holds(witnesses, tolerances, notes=()) -> Verdict:
    return Verdict(
        status=HOLDS, witnesses=tuple(witnesses), tolerances=dict(tolerances), notes=tuple(notes)
    )


def _fails(index, clause, value, witnesses, tolerances) -> Verdict:
    return Verdict(
        status=FAILS,
        witnesses=tuple(witnesses),
        tolerances=dict(tolerances),
        fail_index=index,
        fail_clause=clause,
        fail_value=float(value),
    )


def _inapplicable(reason, tolerances=(), witnesses=()) -> Verdict:
    return Verdict(
        status=INAPPLICABLE,
        reason=reason,
        tolerances=dict(tolerances),
        witnesses=tuple(witnesses),
    )


@dataclass(frozen=True)
class CommutatorEntries:
    """Closed-form distinguished entries of the Gram commutator at site n.

    ``e11`` is the (1,1) entry, purely imaginary by construction; ``e21``
    the (2,1) entry.  Both must agree with the direct-multiplication oracle.
    """

    n: int
    e11: complex
    e21: complex
    c_n: complex
    c_prev: complex


def _coupling_quotients(spec: BlockShiftSpec, n: int) -> tuple[complex, complex, complex, complex]:
    t_n = eval_seq(spec.w, n)
    t_prev = eval_seq(spec.w, n - 1)
    c_n = eval_seq(spec.d, n + 1) / t_n - eval_seq(spec.d, n) * t_n
    c_prev = eval_seq(spec.d, n) / t_prev - eval_seq(spec.d, n - 1) * t_prev
    return t_n, t_prev, c_n, c_prev


def commutator_entries(spec: BlockShiftSpec, n: int) -> CommutatorEntries:
    """Closed forms for the reciprocal class; other specs go through
    ``oracle.commutator_direct`` instead.
    """
    if not spec.class_td:
        raise ValueError("closed-form commutator entries need the reciprocal class")
    t_n, t_prev, c_n, c_prev = _coupling_quotients(spec, n)
    e11 = (np.conj(t_n) / t_prev) * c_n * np.conj(c_prev) - (
        t_n / np.conj(t_prev)
    ) * np.conj(c_n) * c_prev
    e21 = t_n * np.conj(c_n) * (
        abs(t_prev) ** 2 - 1.0 / abs(t_prev) ** 2 + abs(c_prev) ** 2
    ) - (1.0 / t_prev) * np.conj(c_prev) * (abs(t_n) ** 2 - 1.0 / abs(t_n) ** 2 - abs(c_n) ** 2)
    return CommutatorEntries(n=n, e11=complex(e11), e21=complex(e21), c_n=c_n, c_prev=c_prev)


def _scaled_tol(tol: float, *magnitudes: float) -> float:
    return tol * max(1.0, *magnitudes)


def _resolve_pairing(
    spec: BlockShiftSpec, g: PairingMap | None, win: Window, tol: float
) -> PairingMap | None:
    if g is not None:
        return g
    i0 = search_reflection(spec, win, tol)
    return None if i0 is None else Reflection(i0)


def _interior(win: Window) -> range:
    return range(win.n_min + 1, win.n_max)


def check_alpha_criterion(
    t: SequenceSpec,
    alpha: complex,
    i0: int,
    win: Window,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    """Constant-coupling criterion for real positive row weights.

    Verifies on the window: exclusive trace pairing under n -> -(n + i0),
    positivity of t, the ratio conditions t_n != 1/t_{n-1} and t_{n-1} != 1,
    and the sign obstruction (t_n^2-1)(t_{n-1}^2-1) != (t_n^-2-1)(t_{n-1}^-2-1)
    that makes the Gram commutator nonzero.

    Reflection-symmetric weights force t_n * t_{n-1} = 1 at the centre pair,
    where the local commutator genuinely vanishes; such indices are flagged
    and the verdict rests on the others, unless every index degenerates.
    """
    if alpha == 0:
        return _inapplicable("coupling constant is zero", {"tol": tol})
    spec = BlockShiftSpec.t_class(t, Constant(complex(alpha)))
    tolerances = {"tol": tol}
    witnesses: list[dict] = []

    for n in win.indices():
        value = eval_seq(t, n)
        if abs(value.imag) > tol or value.real <= tol:
            return _fails(n, "t-not-real-positive", abs(value.imag) + abs(min(value.real, 0.0)),
                          witnesses, tolerances)

    pairing = trace_pairing(spec, Reflection(i0), win, tol)
    if not pairing.holds:
        index, dev = pairing.mismatches[0] if pairing.mismatches else (win.n_min, math.nan)
        return _fails(index, "trace-pairing", dev, witnesses, tolerances)
    if pairing.exclusive is False:
        n, m, dev = pairing.collisions[0]
        return _fails(n, "trace-exclusivity", dev, witnesses, tolerances)

    degenerate: list[int] = []
    for n in _interior(win):
        t_n = eval_seq(t, n).real
        t_prev = eval_seq(t, n - 1).real
        ratio_gap = abs(t_n * t_prev - 1.0)
        unit_gap = abs(t_prev - 1.0)
        obstruction = (t_n**2 - 1.0) * (t_prev**2 - 1.0) - (1.0 / t_n**2 - 1.0) * (
            1.0 / t_prev**2 - 1.0
        )
        row = {
            "n": n,
            "ratio_gap": ratio_gap,
            "unit_gap": unit_gap,
            "sign_obstruction": obstruction,
        }
        if ratio_gap <= tol:
            row["clause"] = "reciprocal-weight-pair"
        elif unit_gap <= tol:
            row["clause"] = "unit-weight"
        elif abs(obstruction) <= _scaled_tol(tol, t_n**2 * t_prev**2):
            row["clause"] = "sign-obstruction"
        if "clause" in row:
            direct = oracle.commutator_direct(spec, n)
            if float(np.max(np.abs(direct))) <= 100 * _scaled_tol(tol, t_n**2 * t_prev**2):
                row["degenerate"] = True
                degenerate.append(n)
                witnesses.append(row)
                continue
            witnesses.append(row)
            return _fails(n, row["clause"], abs(obstruction), witnesses, tolerances)
        witnesses.append(row)
    if witnesses and len(degenerate) == len(witnesses):
        first = witnesses[0]
        return _fails(
            degenerate[0],
            f"commutator-vanishes-everywhere ({first.get('clause', 'sign-obstruction')})",
            0.0,
            witnesses,
            tolerances,
        )
    notes = (
        [f"local commutator vanishes at n={sorted(degenerate)}; verdict rests on the other indices"]
        if degenerate
        else []
    )
    return _holds(witnesses, tolerances, notes)


def check_complex_weights(
    spec: BlockShiftSpec,
    g: PairingMap | None,
    win: Window,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    """Commutator-entry criterion for the reciprocal class with complex data.

    Requires the trace pairing under g (searched over small reflections when
    g is None).  At each interior index, condition (1) asks the quotient
    conj(t_n)/t_{n-1} * c_n * conj(c_{n-1}) to be non-real; condition (2)
    asks the two sides of the (2,1)-entry identity to differ.  Condition (2)
    is computed in both sign variants of the first parenthesis; the variant
    that equals the direct commutator entry (minus sign) decides, the other
    is reported alongside.
    """
    if not spec.class_td:
        return _inapplicable("spec is not in the reciprocal class", {"tol": tol})
    resolved = _resolve_pairing(spec, g, win, tol)
    if resolved is None:
        return _inapplicable("no trace pairing found on the window", {"tol": tol})
    pairing = trace_pairing(spec, resolved, win, tol)
    if not pairing.holds:
        index = pairing.mismatches[0][0] if pairing.mismatches else win.n_min
        return _inapplicable(
            f"trace pairing fails at n={index}", {"tol": tol}
        )
    tolerances = {"tol": tol, "pairing": repr(resolved)}
    witnesses: list[dict] = []
    degenerate: list[int] = []
    for n in _interior(win):
        t_n, t_prev, c_n, c_prev = _coupling_quotients(spec, n)
        entries = commutator_entries(spec, n)
        q1 = (np.conj(t_n) / t_prev) * c_n * np.conj(c_prev)
        cond1 = abs(q1.imag) > _scaled_tol(tol, abs(q1))
        lhs_minus = t_n * np.conj(c_n) * (
            abs(t_prev) ** 2 - 1.0 / abs(t_prev) ** 2 + abs(c_prev) ** 2
        )
        lhs_plus = t_n * np.conj(c_n) * (
            abs(t_prev) ** 2 + 1.0 / abs(t_prev) ** 2 + abs(c_prev) ** 2
        )
        rhs = (1.0 / t_prev) * np.conj(c_prev) * (
            abs(t_n) ** 2 - 1.0 / abs(t_n) ** 2 - abs(c_n) ** 2
        )
        scale = _scaled_tol(tol, abs(lhs_minus), abs(rhs))
        cond2 = abs(lhs_minus - rhs) > scale
        cond2_plus_variant = abs(lhs_plus - rhs) > _scaled_tol(tol, abs(lhs_plus), abs(rhs))
        row = {
            "n": n,
            "condition1_imag": q1.imag,
            "condition1": cond1,
            "condition2_gap": abs(lhs_minus - rhs),
            "condition2": cond2,
            "condition2_plus_variant_gap": abs(lhs_plus - rhs),
            "condition2_plus_variant": cond2_plus_variant,
            "e11": entries.e11,
            "e21": entries.e21,
        }
        if not (cond1 or cond2):
            direct = oracle.commutator_direct(spec, n)
            if float(np.max(np.abs(direct))) <= 100 * _scaled_tol(tol, abs(q1), abs(rhs)):
                row["degenerate"] = True
                degenerate.append(n)
                witnesses.append(row)
                continue
            witnesses.append(row)
            return _fails(n, "both-conditions", abs(q1.imag), witnesses, tolerances)
        witnesses.append(row)
    if witnesses and len(degenerate) == len(witnesses):
        return _fails(
            degenerate[0], "commutator-vanishes-everywhere", 0.0, witnesses, tolerances
        )
    notes = (
        [f"local commutator vanishes at n={sorted(degenerate)}; verdict rests on the other indices"]
        if degenerate
        else []
    )
    return _holds(witnesses, tolerances, notes)


def check_unimodular(
    spec: BlockShiftSpec,
    g: PairingMap | None,
    win: Window,
    tol: float = DEFAULT_TOL,
) -> Verdict:
    """Criterion for unimodular row weights with a bounded coupling diagonal.

    After checking |w| = |v| = 1 and the coupling-strength pairing under g,
    condition (1) asks a diagonal-weight combination to be non-real and
    condition (2) compares the two sides of the (2,1)-entry identity.  The
    stated form of condition (2) carries v_n where the direct entry carries
    conj(v_n); the conjugated form decides and the stated one is reported.
    """
    if not is_unimodular(spec, win, tol):
        return _inapplicable("row weights are not unimodular on the window", {"tol": tol})
    if coupling_vanishes(spec, win, tol):
        return _inapplicable(
            "coupling vanishes identically: operator degrades to a diagonal direct sum",
            {"tol": tol},
        )
    resolved = _resolve_pairing(spec, g, win, tol)
    if resolved is None:
        return _inapplicable("no coupling-strength pairing found on the window", {"tol": tol})
    pairing = trace_pairing(spec, resolved, win, tol)
    if not pairing.holds:
        index = pairing.mismatches[0][0] if pairing.mismatches else win.n_min
        return _inapplicable(f"coupling-strength pairing fails at n={index}", {"tol": tol})
    tolerances = {"tol": tol, "pairing": repr(resolved)}
    witnesses: list[dict] = []
    degenerate: list[int] = []
    for n in _interior(win):
        w_n = eval_seq(spec.w, n)
        w_prev = eval_seq(spec.w, n - 1)
        v_n = eval_seq(spec.v, n)
        v_prev = eval_seq(spec.v, n - 1)
        d_prev = eval_seq(spec.d, n - 1)
        d_cur = eval_seq(spec.d, n)
        d_next = eval_seq(spec.d, n + 1)
        c_n = np.conj(d_cur) * np.conj(w_n) * v_n
        c_prev = np.conj(d_prev) * np.conj(w_prev) * v_prev
        q1 = d_next * c_n + d_cur * c_prev - d_next * np.conj(w_n) * v_n * c_prev
        cond1 = abs(q1.imag) > _scaled_tol(tol, abs(q1))
        p_n = coupling(spec, n)
        p_prev = coupling(spec, n - 1)
        lhs_conj = (np.conj(d_next) * w_n * np.conj(v_n) - np.conj(d_cur)) * abs(p_prev) ** 2
        lhs_stated = (np.conj(d_next) * w_n * v_n - np.conj(d_cur)) * abs(p_prev) ** 2
        rhs = (np.conj(d_prev) * np.conj(w_prev) * v_prev - np.conj(d_cur)) * abs(p_n) ** 2
        cond2 = abs(lhs_conj - rhs) > _scaled_tol(tol, abs(lhs_conj), abs(rhs))
        cond2_stated = abs(lhs_stated - rhs) > _scaled_tol(tol, abs(lhs_stated), abs(rhs))
        row = {
            "n": n,
            "condition1_imag": q1.imag,
            "condition1": cond1,
            "condition2_gap": abs(lhs_conj - rhs),
            "condition2": cond2,
            "condition2_stated_variant_gap": abs(lhs_stated - rhs),
            "condition2_stated_variant": cond2_stated,
        }
        if not (cond1 or cond2):
            direct = oracle.commutator_direct(spec, n)
            if float(np.max(np.abs(direct))) <= 100 * _scaled_tol(tol, abs(q1), abs(rhs)):
                row["degenerate"] = True
                degenerate.append(n)
                witnesses.append(row)
                continue
            witnesses.append(row)
            return _fails(n, "both-conditions", abs(q1.imag), witnesses, tolerances)
        witnesses.append(row)
    if witnesses and len(degenerate) == len(witnesses):
        return _fails(
            degenerate[0], "commutator-vanishes-everywhere", 0.0, witnesses, tolerances
        )
    notes = (
        [f"local commutator vanishes at n={sorted(degenerate)}; verdict rests on the other indices"]
        if degenerate
        else []
    )
    return _holds(witnesses, tolerances, notes)


def check_decay_criterion(
    spec: BlockShiftSpec,
    win: Window,
    k_max: int = 24,
    tol: float = DEFAULT_TOL,
    grid_step: int | None = None,
    tol_slope: float = 0.01,
) -> Verdict:
    """Ratio-product criterion: both row shifts must look irreducible
    (aperiodic moduli on the window) and every sampled weight-ratio product
    must decay.

    The hypothesis quantifies over all start pairs (i, j); the window is
    sampled on a grid whose stride is a configuration choice, default at
    most ~16 points per axis.
    """
    tolerances = {"tol": tol, "k_max": k_max, "tol_slope": tol_slope}
    try:
        w_periodic = is_modulus_periodic(spec.w, win, tol)
        v_periodic = is_modulus_periodic(spec.v, win, tol)
    except WindowTooShortError as exc:
        return _inapplicable(str(exc), tolerances)
    if w_periodic.periodic:
        return _inapplicable(
            f"first row weights are modulus-periodic (period {w_periodic.period})", tolerances
        )
    if v_periodic.periodic:
        return _inapplicable(
            f"second row weights are modulus-periodic (period {v_periodic.period})", tolerances
        )
    step = grid_step if grid_step is not None else max(1, len(win) // 16)
    tolerances["grid_step"] = step
    witnesses = []
    grid = list(range(win.n_min, win.n_max + 1, step))
    for i in grid:
        for j in grid:
            report = ratio_product_decay(spec.w, spec.v, i, j, k_max, tol_slope)
            witnesses.append(
                {"i": i, "j": j, "log_slope": report.log_slope, "decays": report.decays}
            )
            if not report.decays:
                return _fails(i, "ratio-product", report.log_slope, witnesses, tolerances)
    return _holds(witnesses, tolerances)
