"""Similarity diagnostics: weight-product boundedness, singular-value
invariant sets, and spec-vs-spec comparison.

Boundedness of shifted weight-product ratios over all of Z is not finitely
decidable, so the verdicts here are window-scoped, with a trend classifier
over nested subwindows standing in for the limit behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .blockshift import (
    BlockShiftSpec,
    Reflection,
    gram_trace,
    search_reflection,
    trace_pairing,
)
from .irreducibility import Verdict, _fails, _holds, _inapplicable
from .seqcore import DEFAULT_TOL, SequenceDomainError, SequenceSpec, Window, eval_seq


@dataclass(frozen=True)
class ShieldsReport:
    """Extremes of |w_{k+m} ... w_{k+n} / (v_m ... v_n)| over window pairs."""

    k: int
    inf_ratio: float
    sup_ratio: float
    trend: str
    verdict: str

    @property
    def spread(self) -> float:
        return self.sup_ratio / self.inf_ratio if self.inf_ratio > 0 else math.inf


def _log_spread(w: SequenceSpec, v: SequenceSpec, k: int, win: Window) -> tuple[float, float]:
    """(min, max) of the pair log-ratios, via prefix sums in the log domain."""
    diffs = [
        math.log(abs(eval_seq(w, k + n))) - math.log(abs(eval_seq(v, n)))
        for n in win.indices()
    ]
    prefix = [0.0]
    for d in diffs:
        prefix.append(prefix[-1] + d)
    # pair (m, n) with m <= n maps to prefix[n+1] - prefix[m]
    lo = math.inf
    hi = -math.inf
    run_min = prefix[0]
    run_max = prefix[0]
    for end in range(1, len(prefix)):
        lo = min(lo, prefix[end] - run_max)
        hi = max(hi, prefix[end] - run_min)
        run_min = min(run_min, prefix[end])
        run_max = max(run_max, prefix[end])
    return lo, hi


def shields_diagnostic(
    w: SequenceSpec,
    v: SequenceSpec,
    k_range: range = range(-8, 9),
    win: Window = Window(-16, 16),
    spread_bound: float = 1e6,
    slope_tol: float = 0.02,
) -> ShieldsReport:
    """Best-offset boundedness probe for similarity of two weighted shifts.

    For each offset k the extreme products over all window pairs are found
    in the log domain; the k with the smallest sup/inf spread is reported.
    The trend classifies how the log-spread grows across three nested
    windows; bounded-on-window requires a flat trend and a spread within
    `spread_bound`.
    """
    if len(k_range) == 0:
        raise ValueError("empty offset range")
    best: tuple[float, int, float, float] | None = None
    for k in k_range:
        try:
            lo, hi = _log_spread(w, v, k, win)
        except SequenceDomainError:
            continue  # this offset needs indices outside the sequence domain
        spread_log = hi - lo
        if best is None or spread_log < best[0]:
            best = (spread_log, k, lo, hi)
    if best is None:
        raise SequenceDomainError("no offset in the range is evaluable", k_range.start)
    spread_log, k, lo, hi = best
    margin = max(1, len(win) // 6)
    spreads = []
    for shrink in (2 * margin, margin, 0):
        sub = win.shrunk(shrink) if shrink else win
        s_lo, s_hi = _log_spread(w, v, k, sub)
        spreads.append(((len(sub) - 1) / 2.0, s_hi - s_lo))
    xs = [s[0] for s in spreads]
    ys = [s[1] for s in spreads]
    x_mean = sum(xs) / 3.0
    y_mean = sum(ys) / 3.0
    var = sum((x - x_mean) ** 2 for x in xs)
    slope = sum((x - x_mean) * (y - y_mean) for x, y in zip(xs, ys)) / var if var > 0 else 0.0
    if slope > slope_tol:
        trend = "growing"
    elif slope < -slope_tol:
        trend = "shrinking"
    else:
        trend = "flat"
    spread = math.exp(spread_log) if spread_log < 700 else math.inf
    if trend == "flat" and spread <= spread_bound:
        verdict = "bounded-on-window"
    elif trend == "growing":
        verdict = "diverging"
    else:
        verdict = "inconclusive"
    return ShieldsReport(
        k=k,
        inf_ratio=math.exp(lo) if lo > -700 else 0.0,
        sup_ratio=math.exp(hi) if hi < 700 else math.inf,
        trend=trend,
        verdict=verdict,
    )


@dataclass(frozen=True)
class InvariantSet:
    """Sorted multiset of Gram traces, the similarity invariant of the
    constant-coupling class."""

    values: tuple[float, ...]
    window: Window
    out_of_hypothesis: bool = False


def trace_invariant_set(
    t: SequenceSpec,
    alpha: complex,
    win: Window,
    i0: int | None = None,
    tol: float = DEFAULT_TOL,
) -> InvariantSet:
    """Trace values (|a|^2+1)(t_n^2 + t_n^-2) - 2|a|^2 over the window.

    With a reflection offset i0 the multiset ranges over n >= ceil((1-i0)/2),
    the half-line on which each eigenvalue pair is enumerated once; without
    it the whole window contributes.  alpha = 0 is computed but flagged as
    outside the construction's hypotheses.
    """
    lower = win.n_min if i0 is None else max(win.n_min, math.ceil((1 - i0) / 2))
    a_sq = abs(alpha) ** 2
    values = []
    for n in range(lower, win.n_max + 1):
        value = eval_seq(t, n)
        if abs(value.imag) > tol or value.real <= 0:
            raise ValueError(f"weights must be real positive, got {value} at n={n}")
        t_sq = value.real**2
        values.append((a_sq + 1.0) * (t_sq + 1.0 / t_sq) - 2.0 * a_sq)
    return InvariantSet(
        values=tuple(sorted(values)), window=win, out_of_hypothesis=alpha == 0
    )


def _validated_reflection(
    spec: BlockShiftSpec, i0: int | None, win: Window, tol: float
) -> int | None:
    if i0 is not None:
        report = trace_pairing(spec, Reflection(i0), win, tol)
        return i0 if report.holds else None
    return search_reflection(spec, win, tol)


def compare_similarity(
    spec_a: BlockShiftSpec,
    spec_b: BlockShiftSpec,
    win: Window,
    tol: float = DEFAULT_TOL,
    i0_a: int | None = None,
    i0_b: int | None = None,
) -> Verdict:
    """Window evidence for similarity of two reciprocal-class operators.

    Reflection offsets of differing parity force distinct eigenvalue
    multiplicity patterns, so the verdict fails outright.  Otherwise the
    sorted trace multisets over the admissible half-lines are compared with
    tolerance banding; agreement on the window is evidence, not proof, of
    similarity.  Sets of unequal size are trimmed to the common length and
    the trim is recorded.
    """
    tolerances = {"tol": tol}
    if not (spec_a.class_td and spec_b.class_td):
        return _inapplicable("both specs must be in the reciprocal class", tolerances)
    ra = _validated_reflection(spec_a, i0_a, win, tol)
    rb = _validated_reflection(spec_b, i0_b, win, tol)
    if ra is None or rb is None:
        return _inapplicable("missing validated reflection for one of the specs", tolerances)
    tolerances.update({"i0_a": ra, "i0_b": rb})
    if (ra - rb) % 2 != 0:
        return _fails(ra, "reflection-parity", float(abs(ra - rb)), (), tolerances)

    def traces(spec: BlockShiftSpec, i0: int) -> list[float]:
        lower = max(win.n_min, math.ceil((1 - i0) / 2))
        return sorted(gram_trace(spec, n) for n in range(lower, win.n_max))

    ta = traces(spec_a, ra)
    tb = traces(spec_b, rb)
    common = min(len(ta), len(tb))
    trimmed = (len(ta) - common) + (len(tb) - common)
    witnesses = []
    worst = 0.0
    worst_idx = 0
    for idx, (x, y) in enumerate(zip(ta[:common], tb[:common])):
        dev = abs(x - y)
        if dev > worst:
            worst, worst_idx = dev, idx
        witnesses.append({"rank": idx, "trace_a": x, "trace_b": y, "deviation": dev})
    if worst > tol:
        return _fails(worst_idx, "invariant-set-mismatch", worst, witnesses, tolerances)
    notes = [f"trimmed {trimmed} unmatched values"] if trimmed else []
    return _holds(witnesses, tolerances, notes)
