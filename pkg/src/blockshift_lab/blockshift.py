"""The 2x2 bilateral block-shift operator built from three weight sequences.

The operator couples two bilateral weighted shifts through a diagonal
intertwiner and acts on pairs of square-summable sequences.  Everything here
is local data: the 2x2 block mapping site n to site n+1, the Gram pairs it
induces on each site, their eigen/singular data, and dense finite-window
truncations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .seqcore import (
    DEFAULT_TOL,
    ReciprocalOf,
    SequenceSpec,
    Window,
    eval_seq,
)


class BlockShiftError(ValueError):
    pass


class NormalFormError(BlockShiftError):
    """The local Gram block is not in the unit-determinant normal form."""


class DegenerateBlockError(BlockShiftError):
    """The local Gram block is the identity, so it carries no eigen data."""


class CirculantError(BlockShiftError):
    """Circulant truncation requested for sequences that do not wrap."""


@dataclass(frozen=True)
class BlockShiftSpec:
    """Triple (w, v, d): shift weights of the two rows plus the coupling
    diagonal.  ``class_td`` is set when v is structurally the reciprocal of
    w, the single-parameter class where all closed-form eigen bookkeeping
    applies.
    """

    w: SequenceSpec
    v: SequenceSpec
    d: SequenceSpec

    @property
    def class_td(self) -> bool:
        return self.v == ReciprocalOf(self.w)

    @classmethod
    def t_class(cls, t: SequenceSpec, d: SequenceSpec) -> "BlockShiftSpec":
        """Spec with row weights t and 1/t (the unit-determinant class)."""
        return cls(w=t, v=ReciprocalOf(t), d=d)


def coupling(spec: BlockShiftSpec, n: int) -> complex:
    """Off-diagonal entry d(n+1) v(n) - d(n) w(n) of the local block."""
    return eval_seq(spec.d, n + 1) * eval_seq(spec.v, n) - eval_seq(spec.d, n) * eval_seq(
        spec.w, n
    )


def coupling_vanishes(spec: BlockShiftSpec, win: Window, tol: float = DEFAULT_TOL) -> bool:
    """True when the coupling is numerically zero at every window index, in
    which case the operator degrades to a diagonal direct sum of the two
    shifts and the block construction carries no extra content.
    """
    return all(abs(coupling(spec, n)) <= tol for n in win.indices())


def is_unimodular(spec: BlockShiftSpec, win: Window, tol: float = DEFAULT_TOL) -> bool:
    """True when both row weights have modulus one across the window."""
    for n in win.indices():
        if abs(abs(eval_seq(spec.w, n)) - 1.0) > tol:
            return False
        if abs(abs(eval_seq(spec.v, n)) - 1.0) > tol:
            return False
    return True


@dataclass(frozen=True)
class LocalBlock:
    """Upper-triangular 2x2 block carrying site n into site n+1."""

    n: int
    m: np.ndarray


def local_block(spec: BlockShiftSpec, n: int) -> LocalBlock:
    w = eval_seq(spec.w, n)
    v = eval_seq(spec.v, n)
    p = eval_seq(spec.d, n + 1) * v - eval_seq(spec.d, n) * w
    return LocalBlock(n=n, m=np.array([[w, p], [0.0, v]], dtype=complex))


@dataclass(frozen=True)
class GramPair:
    """A = T_n* T_n and B = T_{n-1} T_{n-1}*, both acting on site n."""

    n: int
    A: np.ndarray
    B: np.ndarray


def local_gram(spec: BlockShiftSpec, n: int) -> GramPair:
    """Gram pair at site n by direct 2x2 multiplication."""
    t_n = local_block(spec, n).m
    t_prev = local_block(spec, n - 1).m
    return GramPair(n=n, A=t_n.conj().T @ t_n, B=t_prev @ t_prev.conj().T)


def gram_trace(spec: BlockShiftSpec, n: int) -> float:
    """Real trace of the forward Gram block at site n."""
    a = local_gram(spec, n).A
    return float(np.trace(a).real)


def eigen_pair(spec: BlockShiftSpec, n: int, tol: float = DEFAULT_TOL) -> float:
    """The eigenvalue parameter lam > 1 with eigenvalues {lam^2, 1/lam^2}.

    Only defined for unit-determinant Gram blocks away from the identity;
    recovered from the trace, which matches the closed-form derivation and
    avoids a general eigensolver.
    """
    a = local_gram(spec, n).A
    det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if abs(det - 1.0) > tol:
        raise NormalFormError(f"det A_{n} = {det:.6g}, not 1: outside the normal form")
    tr = float(np.trace(a).real)
    if tr <= 2.0 + tol:
        raise DegenerateBlockError(f"trace A_{n} = {tr:.6g} <= 2: block is the identity")
    lam_sq = (tr + math.sqrt(tr * tr - 4.0)) / 2.0
    return math.sqrt(lam_sq)


def singular_values(spec: BlockShiftSpec, n: int) -> tuple[float, float]:
    """Singular values (s1 >= s2 >= 0) of the local block at site n."""
    a = local_gram(spec, n).A
    eigs = np.linalg.eigvalsh((a + a.conj().T) / 2.0)
    s2, s1 = (math.sqrt(max(e, 0.0)) for e in eigs)
    return s1, s2


@dataclass(frozen=True)
class TruncatedOperator:
    """Dense window truncation in the interleaved site basis.

    Basis order is (e_{n_min}, 0), (0, e_{n_min}), (e_{n_min+1}, 0), ... so
    that each site occupies two consecutive rows/columns.  Hard mode drops
    couplings that leave the window; circulant mode wraps them and is only
    available when all three sequences repeat with the window length.
    """

    win: Window
    mode: str
    m: np.ndarray

    def site_rows(self, n: int) -> slice:
        base = 2 * (n - self.win.n_min)
        return slice(base, base + 2)


def _wraps(seq: SequenceSpec, win: Window, tol: float) -> bool:
    period = len(win)
    try:
        return all(
            abs(eval_seq(seq, n + period) - eval_seq(seq, n)) <= tol for n in win.indices()
        )
    except Exception:
        return False


def truncate(
    spec: BlockShiftSpec, win: Window, mode: str = "hard", tol: float = DEFAULT_TOL
) -> TruncatedOperator:
    if mode not in ("hard", "circulant"):
        raise ValueError(f"unknown truncation mode {mode!r}")
    length = len(win)
    m = np.zeros((2 * length, 2 * length), dtype=complex)
    if mode == "circulant":
        for seq in (spec.w, spec.v, spec.d):
            if not _wraps(seq, win, tol):
                raise CirculantError(
                    "circulant truncation needs all sequences periodic with the window length"
                )
    last = win.n_max if mode == "circulant" else win.n_max - 1
    for n in range(win.n_min, last + 1):
        target = win.n_min + (n + 1 - win.n_min) % length
        block = local_block(spec, n).m
        if mode == "circulant" and n == win.n_max:
            # the wrapped coupling uses d at the window start, not at n_max+1
            w = eval_seq(spec.w, n)
            v = eval_seq(spec.v, n)
            p = eval_seq(spec.d, win.n_min) * v - eval_seq(spec.d, n) * w
            block = np.array([[w, p], [0.0, v]], dtype=complex)
        r = 2 * (target - win.n_min)
        c = 2 * (n - win.n_min)
        m[r : r + 2, c : c + 2] = block
    return TruncatedOperator(win=win, mode=mode, m=m)


def scalar_shift_matrix(
    w: SequenceSpec, win: Window, mode: str = "hard", tol: float = DEFAULT_TOL
) -> np.ndarray:
    """Dense truncation of the plain bilateral weighted shift e_n -> w_n e_{n+1}.

    Companion to ``truncate`` for experiments on single-row shifts, e.g.
    periodic-weight reducibility probes.
    """
    if mode not in ("hard", "circulant"):
        raise ValueError(f"unknown truncation mode {mode!r}")
    length = len(win)
    if mode == "circulant" and not _wraps(w, win, tol):
        raise CirculantError("circulant truncation needs window-periodic weights")
    m = np.zeros((length, length), dtype=complex)
    last = win.n_max if mode == "circulant" else win.n_max - 1
    for n in range(win.n_min, last + 1):
        i = n - win.n_min
        m[(i + 1) % length, i] = eval_seq(w, n)
    return m


@dataclass(frozen=True)
class Reflection:
    """Index map n -> -(n + i0)."""

    i0: int


@dataclass(frozen=True)
class IdentityMap:
    pass


@dataclass(frozen=True)
class TableMap:
    mapping: Mapping[int, int]


PairingMap = Union[Reflection, IdentityMap, TableMap]


def apply_pairing(g: PairingMap, n: int) -> int | None:
    match g:
        case Reflection(i0):
            return -(n + i0)
        case IdentityMap():
            return n
        case TableMap(mapping):
            return mapping.get(n)
    raise TypeError(f"not a pairing map: {g!r}")


@dataclass(frozen=True)
class PairingReport:
    """Window evidence for trace invariance under an index pairing."""

    holds: bool
    exclusive: bool | None
    max_mismatch: float
    mismatches: tuple[tuple[int, float], ...]
    collisions: tuple[tuple[int, int, float], ...]
    checked: int
    skipped: int


def trace_pairing(
    spec: BlockShiftSpec,
    g: PairingMap,
    win: Window,
    tol: float = DEFAULT_TOL,
) -> PairingReport:
    """Check trace A_n == trace A_{g(n)} across the window.

    For reflection maps the report additionally verifies exclusivity: no two
    window indices outside a matched pair may share a trace value within
    tol.  Indices whose image leaves the window are skipped and counted.
    """
    usable = [n for n in win.indices() if n + 1 in win]
    traces = {n: gram_trace(spec, n) for n in usable}
    mismatches = []
    checked = skipped = 0
    max_mismatch = 0.0
    for n in usable:
        m = apply_pairing(g, n)
        if m is None or m not in traces:
            skipped += 1
            continue
        checked += 1
        dev = abs(traces[n] - traces[m])
        max_mismatch = max(max_mismatch, dev)
        if dev > tol:
            mismatches.append((n, dev))
    exclusive: bool | None = None
    collisions: list[tuple[int, int, float]] = []
    if isinstance(g, Reflection):
        exclusive = True
        for i, n in enumerate(usable):
            for m in usable[i + 1 :]:
                if m == apply_pairing(g, n) or m == n:
                    continue
                dev = abs(traces[n] - traces[m])
                if dev <= tol:
                    collisions.append((n, m, dev))
                    exclusive = False
    return PairingReport(
        holds=not mismatches and checked > 0,
        exclusive=exclusive,
        max_mismatch=max_mismatch,
        mismatches=tuple(mismatches),
        collisions=tuple(collisions),
        checked=checked,
        skipped=skipped,
    )


def search_reflection(
    spec: BlockShiftSpec,
    win: Window,
    tol: float = DEFAULT_TOL,
    i0_range: range = range(-8, 9),
) -> int | None:
    """Smallest-|i0| reflection whose trace pairing holds on the window."""
    best: int | None = None
    for i0 in sorted(i0_range, key=abs):
        report = trace_pairing(spec, Reflection(i0), win, tol)
        if report.holds and report.checked > 0:
            if report.exclusive:
                return i0
            if best is None:
                best = i0
    return best
