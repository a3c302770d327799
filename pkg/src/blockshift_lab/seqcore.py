"""Z-indexed complex weight sequences and window-scoped sequence diagnostics.

Sequences are described by a closed family of constructors so that every
spec is serializable and every report reproducible.  All evaluation is pure:
the same spec and index always produce bitwise-identical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Union

DEFAULT_TOL = 1e-10


class SequenceDomainError(ValueError):
    """Raised when an index lies outside the domain of a sequence rule."""

    def __init__(self, message: str, index: int):
        super().__init__(f"{message} (index n={index})")
        self.index = index


class WindowTooShortError(ValueError):
    """Raised when a diagnostic needs a longer window than was supplied."""


@dataclass(frozen=True)
class Window:
    """Inclusive integer range [n_min, n_max], the finite stand-in for Z."""

    n_min: int
    n_max: int

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ValueError(f"empty window [{self.n_min}, {self.n_max}]")

    def __len__(self) -> int:
        return self.n_max - self.n_min + 1

    def __contains__(self, n: int) -> bool:
        return self.n_min <= n <= self.n_max

    def indices(self) -> range:
        return range(self.n_min, self.n_max + 1)

    def shrunk(self, margin: int) -> "Window":
        """Window with `margin` indices trimmed from each side."""
        if 2 * margin >= len(self):
            raise WindowTooShortError(f"cannot shrink {self} by {margin}")
        return Window(self.n_min + margin, self.n_max - margin)


@dataclass(frozen=True)
class Constant:
    value: complex


@dataclass(frozen=True)
class Table:
    """Explicit index -> value map, optionally backed by a default value."""

    entries: Mapping[int, complex]
    default: complex | None = None


@dataclass(frozen=True)
class MobiusRational:
    """n -> (n + c1 + s) / (n + c2 - s)."""

    c1: float
    c2: float
    s: complex


@dataclass(frozen=True)
class SqrtRatio:
    """n -> sqrt((n + a) / (n + b)); both n+a and n+b must be positive."""

    a: float
    b: float


@dataclass(frozen=True)
class Periodic:
    cycle: tuple[complex, ...]

    def __post_init__(self):
        if len(self.cycle) == 0:
            raise ValueError("periodic cycle must be non-empty")
        object.__setattr__(self, "cycle", tuple(self.cycle))


@dataclass(frozen=True)
class ReciprocalOf:
    inner: "SequenceSpec"


@dataclass(frozen=True)
class NegatedShiftedReflection:
    """n -> -inner(-(n + shift))."""

    inner: "SequenceSpec"
    shift: int = 0


@dataclass(frozen=True)
class PointwiseProduct:
    left: "SequenceSpec"
    right: "SequenceSpec"


SequenceSpec = Union[
    Constant,
    Table,
    MobiusRational,
    SqrtRatio,
    Periodic,
    ReciprocalOf,
    NegatedShiftedReflection,
    PointwiseProduct,
]


def eval_seq(spec: SequenceSpec, n: int) -> complex:
    """Evaluate a sequence spec at integer index n.

    Raises SequenceDomainError for indices outside the rule's domain
    (non-positive sqrt-ratio arguments, table misses without default,
    vanishing denominators).
    """
    match spec:
        case Constant(value):
            return complex(value)
        case Table(entries, default):
            if n in entries:
                return complex(entries[n])
            if default is None:
                raise SequenceDomainError("table has no entry and no default", n)
            return complex(default)
        case MobiusRational(c1, c2, s):
            den = n + c2 - s
            if den == 0:
                raise SequenceDomainError("mobius-rational denominator vanishes", n)
            return (n + c1 + s) / den
        case SqrtRatio(a, b):
            num, den = n + a, n + b
            if num <= 0 or den <= 0:
                raise SequenceDomainError(
                    f"sqrt-ratio needs n+a and n+b positive, got {num}, {den}", n
                )
            return complex(math.sqrt(num / den))
        case Periodic(cycle):
            return complex(cycle[n % len(cycle)])
        case ReciprocalOf(inner):
            value = eval_seq(inner, n)
            if value == 0:
                raise SequenceDomainError("reciprocal of zero value", n)
            return 1 / value
        case NegatedShiftedReflection(inner, shift):
            return -eval_seq(inner, -(n + shift))
        case PointwiseProduct(left, right):
            return eval_seq(left, n) * eval_seq(right, n)
    raise TypeError(f"not a sequence spec: {spec!r}")


def window_values(spec: SequenceSpec, win: Window) -> list[complex]:
    """Values of the sequence over the window, in index order."""
    return [eval_seq(spec, n) for n in win.indices()]


@dataclass(frozen=True)
class PeriodicityReport:
    """Window-scoped modulus-periodicity verdict.

    `periodic` refers only to the moduli over the supplied window; it is
    never a claim about all of Z.
    """

    periodic: bool
    period: int | None
    max_deviation: float


def is_modulus_periodic(
    spec: SequenceSpec, win: Window, tol: float = DEFAULT_TOL
) -> PeriodicityReport:
    """Search for the smallest p <= len(win)//2 with ||s(n+p)| - |s(n)|| <= tol.

    All moduli on the window must be strictly positive (weight sequences).
    """
    if len(win) < 4:
        raise WindowTooShortError("periodicity check needs a window of length >= 4")
    moduli = [abs(v) for v in window_values(spec, win)]
    if min(moduli) <= 0:
        raise SequenceDomainError(
            "zero modulus in weight sequence", win.n_min + moduli.index(0.0)
        )
    best_dev = math.inf
    for p in range(1, len(win) // 2 + 1):
        dev = max(abs(moduli[i + p] - moduli[i]) for i in range(len(moduli) - p))
        if dev <= tol:
            return PeriodicityReport(periodic=True, period=p, max_deviation=dev)
        best_dev = min(best_dev, dev)
    return PeriodicityReport(periodic=False, period=None, max_deviation=best_dev)


@dataclass(frozen=True)
class DecayReport:
    """Partial products prod_{m<=k} |w(j+m)|/|v(i+m)| and their trend."""

    partial_products: list[float]
    log_slope: float
    decays: bool


def ratio_product_decay(
    w: SequenceSpec,
    v: SequenceSpec,
    i: int,
    j: int,
    k_max: int,
    tol_slope: float = 0.01,
) -> DecayReport:
    """Track the running weight-ratio product along the pair of rays (i, j).

    Accumulation happens in the log domain so long windows cannot overflow;
    the reported products may round to 0.0 or inf at the extremes.  The
    product is declared decaying when the regression slope of the log
    products is below -tol_slope per step and the final product is below
    the first.
    """
    if k_max < 8:
        raise ValueError("k_max must be at least 8")
    log_terms = []
    for m in range(k_max + 1):
        wv = abs(eval_seq(w, j + m))
        vv = abs(eval_seq(v, i + m))
        if wv == 0 or vv == 0:
            raise SequenceDomainError("zero weight in ratio product", (j if wv == 0 else i) + m)
        log_terms.append(math.log(wv) - math.log(vv))
    cum = []
    acc = 0.0
    for term in log_terms:
        acc += term
        cum.append(acc)
    products = [math.exp(c) if c < 700 else math.inf for c in cum]
    ks = range(len(cum))
    k_mean = sum(ks) / len(cum)
    c_mean = sum(cum) / len(cum)
    var = sum((k - k_mean) ** 2 for k in ks)
    slope = sum((k - k_mean) * (c - c_mean) for k, c in zip(ks, cum)) / var
    decays = slope < -tol_slope and cum[-1] < cum[0]
    return DecayReport(partial_products=products, log_slope=slope, decays=decays)
