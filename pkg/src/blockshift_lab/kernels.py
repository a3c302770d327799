"""Diagonal power-series reproducing kernels on the unit disc.

A kernel here is a rule n -> a_n >= 0 producing K(z, w) = sum a_n z^n
conj(w)^n, truncated at a configurable order with an explicit geometric
tail bound.  On top of the evaluator sit the disc-automorphism maps, the
curvature probe, matrix kernels built from termwise derivatives, sampled
Gram positivity witnesses, radial ratio profiles, and the determinant ratio
of the rank-two frame metric.

Derivatives are taken termwise on the truncated series: exact for
polynomials and tail-bounded on the disc interior.  Curvature deliberately
goes through finite differences instead, so the two routes cross-validate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .seqcore import SequenceSpec, eval_seq

DEFAULT_TRUNCATION = 256


class KernelDomainError(ValueError):
    """Evaluation requested outside the open unit disc."""


class TruncationError(ValueError):
    """The truncated series cannot certify the requested tolerance."""


@dataclass(frozen=True)
class LambdaKernel:
    """Coefficients a_n = prod_{j<n} (lam + j) / n!, the binomial kernel
    (1 - z conj(w))^(-lam)."""

    lam: float
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lambda kernel needs lam > 0")


@dataclass(frozen=True)
class GammaKernel:
    """Coefficients a_n = (n + 1)^gamma."""

    gamma: float
    truncation: int = DEFAULT_TRUNCATION


@dataclass(frozen=True)
class TableKernel:
    """Finitely many explicit coefficients; zero beyond the table."""

    coefficients: tuple[float, ...]
    truncation: int = DEFAULT_TRUNCATION

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))
        if any(c < 0 for c in self.coefficients):
            raise ValueError("kernel coefficients must be nonnegative")


@dataclass(frozen=True)
class ProductKernel:
    """Cauchy convolution of the factors' coefficients."""

    left: "KernelSpec"
    right: "KernelSpec"
    truncation: int = DEFAULT_TRUNCATION


KernelSpec = Union[LambdaKernel, GammaKernel, TableKernel, ProductKernel]


def coefficients(kernel: KernelSpec, count: int) -> np.ndarray:
    """First `count` series coefficients a_0 .. a_{count-1}."""
    match kernel:
        case LambdaKernel(lam, _):
            out = np.empty(count)
            acc = 1.0
            for n in range(count):
                out[n] = acc
                acc *= (lam + n) / (n + 1)
            return out
        case GammaKernel(gamma, _):
            return (np.arange(count, dtype=float) + 1.0) ** gamma
        case TableKernel(coeffs, _):
            out = np.zeros(count)
            upto = min(count, len(coeffs))
            out[:upto] = coeffs[:upto]
            return out
        case ProductKernel(left, right, _):
            a = coefficients(left, count)
            b = coefficients(right, count)
            return np.convolve(a, b)[:count]
    raise TypeError(f"not a kernel spec: {kernel!r}")


def _ratio_sup(kernel: KernelSpec, m: int) -> float:
    """Upper bound on a_{n+1}/a_n over all n >= m (1 when ratios sit below 1)."""
    match kernel:
        case LambdaKernel(lam, _):
            return max(1.0, (lam + m) / (m + 1))
        case GammaKernel(gamma, _):
            return max(1.0, ((m + 2) / (m + 1)) ** gamma)
        case TableKernel(_, _):
            return 1.0  # unused: table tails are summed exactly
        case ProductKernel(left, right, _):
            return max(_ratio_sup(left, m), _ratio_sup(right, m))
    raise TypeError(f"not a kernel spec: {kernel!r}")


def tail_bound(kernel: KernelSpec, q: float, order: int | None = None) -> float:
    """Upper bound on sum_{n > order} a_n q^n for 0 <= q < 1.

    Lambda/gamma tails use the monotone coefficient-ratio bound; table tails
    are summed exactly; product tails split the convolution at order/2 and
    reuse the factors' bounds, which is valid because all coefficients are
    nonnegative.
    """
    if not 0 <= q < 1:
        raise KernelDomainError(f"tail bound needs 0 <= q < 1, got {q}")
    n = kernel.truncation if order is None else order
    match kernel:
        case TableKernel(coeffs, _):
            return float(sum(c * q**k for k, c in enumerate(coeffs) if k > n))
        case ProductKernel(left, right, _):
            half = n // 2
            val_l = abs_value_bound(left, q)
            val_r = abs_value_bound(right, q)
            return tail_bound(left, q, half) * val_r + val_l * tail_bound(right, q, half)
        case _:
            rho = _ratio_sup(kernel, n + 1)
            if q * rho >= 1.0:
                raise TruncationError(
                    f"geometric tail does not converge at q={q} with ratio {rho:.4f}"
                )
            head = coefficients(kernel, n + 2)[n + 1] * q ** (n + 1)
            return float(head / (1.0 - q * rho))


def abs_value_bound(kernel: KernelSpec, q: float) -> float:
    """Upper bound on |K(z, w)| over |z||w| <= q."""
    n = kernel.truncation
    partial = float(coefficients(kernel, n + 1) @ (q ** np.arange(n + 1)))
    return partial + tail_bound(kernel, q, n)


def closed_form(kernel: KernelSpec, z: complex, w: complex) -> complex | None:
    """Exact value where one exists: binomial kernels and their products."""
    match kernel:
        case LambdaKernel(lam, _):
            return (1.0 - z * np.conj(w)) ** (-lam)
        case ProductKernel(left, right, _):
            lv = closed_form(left, z, w)
            rv = closed_form(right, z, w)
            if lv is None or rv is None:
                return None
            return lv * rv
        case TableKernel(coeffs, _):
            u = z * np.conj(w)
            return sum(c * u**k for k, c in enumerate(coeffs))
        case _:
            return None


@dataclass(frozen=True)
class KernelValue:
    value: complex
    tail_bound: float
    closed_form: complex | None


def eval_kernel(kernel: KernelSpec, z: complex, w: complex) -> KernelValue:
    """Truncated series value of K(z, w) with its tail bound.

    Both arguments must lie strictly inside the unit disc.  When the kernel
    admits a closed form it is evaluated alongside; the two must agree
    within the tail bound, which the oracle tests enforce.
    """
    if abs(z) >= 1 or abs(w) >= 1:
        raise KernelDomainError(f"|z|={abs(z):.4f}, |w|={abs(w):.4f}: outside the open disc")
    n = kernel.truncation
    u = complex(z) * complex(w).conjugate()
    coeffs = coefficients(kernel, n + 1)
    value = complex(np.polynomial.polynomial.polyval(u, coeffs))
    return KernelValue(
        value=value,
        tail_bound=tail_bound(kernel, abs(u), n),
        closed_form=closed_form(kernel, z, w),
    )


def eval_diag(kernel: KernelSpec, w: complex) -> float:
    """K(w, w), a positive real."""
    return float(eval_kernel(kernel, w, w).value.real)


@dataclass(frozen=True)
class MobiusMap:
    """Disc automorphism z -> e^{i theta} (z - a) / (1 - conj(a) z)."""

    theta: float
    a: complex

    def __post_init__(self):
        if abs(self.a) >= 1:
            raise ValueError(f"|a| = {abs(self.a):.4f} must be < 1")


def mobius_apply(phi: MobiusMap, z: complex) -> complex:
    den = 1.0 - complex(phi.a).conjugate() * z
    if den == 0:
        raise KernelDomainError("pole of the Mobius map")
    return cmath.exp(1j * phi.theta) * (z - phi.a) / den


def mobius_inverse(phi: MobiusMap) -> MobiusMap:
    return MobiusMap(theta=-phi.theta, a=-phi.a * cmath.exp(1j * phi.theta))


def mobius_compose(outer: MobiusMap, inner: MobiusMap) -> MobiusMap:
    """The automorphism z -> outer(inner(z)) in normal form."""
    a = mobius_apply(mobius_inverse(inner), outer.a)
    probe = 0.0 if abs(a) > 0.25 else 0.5
    value = mobius_apply(outer, mobius_apply(inner, probe))
    phase = value * (1.0 - a.conjugate() * probe) / (probe - a)
    return MobiusMap(theta=math.atan2(phase.imag, phase.real), a=a)


def curvature(kernel: KernelSpec, w: complex, h: float = 1e-3) -> float:
    """-(d^2 / dw d conj(w)) log K(w, w) by finite differences.

    Nine-point Laplacian stencils at steps h and h/2, Richardson-combined
    once.  The 3x3 grid at the larger step must stay inside the disc.
    """
    if h <= 1e-8:
        raise ValueError("step size underflow")
    if abs(w) + 2 * h >= 1:
        raise KernelDomainError("finite-difference grid leaves the disc")
    n = kernel.truncation
    coeffs = coefficients(kernel, n + 1)
    powers = np.arange(n + 1)

    def log_k(x: float, y: float) -> float:
        q = x * x + y * y
        return math.log(float(coeffs @ q**powers))

    x0, y0 = w.real, w.imag

    def laplacian(step: float) -> float:
        edge = (
            log_k(x0 + step, y0)
            + log_k(x0 - step, y0)
            + log_k(x0, y0 + step)
            + log_k(x0, y0 - step)
        )
        corner = (
            log_k(x0 + step, y0 + step)
            + log_k(x0 + step, y0 - step)
            + log_k(x0 - step, y0 + step)
            + log_k(x0 - step, y0 - step)
        )
        return (4.0 * edge + corner - 20.0 * log_k(x0, y0)) / (6.0 * step * step)

    coarse = laplacian(h)
    fine = laplacian(h / 2)
    refined = (4.0 * fine - coarse) / 3.0
    return -refined / 4.0


@dataclass(frozen=True)
class MatrixKernel:
    """(k+1) x (k+1) matrix kernel with entries K0(z,w) * d^i dbar^j K1(z,w).

    Derivative entries come from termwise differentiation of the truncated
    series of K1; K0 is evaluated as a scalar factor.  Evaluation is only
    offered within `max_radius`, the radius at which the derivative tails
    were certified.
    """

    k: int
    base: KernelSpec
    derived: KernelSpec
    max_radius: float = 0.9
    _deriv_coeffs: dict = field(default_factory=dict, compare=False, repr=False)

    def entry(self, i: int, j: int, z: complex, w: complex) -> complex:
        if not (0 <= i <= self.k and 0 <= j <= self.k):
            raise IndexError(f"entry ({i},{j}) outside order {self.k}")
        if abs(z) > self.max_radius or abs(w) > self.max_radius:
            raise KernelDomainError(
                f"evaluation outside the certified radius {self.max_radius}"
            )
        n = self.derived.truncation
        key = (i, j)
        if key not in self._deriv_coeffs:
            coeffs = coefficients(self.derived, n + 1)
            ns = np.arange(n + 1, dtype=float)
            fall_i = np.ones(n + 1)
            fall_j = np.ones(n + 1)
            for step in range(i):
                fall_i *= np.maximum(ns - step, 0.0)
            for step in range(j):
                fall_j *= np.maximum(ns - step, 0.0)
            self._deriv_coeffs[key] = coeffs * fall_i * fall_j
        weighted = self._deriv_coeffs[key]
        zc = complex(z)
        wc = complex(w).conjugate()
        start = max(i, j)
        ns = np.arange(start, n + 1)
        terms = weighted[start:] * zc ** (ns - i) * wc ** (ns - j)
        base_val = eval_kernel(self.base, z, w).value
        return complex(base_val * terms.sum())

    def gram(self, points: list[complex]) -> np.ndarray:
        """Sampled Gram matrix over the points, site-major layout."""
        if not points:
            raise ValueError("empty sample set")
        p = len(points)
        size = p * (self.k + 1)
        g = np.empty((size, size), dtype=complex)
        for a, za in enumerate(points):
            for b, zb in enumerate(points):
                for i in range(self.k + 1):
                    for j in range(self.k + 1):
                        g[a * (self.k + 1) + i, b * (self.k + 1) + j] = self.entry(
                            i, j, za, zb
                        )
        herm_dev = float(np.max(np.abs(g - g.conj().T)))
        if herm_dev > 1e-10 * max(1.0, float(np.max(np.abs(g)))):
            raise TruncationError(f"sampled Gram not Hermitian: deviation {herm_dev:.3e}")
        return (g + g.conj().T) / 2.0


def jk_kernel(
    k0: KernelSpec,
    k1: KernelSpec,
    k: int,
    tail_tol: float = 1e-8,
    max_radius: float = 0.9,
) -> MatrixKernel:
    """Matrix kernel of order k from the scalar pair (K0, K1); k <= 4.

    Refuses configurations whose derivative-series tails cannot be bounded
    below `tail_tol` at `max_radius`; high orders at the default truncation
    need either a larger truncation or a smaller radius.
    """
    if k < 0:
        raise ValueError("order must be nonnegative")
    if k > 4:
        raise ValueError("derivative order limit is 4")
    if not 0 < max_radius < 1:
        raise ValueError("max_radius must sit inside the open disc")
    n = k1.truncation
    q = max_radius**2
    rho = _ratio_sup(k1, n + 1) * ((n + 1) / max(n + 1 - k, 1)) ** (2 * k)
    if q * rho >= 1.0:
        raise TruncationError("derivative tail ratio does not contract")
    head = coefficients(k1, n + 2)[n + 1] * (n + 1) ** (2 * k) * q ** (n + 1 - k)
    if head / (1.0 - q * rho) > tail_tol:
        raise TruncationError(
            f"truncation order {n} cannot certify derivative tails below {tail_tol} "
            f"at radius {max_radius}"
        )
    return MatrixKernel(k=k, base=k0, derived=k1, max_radius=max_radius)


@dataclass(frozen=True)
class WitnessReport:
    min_eigenvalue: float
    nonnegative: bool
    hermiticity_residual: float
    sample_count: int


def multiplier_bound_witness(
    k0: KernelSpec,
    phi: MobiusMap | str | complex,
    c: float,
    sample_points: list[complex],
    psd_tol: float = 1e-9,
) -> WitnessReport:
    """Sampled-Gram witness that the multiplier norm of phi is at most c.

    Builds (c^2 - phi(z) conj(phi(w))) K0(z, w) over the samples and reports
    its smallest eigenvalue; nonnegativity within -psd_tol certifies the
    bound on the sampled set.  `phi` may be a disc automorphism, the string
    ``"coordinate"`` for phi(z) = z, or a constant.
    """
    if c <= 0:
        raise ValueError("bound c must be positive")
    if not sample_points:
        raise ValueError("empty sample set")

    def phi_at(z: complex) -> complex:
        if isinstance(phi, MobiusMap):
            return mobius_apply(phi, z)
        if phi == "coordinate":
            return complex(z)
        return complex(phi)

    values = [phi_at(z) for z in sample_points]
    size = len(sample_points)
    g = np.empty((size, size), dtype=complex)
    for i, zi in enumerate(sample_points):
        for j, zj in enumerate(sample_points):
            g[i, j] = (c * c - values[i] * values[j].conjugate()) * eval_kernel(
                k0, zi, zj
            ).value
    herm = float(np.max(np.abs(g - g.conj().T)))
    g = (g + g.conj().T) / 2.0
    min_eig = float(np.linalg.eigvalsh(g)[0])
    return WitnessReport(
        min_eigenvalue=min_eig,
        nonnegative=min_eig >= -psd_tol,
        hermiticity_residual=herm,
        sample_count=size,
    )


@dataclass(frozen=True)
class RatioReport:
    """Radial profile of K_num(r, r) / K_den(r, r) with a trend verdict.

    ``limit_class`` extrapolates from the outer quartile of radii: monotone
    growth past the growth factor reads as "infinity", monotone decay past
    its reciprocal as "zero", anything else as "bounded"; absolute
    threshold crossings (1e-6, 1e6 by default) override.  This is finite
    evidence about the boundary, not a proof.
    """

    radii: tuple[float, ...]
    values: tuple[float, ...]
    bounded_above: bool
    bounded_from_zero: bool
    limit_class: str


def kernel_ratio_profile(
    k_num: KernelSpec,
    k_den: KernelSpec,
    radii: list[float],
    lo_threshold: float = 1e-6,
    hi_threshold: float = 1e6,
    growth_factor: float = 2.0,
) -> RatioReport:
    if any(r < 0 or r >= 1 for r in radii):
        raise KernelDomainError("radii must lie in [0, 1)")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    values = [eval_diag(k_num, r) / eval_diag(k_den, r) for r in radii]
    quart = values[max(0, len(values) - max(2, len(values) // 4)) :]
    increasing = all(b >= a for a, b in zip(quart, quart[1:]))
    decreasing = all(b <= a for a, b in zip(quart, quart[1:]))
    growth = quart[-1] / quart[0] if quart[0] > 0 else math.inf
    if values[-1] > hi_threshold or (increasing and growth >= growth_factor):
        limit_class = "infinity"
    elif values[-1] < lo_threshold or (decreasing and growth <= 1.0 / growth_factor):
        limit_class = "zero"
    else:
        limit_class = "bounded"
    return RatioReport(
        radii=tuple(radii),
        values=tuple(values),
        bounded_above=limit_class != "infinity" and max(values) <= hi_threshold,
        bounded_from_zero=limit_class != "zero" and min(values) >= lo_threshold,
        limit_class=limit_class,
    )


def metric_det_ratio(
    mu: float,
    k1: KernelSpec,
    x: SequenceSpec,
    w: complex,
    tail_tol: float = 1e-9,
) -> float:
    """det h(w) / (K_mu(w,w) K1(w,w)) for the rank-two frame metric.

    The intertwiner is modelled diagonally on the normalised monomial
    bases: the n-th unit vector of the K1 space is sent to x_n times the
    n-th unit vector of the K_mu space, so its operator norm is sup |x_n|.
    The Cauchy-Schwarz sandwich then pins the ratio to
    [1, 1 + sup |x_n|^2] for every bounded x.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    if abs(w) >= 0.95:
        raise KernelDomainError("evaluation radius capped at 0.95")
    k_mu = LambdaKernel(mu, truncation=k1.truncation)
    n = k1.truncation
    a_mu = coefficients(k_mu, n + 1)
    a_1 = coefficients(k1, n + 1)
    xs = np.array([eval_seq(x, m) for m in range(n + 1)], dtype=complex)
    r2 = abs(w) ** 2
    powers = r2 ** np.arange(n + 1)
    k_mu_val = float(a_mu @ powers)
    k_1_val = float(a_1 @ powers)
    inner = complex((xs * np.sqrt(a_1 * a_mu)) @ powers)
    norm_sq = float((np.abs(xs) ** 2 * a_1) @ powers)
    x_sup = float(np.max(np.abs(xs)))
    tail = (
        tail_bound(k_mu, r2) + tail_bound(k1, r2) + (1.0 + x_sup + x_sup**2) * tail_bound(k1, r2)
    )
    if tail > tail_tol * max(1.0, k_mu_val * k_1_val):
        raise TruncationError(f"series tails {tail:.3e} exceed the certification budget")
    det = k_mu_val * (norm_sq + k_1_val) - abs(inner) ** 2
    return det / (k_mu_val * k_1_val)
