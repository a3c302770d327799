"""Brute-force matrix oracles.

Every closed form used elsewhere in the package is recomputed here by plain
dense linear algebra: Gram blocks by multiplication, commutators directly,
the triangular-conjugation identity on truncations, and reducing-subspace
candidates via the nullspace of the commutation map.  Agreement between the
closed forms and these oracles is what the test suite certifies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blockshift import (
    BlockShiftSpec,
    TruncatedOperator,
    local_block,
    local_gram,
    truncate,
)
from .kernels import MobiusMap, mobius_inverse
from .seqcore import DEFAULT_TOL, Window, eval_seq


class SpectrumObstructionError(ValueError):
    """The resolvent-style solve inside a matrix Mobius map is singular."""


class SizeBudgetError(ValueError):
    """A dense search was requested beyond the supported matrix size."""


def _closed_form_grams(spec: BlockShiftSpec, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Closed-form Gram pairs at site n, one per applicable normal form.

    Always includes the generic form in terms of (w, v, coupling); adds the
    unit-determinant form when the spec is in the reciprocal class, and the
    unimodular form when both weights have modulus one at the touched
    indices.
    """

    def generic(k: int) -> tuple[complex, complex, complex]:
        w = eval_seq(spec.w, k)
        v = eval_seq(spec.v, k)
        p = eval_seq(spec.d, k + 1) * v - eval_seq(spec.d, k) * w
        return w, v, p

    w_n, v_n, p_n = generic(n)
    w_m, v_m, p_m = generic(n - 1)
    forms = []
    a = np.array(
        [
            [abs(w_n) ** 2, np.conj(w_n) * p_n],
            [w_n * np.conj(p_n), abs(p_n) ** 2 + abs(v_n) ** 2],
        ],
        dtype=complex,
    )
    b = np.array(
        [
            [abs(w_m) ** 2 + abs(p_m) ** 2, p_m * np.conj(v_m)],
            [v_m * np.conj(p_m), abs(v_m) ** 2],
        ],
        dtype=complex,
    )
    forms.append((a, b))

    if spec.class_td:
        t_n = w_n
        t_m = w_m
        d_prev = eval_seq(spec.d, n - 1)
        d_cur = eval_seq(spec.d, n)
        d_next = eval_seq(spec.d, n + 1)
        c_n = d_next / t_n - d_cur * t_n
        c_m = d_cur / t_m - d_prev * t_m
        a_td = np.array(
            [
                [abs(t_n) ** 2, d_next * np.conj(t_n) / t_n - d_cur * abs(t_n) ** 2],
                [
                    np.conj(d_next) * t_n / np.conj(t_n) - np.conj(d_cur) * abs(t_n) ** 2,
                    abs(c_n) ** 2 + 1.0 / abs(t_n) ** 2,
                ],
            ],
            dtype=complex,
        )
        b_td = np.array(
            [
                [
                    abs(t_m) ** 2 + abs(c_m) ** 2,
                    d_cur / abs(t_m) ** 2 - d_prev * t_m / np.conj(t_m),
                ],
                [
                    np.conj(d_cur) / abs(t_m) ** 2 - np.conj(d_prev) * np.conj(t_m) / t_m,
                    1.0 / abs(t_m) ** 2,
                ],
            ],
            dtype=complex,
        )
        forms.append((a_td, b_td))

    if (
        abs(abs(w_n) - 1.0) <= 1e-9
        and abs(abs(v_n) - 1.0) <= 1e-9
        and abs(abs(w_m) - 1.0) <= 1e-9
        and abs(abs(v_m) - 1.0) <= 1e-9
    ):
        d_prev = eval_seq(spec.d, n - 1)
        d_cur = eval_seq(spec.d, n)
        d_next = eval_seq(spec.d, n + 1)
        a_uni = np.array(
            [
                [1.0, np.conj(w_n) * d_next * v_n - d_cur],
                [np.conj(d_next) * np.conj(v_n) * w_n - np.conj(d_cur), 1.0 + abs(p_n) ** 2],
            ],
            dtype=complex,
        )
        b_uni = np.array(
            [
                [1.0 + abs(p_m) ** 2, d_cur - d_prev * w_m * np.conj(v_m)],
                [np.conj(d_cur) - np.conj(d_prev) * np.conj(w_m) * v_m, 1.0],
            ],
            dtype=complex,
        )
        forms.append((a_uni, b_uni))
    return forms


def dense_gram_check(spec: BlockShiftSpec, n: int) -> float:
    """Max entrywise deviation between direct Gram blocks and closed forms."""
    pair = local_gram(spec, n)
    dev = 0.0
    for a_cf, b_cf in _closed_form_grams(spec, n):
        dev = max(dev, float(np.max(np.abs(pair.A - a_cf))), float(np.max(np.abs(pair.B - b_cf))))
    return dev


def commutator_direct(spec: BlockShiftSpec, n: int) -> np.ndarray:
    """A_n B_n - B_n A_n by direct multiplication; anti-Hermitian."""
    pair = local_gram(spec, n)
    return pair.A @ pair.B - pair.B @ pair.A


def _site_diag(values: list[np.ndarray]) -> np.ndarray:
    size = 2 * len(values)
    m = np.zeros((size, size), dtype=complex)
    for i, block in enumerate(values):
        m[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = block
    return m


def similarity_identity_check(spec: BlockShiftSpec, win: Window) -> float:
    """Residual of the triangular conjugation tying T to the diagonal sum.

    Builds hard truncations of T, of the uncoupled direct sum, and of the
    unit-triangular change of basis, and reports the largest deviation over
    interior entries.  Rows and columns within two sites of the window edge
    are excluded: hard truncation corrupts exactly those couplings.
    """
    if len(win) < 4:
        raise ValueError("identity check needs a window of length >= 4")
    t_full = truncate(spec, win, "hard").m
    diag_blocks = []
    s_blocks = []
    s_inv_blocks = []
    for n in win.indices():
        w = eval_seq(spec.w, n)
        v = eval_seq(spec.v, n)
        d = eval_seq(spec.d, n)
        diag_blocks.append(np.array([[w, 0.0], [0.0, v]], dtype=complex))
        s_blocks.append(np.array([[1.0, -d], [0.0, 1.0]], dtype=complex))
        s_inv_blocks.append(np.array([[1.0, d], [0.0, 1.0]], dtype=complex))
    length = len(win)
    direct_sum = np.zeros((2 * length, 2 * length), dtype=complex)
    for i in range(length - 1):
        direct_sum[2 * i + 2 : 2 * i + 4, 2 * i : 2 * i + 2] = diag_blocks[i]
    s = _site_diag(s_blocks)
    s_inv = _site_diag(s_inv_blocks)
    residual = t_full - s_inv @ direct_sum @ s
    interior = slice(4, 2 * length - 4)
    if interior.stop <= interior.start:
        return 0.0
    return float(np.max(np.abs(residual[interior, interior])))


@dataclass(frozen=True)
class ConjugationReport:
    conjugation_unitary: bool
    unitarity_residual: float
    intertwining_residual: float
    iff_consistent: bool


def unitary_conjugation_check(
    u: np.ndarray, v: np.ndarray, x: np.ndarray, tol: float = 1e-8
) -> ConjugationReport:
    """Probe whether conjugating the inverse direct sum by the triangular
    change of basis stays unitary, against the intertwining relation
    X V^{-1} = U^{-1} X that characterises it.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    x = np.asarray(x, dtype=complex)
    d = u.shape[0]
    if u.shape != (d, d) or v.shape != (d, d) or x.shape != (d, d):
        raise ValueError("U, V, X must be square matrices of equal size")
    eye = np.eye(d)
    for name, m in (("U", u), ("V", v)):
        if np.max(np.abs(m.conj().T @ m - eye)) > tol:
            raise ValueError(f"{name} is not unitary within tolerance")
    u_inv = np.linalg.inv(u)
    v_inv = np.linalg.inv(v)
    upper = np.block([[u_inv, x @ v_inv - u_inv @ x], [np.zeros((d, d)), v_inv]])
    unitarity = float(np.max(np.abs(upper.conj().T @ upper - np.eye(2 * d))))
    intertwining = float(np.max(np.abs(x @ v_inv - u_inv @ x)))
    conj_unitary = unitarity <= tol
    return ConjugationReport(
        conjugation_unitary=conj_unitary,
        unitarity_residual=unitarity,
        intertwining_residual=intertwining,
        iff_consistent=conj_unitary == (intertwining <= tol),
    )


def mobius_of_matrix(phi: MobiusMap, m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Matrix functional calculus e^{i theta} (M - aI)(I - conj(a) M)^{-1}."""
    m = np.asarray(m, dtype=complex)
    size = m.shape[0]
    eye = np.eye(size)
    lhs = eye - np.conj(phi.a) * m
    rhs = m - phi.a * eye
    try:
        y = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise SpectrumObstructionError(f"1/conj(a) lies in the spectrum: {exc}") from exc
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(lhs @ y - rhs)) > tol * scale * size:
        raise SpectrumObstructionError("resolvent solve is numerically singular")
    return np.exp(1j * phi.theta) * y


def mobius_roundtrip_residual(phi: MobiusMap, m: np.ndarray) -> float:
    """Max deviation of phi^{-1}(phi(M)) from M."""
    back = mobius_of_matrix(mobius_inverse(phi), mobius_of_matrix(phi, m))
    return float(np.max(np.abs(back - m)))


@dataclass(frozen=True)
class CommutantBasis:
    """Residual-certified spanning set of {P : MP = PM} for a dense M."""

    basis: tuple[np.ndarray, ...]
    dim: int
    residuals: tuple[float, ...]


def commutant_basis(
    m: np.ndarray, tol: float = DEFAULT_TOL, max_size: int = 96
) -> CommutantBasis:
    """Nullspace of P -> MP - PM, solved densely through the stacked
    commutation matrix.  Each returned element B satisfies
    ||MB - BM||_F <= tol * max(1, ||M||) with ||B||_F = 1 by construction.

    The dense solve costs O(n^6); sizes above `max_size` are refused and the
    hard budget is 256.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("M must be square")
    if n > 256:
        raise SizeBudgetError(f"matrix size {n} exceeds the 256 dense-solve budget")
    if n > max_size:
        raise SizeBudgetError(
            f"matrix size {n} exceeds max_size={max_size}; raise it explicitly to proceed"
        )
    eye = np.eye(n)
    k = np.kron(eye, m) - np.kron(m.T, eye)
    _, svals, vh = np.linalg.svd(k)
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    cutoff = tol * scale
    null_rows = vh[svals <= cutoff] if svals.size else vh[:0]
    basis = []
    residuals = []
    for row in null_rows:
        b = row.conj().reshape((n, n), order="F")
        b = b / np.linalg.norm(b)
        basis.append(b)
        residuals.append(float(np.linalg.norm(m @ b - b @ m)))
    return CommutantBasis(basis=tuple(basis), dim=len(basis), residuals=tuple(residuals))


def _hermitian_commutant(basis: tuple[np.ndarray, ...], n: int) -> list[np.ndarray]:
    """Real basis of the Hermitian elements inside span_C(basis)."""
    if not basis:
        return []
    real_dirs = []
    for b in basis:
        real_dirs.append(b)
        real_dirs.append(1j * b)
    cols = []
    for direction in real_dirs:
        viol = direction - direction.conj().T
        cols.append(np.concatenate([viol.real.ravel(), viol.imag.ravel()]))
    a = np.column_stack(cols)
    _, svals, vh = np.linalg.svd(a)
    rank_cut = 1e-9 * (svals[0] if svals.size else 1.0)
    null = vh[len(svals[svals > max(rank_cut, 1e-14)]) :]
    hermitians = []
    for coeffs in null:
        h = sum(c * d for c, d in zip(coeffs, real_dirs))
        h = (h + h.conj().T) / 2.0
        norm = np.linalg.norm(h)
        if norm > 1e-12:
            hermitians.append(h / norm)
    return hermitians


def _boundary_mass_fraction(h: np.ndarray, band: int) -> float:
    n = h.shape[0]
    if band <= 0 or 2 * band >= n:
        return 0.0
    total = float(np.linalg.norm(h) ** 2)
    interior = h[band : n - band, band : n - band]
    return 1.0 - float(np.linalg.norm(interior) ** 2) / total if total > 0 else 0.0


@dataclass(frozen=True)
class ReducingSearchResult:
    commutant_dim: int
    hermitian_dim: int
    nontrivial_projection: np.ndarray | None
    residuals: dict
    artifacts_filtered: int


def reducing_search(
    m: np.ndarray,
    tol: float = DEFAULT_TOL,
    boundary_band: int = 0,
    max_size: int = 96,
) -> ReducingSearchResult:
    """Search the commutant of M for a nontrivial orthogonal projection.

    A Hermitian element of the commutant with at least two separated
    eigenvalues yields a reducing projection through its spectral projection
    at the median significant eigengap.  With `boundary_band` > 0, Hermitian
    candidates whose Frobenius mass sits mostly (more than half) in the
    first/last `boundary_band` rows and columns are treated as truncation
    artifacts and skipped; finite windows always produce such near-reducers.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    com = commutant_basis(m, tol=tol, max_size=max_size)
    hermitians = _hermitian_commutant(com.basis, n)
    scale = max(1.0, float(np.linalg.norm(m, 2)))
    artifacts = 0
    candidates = []
    for h in hermitians:
        deflated = h - (np.trace(h) / n) * np.eye(n)
        norm = float(np.linalg.norm(deflated))
        if norm <= 100 * tol:
            continue  # scalar: no spectral gap to exploit
        deflated /= norm
        if _boundary_mass_fraction(deflated, boundary_band) > 0.5:
            artifacts += 1
            continue
        candidates.append(deflated)
    projection = None
    residuals: dict = {}
    for h in candidates:
        eigvals, eigvecs = np.linalg.eigh(h)
        gaps = np.diff(eigvals)
        sig = [i for i, g in enumerate(gaps) if g > 100 * tol * max(1.0, abs(eigvals[-1]))]
        if not sig:
            continue
        cut = sig[len(sig) // 2]
        vecs = eigvecs[:, cut + 1 :]
        p = vecs @ vecs.conj().T
        res = {
            "idempotency": float(np.max(np.abs(p @ p - p))),
            "hermiticity": float(np.max(np.abs(p - p.conj().T))),
            "commutation": float(np.max(np.abs(m @ p - p @ m))),
        }
        bound = 10 * tol * scale
        if max(res.values()) <= bound:
            projection = p
            residuals = res
            break
    return ReducingSearchResult(
        commutant_dim=com.dim,
        hermitian_dim=len(hermitians),
        nontrivial_projection=projection,
        residuals=residuals,
        artifacts_filtered=artifacts,
    )
