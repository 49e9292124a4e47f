"""Dense real linear algebra used by the recovery pipeline.

Factorization/solve, symmetric and general eigensolvers, singular values,
spectral condition numbers, and Tikhonov-regularized least squares with
discrepancy-principle parameter selection.  Matrices are plain 2-D numpy
arrays of float64; everything here is pure and deterministic.

Condition numbers above ``TRUST_LIMIT`` (1e15) exceed what float64 can
resolve and are flagged as untrustworthy wherever they are reported.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

TRUST_LIMIT = 1e15

_PIVOT_RTOL = 1e-14
_SYMMETRY_RTOL = 1e-12


class SingularMatrixError(ArithmeticError):
    """A pivot fell below the singularity threshold during factorization."""


class NotSymmetricError(ValueError):
    """Matrix handed to the symmetric eigensolver is not symmetric."""


class NoConvergenceError(RuntimeError):
    """The iterative eigensolver did not converge."""


class DeltaTooLargeError(ValueError):
    """Discrepancy target exceeds the data norm; the zero solution already satisfies it."""


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues sorted by real part, plus conjugate-symmetry diagnostics.

    ``max_imag_abs`` is zero for symmetric input, where the spectrum is
    real by construction.
    """

    eigenvalues: np.ndarray
    max_imag_abs: float
    is_symmetric_input: bool

    @property
    def real(self) -> np.ndarray:
        return self.eigenvalues.real

    @property
    def lam_min(self) -> float:
        return float(self.eigenvalues[0].real)

    @property
    def lam_max(self) -> float:
        return float(self.eigenvalues[-1].real)

    def count_outside_unit_interval(self) -> int:
        """How many eigenvalues have real part outside the open interval (0, 1)."""
        re = self.eigenvalues.real
        return int(np.sum((re <= 0.0) | (re >= 1.0)))


@dataclass(frozen=True)
class DiscrepancyResult:
    """Outcome of discrepancy-principle parameter selection."""

    lam: float
    x: np.ndarray
    residual_norm: float
    warnings: tuple = field(default_factory=tuple)


def _as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix entries must all be finite")
    return A


def _as_square(A) -> np.ndarray:
    A = _as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    return A


def solve_linear(A, b) -> np.ndarray:
    """Solve A x = b by row-pivoted LU factorization.

    Raises SingularMatrixError when any pivot magnitude falls below
    1e-14 * ||A||_inf, which signals an exactly or nearly singular system
    (for instance an oversampling ratio extremely close to 1).
    """
    A = _as_square(A)
    b = np.asarray(b, dtype=float)
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"rhs length {b.shape[0]} does not match matrix size {A.shape[0]}")
    norm_inf = np.abs(A).sum(axis=1).max() if A.size else 0.0
    with warnings.catch_warnings():
        # scipy warns on exact singularity; the pivot check below raises instead
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    pivots = np.abs(np.diag(lu))
    if norm_inf == 0.0 or pivots.min() < _PIVOT_RTOL * norm_inf:
        raise SingularMatrixError(
            f"pivot {pivots.min():.3e} below threshold {_PIVOT_RTOL * norm_inf:.3e}"
        )
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


def eig_symmetric(A) -> SpectrumReport:
    """All eigenvalues of a symmetric real matrix, ascending.

    Raises NotSymmetricError when ||A - A^T||_inf exceeds 1e-12 * ||A||_inf.
    """
    A = _as_square(A)
    norm = np.abs(A).max() if A.size else 0.0
    asym = np.abs(A - A.T).max() if A.size else 0.0
    if asym >= _SYMMETRY_RTOL * max(norm, 1e-300):
        raise NotSymmetricError(
            f"asymmetry {asym:.3e} exceeds {_SYMMETRY_RTOL:.0e} * ||A|| = {_SYMMETRY_RTOL * norm:.3e}"
        )
    vals = np.linalg.eigvalsh(A)
    return SpectrumReport(
        eigenvalues=vals.astype(complex),
        max_imag_abs=0.0,
        is_symmetric_input=True,
    )


def eig_general(A) -> SpectrumReport:
    """Full complex spectrum of a square real matrix, sorted by real part.

    The spectrum of a real matrix is closed under conjugation; no reality
    assumption is made here (stability conjectures are monitored against
    this report, never asserted).
    """
    A = _as_square(A)
    try:
        vals = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(str(exc)) from exc
    order = np.lexsort((vals.imag, vals.real))
    vals = vals[order]
    return SpectrumReport(
        eigenvalues=vals,
        max_imag_abs=float(np.abs(vals.imag).max()) if vals.size else 0.0,
        is_symmetric_input=False,
    )


def singular_values(A) -> np.ndarray:
    """Singular values, descending, as square roots of the spectrum of A^T A.

    Adequate for the well-conditioned matrices this is used on; for
    condition-number work use ``spectral_condition``, which resolves small
    singular values far below the A^T A noise floor.
    """
    A = _as_matrix(A)
    gram = A.T @ A
    gram = 0.5 * (gram + gram.T)
    vals = eig_symmetric(gram).eigenvalues.real
    return np.sqrt(np.clip(vals, 0.0, None))[::-1]


def spectral_condition(A) -> float:
    """Spectral condition number sigma_max / sigma_min of a square matrix.

    Returns inf when sigma_min underflows (below 1e-300).  Values above
    TRUST_LIMIT are still returned but cannot be trusted in float64; see
    ``beyond_trust``.
    """
    A = _as_square(A)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[-1] < 1e-300:
        return math.inf
    return float(sv[0] / sv[-1])


def beyond_trust(cond: float) -> bool:
    """Whether a reported condition number exceeds float64 resolution."""
    return cond > TRUST_LIMIT


def _solve_spd(gram: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve a symmetric positive-definite system without the pivot guard.

    For lam > 0 the regularized normal matrix is positive definite by
    construction, so near-singularity is not an error state here the way
    it is in ``solve_linear``; rounding can still defeat Cholesky on
    extreme inputs, in which case plain LU (raw, unguarded) takes over.
    """
    try:
        c = scipy.linalg.cho_factor(gram, check_finite=False)
        return scipy.linalg.cho_solve(c, rhs, check_finite=False)
    except scipy.linalg.LinAlgError:
        return np.linalg.solve(gram, rhs)


def tikhonov_solve(A, b, lam: float) -> np.ndarray:
    """Minimizer of ||A x - b||^2 + lam^2 ||x||^2 via the normal equations.

    The systems here are tiny (a few hundred unknowns at most), so the
    squared-condition-number penalty of the normal equations is an
    acceptable trade for simplicity.  At lam = 0 with square nonsingular A
    this coincides with ``solve_linear`` (and SingularMatrixError is
    possible only there); for lam > 0 the normal matrix is positive
    definite and the solve cannot fail.
    """
    if lam < 0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    A = _as_matrix(A)
    b = np.asarray(b, dtype=float)
    if lam == 0.0 and A.shape[0] == A.shape[1]:
        return solve_linear(A, b)
    gram = A.T @ A + lam * lam * np.eye(A.shape[1])
    return _solve_spd(gram, A.T @ b)


def discrepancy_select(A, b, delta: float, *, lam_lo: float = 1e-12, lam_hi: float = 1e3) -> DiscrepancyResult:
    """Pick the regularization parameter by the discrepancy principle.

    Bisects on log(lam) for the lam whose residual ||A x_lam - b|| lands in
    [delta, 1.05*delta], exploiting monotonicity of the residual in lam.

    Raises DeltaTooLargeError when delta >= ||b|| (the zero solution would
    already over-satisfy the target).  When even the smallest lam leaves a
    residual above 1.05*delta the bracket cannot close; the lam_lo solution
    is returned with a "bracket-floor" warning instead of failing.
    """
    A = _as_matrix(A)
    b = np.asarray(b, dtype=float)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    norm_b = float(np.linalg.norm(b))
    if delta >= norm_b:
        raise DeltaTooLargeError(f"delta = {delta:.3e} >= ||b|| = {norm_b:.3e}")

    gram = A.T @ A
    Atb = A.T @ b
    eye = np.eye(A.shape[1])

    def solve_at(lam: float) -> np.ndarray:
        return _solve_spd(gram + lam * lam * eye, Atb)

    def residual(x: np.ndarray) -> float:
        return float(np.linalg.norm(A @ x - b))

    x_lo = solve_at(lam_lo)
    r_lo = residual(x_lo)
    if r_lo > 1.05 * delta:
        return DiscrepancyResult(
            lam=lam_lo,
            x=x_lo,
            residual_norm=r_lo,
            warnings=("bracket-floor: residual at the smallest lam already exceeds 1.05*delta",),
        )

    x_hi = solve_at(lam_hi)
    r_hi = residual(x_hi)
    if r_hi < delta:
        return DiscrepancyResult(
            lam=lam_hi,
            x=x_hi,
            residual_norm=r_hi,
            warnings=("bracket-ceiling: residual at the largest lam is still below delta",),
        )

    lo, hi = lam_lo, lam_hi
    x_best, r_best, lam_best = x_hi, r_hi, lam_hi
    for _ in range(200):
        mid = math.sqrt(lo * hi)
        x = solve_at(mid)
        res = residual(x)
        if delta <= res <= 1.05 * delta:
            return DiscrepancyResult(lam=mid, x=x, residual_norm=res)
        if res < delta:
            lo = mid
        else:
            hi = mid
            x_best, r_best, lam_best = x, res, mid
    return DiscrepancyResult(
        lam=lam_best,
        x=x_best,
        residual_norm=r_best,
        warnings=("bisection exhausted before entering the target residual band",),
    )
