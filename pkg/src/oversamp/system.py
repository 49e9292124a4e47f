"""Assembly of the missing-sample recovery systems and their eigenvalue bounds.

Two channels: a 2N x 2N block matrix S (function/derivative coupling at the
missing positions) and a right-hand side C accumulated from the known
samples.  One channel: an N x N matrix R and vector B.  The analytic
eigenvalue bounds for interleaved missing sets U = m * I are provided
alongside, together with the exact structural prediction for the case
where m * r is an integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .kernels import (
    SQRT_2PI,
    OneChannelParams,
    TwoChannelParams,
    dual_gen_1,
    dual_gen_1_deriv,
    dual_gen_2,
    dual_gen_2_deriv,
    sinc,
)

DEFAULT_TRUNCATION = 500

_INTEGRALITY_TOL = 1e-9


class MissingKnownSampleError(KeyError):
    """A sample required by the truncated sum is absent from the input."""


class IntegerCaseError(ValueError):
    """m * r is an integer: the analytic bounds do not apply (use structural_case)."""


@dataclass(frozen=True)
class MissingSet:
    """Sorted distinct integer indices of the missing samples.

    ``factorization`` optionally records the interleaved form (m, base)
    with indices = m * base elementwise; interleaving spreads the missing
    positions so that burst errors hit well-separated samples.
    """

    indices: tuple
    factorization: Optional[tuple] = None

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if len(idx) == 0:
            raise ValueError("missing set must contain at least one index")
        if sorted(set(idx)) != list(idx):
            raise ValueError(f"indices must be sorted and distinct, got {idx}")
        object.__setattr__(self, "indices", idx)
        if self.factorization is not None:
            m, base = self.factorization
            m = int(m)
            base = tuple(int(b) for b in base)
            if m < 1:
                raise ValueError(f"interleaving factor must be positive, got {m}")
            if tuple(m * b for b in base) != idx:
                raise ValueError("factorization (m, base) does not reproduce the indices")
            object.__setattr__(self, "factorization", (m, base))

    @classmethod
    def from_indices(cls, indices: Sequence[int]) -> "MissingSet":
        return cls(indices=tuple(sorted(set(int(i) for i in indices))))

    @classmethod
    def interleaved(cls, m: int, base: Sequence[int]) -> "MissingSet":
        base = tuple(sorted(set(int(b) for b in base)))
        return cls(indices=tuple(m * b for b in base), factorization=(m, base))

    def __len__(self) -> int:
        return len(self.indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=int)


@dataclass(frozen=True)
class EigBounds:
    """Analytic bounds on the spectra of the two diagonal blocks.

    Valid for missing sets of the form m * base when m * r is not an
    integer; D = floor(2 m r).  Every eigenvalue of the function block
    lies in (alpha11_low, alpha11_high) and of the derivative block in
    (beta22_low, beta22_high), independent of how many samples are missing.
    """

    D: int
    alpha11_low: float
    alpha11_high: float
    beta22_low: float
    beta22_high: float


@dataclass(frozen=True)
class BlockSystem:
    """Assembled two-channel system: matrix, views of the four blocks, rhs."""

    matrix: np.ndarray
    s11: np.ndarray
    s12: np.ndarray
    s21: np.ndarray
    s22: np.ndarray
    rhs: Optional[np.ndarray]
    truncation: Optional[int]
    params: TwoChannelParams
    missing: MissingSet

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _difference_grid(u: MissingSet, t_o: float) -> np.ndarray:
    idx = u.as_array()
    return (idx[:, None] - idx[None, :]) * t_o


def split_blocks(S: np.ndarray):
    """Materialized copies of the four N x N blocks of a 2N x 2N matrix."""
    n2 = S.shape[0]
    if S.shape[0] != S.shape[1] or n2 % 2:
        raise ValueError(f"expected an even-sized square matrix, got shape {S.shape}")
    n = n2 // 2
    return (
        S[:n, :n].copy(),
        S[:n, n:].copy(),
        S[n:, :n].copy(),
        S[n:, n:].copy(),
    )


def two_channel_matrix(p: TwoChannelParams, u: MissingSet) -> np.ndarray:
    """The 2N x 2N coupling matrix of the two-channel recovery system.

    Block (1,1) couples function samples through the first dual generator,
    (2,2) derivative samples through the second generator's derivative;
    the off-diagonal blocks mix the channels and are antisymmetric.  The
    diagonal blocks are symmetric, and for equispaced missing indices each
    block is Toeplitz (the full matrix is not).
    """
    D = _difference_grid(u, p.t_o)
    s11 = SQRT_2PI * dual_gen_1(D, p)
    s12 = -SQRT_2PI * dual_gen_2(D, p)
    s21 = SQRT_2PI * dual_gen_1_deriv(D, p)
    s22 = -SQRT_2PI * dual_gen_2_deriv(D, p)
    return np.block([[s11, s12], [s21, s22]])


def one_channel_matrix(p: OneChannelParams, u: MissingSet) -> np.ndarray:
    """The N x N single-channel matrix r * sinc(pi r (l_j - l_k)); symmetric positive definite."""
    idx = u.as_array()
    return p.r * sinc(math.pi * p.r * (idx[:, None] - idx[None, :]))


def known_indices(u: MissingSet, M: int) -> np.ndarray:
    """Indices n with |n| <= M that are not missing, ascending."""
    if M <= max(abs(i) for i in u.indices):
        raise ValueError(f"truncation M = {M} must exceed max missing |index| = {max(abs(i) for i in u.indices)}")
    mask = np.ones(2 * M + 1, dtype=bool)
    grid = np.arange(-M, M + 1)
    missing_pos = [i + M for i in u.indices]
    mask[missing_pos] = False
    return grid[mask]


def rhs_weights_two_channel(p: TwoChannelParams, u: MissingSet, M: int):
    """Weight matrices (W_f, W_df) with rhs = W_f @ f_known + W_df @ df_known.

    Exposing the weights keeps the rhs linear map reusable: noise carried
    by the known samples propagates to the rhs through exactly these
    matrices.
    """
    ks = known_indices(u, M)
    idx = u.as_array()
    D = (idx[:, None] - ks[None, :]) * p.t_o
    w_f = np.vstack([SQRT_2PI * dual_gen_1(D, p), SQRT_2PI * dual_gen_1_deriv(D, p)])
    w_df = np.vstack([-SQRT_2PI * dual_gen_2(D, p), -SQRT_2PI * dual_gen_2_deriv(D, p)])
    return w_f, w_df


def rhs_two_channel(p: TwoChannelParams, u: MissingSet, signal, M: int = DEFAULT_TRUNCATION) -> np.ndarray:
    """Right-hand side of the two-channel system from a sample oracle.

    The first N entries accumulate the known function and derivative
    samples against the dual generators at the missing positions; the last
    N do the same against the generators' derivatives.  Sums run over
    |n| <= M, n not missing.
    """
    ks = known_indices(u, M)
    w_f, w_df = rhs_weights_two_channel(p, u, M)
    xs = ks * p.t_o
    return w_f @ signal.value(xs) + w_df @ signal.derivative(xs)


def rhs_weights_one_channel(p: OneChannelParams, u: MissingSet, M: int) -> np.ndarray:
    """Weight matrix W with rhs = W @ f_known for the single-channel system."""
    ks = known_indices(u, M)
    idx = u.as_array()
    return p.r * sinc(math.pi * p.r * (idx[:, None] - ks[None, :]))


def rhs_one_channel(
    p: OneChannelParams,
    u: MissingSet,
    samples: Mapping[int, float],
    M: int = DEFAULT_TRUNCATION,
) -> np.ndarray:
    """Right-hand side of the single-channel system from indexed samples.

    ``samples`` must contain every index n with |n| <= M outside the
    missing set; MissingKnownSampleError names the first absent one.
    """
    ks = known_indices(u, M)
    try:
        vals = np.array([samples[int(k)] for k in ks], dtype=float)
    except KeyError as exc:
        raise MissingKnownSampleError(f"sample at index {exc.args[0]} is required but absent") from exc
    return rhs_weights_one_channel(p, u, M) @ vals


def assemble_two_channel(
    p: TwoChannelParams,
    u: MissingSet,
    signal=None,
    M: int = DEFAULT_TRUNCATION,
) -> BlockSystem:
    """Matrix plus (optionally) rhs in one BlockSystem value."""
    S = two_channel_matrix(p, u)
    s11, s12, s21, s22 = split_blocks(S)
    rhs = None if signal is None else rhs_two_channel(p, u, signal, M)
    return BlockSystem(
        matrix=S,
        s11=s11,
        s12=s12,
        s21=s21,
        s22=s22,
        rhs=rhs,
        truncation=None if signal is None else M,
        params=p,
        missing=u,
    )


def is_integer_ratio_case(m: int, r: float) -> bool:
    """Whether m * r is an integer up to float64 representation slack."""
    return abs(m * r - round(m * r)) < _INTEGRALITY_TOL


def eig_bounds(m: int, r: float) -> EigBounds:
    """Analytic eigenvalue bounds for interleaved missing sets.

    Requires m * r non-integer; in the integer case the blocks collapse to
    exact multiples of the identity (see structural_case) and
    IntegerCaseError is raised.
    """
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    if is_integer_ratio_case(m, r):
        raise IntegerCaseError(f"m*r = {m * r} is an integer; bounds do not apply")
    D = math.floor(2 * m * r)
    alpha = (D / m) * (1.0 - D / (4.0 * m) - 1.0 / (4.0 * m))
    beta_low = D * (D - 1) / (4.0 * m * m)
    beta_high = D * (D + 1) / (4.0 * m * m) + r / m
    return EigBounds(
        D=D,
        alpha11_low=alpha,
        alpha11_high=alpha + 1.0 / m,
        beta22_low=beta_low,
        beta22_high=beta_high,
    )


def separation_threshold(r: float) -> float:
    """Smallest interleaving scale beyond which the two blocks' spectra separate.

    For integer m above (1 + 2r) / (2r(1-r)) with m*r non-integer, the
    largest derivative-block eigenvalue falls below the smallest
    function-block eigenvalue.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    return (1.0 + 2.0 * r) / (2.0 * r * (1.0 - r))


@dataclass(frozen=True)
class StructuralCase:
    """Exact block structure predicted when m * r is an integer.

    s11 and s22 are scalar multiples of the identity (2r - r^2 and r^2),
    s12 vanishes, and s21 has the explicit off-diagonal closed form; the
    full matrix is block lower triangular with spectrum {2r - r^2, r^2},
    each with multiplicity N.
    """

    s11_coeff: float
    s22_coeff: float
    s21: np.ndarray

    def predicted_blocks(self, n: int):
        eye = np.eye(n)
        return self.s11_coeff * eye, np.zeros((n, n)), self.s21, self.s22_coeff * eye


def structural_case(m: int, r: float, base: Sequence[int], omega: float = math.pi) -> Optional[StructuralCase]:
    """Exact block prediction for U = m * base, or None when m * r is not integer."""
    if m < 1:
        raise ValueError(f"m must be a positive integer, got {m}")
    if not is_integer_ratio_case(m, r):
        return None
    base_arr = np.asarray(sorted(set(int(b) for b in base)), dtype=int)
    n = len(base_arr)
    diff = base_arr[:, None] - base_arr[None, :]
    s21 = np.zeros((n, n))
    off = diff != 0
    s21[off] = (1.0 - r) * omega / (m * math.pi * diff[off])
    return StructuralCase(s11_coeff=2.0 * r - r * r, s22_coeff=r * r, s21=s21)
