"""Solving the assembled systems to recover missing samples.

Plain solves, Tikhonov-regularized solves with discrepancy-principle
parameter selection, and a seeded Gaussian noise model for robustness
experiments.  Noise is injected into the assembled right-hand side (the
data of the linear system), and its exact norm is what the discrepancy
principle receives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from . import linalg
from .kernels import OneChannelParams, TwoChannelParams
from .signals import BandLimitedSignal
from .system import (
    DEFAULT_TRUNCATION,
    MissingSet,
    one_channel_matrix,
    rhs_one_channel,
    rhs_two_channel,
    rhs_weights_two_channel,
    split_blocks,
    two_channel_matrix,
    known_indices,
)

# Above this condition number an unregularized solve is still performed on
# request, but the result carries a warning: the data error amplification
# exceeds any plausible data accuracy.
ILL_CONDITIONED_LIMIT = 1e12


@dataclass(frozen=True)
class NoiseSpec:
    """Seeded zero-mean Gaussian noise with an exact target norm.

    The drawn vector is rescaled so that ||e||_2 = magnitude * sqrt(len),
    making the per-entry RMS equal to ``magnitude`` and the norm handed to
    the discrepancy principle exact rather than estimated.
    """

    magnitude: float
    seed: int = 0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError(f"noise magnitude must be nonnegative, got {self.magnitude}")


def add_noise(data, spec: NoiseSpec):
    """Return (data + e, ||e||_2) with e seeded Gaussian of exact norm.

    magnitude = 0 returns the data unchanged with delta = 0; identical
    (seed, magnitude, length) always produce the identical vector.
    """
    data = np.asarray(data, dtype=float)
    if spec.magnitude == 0.0:
        return data.copy(), 0.0
    rng = np.random.default_rng(spec.seed)
    e = rng.standard_normal(data.shape[0])
    target = spec.magnitude * math.sqrt(data.shape[0])
    e *= target / np.linalg.norm(e)
    return data + e, target


@dataclass(frozen=True)
class RecoveryResult:
    """Recovered samples at the missing positions plus solve diagnostics.

    ``function`` maps missing index -> recovered f(l t_o); ``derivative``
    is present for solves that recover the derivative channel.
    ``lambda_used`` is 0 exactly when regularization was disabled;
    ``residual_norm`` is recomputed from the returned solution.
    """

    missing: MissingSet
    function: Optional[dict]
    derivative: Optional[dict]
    lambda_used: float
    residual_norm: float
    condition_estimate: float
    warnings: tuple = field(default_factory=tuple)
    delta: float = 0.0

    def function_values(self) -> np.ndarray:
        return np.array([self.function[i] for i in self.missing.indices])

    def derivative_values(self) -> np.ndarray:
        return np.array([self.derivative[i] for i in self.missing.indices])


def _solve_system(A: np.ndarray, rhs: np.ndarray, *, regularize: bool, delta: Optional[float]):
    """Shared solve path: plain or discrepancy-regularized, with warnings."""
    # A = I - S collapses to rounding noise when the sampling degenerates to
    # the critical rate (S -> I); the relative pivot guard cannot see that.
    if np.abs(A).max() < 1e-12:
        raise linalg.SingularMatrixError(
            "system matrix is zero to rounding noise; recovery impossible at this ratio"
        )
    warnings = []
    cond = linalg.spectral_condition(A)
    if linalg.beyond_trust(cond):
        warnings.append(f"condition number {cond:.3e} beyond float64 trust limit")
    if regularize:
        if delta is None or delta <= 0:
            raise ValueError("regularized solves need a positive delta (noise or truncation norm)")
        sel = linalg.discrepancy_select(A, rhs, delta)
        warnings.extend(sel.warnings)
        return sel.x, sel.lam, sel.residual_norm, cond, warnings
    if cond > ILL_CONDITIONED_LIMIT:
        warnings.append(
            f"unregularized solve with condition number {cond:.3e} > {ILL_CONDITIONED_LIMIT:.0e}; "
            "expect severe error amplification"
        )
    x = linalg.solve_linear(A, rhs)
    residual = float(np.linalg.norm(A @ x - rhs))
    return x, 0.0, residual, cond, warnings


def _truncation_delta_two_channel(p, u, signal, M) -> float:
    """Estimate of the rhs truncation-error norm from an M vs M/2 comparison."""
    full = rhs_two_channel(p, u, signal, M)
    half = rhs_two_channel(p, u, signal, max(M // 2, max(abs(i) for i in u.indices) + 1))
    return float(np.linalg.norm(full - half))


def recover_two_channel(
    p: TwoChannelParams,
    u: MissingSet,
    signal: BandLimitedSignal,
    M: int = DEFAULT_TRUNCATION,
    noise: Optional[NoiseSpec] = None,
    regularize: bool = False,
    delta: Optional[float] = None,
) -> RecoveryResult:
    """Recover simultaneously missing function and derivative samples.

    Solves the 2N x 2N system; the first N unknowns are the function
    samples at the missing positions, the last N the derivative samples.
    With ``noise`` the right-hand side is perturbed by a seeded Gaussian
    vector of exact norm, which is also the default discrepancy target.
    With ``regularize`` but no noise, the target falls back to ``delta``
    or, failing that, to an estimate of the truncation-error norm.
    """
    S = two_channel_matrix(p, u)
    A = np.eye(S.shape[0]) - S
    rhs = rhs_two_channel(p, u, signal, M)
    if noise is not None:
        rhs, noise_delta = add_noise(rhs, noise)
        if delta is None and noise_delta > 0:
            delta = noise_delta
    if regularize and delta is None:
        delta = _truncation_delta_two_channel(p, u, signal, M)
    x, lam, residual, cond, warns = _solve_system(A, rhs, regularize=regularize, delta=delta)
    n = len(u)
    return RecoveryResult(
        missing=u,
        function=dict(zip(u.indices, x[:n])),
        derivative=dict(zip(u.indices, x[n:])),
        lambda_used=lam,
        residual_norm=residual,
        condition_estimate=cond,
        warnings=tuple(warns),
        delta=float(delta) if delta else 0.0,
    )


def recover_function_channel(
    p: TwoChannelParams,
    u: MissingSet,
    signal: BandLimitedSignal,
    M: int = DEFAULT_TRUNCATION,
    derivative_at_missing: Optional[Mapping[int, float]] = None,
) -> RecoveryResult:
    """Recover missing function samples when every derivative sample is known.

    Solves the N x N reduced system obtained by moving the known
    derivative terms to the right-hand side.  ``derivative_at_missing``
    overrides the signal's own derivative values at the missing positions
    (used by consistency checks); by default they come from the signal.
    """
    S = two_channel_matrix(p, u)
    s11, s12, _, _ = split_blocks(S)
    n = len(u)
    c = rhs_two_channel(p, u, signal, M)
    if derivative_at_missing is None:
        y = signal.derivative_samples(u.as_array(), p.t_o)
    else:
        y = np.array([derivative_at_missing[i] for i in u.indices], dtype=float)
    rhs = c[:n] + s12 @ y
    A = np.eye(n) - s11
    x, lam, residual, cond, warns = _solve_system(A, rhs, regularize=False, delta=None)
    return RecoveryResult(
        missing=u,
        function=dict(zip(u.indices, x)),
        derivative=None,
        lambda_used=lam,
        residual_norm=residual,
        condition_estimate=cond,
        warnings=tuple(warns),
    )


def recover_derivative_channel(
    p: TwoChannelParams,
    u: MissingSet,
    signal: BandLimitedSignal,
    M: int = DEFAULT_TRUNCATION,
    function_at_missing: Optional[Mapping[int, float]] = None,
) -> RecoveryResult:
    """Recover missing derivative samples when every function sample is known."""
    S = two_channel_matrix(p, u)
    _, _, s21, s22 = split_blocks(S)
    n = len(u)
    c = rhs_two_channel(p, u, signal, M)
    if function_at_missing is None:
        x_known = signal.samples(u.as_array(), p.t_o)
    else:
        x_known = np.array([function_at_missing[i] for i in u.indices], dtype=float)
    rhs = c[n:] + s21 @ x_known
    A = np.eye(n) - s22
    y, lam, residual, cond, warns = _solve_system(A, rhs, regularize=False, delta=None)
    return RecoveryResult(
        missing=u,
        function=None,
        derivative=dict(zip(u.indices, y)),
        lambda_used=lam,
        residual_norm=residual,
        condition_estimate=cond,
        warnings=tuple(warns),
    )


def _truncation_delta_one_channel(p, u, samples, M) -> float:
    full = rhs_one_channel(p, u, samples, M)
    half = rhs_one_channel(p, u, samples, max(M // 2, max(abs(i) for i in u.indices) + 1))
    return float(np.linalg.norm(full - half))


def recover_one_channel(
    p: OneChannelParams,
    u: MissingSet,
    samples,
    M: int = DEFAULT_TRUNCATION,
    noise: Optional[NoiseSpec] = None,
    regularize: bool = False,
    delta: Optional[float] = None,
) -> RecoveryResult:
    """Recover missing function samples from single-channel data.

    ``samples`` is either a mapping index -> value covering |n| <= M
    outside the missing set, or a BandLimitedSignal used as the sample
    oracle.  Noise and regularization follow the two-channel semantics.
    """
    if isinstance(samples, BandLimitedSignal):
        ks = known_indices(u, M)
        samples = dict(zip((int(k) for k in ks), samples.samples(ks, p.t_o)))
    R = one_channel_matrix(p, u)
    A = np.eye(R.shape[0]) - R
    rhs = rhs_one_channel(p, u, samples, M)
    if noise is not None:
        rhs, noise_delta = add_noise(rhs, noise)
        if delta is None and noise_delta > 0:
            delta = noise_delta
    if regularize and delta is None:
        delta = _truncation_delta_one_channel(p, u, samples, M)
    x, lam, residual, cond, warns = _solve_system(A, rhs, regularize=regularize, delta=delta)
    return RecoveryResult(
        missing=u,
        function=dict(zip(u.indices, x)),
        derivative=None,
        lambda_used=lam,
        residual_norm=residual,
        condition_estimate=cond,
        warnings=tuple(warns),
        delta=float(delta) if delta else 0.0,
    )
