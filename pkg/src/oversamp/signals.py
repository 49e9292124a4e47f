"""Ground-truth band-limited signals, reconstruction formulas, error metrics.

The built-in test signal is a two-term shifted-sinc combination with band
[-pi, pi]; arbitrary finite sinc combinations serve as exact members of
the band-limited space for oracle tests.  Reconstruction formulas map
(truncated) sample sequences back to function values: single-channel,
two-channel with dual generators, and the critically-sampled two-channel
form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Tuple

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
    sinc_deriv,
)


class LengthMismatchError(ValueError):
    """Truth and computed vectors have different lengths."""


@dataclass(frozen=True)
class BandLimitedSignal:
    """An evaluatable pair (f, f') with a declared band.

    ``value`` and ``derivative`` must accept scalars or numpy arrays and
    broadcast elementwise.
    """

    band: float
    value: Callable
    derivative: Callable
    description: str = ""

    def samples(self, indices, t_o: float) -> np.ndarray:
        return self.value(np.asarray(indices, dtype=float) * t_o)

    def derivative_samples(self, indices, t_o: float) -> np.ndarray:
        return self.derivative(np.asarray(indices, dtype=float) * t_o)


def sinc_combination(coeffs: Sequence[Tuple[float, float]], omega: float) -> BandLimitedSignal:
    """Finite combination sum_j a_j * sinc(omega * (x - x_j)), band omega.

    An empty coefficient list gives the zero signal.  The derivative is
    analytic, so these serve as exact oracles for the reconstruction and
    recovery paths.
    """
    amps = np.array([a for a, _ in coeffs], dtype=float)
    shifts = np.array([s for _, s in coeffs], dtype=float)

    def value(x):
        x = np.asarray(x, dtype=float)
        if amps.size == 0:
            return np.zeros_like(x) if x.ndim else 0.0
        out = (amps * sinc(omega * (x[..., None] - shifts))).sum(axis=-1)
        return out if x.ndim else float(out)

    def derivative(x):
        x = np.asarray(x, dtype=float)
        if amps.size == 0:
            return np.zeros_like(x) if x.ndim else 0.0
        out = (amps * omega * sinc_deriv(omega * (x[..., None] - shifts))).sum(axis=-1)
        return out if x.ndim else float(out)

    label = " + ".join(f"{a:g}*sinc({omega:g}(x-{s:g}))" for a, s in coeffs) or "0"
    return BandLimitedSignal(band=omega, value=value, derivative=derivative, description=label)


def test_signal_g() -> BandLimitedSignal:
    """The standard test signal: sinc(pi(x-2.1)) - 0.7 sinc(pi(x+1.7)), band pi."""
    return sinc_combination([(1.0, 2.1), (-0.7, -1.7)], omega=math.pi)


def _sample_arrays(samples: Mapping[int, float]):
    idx = np.array(sorted(samples), dtype=int)
    vals = np.array([samples[int(i)] for i in idx], dtype=float)
    return idx, vals


def reconstruct_one_channel(p: OneChannelParams, samples: Mapping[int, float], M: int, x):
    """Single-channel reconstruction (omega t_o / pi) * sum f(n t_o) sinc(omega(x - n t_o)).

    Uses every provided sample with |n| <= M.
    """
    idx, vals = _sample_arrays(samples)
    keep = np.abs(idx) <= M
    idx, vals = idx[keep], vals[keep]
    x = np.asarray(x, dtype=float)
    out = p.r * (sinc(p.omega * (x[..., None] - idx * p.t_o)) @ vals)
    return out if x.ndim else float(out)


def reconstruct_two_channel(
    p: TwoChannelParams,
    samples: Mapping[int, float],
    dsamples: Mapping[int, float],
    M: int,
    x,
):
    """Two-channel reconstruction from function and derivative samples.

    sqrt(2 pi) * sum_k [ f(k t_o) g1(x - k t_o) - f'(k t_o) g2(x - k t_o) ]
    with g1, g2 the dual generators, truncated to |k| <= M.
    """
    idx_f, vals_f = _sample_arrays(samples)
    idx_d, vals_d = _sample_arrays(dsamples)
    keep_f = np.abs(idx_f) <= M
    keep_d = np.abs(idx_d) <= M
    idx_f, vals_f = idx_f[keep_f], vals_f[keep_f]
    idx_d, vals_d = idx_d[keep_d], vals_d[keep_d]
    x = np.asarray(x, dtype=float)
    out = SQRT_2PI * (
        dual_gen_1(x[..., None] - idx_f * p.t_o, p) @ vals_f
        - dual_gen_2(x[..., None] - idx_d * p.t_o, p) @ vals_d
    )
    return out if x.ndim else float(out)


def reconstruct_two_channel_deriv(
    p: TwoChannelParams,
    samples: Mapping[int, float],
    dsamples: Mapping[int, float],
    M: int,
    x,
):
    """Derivative of the two-channel reconstruction (same data, derivative kernels)."""
    idx_f, vals_f = _sample_arrays(samples)
    idx_d, vals_d = _sample_arrays(dsamples)
    keep_f = np.abs(idx_f) <= M
    keep_d = np.abs(idx_d) <= M
    idx_f, vals_f = idx_f[keep_f], vals_f[keep_f]
    idx_d, vals_d = idx_d[keep_d], vals_d[keep_d]
    x = np.asarray(x, dtype=float)
    out = SQRT_2PI * (
        dual_gen_1_deriv(x[..., None] - idx_f * p.t_o, p) @ vals_f
        - dual_gen_2_deriv(x[..., None] - idx_d * p.t_o, p) @ vals_d
    )
    return out if x.ndim else float(out)


def reconstruct_riesz(
    h: float,
    t_o: float,
    samples: Mapping[int, float],
    dsamples: Mapping[int, float],
    M: int,
    x,
):
    """Critically-sampled two-channel reconstruction for signals of band h.

    Requires t_o = 2 pi / h.  The kernel interpolates: at grid points the
    function term reduces to the sample and the derivative term vanishes.
    """
    if not math.isclose(t_o, 2.0 * math.pi / h, rel_tol=1e-12):
        raise ValueError(f"critical sampling requires t_o = 2*pi/h, got t_o={t_o}, 2*pi/h={2.0 * math.pi / h}")
    idx_f, vals_f = _sample_arrays(samples)
    idx_d, vals_d = _sample_arrays(dsamples)
    keep_f = np.abs(idx_f) <= M
    keep_d = np.abs(idx_d) <= M
    idx_f, vals_f = idx_f[keep_f], vals_f[keep_f]
    idx_d, vals_d = idx_d[keep_d], vals_d[keep_d]
    x = np.asarray(x, dtype=float)
    diff_f = x[..., None] - idx_f * t_o
    diff_d = x[..., None] - idx_d * t_o
    out = (sinc(h * diff_f / 2.0) ** 2) @ vals_f + (diff_d * sinc(h * diff_d / 2.0) ** 2) @ vals_d
    return out if x.ndim else float(out)


def error_metrics(truth, computed):
    """Max absolute error and per-entry relative errors.

    Relative error against a zero truth entry is reported as inf.
    """
    truth = np.asarray(truth, dtype=float)
    computed = np.asarray(computed, dtype=float)
    if truth.shape != computed.shape:
        raise LengthMismatchError(f"shapes differ: {truth.shape} vs {computed.shape}")
    abs_err = np.abs(computed - truth)
    rel = np.full_like(abs_err, np.inf)
    nz = truth != 0.0
    rel[nz] = abs_err[nz] / np.abs(truth[nz])
    rel[abs_err == 0.0] = 0.0
    return float(abs_err.max()) if abs_err.size else 0.0, rel
