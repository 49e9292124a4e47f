"""Sampling kernels for one- and two-channel derivative oversampling.

The two-channel scheme samples a band-limited function and its derivative
at a rate above Nyquist/2; reconstruction uses a pair of dual generators
given in closed form below.  All kernels are numerically safe across the
removable singularities of their closed forms and accept scalars or numpy
arrays (scalar in, scalar out).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SQRT_2PI = math.sqrt(2.0 * math.pi)

# Below these thresholds the closed forms lose digits to cancellation and
# the even/odd Taylor series are exact to machine precision.
_SINC_SERIES_CUTOFF = 1e-4
_DERIV_SERIES_CUTOFF = 1e-3


@dataclass(frozen=True)
class TwoChannelParams:
    """Parameters of the two-channel (function + derivative) scheme.

    omega : band edge of the signals to reconstruct (rad / unit time)
    t_o   : sampling step in each channel
    r     : oversampling ratio omega * t_o / (2 pi); r < 1 means redundancy
    h     : 2 pi / t_o, the band of the underlying critically-sampled basis
    """

    omega: float
    t_o: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if not (self.t_o > 0 and math.isfinite(self.t_o)):
            raise ValueError(f"t_o must be positive and finite, got {self.t_o}")
        # r = 1 is the degenerate critically-sampled limit: the kernels stay
        # evaluatable (the system matrix becomes the identity) but recovery
        # of missing samples is impossible there.
        if not 0.0 < self.r <= 1.0:
            raise ValueError(
                f"oversampling ratio r = omega*t_o/(2*pi) = {self.r} outside (0, 1]"
            )

    @property
    def r(self) -> float:
        return self.omega * self.t_o / (2.0 * math.pi)

    @property
    def h(self) -> float:
        return 2.0 * math.pi / self.t_o

    @classmethod
    def from_ratio(cls, omega: float, r: float) -> "TwoChannelParams":
        """Build params from the band edge and the desired ratio r."""
        if not 0.0 < r <= 1.0:
            raise ValueError(f"r must lie in (0, 1], got {r}")
        return cls(omega=omega, t_o=2.0 * math.pi * r / omega)


@dataclass(frozen=True)
class OneChannelParams:
    """Parameters of the single-channel scheme (function samples only).

    Here the ratio convention differs from the two-channel one:
    r = omega * t_o / pi.
    """

    omega: float
    t_o: float

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")
        if not (self.t_o > 0 and math.isfinite(self.t_o)):
            raise ValueError(f"t_o must be positive and finite, got {self.t_o}")
        if not 0.0 < self.r <= 1.0:
            raise ValueError(
                f"oversampling ratio r = omega*t_o/pi = {self.r} outside (0, 1]"
            )

    @property
    def r(self) -> float:
        return self.omega * self.t_o / math.pi

    @classmethod
    def from_ratio(cls, omega: float, r: float) -> "OneChannelParams":
        if not 0.0 < r <= 1.0:
            raise ValueError(f"r must lie in (0, 1], got {r}")
        return cls(omega=omega, t_o=math.pi * r / omega)


def _maybe_scalar(out: np.ndarray, x) -> "np.ndarray | float":
    return float(out) if np.ndim(x) == 0 else out


def _sinc(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    small = np.abs(x) < _SINC_SERIES_CUTOFF
    xs = x[small]
    out[small] = 1.0 - xs * xs / 6.0 + xs**4 / 120.0
    xl = x[~small]
    out[~small] = np.sin(xl) / xl
    return out


def _sinc_deriv(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    small = np.abs(x) < _DERIV_SERIES_CUTOFF
    xs = x[small]
    out[small] = -xs / 3.0 + xs**3 / 30.0 - xs**5 / 840.0
    xl = x[~small]
    out[~small] = (np.cos(xl) - np.sin(xl) / xl) / xl
    return out


def sinc(x):
    """sin(x)/x with the removable singularity filled in (sinc(0) = 1)."""
    arr = np.asarray(x, dtype=float)
    return _maybe_scalar(_sinc(arr), x)


def sinc_deriv(x):
    """d/dx sinc(x) = (cos x - sinc x)/x; odd, zero at the origin."""
    arr = np.asarray(x, dtype=float)
    return _maybe_scalar(_sinc_deriv(arr), x)


def dual_gen_1(x, p: TwoChannelParams):
    """First dual generator (even): weights the function samples."""
    arr = np.asarray(x, dtype=float)
    r = p.r
    u = p.omega * arr
    out = (2.0 * r * (1.0 - r) * _sinc(u) + r * r * _sinc(u / 2.0) ** 2) / SQRT_2PI
    return _maybe_scalar(out, x)


def dual_gen_2(x, p: TwoChannelParams):
    """Second dual generator (odd): weights the derivative samples."""
    arr = np.asarray(x, dtype=float)
    r = p.r
    out = -(arr * r * r * _sinc(p.omega * arr / 2.0) ** 2) / SQRT_2PI
    return _maybe_scalar(out, x)


def dual_gen_1_deriv(x, p: TwoChannelParams):
    """Derivative of the first dual generator (odd, zero at the origin).

    The closed form carries a 1/x prefactor whose numerator cancels to
    O(x); inside |omega*x| < 1e-3 the even-power series of both terms is
    used instead to avoid catastrophic cancellation.
    """
    arr = np.asarray(x, dtype=float)
    r, om = p.r, p.omega
    u = om * arr
    out = np.empty_like(arr)

    small = np.abs(u) < _DERIV_SERIES_CUTOFF
    us = u[small]
    # 2r(1-r)*om*sinc'(u) + r^2*om*sinc(u/2)*sinc'(u/2), both as series
    series_full = -us / 3.0 + us**3 / 30.0 - us**5 / 840.0
    vs = us / 2.0
    series_half = -vs / 3.0 + 4.0 * vs**3 / 45.0 - vs**5 / 105.0
    out[small] = om * (2.0 * r * (1.0 - r) * series_full + r * r * series_half)

    xl = arr[~small]
    ul = u[~small]
    vl = ul / 2.0
    out[~small] = (2.0 * r / xl) * (
        (1.0 - r) * (np.cos(ul) - _sinc(ul))
        + r * _sinc(vl) * (np.cos(vl) - _sinc(vl))
    )
    out /= SQRT_2PI
    return _maybe_scalar(out, x)


def dual_gen_2_deriv(x, p: TwoChannelParams):
    """Derivative of the second dual generator (even, -r^2/sqrt(2*pi) at 0)."""
    arr = np.asarray(x, dtype=float)
    r = p.r
    v = p.omega * arr / 2.0
    out = -(r * r) * _sinc(v) * (2.0 * np.cos(v) - _sinc(v)) / SQRT_2PI
    return _maybe_scalar(out, x)


def one_channel_kernel(r: float, n):
    """Single-channel interpolation weight r * sinc(pi * r * n)."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    arr = np.asarray(n, dtype=float)
    return _maybe_scalar(r * _sinc(math.pi * r * arr), n)


def riesz_dual_1(x, h: float):
    """Dual generator of the critically-sampled basis: sinc^2(h*x/2)/sqrt(2*pi)."""
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    arr = np.asarray(x, dtype=float)
    return _maybe_scalar(_sinc(h * arr / 2.0) ** 2 / SQRT_2PI, x)


def riesz_dual_2(x, h: float):
    """Second dual generator of the critically-sampled basis: -x*sinc^2(h*x/2)/sqrt(2*pi)."""
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    arr = np.asarray(x, dtype=float)
    return _maybe_scalar(-arr * _sinc(h * arr / 2.0) ** 2 / SQRT_2PI, x)
