"""Dyadic Littlewood-Paley family and frequency bands.

The base bump ``phi0`` equals 1 on [-3/5, 3/5], vanishes outside
[-4/5, 4/5] and uses the classical ``exp(-1/x)`` glue in between.  The
dyadic pieces are ``Q_j(y) = phi0(2**(-j-1) y) - phi0(2**(-j) y)`` which
sum to one on (0, inf) and are supported in [2**(j-1), 2**(j+1)].

A :class:`FrequencyBand` describes the smooth frequency cutoff that is
inserted into an oscillatory integral: a single dyadic block, a finite
sum of blocks, or a plateau window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np
from scipy.special import expit

from .errors import ParameterError

CORE = 0.6
EDGE = 0.8


def phi0(y):
    """Smooth even bump equal to 1 on [-3/5, 3/5] and 0 outside [-4/5, 4/5].

    Parameters
    ----------
    y : float or array_like
        Evaluation points.

    Returns
    -------
    float or ndarray
        Values in [0, 1], nonincreasing in ``|y|``.
    """
    y_arr = np.abs(np.asarray(y, dtype=float))
    out = np.zeros_like(y_arr)
    out[y_arr <= CORE] = 1.0
    mid = (y_arr > CORE) & (y_arr < EDGE)
    if np.any(mid):
        u = (y_arr[mid] - CORE) / (EDGE - CORE)
        # transition T(u) = e^{-1/u} / (e^{-1/u} + e^{-1/(1-u)}); phi0 = 1 - T
        with np.errstate(divide="ignore", over="ignore"):
            out[mid] = expit(1.0 / u - 1.0 / (1.0 - u))
    if np.ndim(y) == 0:
        return float(out)
    return out


def q_j(j, y):
    """Dyadic piece ``Q_j(y) = phi0(2^{-j-1} y) - phi0(2^{-j} y)``.

    The scalings by powers of two are exact in floating point, so the
    value is exactly zero outside [2**(j-1), 2**(j+1)].
    """
    y_arr = np.asarray(y, dtype=float)
    val = phi0(np.ldexp(y_arr, -int(j) - 1)) - phi0(np.ldexp(y_arr, -int(j)))
    return val


def active_indices(y):
    """Indices j with Q_j(y) possibly nonzero, for a positive scalar y."""
    e = math.floor(math.log2(y))
    return range(e - 1, e + 2)


def lp_sum(y, j_lo=None, j_hi=None, power=1):
    """Sum of ``Q_j(y)**power`` over ``j_lo <= j <= j_hi``.

    With no bounds the sum runs over every index whose annulus meets ``y``;
    this truncation is exact because the supports are compact.
    """
    y_arr = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.zeros_like(y_arr)
    for i, yi in enumerate(y_arr):
        if yi <= 0:
            continue
        for j in active_indices(yi):
            if j_lo is not None and j < j_lo:
                continue
            if j_hi is not None and j > j_hi:
                continue
            out[i] += q_j(j, yi) ** power
    if np.ndim(y) == 0:
        return float(out[0])
    return out


def dyadic_sum_window(y, k_lo, k_hi):
    """Closed form of ``sum_{k_lo <= k <= k_hi} Q_k(y)`` (telescoping)."""
    y_arr = np.asarray(y, dtype=float)
    return phi0(np.ldexp(y_arr, -int(k_hi) - 1)) - phi0(np.ldexp(y_arr, -int(k_lo)))


@dataclass(frozen=True)
class DyadicRange:
    """Integer range ``lo <= k <= hi``; ``None`` marks an unbounded end."""

    lo: Optional[int]
    hi: Optional[int]

    @property
    def empty(self):
        return self.lo is not None and self.hi is not None and self.lo > self.hi

    def __contains__(self, k):
        if self.empty:
            return False
        if self.lo is not None and k < self.lo:
            return False
        if self.hi is not None and k > self.hi:
            return False
        return True

    def bounded(self, lo=None, hi=None):
        """Concrete ``range`` after supplying bounds for unbounded ends."""
        a = self.lo if self.lo is not None else lo
        b = self.hi if self.hi is not None else hi
        if a is None or b is None:
            raise ParameterError("iteration bounds required for an unbounded index set")
        if self.lo is not None and a < self.lo:
            a = self.lo
        if self.hi is not None and b > self.hi:
            b = self.hi
        return range(a, b + 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bounded())


def _ceil_log2(v):
    m, e = math.frexp(v)  # v = m 2^e with m in [0.5, 1)
    return e - 1 if m == 0.5 else e


def _floor_log2(v):
    m, e = math.frexp(v)
    return e - 1


def band_indices(lo, hi, closed_lo=True, closed_hi=True):
    """Index set ``{k : [2^{k-1}, 2^{k+1}] subset of J}`` for an interval J.

    Parameters
    ----------
    lo, hi : float
        Interval endpoints, ``0 <= lo``, ``hi`` may be ``math.inf``.
    closed_lo, closed_hi : bool
        Whether the endpoints belong to J.

    Returns
    -------
    DyadicRange
        Exact integer range; an unbounded end is ``None``.
    """
    if lo < 0:
        raise ParameterError("interval must lie in [0, inf)")
    if hi < lo or (hi == lo and not (closed_lo and closed_hi)):
        return DyadicRange(1, 0)
    if lo == 0:
        k_lo = None
    else:
        # need 2^{k-1} >= lo (strict when lo is excluded)
        c = _ceil_log2(lo)
        k_lo = c + 1
        if not closed_lo and math.ldexp(1.0, c) == lo:
            k_lo += 1
    if math.isinf(hi):
        k_hi = None
    else:
        f = _floor_log2(hi)
        k_hi = f - 1
        if not closed_hi and math.ldexp(1.0, f) == hi:
            k_hi -= 1
    return DyadicRange(k_lo, k_hi)


@dataclass(frozen=True)
class FrequencyBand:
    """Smooth frequency cutoff in the scaled variable ``y = delta |xi|``.

    Kinds
    -----
    ``dyadic``
        ``P(y / 2^k)`` with ``P = Q_0`` unless a custom window is supplied.
    ``dyadic_sum``
        ``sum_{k0 <= k <= k1} Q_k(y)``.
    ``window``
        Plateau equal to 1 on [y0, y1]; ramps built from ``phi0``.
    ``halfline_low``
        Equal to 1 on (0, y0], zero beyond 4 y0 / 3.
    ``halfline_high``
        Equal to 1 on [y1, cap]; the upper edge ``cap`` is a numerical
        truncation of the unbounded half-line and is reported as such.
    """

    kind: str
    delta: float = 1.0
    k: Optional[int] = None
    k_lo: Optional[int] = None
    k_hi: Optional[int] = None
    y0: Optional[float] = None
    y1: Optional[float] = None
    cap: Optional[float] = None
    window_fn: Optional[Callable] = field(default=None, compare=False)
    window_tag: str = "Q0"

    def __post_init__(self):
        if not (self.delta > 0):
            raise ParameterError("delta must be positive")
        kind = self.kind
        if kind == "dyadic":
            if self.k is None:
                raise ParameterError("dyadic band needs k")
        elif kind == "dyadic_sum":
            if self.k_lo is None or self.k_hi is None or self.k_lo > self.k_hi:
                raise ParameterError("dyadic_sum band needs k_lo <= k_hi")
        elif kind == "window":
            if self.y0 is None or self.y1 is None or not (0 < self.y0 < self.y1):
                raise ParameterError("window bounds must satisfy 0 < y0 < y1")
        elif kind == "halfline_low":
            if self.y0 is None or not (self.y0 > 0):
                raise ParameterError("halfline_low needs y0 > 0")
        elif kind == "halfline_high":
            if self.y1 is None or not (self.y1 > 0):
                raise ParameterError("halfline_high needs y1 > 0")
            if self.cap is None or not (self.cap > self.y1):
                raise ParameterError("halfline_high needs a truncation cap > y1")
        else:
            raise ParameterError(f"unknown band kind {kind!r}")

    # constructors -----------------------------------------------------
    @classmethod
    def dyadic(cls, k, delta=1.0, window_fn=None, window_tag="Q0"):
        return cls("dyadic", delta=delta, k=int(k), window_fn=window_fn, window_tag=window_tag)

    @classmethod
    def dyadic_sum(cls, k_lo, k_hi, delta=1.0):
        return cls("dyadic_sum", delta=delta, k_lo=int(k_lo), k_hi=int(k_hi))

    @classmethod
    def window(cls, y0, y1, delta=1.0):
        return cls("window", delta=delta, y0=float(y0), y1=float(y1))

    @classmethod
    def halfline_low(cls, y0, delta=1.0):
        return cls("halfline_low", delta=delta, y0=float(y0))

    @classmethod
    def halfline_high(cls, y1, cap=None, delta=1.0):
        cap = 8.0 * y1 if cap is None else cap
        return cls("halfline_high", delta=delta, y1=float(y1), cap=float(cap))

    @classmethod
    def from_interval(cls, lo, hi, delta=1.0, k_floor=None, k_ceil=None):
        """Band sum over the index set of an interval, truncated if unbounded."""
        rng = band_indices(lo, hi)
        if rng.empty:
            raise ParameterError("interval contains no dyadic annulus")
        k_lo = rng.lo if rng.lo is not None else k_floor
        k_hi = rng.hi if rng.hi is not None else k_ceil
        if k_lo is None or k_hi is None:
            raise ParameterError("unbounded interval needs k_floor/k_ceil truncation")
        return cls.dyadic_sum(k_lo, k_hi, delta=delta)

    def with_delta(self, delta):
        return FrequencyBand(
            self.kind, delta=delta, k=self.k, k_lo=self.k_lo, k_hi=self.k_hi,
            y0=self.y0, y1=self.y1, cap=self.cap, window_fn=self.window_fn,
            window_tag=self.window_tag,
        )

    # evaluation ---------------------------------------------------------
    def __call__(self, y):
        """Window value at scaled frequency ``y >= 0``."""
        y = np.asarray(y, dtype=float)
        kind = self.kind
        if kind == "dyadic":
            r = np.ldexp(y, -self.k)
            if self.window_fn is not None:
                return np.asarray(self.window_fn(r), dtype=float)
            return q_j(0, r)
        if kind == "dyadic_sum":
            return dyadic_sum_window(y, self.k_lo, self.k_hi)
        if kind == "window":
            return (1.0 - phi0(EDGE * y / self.y0)) * phi0(CORE * y / self.y1)
        if kind == "halfline_low":
            return phi0(CORE * y / self.y0)
        return (1.0 - phi0(EDGE * y / self.y1)) * phi0(CORE * y / self.cap)

    def support(self):
        """Closed interval ``(lo, hi)`` outside which the window vanishes."""
        kind = self.kind
        if kind == "dyadic":
            return (math.ldexp(0.5, self.k), math.ldexp(2.0, self.k))
        if kind == "dyadic_sum":
            return (math.ldexp(0.5, self.k_lo), math.ldexp(2.0, self.k_hi))
        if kind == "window":
            return (CORE * self.y0 / EDGE, EDGE * self.y1 / CORE)
        if kind == "halfline_low":
            return (0.0, EDGE * self.y0 / CORE)
        return (CORE * self.y1 / EDGE, EDGE * self.cap / CORE)

    def transitions(self):
        """Sub-intervals on which the window is not locally constant."""
        kind = self.kind
        if kind == "dyadic":
            if self.window_fn is not None:
                lo, hi = self.support()
                return [(lo, hi)]
            s = math.ldexp(1.0, self.k)
            return [(CORE * s, EDGE * s), (2 * CORE * s, 2 * EDGE * s)]
        if kind == "dyadic_sum":
            a = math.ldexp(1.0, self.k_lo)
            b = math.ldexp(2.0, self.k_hi)
            return [(CORE * a, EDGE * a), (CORE * b, EDGE * b)]
        if kind == "window":
            return [(CORE * self.y0 / EDGE, self.y0), (self.y1, EDGE * self.y1 / CORE)]
        if kind == "halfline_low":
            return [(self.y0, EDGE * self.y0 / CORE)]
        return [(CORE * self.y1 / EDGE, self.y1), (self.cap, EDGE * self.cap / CORE)]

    @property
    def reaches_zero(self):
        return self.kind == "halfline_low"

    @property
    def is_sum(self):
        """True when the band stands for a sum over several dyadic blocks."""
        return self.kind != "dyadic"

    @property
    def truncated(self):
        return self.kind == "halfline_high"

    @property
    def tag(self):
        kind = self.kind
        if kind == "dyadic":
            return f"dyadic:{self.k}"
        if kind == "dyadic_sum":
            return f"dyadic_sum:{self.k_lo}:{self.k_hi}"
        if kind == "window":
            return f"window:{self.y0:g}:{self.y1:g}"
        if kind == "halfline_low":
            return f"halfline_low:{self.y0:g}"
        return f"halfline_high:{self.y1:g}:{self.cap:g}"

    def describe(self):
        d = {"kind": self.kind, "delta": self.delta, "tag": self.tag}
        lo, hi = self.support()
        d["support"] = [lo, hi]
        if self.truncated:
            d["truncated_at"] = self.cap
        return d


def parse_band(text, delta=1.0):
    """Build a band from a compact ``kind:arg:arg`` string.

    Examples: ``dyadic:0``, ``dyadic_sum:-2:3``, ``window:0.5:4``,
    ``halfline_low:1``, ``halfline_high:2:16``.
    """
    parts = text.strip().split(":")
    kind, args = parts[0], parts[1:]
    try:
        if kind == "dyadic" and len(args) == 1:
            return FrequencyBand.dyadic(int(args[0]), delta=delta)
        if kind == "dyadic_sum" and len(args) == 2:
            return FrequencyBand.dyadic_sum(int(args[0]), int(args[1]), delta=delta)
        if kind == "window" and len(args) == 2:
            return FrequencyBand.window(float(args[0]), float(args[1]), delta=delta)
        if kind == "halfline_low" and len(args) == 1:
            return FrequencyBand.halfline_low(float(args[0]), delta=delta)
        if kind == "halfline_high" and len(args) in (1, 2):
            cap = float(args[1]) if len(args) == 2 else None
            return FrequencyBand.halfline_high(float(args[0]), cap=cap, delta=delta)
    except ValueError as exc:
        raise ParameterError(f"bad band specification {text!r}: {exc}") from exc
    raise ParameterError(f"bad band specification {text!r}")
