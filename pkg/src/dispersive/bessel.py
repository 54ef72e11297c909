"""Bessel function ``J0(s) = int_0^{2 pi} exp(i s sin theta) d theta``.

This is ``2 pi`` times the standard Bessel function of order zero.  A
power series in ``(s/2)^2`` is used for ``|s| < SWITCH`` and Hankel's
asymptotic expansion beyond.
"""

from __future__ import annotations

import math

import numpy as np

SWITCH = 12.0
TWO_PI = 2.0 * math.pi

_N_SERIES = 48
# coefficients of sum_k (-1)^k (s^2/4)^k / (k!)^2
_SERIES = np.array([(-1.0) ** k / math.factorial(k) ** 2 for k in range(_N_SERIES)])

_N_ASYM = 24
# a_k = prod_{j=1..k} (2j-1)^2 / (k! 8^k)
_ASYM = [1.0]
for _k in range(1, _N_ASYM):
    _ASYM.append(_ASYM[-1] * (2 * _k - 1) ** 2 / (_k * 8.0))
_ASYM = np.array(_ASYM)


def _series(s):
    w = 0.25 * s * s
    acc = np.zeros_like(s)
    for c in _SERIES[::-1]:
        acc = acc * w + c
    return acc


def _asymptotic(s):
    """Hankel expansion, each sum truncated at its smallest term."""
    P = np.zeros_like(s)
    Q = np.zeros_like(s)
    done = np.zeros(s.shape, dtype=bool)
    prev = np.full_like(s, np.inf)
    for k in range(_N_ASYM):
        term = _ASYM[k] / s ** k
        growing = term > prev
        done |= growing
        active = ~done
        sign = (-1.0) ** ((k + 1) // 2)
        if k % 2 == 0:
            P = np.where(active, P + sign * term, P)
        else:
            Q = np.where(active, Q + sign * term, Q)
        prev = term
    phase = s - 0.25 * math.pi
    return np.sqrt(2.0 / (math.pi * s)) * (P * np.cos(phase) - Q * np.sin(phase))


def bessel_j0_standard(s):
    """Standard ``J_0`` (value 1 at the origin)."""
    s_arr = np.abs(np.asarray(s, dtype=float))
    out = np.empty_like(s_arr)
    small = s_arr < SWITCH
    if np.any(small):
        out[small] = _series(s_arr[small])
    if np.any(~small):
        out[~small] = _asymptotic(s_arr[~small])
    return float(out) if np.ndim(s) == 0 else out


def bessel_j0(s):
    """``2 pi J_0(s)``: the angular average of ``exp(i s sin theta)`` times ``2 pi``."""
    out = TWO_PI * np.asarray(bessel_j0_standard(s))
    return float(out) if np.ndim(s) == 0 else out
