"""Stable evaluation of Legendre polynomials and normalized associated Legendre functions.

Conventions used throughout the package.  ``normalized_assoc_legendre(k, m, t)``
returns the real factor ``N(k, m, t)`` such that

    Y_km(phi, theta) = N(k, m, cos phi) * exp(i m theta)

is a unit vector in L2 of the sphere with the unnormalized area element
(total area 4*pi).  Equivalently ``2*pi * integral_{-1}^{1} N(k, m, t)^2 dt = 1``.
The Condon-Shortley phase ``(-1)^m`` is folded into the values, and negative
orders satisfy ``N(k, -m, t) = (-1)^m N(k, m, t)``.

Near the diagonal ``m ~ k`` the values pass through a severely subnormal
range (below 1e-300 for k around 2000) before recovering to order one, so the
upward recurrences here carry an explicit power-of-two exponent offset next to
the float mantissa.  Plain double-precision recurrences silently lose mass for
k beyond roughly 1500; the extended-range variant is exact to rounding for all
k up to at least 2048.
"""

import numpy as np
from scipy.special import gammaln

__all__ = [
    "LogGammaTable",
    "log_factorial",
    "wallis_integral",
    "legendre_p",
    "normalized_assoc_legendre",
    "normalized_assoc_legendre_row",
    "normalized_legendre_table",
    "zonal_sup_coefficient",
]

_LOG2E = 1.0 / np.log(2.0)

# Renormalization thresholds for extended-range recurrences.  Mantissas are
# kept inside [2^-500, 2^500] so that products of two carried values never
# overflow or underflow a double.
_XR_LIMIT = 2.0**500
_XR_SHIFT = 1000
_XR_SCALE_DOWN = 2.0**-1000
_XR_SCALE_UP = 2.0**1000
_XR_CLIP = 2400


class LogGammaTable:
    """Cached values of log(n!) for integer n.

    The table is grown geometrically on demand; ``entry(n)`` accepts scalars
    or integer arrays and is accurate to relative 1e-13 for n up to 1e6.
    """

    def __init__(self, max_n: int = 4096):
        self._values = gammaln(np.arange(int(max_n) + 1, dtype=float) + 1.0)

    @property
    def max_n(self) -> int:
        return self._values.size - 1

    def _grow(self, needed: int):
        new_max = max(needed, 2 * self.max_n)
        self._values = gammaln(np.arange(new_max + 1, dtype=float) + 1.0)

    def entry(self, n):
        n_arr = np.asarray(n, dtype=np.int64)
        if np.any(n_arr < 0):
            raise ValueError("log factorial requires n >= 0")
        top = int(n_arr.max()) if n_arr.size else 0
        if top > self.max_n:
            self._grow(top)
        out = self._values[n_arr]
        if np.isscalar(n) or n_arr.ndim == 0:
            return float(out)
        return out


_TABLE = LogGammaTable()


def log_factorial(n):
    """log(n!) for scalar or array integer n, from the shared cached table."""
    return _TABLE.entry(n)


def wallis_integral(n) -> float:
    """Integral of sin(x)^n over [0, pi], n >= 0 integer.

    Evaluated as sqrt(pi) * Gamma((n+1)/2) / Gamma(n/2 + 1) in log space, so
    it stays finite for n in the hundreds of thousands where the direct
    product recursion would be slow.
    """
    n = int(n)
    if n < 0:
        raise ValueError("wallis_integral requires n >= 0")
    return float(np.exp(0.5 * np.log(np.pi) + gammaln((n + 1) / 2.0) - gammaln(n / 2.0 + 1.0)))


def legendre_p(k: int, t):
    """Legendre polynomial P_k(t) by the three-term recurrence.

    Accepts scalar or array ``t`` with ``|t| <= 1`` (a 1e-12 rounding margin
    is tolerated and clipped).  P_k(1) = 1 normalization.
    """
    k = int(k)
    if k < 0:
        raise ValueError("degree must be >= 0")
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0 + 1e-12):
        raise ValueError("legendre_p requires |t| <= 1")
    t_arr = np.clip(t_arr, -1.0, 1.0)
    p_prev = np.ones_like(t_arr)
    if k == 0:
        return float(p_prev) if np.isscalar(t) or t_arr.ndim == 0 else p_prev
    p_cur = t_arr.copy()
    for n in range(2, k + 1):
        p_next = ((2 * n - 1) * t_arr * p_cur - (n - 1) * p_prev) / n
        p_prev, p_cur = p_cur, p_next
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(p_cur)
    return p_cur


def zonal_sup_coefficient(k: int) -> float:
    """|c_k| = sqrt((2k+1) / (4 pi)), the sup of the zonal harmonic Q_k = c_k P_k."""
    return float(np.sqrt((2 * k + 1) / (4.0 * np.pi)))


def _sectoral_log(k: int) -> float:
    """Natural log of |N(k, k, t)| / sin(phi)^k, the sectoral amplitude.

    From 2*pi * integral N(k,k,t)^2 dt = 1 with N(k,k,t) proportional to
    sin(phi)^k:  log amplitude = 0.5 * (log (2k+1)! - log 2*pi
    - (2k+1) log 2 - 2 log k!).
    """
    return 0.5 * (
        log_factorial(2 * k + 1)
        - np.log(2.0 * np.pi)
        - (2 * k + 1) * np.log(2.0)
        - 2.0 * log_factorial(k)
    )


def normalized_assoc_legendre(k: int, m: int, t):
    """Fully normalized associated Legendre function N(k, m, t).

    Parameters
    ----------
    k : int
        Degree, 0 <= k.
    m : int
        Order, -k <= m <= k.  Negative orders apply the (-1)^m symmetry.
    t : scalar or array
        Argument in [-1, 1] (cosine of colatitude).

    Returns
    -------
    Values with the shape of ``t``.  Finite for all k <= 2048 at least; the
    upward degree recurrence carries a power-of-two offset so the subnormal
    window near the sectoral seed costs no accuracy.
    """
    k = int(k)
    m_in = int(m)
    if k < 0 or abs(m_in) > k:
        raise ValueError("need 0 <= |m| <= k")
    m = abs(m_in)
    scalar = np.isscalar(t) or np.asarray(t).ndim == 0
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t_arr) > 1.0 + 1e-12):
        raise ValueError("argument must satisfy |t| <= 1")
    t_arr = np.clip(t_arr, -1.0, 1.0)
    s = np.sqrt(np.maximum(0.0, 1.0 - t_arr * t_arr))

    out = np.zeros_like(t_arr)
    if m == 0 and k == 0:
        out[:] = 1.0 / np.sqrt(4.0 * np.pi)
    else:
        # Seed at the sectoral degree m in log2 space, split into mantissa and
        # integer exponent so sin(phi)^m can underflow without losing the row.
        with np.errstate(divide="ignore"):
            log2_seed = (_sectoral_log(m) + m * np.log(np.where(s > 0.0, s, 1.0))) * _LOG2E
        off = np.floor(log2_seed)
        p_cur = np.where(s > 0.0, (-1.0) ** m * np.exp2(log2_seed - off), 0.0)
        off = np.where(s > 0.0, off, 0.0)
        if m == 0:
            p_cur = np.full_like(t_arr, 1.0 / np.sqrt(4.0 * np.pi))
            off = np.zeros_like(t_arr)
        p_prev = np.zeros_like(t_arr)
        for n in range(m + 1, k + 1):
            if n == m + 1:
                p_next = np.sqrt(2.0 * m + 3.0) * t_arr * p_cur
            else:
                a = np.sqrt((2.0 * n - 1.0) * (2.0 * n + 1.0) / ((n - m) * (n + m)))
                b = np.sqrt(
                    (2.0 * n + 1.0) * (n + m - 1.0) * (n - m - 1.0)
                    / ((n - m) * (n + m) * (2.0 * n - 3.0))
                )
                p_next = a * t_arr * p_cur - b * p_prev
            p_prev, p_cur = p_cur, p_next
            big = np.maximum(np.abs(p_prev), np.abs(p_cur))
            hi = big > _XR_LIMIT
            lo = (big > 0.0) & (big < 1.0 / _XR_LIMIT)
            if np.any(hi) or np.any(lo):
                shift = np.where(hi, _XR_SHIFT, 0) - np.where(lo, _XR_SHIFT, 0)
                scale = np.where(hi, _XR_SCALE_DOWN, np.where(lo, _XR_SCALE_UP, 1.0))
                p_prev = p_prev * scale
                p_cur = p_cur * scale
                off = off + shift
        out = np.ldexp(p_cur, np.clip(off, -_XR_CLIP, _XR_CLIP).astype(np.int32))
        # Poles: only m == 0 survives, with P_k(+-1) = (+-1)^k.
        pole = s == 0.0
        if np.any(pole):
            if m == 0:
                out[pole] = np.sign(t_arr[pole]) ** k * np.sqrt((2 * k + 1) / (4.0 * np.pi))
            else:
                out[pole] = 0.0
    if m_in < 0 and m % 2 == 1:
        out = -out
    return float(out[0]) if scalar else out


def normalized_assoc_legendre_row(k: int, t: float) -> np.ndarray:
    """All orders at one point: array of N(k, m, t) for m = 0..k.

    Runs the fixed-degree downward recurrence in m, seeded at the sectoral
    order in log space and carried with an extended-range exponent offset.
    Cost is O(k), against O(k^2) for k+1 separate column recurrences.
    """
    k = int(k)
    if k < 0:
        raise ValueError("degree must be >= 0")
    t = float(t)
    if abs(t) > 1.0 + 1e-12:
        raise ValueError("argument must satisfy |t| <= 1")
    t = min(1.0, max(-1.0, t))
    s = np.sqrt(max(0.0, 1.0 - t * t))
    out = np.zeros(k + 1)
    if s == 0.0:
        out[0] = (np.sign(t) ** k if k else 1.0) * np.sqrt((2 * k + 1) / (4.0 * np.pi))
        return out
    log2_seed = (_sectoral_log(k) + k * np.log(s)) * _LOG2E
    off = int(np.floor(log2_seed))
    cur = (-1.0) ** k * 2.0 ** (log2_seed - off)
    mans = np.zeros(k + 1)
    offs = np.zeros(k + 1, dtype=np.int64)
    mans[k] = cur
    offs[k] = off
    if k == 0:
        return np.ldexp(mans, np.clip(offs, -_XR_CLIP, _XR_CLIP).astype(np.int32))
    t_over_s = t / s
    prev_m = cur
    above = 0.0
    for m in range(k, 0, -1):
        denom = np.sqrt((k + m) * (k - m + 1.0))
        val = -(np.sqrt((k + m + 1.0) * (k - m)) * above + 2.0 * m * t_over_s * prev_m) / denom
        above, prev_m = prev_m, val
        big = max(abs(above), abs(prev_m))
        if big > _XR_LIMIT:
            above *= _XR_SCALE_DOWN
            prev_m *= _XR_SCALE_DOWN
            off += _XR_SHIFT
        elif 0.0 < big < 1.0 / _XR_LIMIT:
            above *= _XR_SCALE_UP
            prev_m *= _XR_SCALE_UP
            off -= _XR_SHIFT
        mans[m - 1] = prev_m
        offs[m - 1] = off
    return np.ldexp(mans, np.clip(offs, -_XR_CLIP, _XR_CLIP).astype(np.int32))


_TABLE_MAX_DEGREE = 1024


def normalized_legendre_table(k: int, t) -> np.ndarray:
    """Table of N(k, m, t_i) for m = 0..k, vectorized over the points.

    Returns an array of shape ``(len(t), k + 1)``.  Uses the plain upward
    degree sweep without extended-range bookkeeping, which is safe for
    k <= 1024; larger degrees raise, use ``normalized_assoc_legendre``
    column by column or ``normalized_assoc_legendre_row`` point by point.
    """
    k = int(k)
    if k < 0:
        raise ValueError("degree must be >= 0")
    if k > _TABLE_MAX_DEGREE:
        raise ValueError(
            f"normalized_legendre_table supports k <= {_TABLE_MAX_DEGREE}; "
            "use the extended-range column or row evaluators beyond that"
        )
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t_arr) > 1.0 + 1e-12):
        raise ValueError("arguments must satisfy |t| <= 1")
    t_arr = np.clip(t_arr, -1.0, 1.0)
    s = np.sqrt(np.maximum(0.0, 1.0 - t_arr * t_arr))
    n_pts = t_arr.size
    prev = np.zeros((n_pts, k + 1))
    cur = np.zeros((n_pts, k + 1))
    cur[:, 0] = 1.0 / np.sqrt(4.0 * np.pi)
    for n in range(1, k + 1):
        nxt = np.zeros((n_pts, k + 1))
        if n >= 2:
            m = np.arange(0, n - 1)
            a = np.sqrt((2 * n - 1.0) * (2 * n + 1.0) / ((n - m) * (n + m)))
            b = np.sqrt(
                (2 * n + 1.0) * (n + m - 1.0) * (n - m - 1.0)
                / ((n - m) * (n + m) * (2.0 * n - 3.0))
            )
            nxt[:, : n - 1] = a * t_arr[:, None] * cur[:, : n - 1] - b * prev[:, : n - 1]
        nxt[:, n - 1] = np.sqrt(2.0 * n + 1.0) * t_arr * cur[:, n - 1]
        nxt[:, n] = -np.sqrt((2.0 * n + 1.0) / (2.0 * n)) * s * cur[:, n - 1]
        prev, cur = cur, nxt
    return cur
