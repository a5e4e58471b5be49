r"""Log-scaled modified Bessel functions and their logarithmic derivatives.

Downstream code only ever needs the combinations

.. math::
    \ln I_m(x),\quad \ln K_m(x),\quad \frac{I_m'(x)}{I_m(x)},\quad
    \frac{K_m'(x)}{K_m(x)}

so these are what the kernel returns. At order 1000 and x of a few units
:math:`I_m` underflows and :math:`K_m` overflows a double, while the four
quantities above stay perfectly representable.

Evaluation strategy

* :math:`I_{m+1}/I_m` always from its continued fraction (modified Lentz).
* Orders below ``DEBYE_MIN_ORDER``: :math:`\ln I_m` from the ascending power
  series, :math:`\ln K_m` from forward recurrence of
  :math:`K_{n+1}/K_n` seeded with scaled :math:`K_0, K_1`.
* Higher orders: uniform (Debye) large-order expansion.

All derivatives are with respect to the full argument.
"""
from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial import Polynomial
from scipy import special

from .errors import BesselDomainError, BesselOverflowError

DEBYE_MIN_ORDER = 50
DEBYE_TERMS = 10
SERIES_MAX_X = 50.0

_CF_EPS = 1e-15
_CF_MAXIT = 20000
_TINY = 1e-300


@dataclass(frozen=True)
class LogBesselEval:
    """Log-scaled values and log-derivative ratios of I_m, K_m at one point.

    Fields are floats for scalar input and arrays for array input.
    """

    log_i: float
    log_k: float
    ratio_i: float
    ratio_k: float

    @property
    def product(self):
        """I_m(x) K_m(x), always representable."""
        return np.exp(self.log_i + self.log_k)


def reduce_negative_order(m):
    """Map an integer order onto m >= 0.

    I and K are even in the order, so callers summing over all integers
    weight every m >= 1 term by 2.
    """
    return abs(int(m))


def _check_order(m):
    if int(m) != m or m < 0:
        raise BesselDomainError(f"order must be a non-negative integer, got {m!r}")
    return int(m)


def _check_argument(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise BesselDomainError("argument must be finite and strictly positive")
    return x


def ratio_i_next(m, x):
    """I_{m+1}(x) / I_m(x) from the continued fraction.

    .. math::
        \\frac{I_{m+1}}{I_m} = \\cfrac{1}{\\frac{2(m+1)}{x} +
        \\cfrac{1}{\\frac{2(m+2)}{x} + \\cdots}}

    Evaluated with the modified Lentz algorithm, vectorised over ``x``.
    """
    x = np.asarray(x, dtype=float)
    f = np.full(x.shape, _TINY)
    c = f.copy()
    d = np.zeros(x.shape)
    for j in range(1, _CF_MAXIT):
        b = 2.0 * (m + j) / x
        d = b + d
        d = np.where(d == 0.0, _TINY, d)
        d = 1.0 / d
        c = b + 1.0 / c
        c = np.where(c == 0.0, _TINY, c)
        delta = c * d
        f = f * delta
        if np.all(np.abs(delta - 1.0) < _CF_EPS):
            return f
    raise BesselOverflowError(f"continued fraction for I ratio did not converge (m={m})")


def _log_i_series(m, x):
    # ln I_m(x) = m ln(x/2) - ln m! + ln sum_k (x^2/4)^k / (k! (m+1)_k); all terms positive
    q = 0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    k = 0
    while True:
        k += 1
        term = term * q / (k * (m + k))
        total = total + term
        if np.all(term <= 1e-17 * total):
            break
    return m * np.log(0.5 * x) - math.lgamma(m + 1) + np.log(total)


def _log_i_small_order(m, x):
    out = np.empty_like(x)
    small = x <= SERIES_MAX_X
    if np.any(small):
        out[small] = _log_i_series(m, x[small])
    if np.any(~small):
        xl = x[~small]
        out[~small] = np.log(special.ive(m, xl)) + xl
    return out


def _k_small_order(m, x):
    """(ln K_m, K_{m+1}/K_m) by forward recurrence, which is stable for K."""
    k0 = special.kve(0, x)
    k1 = special.kve(1, x)
    log_k = np.log(k0) - x
    r = k1 / k0
    for n in range(1, m + 1):
        log_k = log_k + np.log(r)
        r = 2.0 * n / x + 1.0 / r
    return log_k, r


@lru_cache(maxsize=None)
def debye_polynomials(n_terms=DEBYE_TERMS):
    """Debye polynomials u_k(p), v_k(p) for k < n_terms.

    Built from the standard recurrences

    .. math::
        u_{k+1} = \\tfrac12 p^2(1-p^2) u_k' + \\tfrac18\\int_0^p (1-5t^2) u_k\\,dt,
        \\qquad v_k = u_k + p(p^2-1)\\left(\\tfrac12 u_{k-1} + p u_{k-1}'\\right).
    """
    t = Polynomial([0.0, 1.0])
    u = [Polynomial([1.0])]
    for _ in range(n_terms - 1):
        uk = u[-1]
        nxt = 0.5 * t**2 * (1 - t**2) * uk.deriv() + ((1 - 5 * t**2) * uk).integ(lbnd=0) / 8
        u.append(nxt)
    v = [u[0]]
    for k in range(1, n_terms):
        v.append(u[k] + t * (t**2 - 1) * (0.5 * u[k - 1] + t * u[k - 1].deriv()))
    return tuple(u), tuple(v)


def debye_modified(m, x, n_terms=DEBYE_TERMS):
    """Uniform large-order expansion of I_m, K_m and their derivatives.

    Returns ``LogBesselEval`` built entirely from the expansion (the ratio of
    I is *not* taken from the continued fraction here). Accurate to near
    machine precision for m >= DEBYE_MIN_ORDER.
    """
    nu = float(m)
    x = np.asarray(x, dtype=float)
    z = x / nu
    sq = np.sqrt(1.0 + z * z)
    p = 1.0 / sq
    eta = sq + np.log(z / (1.0 + sq))
    u, v = debye_polynomials(n_terms)
    su_plus = np.zeros_like(x)
    su_minus = np.zeros_like(x)
    sv_plus = np.zeros_like(x)
    sv_minus = np.zeros_like(x)
    for k in range(n_terms):
        w = nu ** (-k)
        uk = u[k](p) * w
        vk = v[k](p) * w
        sign = -1.0 if k % 2 else 1.0
        su_plus += uk
        sv_plus += vk
        su_minus += sign * uk
        sv_minus += sign * vk
    half_log_sq = 0.5 * np.log(sq)
    log_i = nu * eta - 0.5 * math.log(2 * math.pi * nu) - half_log_sq + np.log(su_plus)
    log_k = -nu * eta + 0.5 * math.log(math.pi / (2 * nu)) - half_log_sq + np.log(su_minus)
    ratio_i = (sq / z) * sv_plus / su_plus
    ratio_k = -(sq / z) * sv_minus / su_minus
    return LogBesselEval(log_i, log_k, ratio_i, ratio_k)


def _modified_arrays(m, x):
    ri = m / x + ratio_i_next(m, x)
    if m >= DEBYE_MIN_ORDER:
        deb = debye_modified(m, x)
        log_i, log_k, rk = deb.log_i, deb.log_k, deb.ratio_k
    else:
        log_i = _log_i_small_order(m, x)
        log_k, k_next = _k_small_order(m, x)
        rk = m / x - k_next
    return log_i, log_k, ri, rk


def eval_modified(m, x):
    """Log-scaled I_m, K_m and log-derivative ratios at (m, x).

    Parameters
    ----------
    m : int
        non-negative order
    x : float or array_like
        strictly positive argument(s)

    Returns
    -------
    LogBesselEval
        floats if ``x`` is scalar, arrays otherwise

    Raises
    ------
    BesselDomainError
        for x <= 0, non-finite x, or a negative/non-integer order
    BesselOverflowError
        if a log-scaled value is not finite
    """
    m = _check_order(m)
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(_check_argument(x))
    parts = _modified_arrays(m, xa)
    for arr in parts:
        if not np.all(np.isfinite(arr)):
            raise BesselOverflowError(f"log-scaled Bessel value not representable at m={m}")
    if scalar:
        parts = tuple(float(a[0]) for a in parts)
    return LogBesselEval(*parts)


def debye_ratio_sum(m, x, i_next, n_terms=DEBYE_TERMS):
    """I_m'/I_m + K_m'/K_m for large m without cancelling the m/x parts.

    With s = sqrt(m^2 + x^2), K_m'/K_m = -(s/x)(1 + D) where D collects the
    odd Debye terms of (sum v_k - sum u_k) / sum u_k, and
    I_m'/I_m - s/x = I_{m+1}/I_m - x/(m + s).
    """
    nu = float(m)
    z = x / nu
    s = np.hypot(nu, x)
    p = nu / s
    u, v = debye_polynomials(n_terms)
    su_minus = np.zeros_like(x)
    diff = np.zeros_like(x)
    for k in range(n_terms):
        w = (-1.0) ** k * nu ** (-k)
        su_minus += w * u[k](p)
        if k:
            diff += w * (v[k] - u[k])(p)
    d = diff / su_minus
    return (i_next - x / (nu + s)) - (s / x) * d, -(s / x) * (1.0 + d)


def modified_ratios(m, x):
    """(I_m'/I_m, K_m'/K_m, I_m'/I_m + K_m'/K_m) on an array of x > 0.

    Hot path for the stress integrands; no validation. The sum is formed
    without subtracting the nearly equal +-m/x leading parts, so it keeps
    full relative accuracy even when it is many orders of magnitude
    smaller than either ratio.
    """
    a = ratio_i_next(m, x)
    ri = m / x + a
    if m >= DEBYE_MIN_ORDER:
        total, rk = debye_ratio_sum(m, x, a)
        return ri, rk, total
    # K_{m-1}/K_m from the forward recurrence (K_{-1} = K_1)
    k0 = special.kve(0, x)
    r = special.kve(1, x) / k0
    b = r
    for n in range(1, m + 1):
        b = 1.0 / r
        r = 2.0 * n / x + b
    rk = -m / x - b
    return ri, rk, a - b


def eval_ordinary(m, x):
    """J_m, J_m', H1_m, H1_m' at real x > 0.

    Returns
    -------
    tuple
        ``(j, j_prime, h1, h1_prime)``; the Hankel values are complex.
    """
    m = _check_order(m)
    x = _check_argument(x)
    j = special.jv(m, x)
    jp = special.jvp(m, x)
    h = special.hankel1(m, x)
    hp = special.h1vp(m, x)
    if np.ndim(j) == 0:
        return float(j), float(jp), complex(h), complex(hp)
    return j, jp, h, hp
