r"""Imaginary-frequency integrands of the inside-minus-outside radial stress.

Every integrand is written through the log-derivative ratios
:math:`r_I = I_m'/I_m` and :math:`r_K = K_m'/K_m` only:

* dirichlet:  :math:`x\,(r_I + r_K) = x\,\frac{d}{dx}\ln(I_m K_m)`
* neumann_a:  :math:`\frac{m^2}{x}\,(1/r_I + 1/r_K)`
* neumann_b:  :math:`x\,(1/r_I + 1/r_K)`

which stay finite at orders where the raw Bessel products do not. The
reciprocal sums are evaluated as (r_I + r_K)/(r_I r_K) with r_I + r_K
formed free of cancellation, since r_I ~ m/x and r_K ~ -m/x nearly
cancel at small x.
Functions accept scalars or arrays with x >= 0; x = 0 returns the
analytic endpoint limit.
"""
from enum import Enum

import numpy as np

from .bessel import modified_ratios
from .errors import BesselDomainError


class IntegrandKind(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN_A = "neumann_a"
    NEUMANN_B = "neumann_b"


def _prepare(m, x):
    if int(m) != m or m < 0:
        raise BesselDomainError(f"order must be a non-negative integer, got {m!r}")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(xa)) or np.any(xa < 0):
        raise BesselDomainError("integrand argument must be finite and >= 0")
    return int(m), xa, np.ndim(x) == 0


def _finish(out, scalar):
    return float(out[0]) if scalar else out


def dirichlet_integrand(m, x):
    """x d/dx ln(I_m(x) K_m(x)); tends to 0 as x -> 0 for every m.

    For m = 0 the approach is only logarithmic, roughly -1/ln(2/x).
    """
    m, x, scalar = _prepare(m, x)
    out = np.zeros_like(x)
    pos = x > 0
    if np.any(pos):
        xp = x[pos]
        _, _, total = modified_ratios(m, xp)
        out[pos] = xp * total
    return _finish(out, scalar)


def neumann_integrand_a(m, x):
    """m^2/x (I_m/I_m' + K_m/K_m'); identically zero at m = 0."""
    m, x, scalar = _prepare(m, x)
    out = np.zeros_like(x)
    pos = x > 0
    if m > 0 and np.any(pos):
        xp = x[pos]
        ri, rk, total = modified_ratios(m, xp)
        out[pos] = (m * m / xp) * (total / (ri * rk))
    return _finish(out, scalar)


def neumann_integrand_b(m, x):
    """x (I_m/I_m' + K_m/K_m').

    Endpoint limit is 2 for m = 0 (I_0/I_0' ~ 2/x) and 0 otherwise.
    """
    m, x, scalar = _prepare(m, x)
    out = np.full_like(x, 2.0 if m == 0 else 0.0)
    pos = x > 0
    if np.any(pos):
        xp = x[pos]
        ri, rk, total = modified_ratios(m, xp)
        out[pos] = xp * (total / (ri * rk))
    return _finish(out, scalar)


INTEGRANDS = {
    IntegrandKind.DIRICHLET: dirichlet_integrand,
    IntegrandKind.NEUMANN_A: neumann_integrand_a,
    IntegrandKind.NEUMANN_B: neumann_integrand_b,
}


def get_integrand(kind):
    return INTEGRANDS[IntegrandKind(kind)]
