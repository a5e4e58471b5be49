r"""Radial factors g(rho, rho') of the real-frequency cylinder Green functions.

With k = omega/c, rho_< = min(rho, rho'), rho_> = max(rho, rho') and
prefactor :math:`A = -\pi/(2ic)`:

inside, Dirichlet
    :math:`A\,\frac{J_m(k\rho_<)}{J_m(ka)}\,[H_m(ka)J_m(k\rho_>) - J_m(ka)H_m(k\rho_>)]`
inside, Neumann
    :math:`A\,\frac{J_m(k\rho_<)}{J_m'(ka)}\,[H_m'(ka)J_m(k\rho_>) - J_m'(ka)H_m(k\rho_>)]`
outside, Dirichlet
    :math:`A\,\frac{H_m(k\rho_>)}{H_m(ka)}\,[J_m(ka)H_m(k\rho_<) - H_m(ka)J_m(k\rho_<)]`
outside, Neumann
    :math:`A\,\frac{H_m(k\rho_>)}{H_m'(ka)}\,[J_m'(ka)H_m(k\rho_<) - H_m'(ka)J_m(k\rho_<)]`

where H is the Hankel function of the first kind. These are not used by
the stress pipeline; they exist so boundary conditions, symmetry and the
source jump can be checked directly.
"""
from dataclasses import dataclass
from enum import Enum
import math

from scipy import constants

from .bessel import eval_ordinary
from .errors import ResonanceError

POLE_THRESHOLD = 1e-12


class Region(str, Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"


class BoundaryCondition(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class RadialGreenQuery:
    m: int
    omega_over_c: float
    a: float
    rho: float
    rho_prime: float
    region: Region
    bc: BoundaryCondition
    c: float = constants.c

    def __post_init__(self):
        object.__setattr__(self, "region", Region(self.region))
        object.__setattr__(self, "bc", BoundaryCondition(self.bc))
        if self.m < 0 or int(self.m) != self.m:
            raise ValueError("m must be a non-negative integer")
        for name in ("omega_over_c", "a", "rho", "rho_prime", "c"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        inside = self.region is Region.INSIDE
        for r in (self.rho, self.rho_prime):
            if (inside and r > self.a) or (not inside and r < self.a):
                raise ValueError(f"radius {r} is not in the {self.region.value} region")


def source_jump(rho_prime, c=constants.c):
    """Jump of d g / d rho across rho = rho' (from above minus from below).

    Follows from the Wronskian J H1' - J' H1 = 2i/(pi z); identical for
    all four radial functions.
    """
    return 1.0 / (c * rho_prime)


def radial_green(q, pole_threshold=POLE_THRESHOLD):
    """Value of the radial Green function selected by ``q``.

    Raises
    ------
    ResonanceError
        if the boundary denominator has modulus below ``pole_threshold``
    """
    k = q.omega_over_c
    lo, hi = min(q.rho, q.rho_prime), max(q.rho, q.rho_prime)
    ja, jpa, ha, hpa = eval_ordinary(q.m, k * q.a)
    pref = -math.pi / (2j * q.c)
    if q.region is Region.INSIDE:
        j_lo = eval_ordinary(q.m, k * lo)[0]
        j_hi, _, h_hi, _ = eval_ordinary(q.m, k * hi)
        if q.bc is BoundaryCondition.DIRICHLET:
            den, first, second = ja, ha, ja
        else:
            den, first, second = jpa, hpa, jpa
        _check_pole(den, pole_threshold, q)
        return pref * j_lo / den * (first * j_hi - second * h_hi)
    h_hi = eval_ordinary(q.m, k * hi)[2]
    j_lo, _, h_lo, _ = eval_ordinary(q.m, k * lo)
    if q.bc is BoundaryCondition.DIRICHLET:
        den, first, second = ha, ja, ha
    else:
        den, first, second = hpa, jpa, hpa
    _check_pole(den, pole_threshold, q)
    return pref * h_hi / den * (first * h_lo - second * j_lo)


def _check_pole(den, threshold, q):
    if abs(den) < threshold:
        raise ResonanceError(
            f"{q.bc.value} denominator |{abs(den):.3g}| below {threshold:g} at "
            f"m={q.m}, ka={q.omega_over_c * q.a:.17g}", den)
