"""Cutoff-regularised stress difference and force coefficients on the shell.

Everything here is dimensionless except the optional SI force. With
sigma the bracketed order sum,

* Dirichlet: stress = -sigma/(4 pi^2) * hbar c / a^3
* Neumann:   stress = -sigma/(2 pi^2) * hbar c / a^3

and the force coefficient C (f = C hbar c / a^2) is 2 pi times the stress
coefficient. Dirichlet and Neumann are separate problems; no function
here combines them.
"""
from dataclasses import dataclass, field, replace
import math
from types import MappingProxyType

from scipy import constants

from .errors import UnknownMaterialError
from .green import BoundaryCondition
from .integrands import IntegrandKind
from .quadrature import QuadConfig, SumConfig, sum_orders

SPEED_OF_LIGHT = {"codata": constants.c, "rounded": 3.0e8}
HBAR_C = constants.hbar * constants.c


@dataclass(frozen=True)
class MaterialSpec:
    name: str
    omega_p: float  # rad/s

    def __post_init__(self):
        if not self.omega_p > 0:
            raise ValueError("plasma frequency must be positive")


@dataclass(frozen=True)
class Geometry:
    a: float  # shell radius, m

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class CutoffParam:
    x_cutoff: float

    def __post_init__(self):
        if not self.x_cutoff > 0:
            raise ValueError("x_cutoff must be positive")


_MATERIALS = MappingProxyType({
    "gold": MaterialSpec("gold", 1.37e16),
    "silver": MaterialSpec("silver", 9.65e14),
})


def builtin_materials():
    return list(_MATERIALS.values())


def get_material(name):
    try:
        return _MATERIALS[name.lower()]
    except KeyError:
        raise UnknownMaterialError(
            f"unknown material {name!r}; known: {', '.join(_MATERIALS)}") from None


def resolve_c(c):
    """Accept a numeric speed of light or one of the presets 'codata'/'rounded'."""
    if isinstance(c, str):
        key = c.strip().lower()
        if key in SPEED_OF_LIGHT:
            return SPEED_OF_LIGHT[key]
        c = float(key)
    c = float(c)
    if not c > 0:
        raise ValueError("speed of light must be positive")
    return c


def cutoff_from_material(mat, geom, c=constants.c):
    """x_cutoff = omega_p a / c."""
    return CutoffParam(mat.omega_p * geom.a / resolve_c(c))


@dataclass
class PressureResult:
    """Regularised result for one boundary condition.

    ``convergence`` maps each integrand family used to its order sum.
    ``si_force`` is in newtons per metre of cylinder length.
    """

    bc: BoundaryCondition
    x_cutoff: float
    sigma: float
    stress_coeff: float
    force_coeff: float = None
    si_force: float = None
    convergence: dict = field(default_factory=dict)

    @property
    def converged(self):
        return all(r.converged for r in self.convergence.values())

    @property
    def m_used(self):
        return max(r.m_used for r in self.convergence.values())

    @property
    def tail_estimate(self):
        return sum(r.tail_estimate for r in self.convergence.values())


def _as_x(x_cutoff):
    return x_cutoff.x_cutoff if isinstance(x_cutoff, CutoffParam) else float(x_cutoff)


def stress_difference(bc, x_cutoff, qcfg=QuadConfig(), scfg=SumConfig()):
    """Inside-minus-outside radial stress for one boundary condition."""
    bc = BoundaryCondition(bc)
    x = _as_x(x_cutoff)
    if not x > 0:
        raise ValueError("x_cutoff must be positive")
    if bc is BoundaryCondition.DIRICHLET:
        d = sum_orders(IntegrandKind.DIRICHLET, x, qcfg, scfg)
        sigma = d.total
        conv = {IntegrandKind.DIRICHLET: d}
        stress = -sigma / (4 * math.pi**2)
    else:
        na = sum_orders(IntegrandKind.NEUMANN_A, x, qcfg, scfg)
        nb = sum_orders(IntegrandKind.NEUMANN_B, x, qcfg, scfg)
        # neumann_a has no m = 0 term, so the m = 0 part comes from neumann_b only
        sigma = nb.total + na.total
        conv = {IntegrandKind.NEUMANN_A: na, IntegrandKind.NEUMANN_B: nb}
        stress = -sigma / (2 * math.pi**2)
    return PressureResult(bc=bc, x_cutoff=x, sigma=sigma, stress_coeff=stress,
                          convergence=conv)


def force_per_unit(res, geom=None):
    """Fill in the force coefficient and, given a geometry, the SI force."""
    force = 2 * math.pi * res.stress_coeff
    si = force * HBAR_C / geom.a**2 if geom is not None else None
    return replace(res, force_coeff=force, si_force=si)


def compute(bc, material=None, omega_p=None, a=1e-7, c=constants.c,
            qcfg=QuadConfig(), scfg=SumConfig()):
    """End-to-end: material (or plasma frequency) and radius to force."""
    if (material is None) == (omega_p is None):
        raise ValueError("give exactly one of material or omega_p")
    mat = get_material(material) if isinstance(material, str) else material
    if mat is None:
        mat = MaterialSpec("custom", omega_p)
    geom = Geometry(a)
    cut = cutoff_from_material(mat, geom, c)
    return force_per_unit(stress_difference(bc, cut, qcfg, scfg), geom)
