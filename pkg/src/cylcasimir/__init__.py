"""Plasma-cutoff regularised Casimir stress on a long conducting cylindrical shell."""
from .bessel import LogBesselEval, eval_modified, eval_ordinary, reduce_negative_order
from .green import BoundaryCondition, RadialGreenQuery, Region, radial_green
from .integrands import (
    IntegrandKind, dirichlet_integrand, neumann_integrand_a, neumann_integrand_b,
)
from .pressure import (
    CutoffParam, Geometry, MaterialSpec, PressureResult, builtin_materials,
    compute, cutoff_from_material, force_per_unit, get_material, stress_difference,
)
from .quadrature import OrderSumResult, QuadConfig, SumConfig, integrate_order, sum_orders

__version__ = "0.1.0"
