import math
from dataclasses import fields

import pytest
from scipy import constants

from cylcasimir.errors import UnknownMaterialError
from cylcasimir.pressure import (
    HBAR_C, CutoffParam, Geometry, MaterialSpec, PressureResult, builtin_materials,
    compute, cutoff_from_material, force_per_unit, get_material, resolve_c,
    stress_difference,
)
from cylcasimir.quadrature import SumConfig

GOLD = MaterialSpec("gold", 1.37e16)
SILVER = MaterialSpec("silver", 9.65e14)
FAST = SumConfig(m_max=60)


def test_builtin_materials():
    mats = {m.name: m.omega_p for m in builtin_materials()}
    assert mats["gold"] == 1.37e16
    assert mats["silver"] == 9.65e14
    assert get_material("Gold").omega_p == 1.37e16
    with pytest.raises(UnknownMaterialError):
        get_material("unobtainium")


def test_cutoff_values_with_rounded_c():
    assert cutoff_from_material(GOLD, Geometry(1e-7), c=3e8).x_cutoff == pytest.approx(4.56667, abs=5e-6)
    assert cutoff_from_material(SILVER, Geometry(1e-7), c="rounded").x_cutoff == pytest.approx(0.32167, abs=5e-6)


def test_cutoff_is_linear_in_radius():
    xs = [cutoff_from_material(GOLD, Geometry(a)).x_cutoff for a in (1e-12, 1e-9, 1e-7)]
    assert xs[0] == pytest.approx(1.37e16 * 1e-12 / constants.c, rel=1e-15)
    assert xs[0] < 1e-3
    assert xs[2] / xs[1] == pytest.approx(100.0, rel=1e-12)


def test_speed_of_light_presets():
    assert resolve_c("codata") == constants.c
    assert resolve_c("rounded") == 3e8
    assert resolve_c("2.5e8") == 2.5e8
    with pytest.raises(ValueError):
        resolve_c(-1)


@pytest.mark.parametrize("bad", [lambda: MaterialSpec("x", 0.0), lambda: Geometry(-1.0),
                                 lambda: CutoffParam(0.0)])
def test_type_invariants(bad):
    with pytest.raises(ValueError):
        bad()


@pytest.mark.parametrize("bc, divisor", [("dirichlet", 4), ("neumann", 2)])
def test_coefficient_relations(bc, divisor):
    res = force_per_unit(stress_difference(bc, 1.3, scfg=FAST), Geometry(2e-7))
    assert res.stress_coeff == -res.sigma / (divisor * math.pi**2)
    assert res.force_coeff == 2 * math.pi * res.stress_coeff
    assert math.copysign(1, res.force_coeff) == -math.copysign(1, res.sigma)
    assert res.si_force == pytest.approx(res.force_coeff * HBAR_C / 4e-14, rel=1e-15)


def test_force_coeff_closed_forms():
    d = force_per_unit(stress_difference("dirichlet", 0.7, scfg=FAST))
    n = force_per_unit(stress_difference("neumann", 0.7, scfg=FAST))
    assert d.force_coeff == pytest.approx(-d.sigma / (2 * math.pi), rel=1e-15)
    assert n.force_coeff == pytest.approx(-n.sigma / math.pi, rel=1e-15)
    assert d.si_force is None


def test_neumann_sigma_assembly():
    res = stress_difference("neumann", 1.1, scfg=FAST)
    a = res.convergence["neumann_a"]
    b = res.convergence["neumann_b"]
    expected = b.per_m[0][1] + 2 * sum(c for _, c in a.per_m[1:]) + 2 * sum(c for _, c in b.per_m[1:])
    assert res.sigma == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("mat", [GOLD, SILVER])
def test_signs_repulsive_dirichlet_attractive_neumann(mat):
    cut = cutoff_from_material(mat, Geometry(1e-7), c=3e8)
    d = force_per_unit(stress_difference("dirichlet", cut, scfg=FAST))
    n = force_per_unit(stress_difference("neumann", cut, scfg=FAST))
    assert d.force_coeff > 0
    assert n.force_coeff < 0


def test_vanishing_cutoff():
    for bc in ("dirichlet", "neumann"):
        res = force_per_unit(stress_difference(bc, 1e-8))
        assert abs(res.sigma) < 1e-6
        assert abs(res.stress_coeff) < 1e-6
        assert abs(res.force_coeff) < 1e-6


def test_si_force_scales_inverse_square_at_fixed_cutoff():
    base = stress_difference("dirichlet", 2.0, scfg=FAST)
    f1 = force_per_unit(base, Geometry(1e-7)).si_force
    f2 = force_per_unit(base, Geometry(2e-7)).si_force
    assert f1 / f2 == pytest.approx(4.0, rel=1e-14)


def test_radius_changes_cutoff_and_coefficient():
    r1 = compute("dirichlet", material="gold", a=1e-7, scfg=FAST)
    r2 = compute("dirichlet", material="gold", a=2e-7, scfg=FAST)
    assert r2.x_cutoff == pytest.approx(2 * r1.x_cutoff, rel=1e-15)
    assert r2.force_coeff != r1.force_coeff


def test_compute_requires_one_source():
    with pytest.raises(ValueError):
        compute("dirichlet")
    with pytest.raises(ValueError):
        compute("dirichlet", material="gold", omega_p=1e16)
    res = compute("neumann", omega_p=1e15, scfg=FAST)
    assert res.force_coeff < 0


def test_no_combined_boundary_condition_field():
    names = {f.name for f in fields(PressureResult)}
    assert not any("total" in n or "combined" in n for n in names)
    with pytest.raises(ValueError):
        stress_difference("both", 1.0)
