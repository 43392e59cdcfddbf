import math

import pytest
from scipy.constants import c, hbar, k as k_B

from casitherm.asymptotics import entropy_low_t, low_t_coefficients
from casitherm.errors import DomainError, UndefinedRatioError
from casitherm.lifshitz import PlateSystem
from casitherm.materials import (
    ConductiveDielectric,
    ConductivityLaw,
    Oscillator,
    OscillatorModel,
    apply_toggles,
    builtin_material,
)
from casitherm.specfun import ZETA3
from casitherm.thermo import (
    entropy,
    nernst_default_grid,
    nernst_limit_theory,
    nernst_scan,
    relative_thermal_correction,
)

EV = 1.602176634e-19


def single_oscillator(eps0, omega=6.6e15):
    return OscillatorModel((Oscillator(g=(eps0 - 1) * omega * omega, omega=omega),))


def tau_to_temperature(tau, a):
    return tau * hbar * c / (4 * math.pi * k_B * a)


METAL = builtin_material("ideal-metal")
VACUUM = builtin_material("vacuum")


# ---------------------------------------------------------------------------
# Entropy
# ---------------------------------------------------------------------------

def test_entropy_vacuum_zero():
    point = entropy(PlateSystem(VACUUM, VACUUM, 1e-6), 100.0)
    assert point.S == 0.0
    assert point.step_used < 50.0


def test_entropy_metal_classical_limit():
    # tau ~ 30: F is classical, S = zeta(3) kB / (8 pi a^2).
    a = 1.8e-5
    point = entropy(PlateSystem(METAL, METAL, a), 300.0)
    assert point.S == pytest.approx(ZETA3 * k_B / (8 * math.pi * a * a), rel=1e-2)


def test_entropy_positive_and_vanishing_for_dielectrics():
    model = single_oscillator(4.48)
    system = PlateSystem(model, model, 1e-6)
    values = [entropy(system, T).S for T in (60.0, 30.0, 10.0)]
    assert all(v > 0.0 for v in values)
    assert values[0] > values[1] > values[2]
    # Quadratic leading order: S(10)/S(60) ~ (1/6)^2.
    assert values[2] < 0.05 * values[0]


def test_entropy_rejects_nonpositive_temperature():
    with pytest.raises(DomainError):
        entropy(PlateSystem(METAL, METAL, 1e-6), 0.0)


@pytest.mark.parametrize("eps0", [2.0, 3.0])
def test_entropy_matches_series(eps0):
    # UV-scale single-oscillator pairs: series and finite differences agree
    # to 5% across tau in [0.05, 0.2].
    model = single_oscillator(eps0)
    a = 1e-6
    system = PlateSystem(model, model, a)
    coeffs = low_t_coefficients(model, a)
    for tau in (0.05, 0.1, 0.2):
        T = tau_to_temperature(tau, a)
        numeric = entropy(system, T).S
        series = entropy_low_t(coeffs, a, T).value
        assert numeric == pytest.approx(series, rel=0.05)


def test_entropy_step_halving_stability():
    # Halving the step moves S by less than 3x the quoted error estimate.
    cases = []
    for a in (3e-7, 6e-7, 1e-6, 2e-6):
        for T in (80.0, 140.0, 200.0, 260.0, 300.0):
            cases.append((a, T))
    assert len(cases) == 20
    mica_ei = apply_toggles(builtin_material("mica"), include_debye=False)
    for a, T in cases:
        system = PlateSystem(mica_ei, mica_ei, a)
        default = entropy(system, T)
        halved = entropy(system, T, step=0.5 * default.step_used)
        tol = 3.0 * max(default.err_estimate, 1e-3 * abs(default.S))
        assert abs(halved.S - default.S) <= tol


# ---------------------------------------------------------------------------
# Nernst scan
# ---------------------------------------------------------------------------

def test_default_grid_shape():
    grid = nernst_default_grid()
    assert len(grid) == 8
    assert grid[0] == pytest.approx(300.0)
    assert grid[-1] == pytest.approx(10.0)
    assert all(a > b for a, b in zip(grid, grid[1:]))


def test_nernst_grid_validation():
    system = PlateSystem(METAL, METAL, 1e-6)
    with pytest.raises(DomainError):
        nernst_scan(system, [300.0, 200.0, 100.0])
    with pytest.raises(DomainError):
        nernst_scan(system, [10.0, 20.0, 30.0, 40.0, 50.0, 60.0])


def test_nernst_satisfied_for_oscillator_pair():
    model = single_oscillator(4.48)
    grid = nernst_default_grid(high=100.0, low=5.0, points=8)
    verdict = nernst_scan(PlateSystem(model, model, 1e-6), grid)
    assert verdict.classification == "satisfied"
    assert verdict.limit_theory == 0.0
    assert abs(verdict.limit_estimate) <= 5.0 * verdict.uncertainty
    assert not verdict.out_of_scope
    assert len(verdict.points) == 8


def test_nernst_violated_for_conductive_pair():
    base = single_oscillator(11.66)
    law = ConductivityLaw(form="bandgap", sigma_a=1e16, activation=1.12 * EV)
    cond = ConductiveDielectric(base=base, law=law)
    a = 1e-6
    grid = nernst_default_grid(high=100.0, low=5.0, points=8)
    verdict = nernst_scan(PlateSystem(cond, cond, a), grid)
    assert verdict.classification == "violated"
    assert verdict.limit_estimate == pytest.approx(verdict.limit_theory, rel=0.01)
    assert verdict.limit_theory > 0.0
    # The offset also agrees at the harness's own consistency scale.
    assert abs(verdict.limit_estimate - verdict.limit_theory) <= 5.0 * verdict.uncertainty


def test_nernst_metal_flagged_out_of_scope():
    grid = nernst_default_grid(high=100.0, low=5.0, points=8)
    verdict = nernst_scan(PlateSystem(METAL, METAL, 1e-6), grid)
    assert verdict.out_of_scope
    assert verdict.classification in ("satisfied", "violated")


def test_limit_theory_mixed_pairs():
    base = single_oscillator(11.66)
    law = ConductivityLaw(form="bandgap", sigma_a=1e16, activation=1.12 * EV)
    cond = ConductiveDielectric(base=base, law=law)
    a = 1e-6
    # Conductive against metal: offset uses the first power of r0.
    from casitherm.specfun import polylog

    r0 = (11.66 - 1) / (11.66 + 1)
    expected = k_B / (16 * math.pi * a * a) * (ZETA3 - polylog(3, r0))
    assert nernst_limit_theory(PlateSystem(METAL, cond, a)) == pytest.approx(expected, rel=1e-12)
    assert nernst_limit_theory(PlateSystem(base, base, a)) == 0.0


# ---------------------------------------------------------------------------
# Relative thermal correction
# ---------------------------------------------------------------------------

def test_relative_correction_mica_values():
    a, T = 5e-7, 300.0
    mica_ei = apply_toggles(builtin_material("mica"), include_debye=False)
    rel_ei = relative_thermal_correction(PlateSystem(mica_ei, mica_ei, a), T)
    assert rel_ei == pytest.approx(0.135, abs=0.015)
    electronic = builtin_material("mica-electronic")
    rel_e = relative_thermal_correction(PlateSystem(electronic, electronic, a), T)
    assert rel_e == pytest.approx(0.0125, abs=0.003)


def test_relative_correction_silicon():
    si = builtin_material("silicon")
    rel = relative_thermal_correction(PlateSystem(si, si, 5e-7), 300.0)
    assert rel == pytest.approx(0.0145, abs=0.003)


def test_relative_correction_vanishes_at_low_t():
    si = builtin_material("silicon")
    a = 1e-6
    rel = relative_thermal_correction(PlateSystem(si, si, a), tau_to_temperature(0.01, a))
    assert abs(rel) < 1e-6


def test_relative_correction_vacuum_undefined():
    with pytest.raises(UndefinedRatioError):
        relative_thermal_correction(PlateSystem(VACUUM, VACUUM, 1e-6), 300.0)
