"""Built-in verification suite.

Each criterion re-derives its expected value from an independent route
(closed forms, the polylogarithm series, or published reference figures)
and checks the numeric engine against it at a fixed tolerance, within a
fixed wall-time budget.  ``run_all`` drives the ``verify`` CLI subcommand
and the acceptance test module.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Optional

from scipy.constants import c as _C
from scipy.constants import hbar as _HBAR
from scipy.constants import k as _K_B

from . import reports
from .asymptotics import low_t_coefficients, free_energy_low_t, transition_jump
from .lifshitz import (
    PlateSystem,
    ThermalState,
    free_energy,
    term_integral,
    zero_temperature_energy,
)
from .materials import (
    ConductiveDielectric,
    ConductivityLaw,
    NinhamParsegianModel,
    Oscillator,
    OscillatorModel,
    apply_toggles,
    builtin_material,
)
from .specfun import ZETA3, polylog
from .thermo import nernst_default_grid, nernst_scan, relative_thermal_correction


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    runtime_s: float
    limit_s: Optional[float]
    detail: str


def _single_oscillator(eps0: float, omega: float = 6.6e15) -> OscillatorModel:
    return OscillatorModel((Oscillator(g=(eps0 - 1.0) * omega * omega, omega=omega),))


def _mica_no_debye() -> NinhamParsegianModel:
    return apply_toggles(builtin_material("mica"), include_debye=False)


def _tau_to_T(tau: float, a: float) -> float:
    return tau * _HBAR * _C / (4.0 * math.pi * _K_B * a)


# --------------------------------------------------------------------------
# Criteria
# --------------------------------------------------------------------------

def _c1_l0_polylog_identity():
    worst = 0.0
    state = ThermalState(T=300.0, a=1e-6)
    for eps0 in (2.0, 4.45, 11.66):
        model = _single_oscillator(eps0)
        term = term_integral(PlateSystem(model, model, 1e-6), state, 0)
        r0 = (eps0 - 1.0) / (eps0 + 1.0)
        worst = max(worst, abs(term.integral + polylog(3, r0 * r0)))
    return worst < 1e-9, f"max |I0 + Li3(r0^2)| = {worst:.2e} (tol 1e-9)"


def _c2_ideal_metal_limits():
    metal = builtin_material("ideal-metal")
    a = 5e-6
    system = PlateSystem(metal, metal, a)
    E = zero_temperature_energy(system)
    E_exact = -math.pi**2 * _HBAR * _C / (720.0 * a**3)
    rel_E = abs(E / E_exact - 1.0)
    F = free_energy(system, 300.0).F
    F_high = -ZETA3 * _K_B * 300.0 / (8.0 * math.pi * a * a)
    rel_F = abs(F / F_high - 1.0)
    ok = rel_E < 1e-6 and rel_F < 0.01
    return ok, f"E rel err = {rel_E:.2e} (tol 1e-6); high-T F rel dev = {rel_F:.2%} (tol 1%)"


def _c3_low_t_series_scaling():
    model = _single_oscillator(4.0)
    a = 1e-6
    system = PlateSystem(model, model, a)
    coeffs = low_t_coefficients(model, a)
    residuals = {}
    for tau in (0.1, 0.05):
        T = _tau_to_T(tau, a)
        res = free_energy(system, T)
        series = free_energy_low_t(coeffs, res.E0, a, T)
        residuals[tau] = abs(res.F - series.value)
    ratio = residuals[0.1] / residuals[0.05]
    return ratio >= 24.0, f"|F_num - F_series| ratio (tau 0.1 / 0.05) = {ratio:.1f} (need >= 24)"


def _c4_nernst_satisfied():
    mica = _mica_no_debye()
    model = OscillatorModel((
        Oscillator(g=mica.f_uv, omega=mica.omega_uv),
        Oscillator(g=mica.f_ir, omega=mica.omega_ir),
    ))
    grid = nernst_default_grid(high=100.0, low=5.0, points=8)
    verdict = nernst_scan(PlateSystem(model, model, 1e-6), grid)
    ok = (
        verdict.classification == "satisfied"
        and abs(verdict.limit_estimate) <= 5.0 * verdict.uncertainty
    )
    return ok, (
        f"classification = {verdict.classification}, "
        f"s0 = {verdict.limit_estimate:.2e} vs uncertainty {verdict.uncertainty:.2e}"
    )


def _c5_nernst_violated():
    base = _single_oscillator(11.66)
    law = ConductivityLaw(form="bandgap", sigma_a=1e16,
                          activation=1.12 * 1.602176634e-19)
    cond = ConductiveDielectric(base=base, law=law)
    a = 1e-6
    grid = nernst_default_grid(high=100.0, low=5.0, points=8)
    verdict = nernst_scan(PlateSystem(cond, cond, a), grid)
    rel = abs(verdict.limit_estimate / verdict.limit_theory - 1.0)
    ok = verdict.classification == "violated" and rel < 0.01
    return ok, (
        f"classification = {verdict.classification}, s0 within {rel:.2%} of "
        f"kB/(16 pi a^2)[zeta3 - Li3(r0^2)] (tol 1%)"
    )


def _c6_mica_relative_corrections():
    a, T = 5e-7, 300.0
    electronic = builtin_material("mica-electronic")
    rel_e = relative_thermal_correction(PlateSystem(electronic, electronic, a), T)
    mica_ei = _mica_no_debye()
    rel_ei = relative_thermal_correction(PlateSystem(mica_ei, mica_ei, a), T)
    ok = abs(rel_e - 0.0125) <= 0.003 and abs(rel_ei - 0.135) <= 0.015
    return ok, (
        f"electronic-only = {rel_e:.2%} (expect 1.25% +- 0.3pp); "
        f"electronic+ionic = {rel_ei:.2%} (expect 13.5% +- 1.5pp)"
    )


def _c7_si_relative_correction():
    si = builtin_material("silicon")
    rel = relative_thermal_correction(PlateSystem(si, si, 5e-7), 300.0)
    return abs(rel - 0.0145) <= 0.003, f"Si pair = {rel:.2%} (expect 1.45% +- 0.3pp)"


def _c8_transition_jump():
    metal = builtin_material("ideal-metal")
    si = builtin_material("silicon")
    si_doped = builtin_material("silicon-doped")
    a, T = 5e-6, 300.0
    F1 = free_energy(PlateSystem(metal, si, a), T).F
    F2 = free_energy(PlateSystem(metal, si_doped, a), T).F
    jump = F2 - F1
    analytic = transition_jump(11.66, a, T)
    rel = abs(jump / analytic - 1.0)
    rel_change = jump / F1
    return rel < 0.01, (
        f"numeric jump within {rel:.2e} of analytic (tol 1%); "
        f"relative change vs F1 = {rel_change:.1%}"
    )


def _c9_debye_deltas():
    mica = builtin_material("mica")
    header, rows = reports.fig4b_rows(mica, [300.0])
    row = rows[0]
    delta_100nm = row[2] - row[1]
    delta_1um = row[6] - row[5]
    ok = abs(delta_100nm - 0.01) <= 0.005 and abs(delta_1um - 0.08) <= 0.005
    return ok, (
        f"Debye-on increase: {delta_100nm*100:.2f} pp at 100 nm (expect 1 +- 0.5), "
        f"{delta_1um*100:.2f} pp at 1 um (expect 8 +- 0.5)"
    )


def _c10_matsubara_constant():
    xi1 = ThermalState(T=300.0, a=1e-6).xi(1)
    rel = abs(xi1 / 2.47e14 - 1.0)
    return rel < 0.005, f"xi_1(300 K) = {xi1:.4e} rad/s, {rel:.2%} from 2.47e14 (tol 0.5%)"


_CRITERIA: tuple[tuple[int, str, Optional[float], Callable], ...] = (
    (1, "l=0 integral equals -Li3(r0^2)", 1.0, _c1_l0_polylog_identity),
    (2, "ideal-metal energy and high-T limits", 5.0, _c2_ideal_metal_limits),
    (3, "low-T series residual scales like tau^5", 30.0, _c3_low_t_series_scaling),
    (4, "Nernst satisfied for oscillator mica pair", 60.0, _c4_nernst_satisfied),
    (5, "Nernst violated for conductive pair, offset to 1%", 60.0, _c5_nernst_violated),
    (6, "mica relative thermal corrections", 60.0, _c6_mica_relative_corrections),
    (7, "Si relative thermal correction", 60.0, _c7_si_relative_correction),
    (8, "insulator-metal transition jump", 60.0, _c8_transition_jump),
    (9, "Debye-term increases at 100 nm and 1 um", 120.0, _c9_debye_deltas),
    (10, "first Matsubara frequency at 300 K", 5.0, _c10_matsubara_constant),
)

CRITERION_NUMBERS = tuple(n for n, *_ in _CRITERIA)


def criterion_names() -> list[tuple[int, str]]:
    return [(n, name) for n, name, *_ in _CRITERIA]


def run_criterion(number: int) -> CriterionResult:
    for n, name, limit, func in _CRITERIA:
        if n == number:
            start = time.perf_counter()
            passed, detail = func()
            elapsed = time.perf_counter() - start
            if limit is not None and elapsed > limit:
                passed = False
                detail += f"; runtime {elapsed:.1f} s exceeded budget {limit:.0f} s"
            return CriterionResult(
                number=n, name=name, passed=passed, runtime_s=elapsed,
                limit_s=limit, detail=detail,
            )
    raise ValueError(f"no criterion {number}")


def run_all(numbers=None) -> list[CriterionResult]:
    selected = CRITERION_NUMBERS if not numbers else tuple(numbers)
    return [run_criterion(n) for n in selected]


def format_result(result: CriterionResult) -> str:
    status = "PASS" if result.passed else "FAIL"
    return (
        f"{status}  {result.number:2d}  {result.name}  "
        f"[{result.runtime_s:.2f} s]  {result.detail}"
    )
