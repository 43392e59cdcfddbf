"""Closed-form limits: low-temperature series, conductivity-induced entropy
offset, the insulator-metal transition jump, high-temperature free energies
and the orientation-polarization correction.

These serve both as fast evaluators and as independent oracles for the
numeric engine.  The dimensionless temperature throughout is
tau = 4 pi kB a T / (hbar c); the series below are trusted for tau <= 0.3.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

from scipy.constants import c as _C
from scipy.constants import hbar as _HBAR
from scipy.constants import k as _K_B

from .errors import DomainError, SeriesValidityError
from .materials import NinhamParsegianModel, OscillatorModel
from .specfun import ZETA3, polylog

#: Upper edge of the tau band where the series are trusted.
SERIES_TAU_MAX = 0.3


def reduced_temperature(a: float, T: float) -> float:
    """tau = 4 pi kB a T / (hbar c)."""
    return 4.0 * math.pi * _K_B * a * T / (_HBAR * _C)


def static_reflection(eps0: float) -> float:
    """Zero-frequency TM reflection amplitude (eps0 - 1) / (eps0 + 1)."""
    return (eps0 - 1.0) / (eps0 + 1.0)


@dataclass(frozen=True)
class LowTCoefficients:
    """Ingredients of the low-temperature series for identical plates.

    static_permittivity : eps(i*0) of the plate model
    static_reflection   : (eps0-1)/(eps0+1)
    damping_coefficient : sum_j g_j gamma_j omega_c / omega_j^4 (>= 0, and 0
                          iff every gamma_j = 0)
    quartic_coefficient : coefficient of the tau^4 term, available only for
                          undamped models (None otherwise)
    """

    static_permittivity: float
    static_reflection: float
    damping_coefficient: float
    quartic_coefficient: Optional[float]


def _quartic_coefficient(eps0: float) -> float:
    root = math.sqrt(eps0)
    return (root - 1.0) * (eps0 * eps0 + eps0 * root - 2.0) / 720.0


def low_t_coefficients(
    model: Union[OscillatorModel, NinhamParsegianModel], a: float
) -> LowTCoefficients:
    """Series coefficients for a pair of identical plates of ``model``.

    Accepts oscillator models and Ninham-Parsegian models whose Debye term
    is switched off.  A live Debye term is rejected: its linear-in-xi
    expansion only holds for frequencies far below the first Matsubara
    frequency at any laboratory temperature, so the resulting series would
    be meaningless there.
    """
    omega_c = _C / (2.0 * a)
    if isinstance(model, OscillatorModel):
        eps0 = model.eps(0.0)
        b = sum(o.g * o.gamma * omega_c / o.omega**4 for o in model.oscillators)
    elif isinstance(model, NinhamParsegianModel):
        if model.include_debye and model.d > 0.0:
            raise DomainError(
                "low-temperature series coefficients are undefined for a live Debye term"
            )
        eps0 = 1.0 + model.f_uv / model.omega_uv**2 + model.f_ir / model.omega_ir**2
        b = 0.0
    else:
        raise DomainError(f"no series coefficients for {type(model).__name__}")
    c4 = _quartic_coefficient(eps0) if b == 0.0 else None
    return LowTCoefficients(
        static_permittivity=eps0,
        static_reflection=static_reflection(eps0),
        damping_coefficient=b,
        quartic_coefficient=c4,
    )


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated low-temperature series.

    order is the highest power of tau retained; validity_tau the (0, max]
    band where the truncation is trusted.
    """

    value: float
    order: int
    validity_tau: float = SERIES_TAU_MAX


def _series_bracket(coeffs: LowTCoefficients, tau: float) -> tuple[float, int]:
    """The bracket multiplying -hbar c / (32 pi^2 a^3) in the free energy."""
    eps0 = coeffs.static_permittivity
    r0sq = coeffs.static_reflection**2
    bracket = 0.0
    if coeffs.damping_coefficient > 0.0 and eps0 > 1.0:
        bracket += (
            coeffs.damping_coefficient * polylog(2, r0sq) * tau**2
            / (3.0 * (eps0 * eps0 - 1.0))
        )
    bracket += ZETA3 * r0sq * (eps0 + 1.0) * tau**3 / (8.0 * math.pi**2)
    order = 3
    if coeffs.quartic_coefficient is not None:
        bracket -= coeffs.quartic_coefficient * tau**4
        order = 4
    return bracket, order


def free_energy_low_t(
    coeffs: LowTCoefficients, energy_zero_t: float, a: float, T: float
) -> SeriesResult:
    """Series free energy F = E + thermal correction through tau^3 or tau^4."""
    tau = reduced_temperature(a, T)
    if tau > SERIES_TAU_MAX:
        raise SeriesValidityError(f"tau = {tau:.3g} exceeds the series band {SERIES_TAU_MAX}")
    bracket, order = _series_bracket(coeffs, tau)
    prefactor = _HBAR * _C / (32.0 * math.pi**2 * a**3)
    return SeriesResult(value=energy_zero_t - prefactor * bracket, order=order)


def thermal_correction_low_t(coeffs: LowTCoefficients, a: float, T: float) -> SeriesResult:
    """Series thermal correction F - E (same truncation as free_energy_low_t)."""
    tau = reduced_temperature(a, T)
    if tau > SERIES_TAU_MAX:
        raise SeriesValidityError(f"tau = {tau:.3g} exceeds the series band {SERIES_TAU_MAX}")
    bracket, order = _series_bracket(coeffs, tau)
    prefactor = _HBAR * _C / (32.0 * math.pi**2 * a**3)
    return SeriesResult(value=-prefactor * bracket, order=order)


def entropy_low_t(coeffs: LowTCoefficients, a: float, T: float) -> SeriesResult:
    """Series entropy S = -dF/dT, starting at order tau."""
    tau = reduced_temperature(a, T)
    if tau > SERIES_TAU_MAX:
        raise SeriesValidityError(f"tau = {tau:.3g} exceeds the series band {SERIES_TAU_MAX}")
    eps0 = coeffs.static_permittivity
    r0sq = coeffs.static_reflection**2
    bracket = 0.0
    if coeffs.damping_coefficient > 0.0 and eps0 > 1.0:
        bracket += 2.0 * coeffs.damping_coefficient * polylog(2, r0sq) / (
            3.0 * (eps0 * eps0 - 1.0)
        )
    bracket += 3.0 * ZETA3 * r0sq * (eps0 + 1.0) * tau / (8.0 * math.pi**2)
    order = 2
    if coeffs.quartic_coefficient is not None:
        bracket -= 4.0 * coeffs.quartic_coefficient * tau**2
        order = 3
    prefactor = _K_B * tau / (8.0 * math.pi * a * a)
    return SeriesResult(value=prefactor * bracket, order=order)


def nernst_violation_constant(eps0: float, a: float) -> float:
    """Residual T -> 0 entropy kB/(16 pi a^2) [zeta(3) - Li3(r0^2)] left by a
    dc conductivity that vanishes with temperature (identical plates)."""
    if not eps0 >= 1.0:
        raise DomainError("static permittivity must be >= 1")
    r0 = static_reflection(eps0)
    return _K_B / (16.0 * math.pi * a * a) * (ZETA3 - polylog(3, r0 * r0))


def transition_jump(eps0_dielectric: float, a: float, T: float) -> float:
    """Free-energy jump -kBT/(16 pi a^2) [zeta(3) - Li3(r0)] when a dc
    conductivity switches on in the dielectric plate facing a metal one.

    Note the first power of r0: the zero-frequency TM product of the
    metal/dielectric pair is 1 * r0.
    """
    if not eps0_dielectric >= 1.0:
        raise DomainError("static permittivity must be >= 1")
    r0 = static_reflection(eps0_dielectric)
    return -_K_B * T / (16.0 * math.pi * a * a) * (ZETA3 - polylog(3, r0))


def high_temperature_free_energy(
    kind: str, a: float, T: float, eps0: float | None = None, eps0_second: float | None = None
) -> float:
    """Classical (tau >> 1) free energy, set by the zero-frequency term alone.

    kind is one of "metal-metal", "metal-dielectric" (requires eps0) and
    "dielectric-dielectric" (requires eps0 and eps0_second).
    """
    pref = _K_B * T / (16.0 * math.pi * a * a)
    if kind == "metal-metal":
        return -2.0 * ZETA3 * pref
    if kind == "metal-dielectric":
        if eps0 is None:
            raise DomainError("metal-dielectric needs the dielectric's eps0")
        return -pref * polylog(3, static_reflection(eps0))
    if kind == "dielectric-dielectric":
        if eps0 is None or eps0_second is None:
            raise DomainError("dielectric-dielectric needs both eps0 values")
        return -pref * polylog(3, static_reflection(eps0) * static_reflection(eps0_second))
    raise DomainError(f"unknown system kind {kind!r}")


def orientation_correction(eps0_ei: float, eps0_p: float, a: float, T: float) -> float:
    """Extra thermal correction from the orientation (Debye) term,
    -kBT/(16 pi a^2) [Li3(r0p^2) - Li3(r0ei^2)] < 0, linear in T."""
    if not (eps0_p > eps0_ei > 1.0):
        raise DomainError("orientation correction needs eps0_p > eps0_ei > 1")
    r_p = static_reflection(eps0_p)
    r_ei = static_reflection(eps0_ei)
    return (
        -_K_B * T / (16.0 * math.pi * a * a)
        * (polylog(3, r_p * r_p) - polylog(3, r_ei * r_ei))
    )
