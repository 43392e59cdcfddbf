"""Numerical core: reflection coefficients, per-frequency band integrals,
the Matsubara sum, the zero-temperature energy and the pressure.

Everything is computed in the dimensionless variables

    y = 2 q a   (>= zeta),   zeta_l = xi_l / omega_c = tau l,
    omega_c = c / (2 a),     tau = 4 pi kB a T / (hbar c),

in which the free energy per unit area of two thick parallel plates is

    F(a, T) = (kB T / 8 pi a^2) [ I_0 / 2 + sum_{l>=1} I_l ],

    I_l = int_{zeta_l}^inf dy y { ln[1 - rTM(1) rTM(2) e^-y]
                                + ln[1 - rTE(1) rTE(2) e^-y] },

with the permittivity of each plate evaluated at the Matsubara frequency
xi_l.  Each I_l is <= 0 and the tail of the integrand decays like e^-y,
so the substitution u = y - zeta_l maps every term onto [0, 60]; beyond
u = 60 the integrand is below 1e-26 of its peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from scipy.constants import c as _C
from scipy.constants import hbar as _HBAR
from scipy.constants import k as _K_B
from scipy.integrate import quad

from . import asymptotics
from .errors import ConvergenceError, DomainError
from .materials import (
    ConductiveDielectric,
    DivergentPermittivity,
    EpsValue,
    NinhamParsegianModel,
    OscillatorModel,
    PermittivityModel,
)

#: Dimensionless width of every band integral after u = y - zeta.
_BAND_CUT = 60.0

#: Hard cap on the number of Matsubara terms.
_L_HARD_MAX = 10_000_000

#: Below this tau the thermal correction is reported from the series when
#: the plate pair admits one (F and E agree to too many digits for a
#: trustworthy direct difference).
_CANCELLATION_TAU = 0.05


@dataclass(frozen=True)
class PlateSystem:
    """Two plate materials and their separation a (m)."""

    mat1: PermittivityModel
    mat2: PermittivityModel
    a: float

    def __post_init__(self):
        if not (1e-9 <= self.a <= 1e-4):
            raise DomainError(
                f"separation {self.a!r} m outside the supported band [1e-9, 1e-4]"
            )


@dataclass(frozen=True)
class ThermalState:
    """Temperature with its derived dimensionless quantities.

    zeta(l) = tau * l by construction, and xi(l) = zeta(l) * omega_c, so the
    identity zeta_l = xi_l / omega_c holds exactly in floating point.
    """

    T: float
    a: float

    @property
    def omega_c(self) -> float:
        return _C / (2.0 * self.a)

    @property
    def tau(self) -> float:
        return 4.0 * math.pi * _K_B * self.a * self.T / (_HBAR * _C)

    def zeta(self, l: int) -> float:
        return self.tau * l

    def xi(self, l: int) -> float:
        return self.zeta(l) * self.omega_c


@dataclass(frozen=True)
class TermResult:
    """One Matsubara term: the dimensionless integral I_l (<= 0) and the
    quadrature error estimate."""

    l: int
    integral: float
    abs_err_estimate: float


@dataclass(frozen=True)
class FreeEnergyResult:
    """Free energy with its zero-temperature decomposition.

    delta_source records how deltaTF was obtained: "difference" for the
    plain F - E0, "low_t_series" when the cancellation guard substituted
    the series value at small tau.
    """

    F: float
    E0: float
    deltaTF: float
    terms: tuple[TermResult, ...]
    l_max: int
    converged: bool
    delta_source: str = "difference"


# ---------------------------------------------------------------------------
# Reflection coefficients
# ---------------------------------------------------------------------------

def reflection(eps: EpsValue, zeta: float, y: float) -> tuple[float, float]:
    """TM and TE reflection amplitudes at dimensionless (zeta, y).

    Parameters
    ----------
    eps : float >= 1 or DivergentPermittivity
        Permittivity of the plate at the imaginary frequency matching zeta.
    zeta, y : float
        Dimensionless frequency and 2qa, with y >= zeta >= 0.

    Returns
    -------
    (rTM, rTE), both in [0, 1) for finite eps.  A divergent permittivity
    gives (1, 1) at zeta > 0; at zeta = 0 the TE value is the marker's
    recorded zero-frequency limit (1 for an ideal metal, 0 for a dc
    conductivity divergence).
    """
    if y < zeta:
        raise DomainError(f"need y >= zeta, got y={y!r} < zeta={zeta!r}")
    if zeta < 0.0:
        raise DomainError("zeta must be >= 0")
    if isinstance(eps, DivergentPermittivity):
        if zeta > 0.0:
            return 1.0, 1.0
        return 1.0, eps.te_zero_limit
    if eps < 1.0:
        raise DomainError(f"permittivity must be >= 1, got {eps!r}")
    if y == 0.0:
        # zeta = 0 as well; the y -> 0 limit of rTM is (eps-1)/(eps+1).
        return (eps - 1.0) / (eps + 1.0), 0.0
    s = math.sqrt(y * y + zeta * zeta * (eps - 1.0))
    r_tm = (eps * y - s) / (eps * y + s)
    r_te = (s - y) / (s + y)
    return r_tm, r_te


def _make_integrand(eps1: EpsValue, eps2: EpsValue, zeta: float):
    """Integrand u -> y [ln(1 - pTM e^-y) + ln(1 - pTE e^-y)], y = zeta + u."""
    zz = zeta * zeta

    def plate(eps, y):
        if isinstance(eps, DivergentPermittivity):
            if zeta > 0.0:
                return 1.0, 1.0
            return 1.0, eps.te_zero_limit
        s = math.sqrt(y * y + zz * (eps - 1.0))
        return (eps * y - s) / (eps * y + s), (s - y) / (s + y)

    def f(u):
        y = zeta + u
        if y == 0.0:
            return 0.0
        w = math.exp(-y)
        if w == 0.0:
            return 0.0
        r_tm1, r_te1 = plate(eps1, y)
        r_tm2, r_te2 = plate(eps2, y)
        return y * (
            math.log1p(-r_tm1 * r_tm2 * w) + math.log1p(-r_te1 * r_te2 * w)
        )

    return f


def _band_integral(
    eps1: EpsValue, eps2: EpsValue, zeta: float, epsabs: float = 1e-13
) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod evaluation of I at fixed eps and zeta."""
    f = _make_integrand(eps1, eps2, zeta)
    # At zeta = 0 a unit reflection product makes the integrand behave like
    # y ln y near the origin; a forced panel break keeps the QUADPACK error
    # estimate honest there.
    points = [1.0] if zeta == 0.0 else None
    out = quad(f, 0.0, _BAND_CUT, epsabs=epsabs, epsrel=1e-11, limit=300,
               full_output=1, points=points)
    value, err = out[0], out[1]
    if len(out) > 3:
        # QUADPACK appended a trouble message; reflect it in the estimate.
        err = max(err, 1e-6 * max(1.0, abs(value)))
    return value, err


def term_integral(
    system: PlateSystem, state: ThermalState, l: int, epsabs: float = 1e-13
) -> TermResult:
    """Dimensionless integral I_l for Matsubara index l.

    The permittivity of each plate is evaluated at xi_l = zeta_l * omega_c
    and held fixed across the y integration.
    """
    if l < 0:
        raise DomainError("Matsubara index must be >= 0")
    zeta = state.zeta(l)
    xi = state.xi(l)
    eps1 = system.mat1.eps(xi, state.T)
    eps2 = system.mat2.eps(xi, state.T)
    value, err = _band_integral(eps1, eps2, zeta, epsabs=epsabs)
    return TermResult(l=l, integral=value, abs_err_estimate=err)


# ---------------------------------------------------------------------------
# Matsubara sum
# ---------------------------------------------------------------------------

def matsubara_free_energy(
    system: PlateSystem,
    T: float,
    trunc_rtol: float = 1e-10,
    term_epsabs: float = 1e-13,
) -> tuple[float, tuple[TermResult, ...], int, bool]:
    """Free energy from the Matsubara sum alone (no zero-T decomposition).

    Terms are accumulated in ascending l with compensated (Kahan)
    summation, so the result is deterministic for fixed inputs.  The sum
    is truncated at the first l_max >= max(10, ceil(30/tau)) where the
    last three consecutive terms contribute less than ``trunc_rtol``
    relative to the accumulated sum.

    Returns (F in J/m^2, per-term results, l_max, converged).
    """
    if not T > 0.0:
        raise DomainError("temperature must be > 0 for the Matsubara sum")
    state = ThermalState(T=T, a=system.a)
    tau = state.tau
    l_min = max(10, math.ceil(30.0 / tau))

    term0 = term_integral(system, state, 0, epsabs=term_epsabs)
    terms = [term0]
    total = 0.5 * term0.integral
    comp = 0.0
    window: list[float] = []
    l = 0
    while True:
        l += 1
        if l > _L_HARD_MAX:
            raise ConvergenceError(
                f"Matsubara sum did not converge within {_L_HARD_MAX} terms"
            )
        term = term_integral(system, state, l, epsabs=term_epsabs)
        terms.append(term)
        contribution = term.integral - comp
        new_total = total + contribution
        comp = (new_total - total) - contribution
        total = new_total
        window.append(abs(term.integral))
        if len(window) > 3:
            window.pop(0)
        if l >= l_min and len(window) == 3:
            if sum(window) <= trunc_rtol * max(abs(total), 1e-300):
                break

    converged = all(
        t.abs_err_estimate <= 1e-12 * max(1.0, abs(t.integral)) for t in terms
    )
    prefactor = _K_B * T / (8.0 * math.pi * system.a * system.a)
    return prefactor * total, tuple(terms), l, converged


def _series_coefficients(system: PlateSystem) -> Optional[asymptotics.LowTCoefficients]:
    """Series coefficients when both plates are the same oscillator-form
    model (Debye term off); None when no trusted series exists."""
    if system.mat1 != system.mat2:
        return None
    model = system.mat1
    if isinstance(model, OscillatorModel):
        return asymptotics.low_t_coefficients(model, system.a)
    if isinstance(model, NinhamParsegianModel) and not (
        model.include_debye and model.d > 0.0
    ):
        return asymptotics.low_t_coefficients(model, system.a)
    return None


def free_energy(
    system: PlateSystem,
    T: float,
    trunc_rtol: float = 1e-10,
    term_epsabs: float = 1e-13,
) -> FreeEnergyResult:
    """Full free-energy evaluation: Matsubara sum, zero-temperature energy
    and the thermal correction.

    For tau < 0.05 the direct difference F - E0 loses most of its digits to
    cancellation; when the plate pair admits a low-temperature series the
    correction is taken from it instead and delta_source records the switch.
    """
    F, terms, l_max, converged = matsubara_free_energy(
        system, T, trunc_rtol=trunc_rtol, term_epsabs=term_epsabs
    )
    E0 = zero_temperature_energy(system)
    tau = ThermalState(T=T, a=system.a).tau
    delta_source = "difference"
    deltaTF = F - E0
    if tau < _CANCELLATION_TAU:
        coeffs = _series_coefficients(system)
        if coeffs is not None:
            deltaTF = asymptotics.thermal_correction_low_t(coeffs, system.a, T).value
            delta_source = "low_t_series"
    return FreeEnergyResult(
        F=F,
        E0=E0,
        deltaTF=deltaTF,
        terms=terms,
        l_max=l_max,
        converged=converged,
        delta_source=delta_source,
    )


# ---------------------------------------------------------------------------
# Zero-temperature energy
# ---------------------------------------------------------------------------

def _max_resonance(model: PermittivityModel) -> float:
    if isinstance(model, OscillatorModel):
        return max(o.omega for o in model.oscillators)
    if isinstance(model, ConductiveDielectric):
        return _max_resonance(model.base)
    if isinstance(model, NinhamParsegianModel):
        return max(model.omega_uv, model.omega_ir)
    return 0.0


@lru_cache(maxsize=256)
def zero_temperature_energy(system: PlateSystem, rtol: float = 1e-10) -> float:
    """Zero-temperature interaction energy E(a) in J/m^2.

    E(a) = [hbar c / (32 pi^2 a^3)] int_0^inf dzeta int_zeta^inf dy f(zeta, y)

    with the same integrand as the Matsubara terms but the frequency
    continuous.  Conductivity laws evaluate to sigma0 = 0 at T = 0, so a
    conductive plate reduces to its base model here.  The outer cut is
    extended past 30 by the plates' UV structure; the integrand itself
    decays at least like e^-zeta.
    """
    omega_c = _C / (2.0 * system.a)
    omega_hi = max(_max_resonance(system.mat1), _max_resonance(system.mat2))
    zeta_cut = 30.0 + 10.0 * omega_hi / omega_c

    def outer(zeta):
        eps1 = system.mat1.eps(zeta * omega_c, 0.0)
        eps2 = system.mat2.eps(zeta * omega_c, 0.0)
        return _band_integral(eps1, eps2, zeta, epsabs=1e-14)[0]

    out = quad(outer, 0.0, min(30.0, zeta_cut), epsabs=1e-13, epsrel=rtol,
               limit=300, full_output=1)
    value, err = out[0], out[1]
    if zeta_cut > 30.0:
        tail = quad(outer, 30.0, zeta_cut, epsabs=1e-13, epsrel=rtol,
                    limit=300, full_output=1)
        value += tail[0]
        err += tail[1]
    if abs(value) > 0.0 and err > 1e-6 * abs(value):
        raise ConvergenceError(
            f"zero-temperature energy quadrature error {err:g} too large"
        )
    return _HBAR * _C / (32.0 * math.pi**2 * system.a**3) * value


def thermal_correction(system: PlateSystem, T: float) -> float:
    """Thermal correction F(a, T) - E(a)."""
    return free_energy(system, T).deltaTF


# ---------------------------------------------------------------------------
# Pressure
# ---------------------------------------------------------------------------

def pressure(system: PlateSystem, T: float) -> float:
    """Casimir pressure P = -dF/da (Pa), negative for attraction.

    Central differences with relative step 1e-4 in a plus one Richardson
    refinement; only the Matsubara sum is differentiated (its a-dependence
    contains the full zero-point contribution).  The stencil needs 1e-4
    relative headroom inside the supported separation band.
    """
    a = system.a
    h = 1e-4 * a

    def F_at(separation):
        shifted = PlateSystem(mat1=system.mat1, mat2=system.mat2, a=separation)
        return matsubara_free_energy(shifted, T)[0]

    def central(step):
        return (F_at(a + step) - F_at(a - step)) / (2.0 * step)

    d_h = central(h)
    d_h2 = central(0.5 * h)
    return -(4.0 * d_h2 - d_h) / 3.0
