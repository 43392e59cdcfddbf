"""Entropy from temperature differentiation and the Nernst-theorem harness.

The entropy S = -dF/dT is taken by central differences of the Matsubara
sum alone (the zero-temperature energy is T-independent and would only add
noise).  The Nernst scan evaluates S on a decreasing temperature grid,
extrapolates linearly to T = 0 from the lowest three points, and compares
the intercept against the closed-form residual entropy that an activated
dc conductivity leaves behind.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.constants import k as _K_B

from .errors import DomainError, UndefinedRatioError
from .lifshitz import PlateSystem, free_energy, matsubara_free_energy
from .materials import ConductiveDielectric, IdealMetal
from .specfun import polylog

#: Default Nernst scan grid: 8 points, geometric, 300 K down to 10 K.
NERNST_GRID_HIGH = 300.0
NERNST_GRID_LOW = 10.0
NERNST_GRID_POINTS = 8

#: A T = 0 intercept above this many extrapolation uncertainties counts as
#: a violation; below, the residue is indistinguishable from zero.
VIOLATION_SIGMAS = 5.0


@dataclass(frozen=True)
class EntropyPoint:
    T: float
    S: float
    step_used: float
    err_estimate: float


@dataclass(frozen=True)
class NernstVerdict:
    """Outcome of a T -> 0 entropy extrapolation.

    limit_estimate is the fitted S(a, 0); limit_theory the closed-form
    expectation (0 for plates with finite static permittivity).
    out_of_scope flags model classes (ideal metals) whose low-temperature
    behaviour this harness is not designed to judge.
    """

    limit_estimate: float
    limit_theory: float
    classification: str
    T_grid: tuple[float, ...]
    uncertainty: float
    out_of_scope: bool
    points: tuple[EntropyPoint, ...]


def entropy(system: PlateSystem, T: float, step: float | None = None) -> EntropyPoint:
    """Entropy per unit area S = -dF/dT at temperature T.

    Central difference with step max(1e-3*T, 1e-3 K), clipped below T/2,
    refined once by Richardson extrapolation; the error estimate is the
    difference between the refined and unrefined derivatives.  ``step``
    overrides the default h.
    """
    if not T > 0.0:
        raise DomainError("temperature must be > 0")
    h = min(max(1e-3 * T, 1e-3), 0.45 * T) if step is None else step
    if not 0.0 < h < 0.5 * T:
        raise DomainError("differentiation step must lie in (0, T/2)")

    def F_at(temp):
        return matsubara_free_energy(system, temp)[0]

    def central(width):
        return (F_at(T + width) - F_at(T - width)) / (2.0 * width)

    d_h = central(h)
    d_h2 = central(0.5 * h)
    refined = (4.0 * d_h2 - d_h) / 3.0
    return EntropyPoint(
        T=T,
        S=-refined,
        step_used=h,
        err_estimate=abs(refined - d_h2),
    )


def _zero_frequency_reflections(system: PlateSystem) -> tuple[float, float]:
    """Static TM reflection products (conductivity off, conductivity on).

    Ideal metals contribute 1 to both; a conductive plate contributes its
    base value to the first and 1 to the second.  The TE channel vanishes
    at zero frequency for every non-metal plate.
    """

    def base_r0(model):
        if isinstance(model, IdealMetal):
            return 1.0, 1.0
        if isinstance(model, ConductiveDielectric):
            eps0 = model.base.eps(0.0, 0.0)
            return (eps0 - 1.0) / (eps0 + 1.0), 1.0
        eps0 = model.eps(0.0, 0.0)
        r0 = (eps0 - 1.0) / (eps0 + 1.0)
        return r0, r0

    r1_off, r1_on = base_r0(system.mat1)
    r2_off, r2_on = base_r0(system.mat2)
    return r1_off * r2_off, r1_on * r2_on


def nernst_limit_theory(system: PlateSystem) -> float:
    """Closed-form T = 0 entropy left behind by dc conductivity.

    Zero when no plate is conductive; for an identical conductive pair
    this reduces to kB/(16 pi a^2) [zeta(3) - Li3(r0^2)].
    """
    if not any(
        isinstance(m, ConductiveDielectric) for m in (system.mat1, system.mat2)
    ):
        return 0.0
    p_off, p_on = _zero_frequency_reflections(system)
    return (
        _K_B
        / (16.0 * math.pi * system.a * system.a)
        * (polylog(3, p_on) - polylog(3, p_off))
    )


def nernst_default_grid(
    high: float = NERNST_GRID_HIGH,
    low: float = NERNST_GRID_LOW,
    points: int = NERNST_GRID_POINTS,
) -> tuple[float, ...]:
    """Geometric, strictly decreasing temperature grid."""
    ratio = (low / high) ** (1.0 / (points - 1))
    return tuple(high * ratio**i for i in range(points))


def nernst_scan(system: PlateSystem, T_grid) -> NernstVerdict:
    """Evaluate the entropy on a decreasing grid and classify the T -> 0 limit.

    The lowest three points are fitted with S = s0 + s1 T.  The quoted
    uncertainty is the largest of the intercept's standard error, the shift
    of the intercept when the fit is repeated on the lowest two points only
    (a curvature estimate), and the propagated differentiation errors; the
    verdict is "violated" when s0 exceeds VIOLATION_SIGMAS times that.
    """
    grid = tuple(float(t) for t in T_grid)
    if len(grid) < 6:
        raise DomainError("Nernst scan needs at least 6 temperatures")
    if any(not t > 0.0 for t in grid):
        raise DomainError("temperatures must be > 0")
    if any(grid[i] <= grid[i + 1] for i in range(len(grid) - 1)):
        raise DomainError("temperature grid must be strictly decreasing")

    points = tuple(entropy(system, t) for t in grid)
    lowest = sorted(points, key=lambda p: p.T)[:3]
    t1, t2, t3 = (p.T for p in lowest)
    s1_, s2_, s3_ = (p.S for p in lowest)

    # Three-point least squares for S = s0 + s1 T.
    n = 3.0
    st = t1 + t2 + t3
    ss = s1_ + s2_ + s3_
    stt = t1 * t1 + t2 * t2 + t3 * t3
    sts = t1 * s1_ + t2 * s2_ + t3 * s3_
    denom = n * stt - st * st
    slope = (n * sts - st * ss) / denom
    s0 = (ss - slope * st) / n

    residuals = [s - (s0 + slope * t) for t, s in ((t1, s1_), (t2, s2_), (t3, s3_))]
    rss = sum(r * r for r in residuals)
    sigma_fit = math.sqrt(rss / 1.0) * math.sqrt(1.0 / n + (st / n) ** 2 / (stt - st * st / n))

    # Curvature estimate: intercept of the exact line through the two
    # lowest points.
    slope2 = (s2_ - s1_) / (t2 - t1)
    s0_two = s1_ - slope2 * t1
    sigma_model = abs(s0 - s0_two)

    sigma_diff = math.sqrt(sum(p.err_estimate**2 for p in lowest))
    uncertainty = max(sigma_fit, sigma_model, sigma_diff, 1e-300)

    theory = nernst_limit_theory(system)
    classification = "violated" if s0 > VIOLATION_SIGMAS * uncertainty else "satisfied"
    out_of_scope = any(isinstance(m, IdealMetal) for m in (system.mat1, system.mat2))
    return NernstVerdict(
        limit_estimate=s0,
        limit_theory=theory,
        classification=classification,
        T_grid=grid,
        uncertainty=uncertainty,
        out_of_scope=out_of_scope,
        points=points,
    )


def relative_thermal_correction(system: PlateSystem, T: float) -> float:
    """Thermal correction relative to the zero-temperature energy,
    deltaTF(a, T) / E(a); conductivity laws contribute nothing to E."""
    result = free_energy(system, T)
    if result.E0 == 0.0:
        raise UndefinedRatioError("zero-temperature energy vanishes for this pair")
    return result.deltaTF / result.E0
