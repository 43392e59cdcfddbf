"""Polylogarithms of order 2 and 3 and the constant zeta(3).

The closed-form results in this package only ever need Li_n(z) for
n in {2, 3} on the real interval [-1, 1]; the arguments that occur in
practice are squared static reflection amplitudes, which stay well below
~0.95 except for the exact endpoint z = 1.  Direct power-series summation
is therefore both simple and accurate (absolute error ~1e-15); |z| = 1 is
returned in closed form.

    >>> round(polylog(3, 1.0), 12)
    1.20205690316
"""

from __future__ import annotations

import math

from .errors import ConvergenceError, DomainError

#: Riemann zeta(2) = pi^2/6 and zeta(3) (Apery's constant).
ZETA2 = math.pi**2 / 6.0
ZETA3 = 1.2020569031595943

_ORDERS = (2, 3)

# Li_n at the endpoints: Li_n(1) = zeta(n), Li_n(-1) = -(1 - 2**(1-n)) zeta(n).
_ENDPOINTS = {
    (2, 1.0): ZETA2,
    (3, 1.0): ZETA3,
    (2, -1.0): -0.5 * ZETA2,
    (3, -1.0): -0.75 * ZETA3,
}

_MAX_TERMS = 2_000_000


def zeta3() -> float:
    """Return zeta(3) to full double precision."""
    return ZETA3


def polylog(n: int, z: float) -> float:
    """Evaluate Li_n(z) = sum_{k>=1} z^k / k^n for n in {2, 3} and |z| <= 1.

    Parameters
    ----------
    n : int
        Order, 2 or 3.
    z : float
        Argument with |z| <= 1.

    Raises
    ------
    DomainError
        If the order is unsupported or |z| > 1.
    """
    if n not in _ORDERS:
        raise DomainError(f"polylog order must be 2 or 3, got {n}")
    z = float(z)
    if abs(z) > 1.0:
        raise DomainError(f"polylog argument must satisfy |z| <= 1, got {z}")
    if z == 0.0:
        return 0.0
    if abs(z) == 1.0:
        return _ENDPOINTS[(n, z)]
    value, _ = _series(n, z)
    return value


def _series(n: int, z: float) -> tuple[float, int]:
    """Direct series with relative term cutoff 1e-16; returns (value, terms used).

    Exposed separately so tests can verify the truncation against the
    analytic remainder bound z^(K+1) / ((1-|z|) (K+1)^n).
    """
    terms = []
    acc = 0.0
    zk = 1.0
    k = 0
    while True:
        k += 1
        zk *= z
        t = zk / k**n
        terms.append(t)
        acc += t
        if abs(t) <= 1e-16 * abs(acc):
            break
        if k >= _MAX_TERMS:
            bound = abs(zk) / ((1.0 - abs(z)) * (k + 1) ** n)
            if bound > 1e-13:
                raise ConvergenceError(
                    f"polylog series did not converge for z={z!r} within {k} terms"
                )
            break
    return math.fsum(terms), k
