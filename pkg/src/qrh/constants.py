"""Zeta-function machinery and cached numerical constants.

The Hurwitz zeta function and its s-derivative are evaluated by
Euler-Maclaurin summation,

    zeta_H(s,q) = sum_{n<M} (q+n)^-s + (q+M)^(1-s)/(s-1) + (q+M)^-s / 2
                  + sum_{j<=J} B_{2j}/(2j)! * (s)_{2j-1} * (q+M)^(-s-2j+1),

with (s)_m the rising factorial.  The s-derivative is taken analytically
term by term, so the derivative of the rising factorial at its zeros is
handled exactly rather than by differencing.

zeta'(-1) is computed once at import-first-use (target 1e-12) and cached;
it is deliberately not hard-coded so the build self-verifies against an
independent oracle in the test suite.
"""

from __future__ import annotations

import cmath
import math
from functools import lru_cache

from .bernoulli import bernoulli_numbers
from .signals import DomainError

__all__ = [
    "hurwitz_zeta",
    "hurwitz_zeta_sprime",
    "zeta_prime_minus_one",
    "rho_constant",
]


def _rising_with_deriv(s: complex, m: int) -> tuple[complex, complex]:
    """Rising factorial (s)_m = s(s+1)...(s+m-1) and its derivative in s."""
    if m == 0:
        return 1.0 + 0j, 0.0 + 0j
    factors = [s + i for i in range(m)]
    prefix = [1.0 + 0j] * (m + 1)
    for i in range(m):
        prefix[i + 1] = prefix[i] * factors[i]
    suffix = [1.0 + 0j] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] * factors[i]
    deriv = sum(prefix[i] * suffix[i + 1] for i in range(m))
    return prefix[m], deriv


def hurwitz_zeta(s: complex, q: complex, M: int = 25, J: int = 12) -> complex:
    """Hurwitz zeta sum_{n>=0} (q+n)^-s by Euler-Maclaurin.

    Requires Re(q) > 0 (keeps every q+n off the branch cut) and s != 1.
    Accurate to ~1e-13 relative for moderate |s|, any Re(s) > -2J.
    """
    s = complex(s)
    q = complex(q)
    if q.real <= 0 and q.imag == 0:
        raise DomainError("q must not lie on the non-positive real axis")
    if s == 1:
        raise DomainError("s = 1 is the pole of the zeta function")
    bern = bernoulli_numbers(2 * J)
    total = 0j
    for n in range(M):
        total += cmath.exp(-s * cmath.log(q + n))
    qm = q + M
    lqm = cmath.log(qm)
    total += cmath.exp((1 - s) * lqm) / (s - 1)
    total += cmath.exp(-s * lqm) / 2
    fact = 2.0
    for j in range(1, J + 1):
        rising, _ = _rising_with_deriv(s, 2 * j - 1)
        total += float(bern[2 * j]) / fact * rising * cmath.exp((-s - 2 * j + 1) * lqm)
        fact *= (2 * j + 1) * (2 * j + 2)
    return total


def hurwitz_zeta_sprime(s: complex, q: complex, M: int = 32, J: int = 14) -> complex:
    """d/ds of the Hurwitz zeta function, by the differentiated E-M formula."""
    s = complex(s)
    q = complex(q)
    if q.real <= 0 and q.imag == 0:
        raise DomainError("q must not lie on the non-positive real axis")
    if s == 1:
        raise DomainError("s = 1 is the pole of the zeta function")
    bern = bernoulli_numbers(2 * J)
    total = 0j
    for n in range(M):
        lqn = cmath.log(q + n)
        total += -lqn * cmath.exp(-s * lqn)
    qm = q + M
    lqm = cmath.log(qm)
    total += cmath.exp((1 - s) * lqm) * (-lqm / (s - 1) - 1 / (s - 1) ** 2)
    total += -lqm * cmath.exp(-s * lqm) / 2
    fact = 2.0
    for j in range(1, J + 1):
        rising, drising = _rising_with_deriv(s, 2 * j - 1)
        total += (
            float(bern[2 * j])
            / fact
            * (drising - lqm * rising)
            * cmath.exp((-s - 2 * j + 1) * lqm)
        )
        fact *= (2 * j + 1) * (2 * j + 2)
    return total


@lru_cache(maxsize=1)
def zeta_prime_minus_one() -> float:
    """zeta'(-1), computed by Euler-Maclaurin summation of zeta'(s) at s=-1."""
    # modest M keeps the alternating-size cancellation (~M^2 log M) small;
    # the Euler-Maclaurin remainder at this (M, J) is far below 1e-13
    val = hurwitz_zeta_sprime(-1.0, 1.0, M=20, J=14)
    return val.real


@lru_cache(maxsize=1)
def rho_constant() -> float:
    """The constant rho in Gamma_2(x|1,1)^-1 = rho * G(x) * (2*pi)^(-x/2).

    rho = sqrt(2*pi) * exp(-zeta'(-1)).  (The exponent is -zeta'(-1), not
    -zeta'(1); the latter is undefined.)
    """
    return math.sqrt(2 * math.pi) * math.exp(-zeta_prime_minus_one())
