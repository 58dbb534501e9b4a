"""Multiple Bernoulli polynomials B_{N,k}(x | a_1..a_N).

The polynomials are defined by the generating expansion

    t^N e^{x t} / prod_i (e^{a_i t} - 1)  =  sum_k B_{N,k}(x | a) t^k / k!,

for a vector of non-zero complex parameters a.  They reduce to the classical
Bernoulli polynomials for N=1, a=1, and satisfy

    B_{N,k}(x + a_i | a) - B_{N,k}(x | a) = k B_{N-1,k-1}(x | a without a_i),
    B_{N,k}(lam*x | lam*a) = lam^(k-N) B_{N,k}(x | a).

Coefficients are obtained by convolving the per-factor series

    t / (e^{a t} - 1) = sum_k (B_k a^{k-1} / k!) t^k,

with B_k the classical Bernoulli numbers (B_1 = -1/2 convention), which is
exact up to floating error and avoids any symbolic dependency.  Degrees stay
small here (k <= ~40), so double-precision convolution is plenty.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from .signals import DomainError, UnsupportedRegimeError

__all__ = [
    "bernoulli_numbers",
    "multi_bernoulli",
    "multi_bernoulli_coeffs",
    "multi_bernoulli_zero",
    "classical_bernoulli",
]

MAX_N = 4


@lru_cache(maxsize=None)
def _bernoulli_numbers_cached(n: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa, then flip B_1 to the -1/2 ("first") convention used
    # by the generating function t/(e^t - 1).
    row = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
        out.append(row[0])
    if n >= 1:
        out[1] = -out[1]
    return tuple(out)


def bernoulli_numbers(n: int) -> list[Fraction]:
    """Classical Bernoulli numbers B_0..B_n (B_1 = -1/2) as exact Fractions."""
    if n < 0:
        raise DomainError("n must be >= 0")
    return list(_bernoulli_numbers_cached(n))


@lru_cache(maxsize=None)
def _zero_value_series(a: tuple[complex, ...], order: int) -> tuple[complex, ...]:
    """Coefficients g_m = [t^m] of t^N / prod(e^{a_i t} - 1), m = 0..order.

    B_{N,m}(0 | a) = m! * g_m.
    """
    bern = _bernoulli_numbers_cached(order)
    # factorials as floats; order <= ~60 so this is safe in doubles
    fact = [1.0] * (order + 1)
    for m in range(1, order + 1):
        fact[m] = fact[m - 1] * m
    series = [complex(1)] + [complex(0)] * order
    for ai in a:
        factor = [complex(bern[m]) * ai ** (m - 1) / fact[m] for m in range(order + 1)]
        new = [complex(0)] * (order + 1)
        for i, si in enumerate(series):
            if si == 0:
                continue
            for j in range(order + 1 - i):
                new[i + j] += si * factor[j]
        series = new
    return tuple(series)


def _validate(N: int, k: int, a: tuple[complex, ...]) -> None:
    if N < 1:
        raise DomainError("N must be >= 1")
    if N > MAX_N:
        raise UnsupportedRegimeError(f"N > {MAX_N} is not supported")
    if k < 0:
        raise DomainError("k must be >= 0")
    if len(a) != N:
        raise DomainError(f"expected {N} parameters, got {len(a)}")
    if any(ai == 0 for ai in a):
        raise DomainError("parameters a_i must be non-zero")


def multi_bernoulli_zero(N: int, k: int, a) -> complex:
    """B_{N,k}(0 | a)."""
    a = tuple(complex(ai) for ai in a)
    _validate(N, k, a)
    series = _zero_value_series(a, k)
    fact = 1.0
    for m in range(2, k + 1):
        fact *= m
    return series[k] * fact


def multi_bernoulli_zero_series(N: int, a, order: int) -> list[complex]:
    """[B_{N,0}(0|a), ..., B_{N,order}(0|a)] in one convolution pass."""
    a = tuple(complex(ai) for ai in a)
    _validate(N, order, a)
    series = _zero_value_series(a, order)
    out = []
    fact = 1.0
    for m in range(order + 1):
        if m >= 2:
            fact *= m
        out.append(series[m] * fact)
    return out


def multi_bernoulli_coeffs(N: int, k: int, a) -> list[complex]:
    """Monomial coefficients c_0..c_k with B_{N,k}(x | a) = sum_j c_j x^j.

    Appell-type structure: c_j = binom(k, j) * B_{N,k-j}(0 | a).
    """
    a = tuple(complex(ai) for ai in a)
    _validate(N, k, a)
    series = _zero_value_series(a, k)
    coeffs = []
    fact = [1.0] * (k + 1)
    for m in range(1, k + 1):
        fact[m] = fact[m - 1] * m
    for j in range(k + 1):
        coeffs.append(comb(k, j) * series[k - j] * fact[k - j])
    return coeffs


def multi_bernoulli(N: int, k: int, x, a) -> complex:
    """Evaluate B_{N,k}(x | a_1..a_N).

    Horner evaluation from the highest degree down; accuracy degrades for
    |x| beyond ~1e6 as documented.
    """
    coeffs = multi_bernoulli_coeffs(N, k, a)
    x = complex(x)
    acc = complex(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def classical_bernoulli(k: int, x) -> complex:
    """Classical Bernoulli polynomial B_k(x) = B_{1,k}(x | 1)."""
    return multi_bernoulli(1, k, x, (1.0,))
