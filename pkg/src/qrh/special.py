"""Scalar special functions: Barnes gammas, their modifications, and limits.

Everything here is a pure function of complex scalars, with principal
branches throughout.  Compound powers w^B are always computed as
exp(B * Log w), and ratios inside powers are split, Log(w/om) =
Log(w) - Log(om), each factor on its principal branch.  Evaluation within
~1e-12 of a known pole/zero lattice raises a structured PoleSignal instead
of returning an infinity.

Evaluation strategy for the double gamma function: the defining
zeta-regularisation is not directly computable, so log Gamma_2 is obtained
by shifting the argument with the difference relation

    Gamma_2(x | om1, om2) = Gamma_1(x | om1) * Gamma_2(x + om2 | om1, om2)

until |x| >= 10 * max(|om1|, |om2|), then summing the large-x expansion
(second Stirling form) with optimal truncation.  The same expansion is
exposed directly as `gamma_n_second_stirling` for N in {1, 2}.
"""

from __future__ import annotations

import cmath
import math
from math import comb

from scipy.special import loggamma as _loggamma

from .bernoulli import (
    bernoulli_numbers,
    multi_bernoulli,
    multi_bernoulli_coeffs,
    multi_bernoulli_zero,
    multi_bernoulli_zero_series,
)
from .constants import hurwitz_zeta, zeta_prime_minus_one
from .signals import DomainError, PoleSignal, UnsupportedRegimeError, near_nonpositive_integer

__all__ = [
    "log_gamma",
    "log_barnes_g",
    "barnes_zeta",
    "log_gamma1",
    "log_gamma2",
    "log_lambda",
    "lambda_fn",
    "log_f",
    "f_fn",
    "quantum_dilog",
    "quantum_dilog_inv_series",
    "log_delta",
    "delta_fn",
    "log_upsilon",
    "upsilon_fn",
    "asymptotic_log_lambda",
    "asymptotic_log_f",
    "gamma_n_second_stirling",
    "second_stirling_tail_coeff",
]

LOG_2PI = math.log(2 * math.pi)

#: Re(z) above which the Barnes-G large-z expansion is summed directly.
BARNES_G_THRESHOLD = 15.0
#: Term cap for optimally-truncated asymptotic tails.
MAX_TAIL_TERMS = 40


def _check_off_cut(v: complex, name: str) -> complex:
    v = complex(v)
    if v == 0 or (v.imag == 0.0 and v.real < 0.0):
        raise DomainError(f"{name} must lie in C* minus the negative real axis, got {v}")
    return v


def log_gamma(z) -> complex:
    """Principal branch of log Gamma(z), continuous on C minus (-inf, 0]."""
    z = complex(z)
    m = near_nonpositive_integer(z)
    if m is not None:
        raise PoleSignal("pole", m, "log_gamma")
    return complex(_loggamma(z))


def _log_barnes_g_asymptotic(u: complex) -> complex:
    # log G(1+v) at v = u-1, for Re(u) large:
    #   (v^2/2) log v - 3 v^2/4 + (v/2) log 2pi - (1/12) log v + zeta'(-1)
    #   + sum_k B_{2k+2} / (2k (2k+2)) * v^(-2k),
    # summed with optimal truncation.  The tail follows from
    # log G(v+1) = zeta'(-1) + v log Gamma(v) - zeta_H'(-1, v) and the
    # Stirling / Euler-Maclaurin expansions of the two terms.
    v = u - 1
    lv = cmath.log(v)
    total = (v * v / 2) * lv - 3 * v * v / 4 + (v / 2) * LOG_2PI - lv / 12 + zeta_prime_minus_one()
    bern = bernoulli_numbers(2 * MAX_TAIL_TERMS + 2)
    inv2 = 1 / (v * v)
    p = inv2
    best = math.inf
    correction = 0j
    for k in range(1, MAX_TAIL_TERMS + 1):
        term = float(bern[2 * k + 2]) / ((2 * k) * (2 * k + 2)) * p
        if abs(term) >= best:
            break
        best = abs(term)
        correction += term
        p *= inv2
    return total + correction


def log_barnes_g(z) -> complex:
    """A branch of log G(z) for the Barnes G-function.

    Satisfies log G(z+1) = log Gamma(z) + log G(z) exactly as implemented
    (the value is built from that recurrence), with G(1) = 1.  Zeros of G
    at the non-positive integers raise a zero-signal.
    """
    z = complex(z)
    m = near_nonpositive_integer(z)
    if m is not None:
        raise PoleSignal("zero", m, "log_barnes_g")
    steps = max(0, math.ceil(BARNES_G_THRESHOLD - z.real))
    total = _log_barnes_g_asymptotic(z + steps)
    for j in range(steps):
        total -= complex(_loggamma(z + j))
    return total


def barnes_zeta(N: int, s, x, a) -> complex:
    """Barnes zeta zeta_N(s, x | a) = sum over n in (Z>=0)^N of (x + n.a)^-s.

    Direct-summation oracle with an Euler-Maclaurin tail bound; only the
    absolutely convergent regime Re(s) > N is supported (no analytic
    continuation here).  Requires Re(a_i) > 0 and Re(x/a_i) > 0 so the
    summands stay off the branch cut.  N in {1, 2}.
    """
    s = complex(s)
    x = complex(x)
    a = tuple(complex(ai) for ai in a)
    if len(a) != N:
        raise DomainError(f"expected {N} parameters, got {len(a)}")
    if any(ai.real <= 0 for ai in a):
        raise DomainError("direct summation requires Re(a_i) > 0")
    if s.real <= N:
        raise UnsupportedRegimeError(
            f"Re(s) <= {N} is outside the direct-sum regime (oracle only)"
        )
    if N == 1:
        q = x / a[0]
        if q.real <= 0 and q.imag == 0:
            raise DomainError("x/a on the non-positive real axis")
        return cmath.exp(-s * cmath.log(a[0])) * hurwitz_zeta(s, q)
    if N == 2:
        a1, a2 = a
        M, J = 24, 6
        bern = bernoulli_numbers(2 * J)
        total = 0j
        pref = cmath.exp(-s * cmath.log(a2))
        for m in range(M):
            total += pref * hurwitz_zeta(s, (x + m * a1) / a2)
        u_m = (x + M * a1) / a2
        # integral part of the tail: int_M^inf a2^-s zeta_H(s,(x+m a1)/a2) dm
        total += cmath.exp((1 - s) * cmath.log(a2)) / (a1 * (s - 1)) * hurwitz_zeta(s - 1, u_m)
        total += pref * hurwitz_zeta(s, u_m) / 2
        fact = 2.0
        ratio = a1 / a2
        for j in range(1, J + 1):
            r = 2 * j - 1
            rising = 1.0 + 0j
            for i in range(r):
                rising *= s + i
            deriv = pref * ratio**r * (-1) ** r * rising * hurwitz_zeta(s + r, u_m)
            total -= float(bern[2 * j]) / fact * deriv
            fact *= (2 * j + 1) * (2 * j + 2)
        return total
    raise UnsupportedRegimeError("barnes_zeta is implemented for N in {1, 2}")


def log_gamma1(x, a) -> complex:
    """log Gamma_1(x | a) = log[ Gamma(x/a) a^(x/a - 1/2) / sqrt(2 pi) ]."""
    a = _check_off_cut(a, "a")
    v = complex(x) / a
    m = near_nonpositive_integer(v)
    if m is not None:
        raise PoleSignal("pole", m, "log_gamma1")
    return -0.5 * LOG_2PI + complex(_loggamma(v)) + (v - 0.5) * cmath.log(a)


def _gamma2_pole_check(x: complex, w1: complex, w2: complex) -> None:
    # poles of Gamma_2 at x = -m1 w1 - m2 w2, m_i >= 0
    tol = 1e-12 * max(1.0, abs(x) / min(abs(w1), abs(w2)))
    det = w1.real * w2.imag - w1.imag * w2.real
    if abs(det) > 1e-14 * abs(w1) * abs(w2):
        xi1 = (x.real * w2.imag - x.imag * w2.real) / det
        xi2 = (w1.real * x.imag - w1.imag * x.real) / det
        m1, m2 = round(xi1), round(xi2)
        if m1 <= 0 and m2 <= 0 and abs(xi1 - m1) < tol and abs(xi2 - m2) < tol:
            raise PoleSignal("pole", complex(m1, m2), "log_gamma2")
        return
    # collinear parameters (e.g. om1 = om2): lattice is {-(m1 + m2*r) w1}
    r = (w2 / w1).real
    u = -(x / w1)
    if abs((x / w1).imag) > 1e-9 * max(1.0, abs(u)):
        return
    m2 = 0
    while m2 * r <= u.real + 0.5 and m2 <= 500:
        m1 = round(u.real - m2 * r)
        if m1 >= 0 and abs(u.real - m2 * r - m1) < tol:
            raise PoleSignal("pole", complex(-m1, -m2), "log_gamma2")
        m2 += 1


def _cor_a2_expansion(x: complex, a1: complex, a2: complex) -> complex:
    # second Stirling form of log Gamma_2 at large |x| (delta = 0), with
    # optimal truncation of the x^-k tail
    b22 = multi_bernoulli(2, 2, x, (a1, a2))
    total = -0.5 * b22 * cmath.log(x)
    total += 3 * x * x / (4 * a1 * a2) - x * (a1 + a2) / (2 * a1 * a2)
    zeros = multi_bernoulli_zero_series(2, (a1, a2), MAX_TAIL_TERMS + 2)
    invx = 1 / x
    p = invx
    terms = []
    for k in range(1, MAX_TAIL_TERMS + 1):
        terms.append((-1) ** k * zeros[k + 2] / (k * (k + 1) * (k + 2)) * p)
        p *= invx
    # optimal truncation at the globally smallest term; term magnitudes
    # oscillate (odd-index coefficients are small), so a first-increase
    # stop would truncate far too early
    cut = min(range(len(terms)), key=lambda i: abs(terms[i]))
    return total + sum(terms[: cut + 1])


def log_gamma2(x, w1, w2, extra_shift: int = 0) -> complex:
    """A branch of log Gamma_2(x | om1, om2).

    Computed by difference-relation shifting along the larger parameter,
    accumulating log Gamma_1 factors, then the large-argument expansion at
    |x'| >= 10 max(|om1|, |om2|).  `extra_shift` forces additional
    recurrence steps (used by path-independence checks).
    """
    x = complex(x)
    w1 = _check_off_cut(w1, "omega1")
    w2 = _check_off_cut(w2, "omega2")
    q = w2 / w1
    if q.imag == 0.0 and q.real < 0.0:
        raise DomainError("omega1, omega2 must lie in a common open half-plane")
    _gamma2_pole_check(x, w1, w2)
    if abs(w1) >= abs(w2):
        shift, other = w1, w2
    else:
        shift, other = w2, w1
    target = 10.0 * max(abs(w1), abs(w2))
    # smallest n >= 0 with |x + n*shift| >= target
    c = (x * shift.conjugate()).real
    s2 = abs(shift) ** 2
    disc = c * c + s2 * (target * target - abs(x) ** 2)
    n = 0 if disc <= 0 else max(0, math.ceil((-c + math.sqrt(disc)) / s2))
    n += max(0, extra_shift)
    total = _cor_a2_expansion(x + n * shift, w1, w2)
    for j in range(n):
        total += log_gamma1(x + j * shift, other)
    return total


def log_lambda(w, eta, omega) -> complex:
    """log of the modified gamma function Lambda(w, eta | omega).

    Lambda(w,eta|om) = (2pi)^(-1/2) Gamma((w+eta)/om) exp(w/om)
                       * (w/om)^(1/2 - (w+eta)/om),
    where the last factor uses Log(w/om) = Log(w) - Log(om), each principal.
    Poles exactly at w + eta = n*om, n <= 0.
    """
    w = _check_off_cut(w, "w")
    omega = _check_off_cut(omega, "omega")
    eta = complex(eta)
    v = (w + eta) / omega
    m = near_nonpositive_integer(v)
    if m is not None:
        raise PoleSignal("pole", m, "log_lambda")
    return (
        -0.5 * LOG_2PI
        + complex(_loggamma(v))
        + w / omega
        + (0.5 - v) * (cmath.log(w) - cmath.log(omega))
    )


def lambda_fn(w, eta, omega) -> complex:
    """The modified gamma function Lambda(w, eta | omega)."""
    return cmath.exp(log_lambda(w, eta, omega))


def log_f(w, eta, w1, w2, extra_shift: int = 0) -> complex:
    """log of the modified double gamma function F(w, eta | om1, om2).

    F = Gamma_2(w+eta | om1, om2) * exp((1/2) B_{2,2}(w+eta|om1,om2) Log w)
        * exp(-3w^2/(4 om1 om2) - eta w/(om1 om2) + w(om1+om2)/(2 om1 om2)).
    """
    w = _check_off_cut(w, "w")
    eta = complex(eta)
    w1 = complex(w1)
    w2 = complex(w2)
    lg2 = log_gamma2(w + eta, w1, w2, extra_shift=extra_shift)
    b22 = multi_bernoulli(2, 2, w + eta, (w1, w2))
    g = -3 * w * w / (4 * w1 * w2) - eta * w / (w1 * w2) + w * (w1 + w2) / (2 * w1 * w2)
    return lg2 + 0.5 * b22 * cmath.log(w) + g


def f_fn(w, eta, w1, w2) -> complex:
    """The modified double gamma function F(w, eta | om1, om2)."""
    return cmath.exp(log_f(w, eta, w1, w2))


def quantum_dilog(q, x) -> complex:
    """Quantum dilogarithm E_q(x) = prod_{k>=0} (1 - q^k x), for |q| < 1.

    The product is truncated once the tail is below ~1e-16 relative;
    relative error < 1e-12 for |q| <= 0.95.
    """
    q = complex(q)
    x = complex(x)
    aq = abs(q)
    if aq >= 1:
        raise DomainError("quantum_dilog requires |q| < 1")
    if x == 0:
        return 1.0 + 0j
    guard = 5e-17 * (1 - aq)
    total = 1.0 + 0j
    qk_x = x
    for _ in range(20000):
        total *= 1 - qk_x
        qk_x *= q
        if abs(qk_x) < guard:
            break
    return total


def quantum_dilog_inv_series(q, x, max_terms: int = 4000) -> complex:
    """E_q(x)^{-1} = sum_{n>=0} x^n / ((1-q)...(1-q^n)), for |x| < 1.

    Independent of the product route; used as a series-identity oracle.
    """
    q = complex(q)
    x = complex(x)
    if abs(q) >= 1:
        raise DomainError("requires |q| < 1")
    if abs(x) >= 1:
        raise DomainError("series route requires |x| < 1")
    total = 1.0 + 0j
    term = 1.0 + 0j
    qn = 1.0 + 0j
    for n in range(1, max_terms):
        qn *= q
        term *= x / (1 - qn)
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def log_delta(w, eta) -> complex:
    """log Delta(w, eta), the tau->0 limit of tau * log F(w, eta | 1, tau).

    Delta(w,eta) = exp(-zeta'(-1)) G(w+eta+1)
                   * exp(-w^2/4 + eta^2/2 - eta/2 + 1/12)
                   / ( Gamma(w+eta)^(w+eta) * w^(-(w+eta)^2/2 + (w+eta)/2 - 1/12) ).
    """
    w = _check_off_cut(w, "w")
    eta = complex(eta)
    u = w + eta
    return (
        -zeta_prime_minus_one()
        + log_barnes_g(u + 1)
        - w * w / 4
        + eta * eta / 2
        - eta / 2
        + 1 / 12
        - u * log_gamma(u)
        + (u * u / 2 - u / 2 + 1 / 12) * cmath.log(w)
    )


def delta_fn(w, eta) -> complex:
    return cmath.exp(log_delta(w, eta))


def log_upsilon(w, theta) -> complex:
    """log Upsilon(w, theta), the tau->1 limit function.

    Upsilon(w,theta) = exp(-zeta'(-1)) G(w+theta+1) exp(3w^2/4 + theta w)
                       / ( (2pi)^((w+theta)/2) * w^((w+theta)^2/2 - 1/6) ).

    The -1/6 in the w-exponent is forced: it is the unique normalisation
    for which F(w, 1 -+ theta | 1, 1)^(-1) = w^(-1/12) Upsilon(w, -+theta)
    holds identically, as the tau->1 limit statement requires.  (Either
    exponent drops out of the theta-difference relation
    Upsilon(w,theta)/Upsilon(w,theta-1) = Lambda(w,theta|1).)
    """
    w = _check_off_cut(w, "w")
    theta = complex(theta)
    u = w + theta
    return (
        -zeta_prime_minus_one()
        + log_barnes_g(u + 1)
        + 3 * w * w / 4
        + theta * w
        - (u / 2) * LOG_2PI
        - (u * u / 2 - 1 / 6) * cmath.log(w)
    )


def upsilon_fn(w, theta) -> complex:
    return cmath.exp(log_upsilon(w, theta))


def asymptotic_log_lambda(w, eta, omega, K: int) -> complex:
    """Partial sum sum_{k=1}^K (-1)^(k+1) B_{1,k+1}(eta|om) / (k(k+1)) w^-k.

    The large-|w| expansion of log Lambda; non-convergent, so this never
    claims convergence -- order checks use doubling ratios.
    """
    if K < 0:
        raise DomainError("K must be >= 0")
    w = complex(w)
    total = 0j
    p = 1 / w
    for k in range(1, K + 1):
        total += (-1) ** (k + 1) * multi_bernoulli(1, k + 1, eta, (omega,)) / (k * (k + 1)) * p
        p /= w
    return total


def asymptotic_log_f(w, eta, w1, w2, K: int) -> complex:
    """Partial sum sum_{k=1}^K (-1)^k B_{2,k+2}(eta|om1,om2)/(k(k+1)(k+2)) w^-k."""
    if K < 0:
        raise DomainError("K must be >= 0")
    w = complex(w)
    total = 0j
    p = 1 / w
    for k in range(1, K + 1):
        total += (
            (-1) ** k
            * multi_bernoulli(2, k + 2, eta, (w1, w2))
            / (k * (k + 1) * (k + 2))
            * p
        )
        p /= w
    return total


def second_stirling_tail_coeff(N: int, k: int, delta, a) -> complex:
    """Coefficient of x^-k in the second-Stirling tail of log Gamma_N(x+delta|a).

    Equals (-1)^(N+k) B_{N,N+k}(delta | a) / (k (k+1) ... (k+N)).
    """
    denom = 1.0
    for i in range(N + 1):
        denom *= k + i
    return (-1) ** (N + k) * multi_bernoulli(N, N + k, delta, a) / denom


def gamma_n_second_stirling(N: int, x, delta, a, K: int) -> complex:
    """Second-Stirling approximant of log Gamma_N(x + delta | a), N in {1,2}.

    Full form: the polynomial/log part

        (-1)^(N+1)/N! * ( B_{N,N}(x+delta|a) Log x
                          - sum_{k<N} c_{N,k} B_{N,k}(0|a) (x+delta)^(N-k)
                          + P_{N-1}(x, delta | a) )

    with c_{N,k} = binom(N,k) * sum_{l=1}^{N-k} 1/l and P_{N-1} the
    non-negative-degree part of B_{N,N}(x+delta|a) * sum_n (-1)^(n+1)
    delta^n / n * x^-n, plus the x^-k tail to order K.  Valid as |x| -> inf
    with x and x+delta in the half-plane of the parameters.
    """
    if N not in (1, 2):
        raise UnsupportedRegimeError("second Stirling approximant supports N in {1, 2}")
    x = complex(x)
    delta = complex(delta)
    a = tuple(complex(ai) for ai in a)
    sign = (-1) ** (N + 1) / math.factorial(N)

    main = multi_bernoulli(N, N, x + delta, a) * cmath.log(x)
    for k in range(N):
        c_nk = comb(N, k) * sum(1.0 / l for l in range(1, N - k + 1))
        main -= c_nk * multi_bernoulli_zero(N, k, a) * (x + delta) ** (N - k)

    # P_{N-1}: coefficients of B_{N,N}(y+delta|a) as a polynomial in y
    base = multi_bernoulli_coeffs(N, N, a)
    p = [0j] * (N + 1)
    for j, cj in enumerate(base):
        for d in range(j + 1):
            p[d] += comb(j, d) * cj * delta ** (j - d)
    for d in range(N):
        for n in range(1, N - d + 1):
            main += p[d + n] * (-1) ** (n + 1) * delta**n / n * x**d

    total = sign * main
    invx = 1 / x
    pw = invx
    for k in range(1, K + 1):
        total += second_stirling_tail_coeff(N, k, delta, a) * pw
        pw *= invx
    return total
