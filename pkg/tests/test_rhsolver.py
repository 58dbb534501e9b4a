import cmath
import math

import numpy as np
import pytest

from qrh.bps import (
    LPoly,
    RefinedBPSStructure,
    active_rays,
    canonical_refinement,
    direct_sum,
    doubled_a1,
    em_splitting,
)
from qrh.qtorus import ExtendedElement, TorusContext, const, eval_expr, ext_mul, lam_, shift, tau, theta
from qrh.rhsolver import (
    HamiltonianLimit,
    RHInstance,
    adjoint_general,
    adjoint_psi_a1,
    detect_special_t,
    hamiltonian_limit,
    predicted_special_t,
    richardson,
    solve_a1,
    solve_general,
    tau_function_limit,
    verify_jump_a1,
    verify_limits_a1,
)
from qrh.signals import DomainError, PoleSignal
from qrh.special import f_fn, lambda_fn, log_lambda

Z = 1.1 - 0.3j
TAU = 0.21 + 0.73j
TH = 0.17 - 0.08j
TWO_PI_I = 2j * math.pi


def _instance(z=Z):
    b = doubled_a1(z)
    s = em_splitting(b)
    return RHInstance(b, s, canonical_refinement(b), tuple(active_rays(b)))


# ---------------------------------------------------------------------------
# doubled case


def test_solve_a1_definitional():
    t = 0.7 + 0.9j
    for side in (1, -1):
        w = side * Z / (TWO_PI_I * t)
        expected = lambda_fn(w, 0.5 - side * (TH + TAU / 2), 1.0) ** side
        assert solve_a1(Z, t, TAU, TH, side, 1) == pytest.approx(expected, rel=1e-13)


def test_solve_a1_n_zero_is_one():
    assert solve_a1(Z, 0.7 + 0.9j, TAU, TH, 1, 0) == 1


def test_solve_a1_n2_matches_twisted_square():
    # oracle: the twisted product of two n=1 images via the extended algebra,
    # with the n=1 multiplier wrapped as a symbolic Lambda coefficient
    t = 0.7 + 0.9j
    b = doubled_a1(Z)
    s = em_splitting(b)
    ctx = TorusContext(b.skew, s)
    w = Z / (TWO_PI_I * t)
    f = lam_(const(w), const(0.5) - (theta((1,)) + tau() / 2), const(1))
    el = ExtendedElement(ctx, {(1,): f})
    prod = ext_mul(el, el)
    oracle = eval_expr(prod.coefficient((2,)), TAU, (TH,))
    assert solve_a1(Z, t, TAU, TH, 1, 2) == pytest.approx(oracle, rel=1e-12)


def test_solve_a1_negative_n_inverse():
    t = 0.7 + 0.9j
    for side in (1, -1):
        # y_dual * y_-dual = 1 under the twisted product
        m1 = solve_a1(Z, t, TAU, TH, side, 1)
        m_neg_shift = solve_a1(Z, t, TAU, TH + TAU, side, -1)
        assert m1 * m_neg_shift == pytest.approx(1, rel=1e-13)


def test_solve_a1_excluded_ray():
    with pytest.raises(DomainError):
        solve_a1(Z, 1j * Z, TAU, TH, 1, 1)
    with pytest.raises(DomainError):
        solve_a1(Z, -1j * Z, TAU, TH, -1, 1)
    # the opposite ray is fine
    solve_a1(Z, -1j * Z, TAU, TH, 1, 1)


def test_adjoint_psi_matches_easter_formula():
    t = 0.7 + 0.9j
    for side in (1, -1):
        w = side * Z / (TWO_PI_I * t)
        expected = 1 / f_fn(w, (1 + TAU) / 2 - side * TH, 1.0, TAU)
        assert adjoint_psi_a1(Z, t, TAU, TH, side) == pytest.approx(expected, rel=1e-12)


def test_adjoint_ad_consistency():
    rng = np.random.default_rng(42)
    for side in (1, -1):
        done = 0
        while done < 50:
            t = rng.uniform(0.2, 5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
            try:
                psi0 = adjoint_psi_a1(Z, t, TAU, TH, side)
                psi1 = adjoint_psi_a1(Z, t, TAU, TH + TAU, side)
                m = solve_a1(Z, t, TAU, TH, side, 1)
            except (PoleSignal, DomainError):
                continue
            assert abs(psi0 / psi1 / m - 1) < 1e-8
            done += 1


def test_adjoint_psi_scaling_invariance():
    # homogeneity of F: scaling (w, eta, om1, om2) jointly leaves psi fixed
    t = 0.8 - 0.4j
    w = Z / (TWO_PI_I * t)
    eta = (1 + TAU) / 2 - TH
    lam = 1.3 * cmath.exp(0.4j)
    assert f_fn(w, eta, 1.0, TAU) == pytest.approx(
        f_fn(lam * w, lam * eta, lam, lam * TAU), rel=1e-10
    )


def test_jump_identity_both_half_planes():
    rng = np.random.default_rng(7)
    counts = {1: 0, -1: 0}
    while min(counts.values()) < 100:
        t = rng.uniform(0.1, 10) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        re = (t / Z).real
        if abs(re) < 1e-3:
            continue
        c = 1 if re > 0 else -1
        if counts[c] >= 100:
            continue
        try:
            res = verify_jump_a1(Z, t, TAU, TH)
        except PoleSignal:
            continue
        assert res < 1e-9
        counts[c] += 1


def test_jump_degenerate_theta_signals():
    # choose theta so the jump factor 1 + e^(i pi tau - z/t + 2 pi i theta) vanishes
    t = 0.9 * Z  # Re(t/z) > 0
    th = (1j * math.pi - 1j * math.pi * TAU + Z / t) / TWO_PI_I
    with pytest.raises(PoleSignal):
        verify_jump_a1(Z, t, TAU, th)


def test_limits_a1_decay_and_growth():
    for side in (1, -1):
        lim = verify_limits_a1(Z, side, TAU, TH)
        tail = lim.residuals[-7:]
        assert all(tail[i + 1] < tail[i] for i in range(len(tail) - 1))
        assert lim.zero_limit_residual < 1e-6
        assert lim.growth_exponent <= 5


def test_limits_profile_rotation_invariant():
    # rotating z and the sampling ray together leaves residuals unchanged up
    # to the cancellation noise of evaluating log Lambda at huge |w|
    phi = 0.8
    lim1 = verify_limits_a1(Z, 1, TAU, TH)
    lim2 = verify_limits_a1(Z * cmath.exp(1j * phi), 1, TAU, TH)
    for r1, r2 in zip(lim1.residuals, lim2.residuals):
        assert r1 == pytest.approx(r2, rel=2e-2, abs=1e-12)


# ---------------------------------------------------------------------------
# general case


def _pick_ray(z, t, side):
    az = cmath.phase(side * z)
    at = cmath.phase(t)
    lo1, hi1 = az - math.pi, az

    def wrap(x):
        while x <= lo1 - math.pi:
            x += 2 * math.pi
        while x > lo1 + math.pi:
            x -= 2 * math.pi
        return x

    lo2 = wrap(at - math.pi / 2)
    lo = max(lo1, lo2)
    hi = min(hi1, lo2 + math.pi)
    assert hi > lo
    return cmath.exp(1j * (lo + hi) / 2)


def test_general_specialises_to_doubled():
    inst = _instance()
    rng = np.random.default_rng(11)
    done = 0
    while done < 50:
        t = rng.uniform(0.1, 10) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        side = 1 if done % 2 == 0 else -1
        try:
            r = _pick_ray(Z, t, side)
            general = solve_general(inst, r, t, TAU, (TH,), (0, 1))
            a1 = solve_a1(Z, t, TAU, TH, side, 1)
        except (PoleSignal, DomainError, AssertionError):
            continue
        assert abs(general / a1 - 1) < 1e-12
        done += 1


def test_general_empty_structure_gives_one():
    b = RefinedBPSStructure(2, ((0, -1), (1, 0)), (1 + 0j, 0j), {})
    s = em_splitting(doubled_a1(1.0))  # same lattice shape; no active classes
    inst = RHInstance(b, s, canonical_refinement(b), tuple(active_rays(b)))
    assert solve_general(inst, 1.0, 0.5, TAU, (TH,), (0, 1)) == 1
    assert adjoint_general(inst, 1.0, 0.5, TAU, (TH,)) == 1


def test_general_rejects_active_ray_and_wrong_halfplane():
    inst = _instance()
    with pytest.raises(DomainError):
        solve_general(inst, Z, 0.5 * Z, TAU, (TH,), (0, 1))
    r = _pick_ray(Z, 0.5 * Z, 1)
    with pytest.raises(DomainError):
        solve_general(inst, r, -0.5 * Z * r / abs(Z), TAU, (TH,), (0, 1))
    with pytest.raises(DomainError):
        solve_general(inst, r, 0.5 * Z, TAU, (TH,), (1, 0))  # beta not magnetic


def test_adjoint_general_reduces_to_easter():
    inst = _instance()
    rng = np.random.default_rng(12)
    done = 0
    while done < 20:
        t = rng.uniform(0.2, 5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        side = 1 if done % 2 == 0 else -1
        try:
            r = _pick_ray(Z, t, side)
            general = adjoint_general(inst, r, t, TAU, (TH,))
            closed = adjoint_psi_a1(Z, t, TAU, TH, side)
        except (PoleSignal, DomainError, AssertionError):
            continue
        assert abs(general / closed - 1) < 1e-10
        done += 1


def test_adjoint_general_ad_agreement_direct_sum():
    z1, z2 = Z, 0.4 + 0.9j
    b = direct_sum(doubled_a1(z1), doubled_a1(z2))
    s = em_splitting(b)
    inst = RHInstance(b, s, canonical_refinement(b), tuple(active_rays(b)))
    rng = np.random.default_rng(13)
    done = 0
    while done < 20:
        t = rng.uniform(0.3, 3) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        r = t / abs(t)
        thv = (
            complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4)),
            complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4)),
        )
        if any(abs(r - ry.phase) < 1e-2 or abs(r + ry.phase) < 1e-2 for ry in inst.rays):
            continue
        beta = s.magnetic[done % 2]
        pv = tuple(b.pairing(beta, e) for e in s.electric)
        th_shift = tuple(x + TAU * c for x, c in zip(thv, pv))
        try:
            psi0 = adjoint_general(inst, r, t, TAU, thv)
            psi1 = adjoint_general(inst, r, t, TAU, th_shift)
            mult = solve_general(inst, r, t, TAU, thv, beta)
        except (PoleSignal, DomainError):
            continue
        assert abs(psi0 / psi1 / mult - 1) < 1e-8
        done += 1


def test_two_ray_jump_matches_wall_crossing():
    from qrh.qtorus import compose, eps_z, s_q_ray

    inst = _instance()
    b, s = inst.structure, inst.splitting
    ray_plus = [ry for ry in inst.rays if abs(ry.phase - Z / abs(Z)) < 1e-9][0]
    rng = np.random.default_rng(14)
    done = 0
    while done < 50:
        t = Z * rng.uniform(0.3, 3) * cmath.exp(1j * rng.uniform(-1.2, 1.2))
        delta = 0.15
        r_plus = Z / abs(Z) * cmath.exp(-1j * delta)
        r_minus = Z / abs(Z) * cmath.exp(1j * delta)
        try:
            psi_p = solve_general(inst, r_plus, t, TAU, (TH,), (0, 1))
            psi_m = solve_general(inst, r_minus, t, TAU, (TH,), (0, 1))
            s_tilde = compose(
                eps_z(doubled_a1(-Z), s, t),
                compose(s_q_ray(b, s, inst.refinement, ray_plus), eps_z(b, s, t)),
            )
            jump = eval_expr(s_tilde.multiplier_for((1,)), TAU, (TH,))
        except (PoleSignal, DomainError):
            continue
        assert abs(psi_p / (jump * psi_m) - 1) < 1e-9
        done += 1


def test_rh_instance_requires_good_structure():
    b = RefinedBPSStructure(
        2,
        ((0, -1), (1, 0)),
        (1 + 0j, 1j),
        {(1, 0): LPoly(1), (-1, 0): LPoly(1), (0, 1): LPoly(1), (0, -1): LPoly(1)},
    )
    with pytest.raises(DomainError):
        RHInstance(b, em_splitting(doubled_a1(1.0)), canonical_refinement(doubled_a1(1.0)), ())


# ---------------------------------------------------------------------------
# limits


def test_richardson_exactness_on_polynomial():
    # f(s) = L + 2s - s^2 + 0.3 s^3: four levels recover L exactly
    L = 3.7 - 0.2j

    def f(s):
        return L + 2 * s - s * s + 0.3 * s**3

    vals = [f(0.5 * 2.0**-j) for j in range(5)]
    assert richardson(vals) == pytest.approx(L, abs=1e-12)


def test_hamiltonian_limit_closed_vs_extrapolated():
    for side in (1, -1):
        lim = hamiltonian_limit(Z, side * (0.8 + 0.2j) * Z, 0.13, side)
        assert isinstance(lim, HamiltonianLimit)
        assert abs(lim.value - lim.extrapolated) < 1e-5


def test_hamiltonian_derivative_identity():
    t = 0.8 + 0.2j
    for side in (1, -1):
        ts = side * t * Z
        w = side * Z / (TWO_PI_I * ts)
        for h in (1e-4, 5e-5):
            hp = hamiltonian_limit(Z, ts, 0.13 + h, side).value
            hm = hamiltonian_limit(Z, ts, 0.13 - h, side).value
            d = (hp - hm) / (2 * h)
            expected = -side * TWO_PI_I * log_lambda(w, 0.5 - side * 0.13, 1.0)
            assert abs(d - expected) < 1e-6


def test_hamiltonian_flow_reproduces_classical_multiplier():
    # exp(-(dH/dtheta)/(2 pi i)) equals the classical multiplier Lambda^side
    t = 0.9 - 0.3j
    for side in (1, -1):
        ts = side * t * Z
        w = side * Z / (TWO_PI_I * ts)
        h = 1e-5
        hp = hamiltonian_limit(Z, ts, 0.21 + h, side).value
        hm = hamiltonian_limit(Z, ts, 0.21 - h, side).value
        d = (hp - hm) / (2 * h)
        got = cmath.exp(-d / TWO_PI_I)
        want = lambda_fn(w, 0.5 - side * 0.21, 1.0) ** side
        assert got == pytest.approx(want, rel=1e-6)


def test_tau_function_limit_identities():
    rng = np.random.default_rng(15)
    done = 0
    while done < 50:
        t = rng.uniform(0.3, 3) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        side = 1 if done % 2 == 0 else -1
        th = complex(rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4))
        try:
            lim = tau_function_limit(Z, t, th, side)
        except (PoleSignal, DomainError):
            continue
        w = side * Z / (TWO_PI_I * t)
        assert abs(lim.psi_closed / (cmath.exp(-cmath.log(w) / 12) * lim.upsilon) - 1) < 1e-9
        done += 1


def test_tau_function_difference_relation():
    # Upsilon(w, -(th - 1/2)) = Upsilon(w, -(th + 1/2)) * Lambda(w, 1/2 - th | 1)
    from qrh.special import upsilon_fn

    t = 0.7 - 0.2j
    w = Z / (TWO_PI_I * t)
    for th in (0.1, 0.3 - 0.2j):
        lhs = upsilon_fn(w, -(th - 0.5))
        rhs = upsilon_fn(w, -(th + 0.5)) * lambda_fn(w, 0.5 - th, 1.0)
        assert lhs == pytest.approx(rhs, rel=1e-9)


def test_tau_function_extrapolation():
    lim = tau_function_limit(Z, 0.8 * Z, 0.13, 1)
    assert abs(lim.psi_extrapolated / lim.psi_closed - 1) < 1e-5


def test_tau_zero_is_tau_function():
    # theta = 0 gives the tau-function value Upsilon(+-z/(2 pi i t), 0)
    from qrh.special import upsilon_fn

    t = 0.8 * Z
    lim = tau_function_limit(Z, t, 0.0, 1)
    assert lim.upsilon == pytest.approx(upsilon_fn(Z / (TWO_PI_I * t), 0.0), rel=1e-13)


# ---------------------------------------------------------------------------
# pole locations


def test_pole_zero_locations():
    rng = np.random.default_rng(16)
    for _ in range(3):
        z = complex(rng.uniform(0.5, 2), rng.uniform(-1, 1))
        tv = complex(rng.uniform(-0.3, 0.3), rng.uniform(0.4, 1.2))
        th = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.3, 0.3))
        for n in (-3, -2, -1, 0, 1, 2, 3):
            pred = predicted_special_t(z, tv, th, n)
            det = detect_special_t(z, tv, th, n)
            assert abs(det - pred) < 1e-8 * abs(pred)


def test_multiplier_signals_at_predicted_pole():
    # evaluating exactly at the predicted location raises the pole signal
    t_star = predicted_special_t(Z, TAU, TH, -1)
    with pytest.raises(PoleSignal):
        solve_a1(Z, t_star, TAU, TH, 1, 1)
    t_star = predicted_special_t(Z, TAU, TH, 1)
    with pytest.raises(PoleSignal):
        solve_a1(Z, t_star, TAU, TH, -1, 1)
