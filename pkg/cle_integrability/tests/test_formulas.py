#!/usr/bin/env python3
"""
Test Layer 3 closed-form laws: exact values, limits and cross-identities.
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import math

import numpy as np
from scipy import integrate, special

from cle_integrability.core.errors import DivergenceError, DomainError, PoleError
from cle_integrability.core.formulas import (
    ConstantId, DensityCurve,
    annulus_mass, cr_gap_mean, cr_moment_pole, dilation_constant,
    disk_length_constant, eval_constant, fd_alpha_tail_coefficient, fd_alpha_tail_exponent,
    fzz_area_density, fzz_area_survival, gqd1_laplace, gqd1_tail_probability,
    gqd_mean_area, gqd_tail_coefficient, hitting_inverse_mean, jump_second_moment,
    ktilde_prime_over_rprime2, kw_conjectured_mgf, levy_jump_density, loop_mass_ratio,
    mgf_lambda_range, normalized_loop_mass_ratio, nu_theta_density, nu_theta_mass_above, psi_theta,
    qd_ratio_jump_density, ssw_cr_moment, tau_ratio_mean, thickness_mgf,
    thickness_mgf_at, truncated_jump_second_moment, u_bar_squared_over_r_bar,
    u_bar, reflection_coefficient, welding_constant, welding_constant_closed_form,
)
from cle_integrability.core.params import (
    LQGParams, alpha_for_lambda, alpha_params, from_kappa,
)


def _insertion(kappa, fraction):
    p = from_kappa(kappa)
    lo = p.gamma / 2.0
    return alpha_params(p, lo + fraction * (p.q - lo))


def test_thickness_mgf():
    print("TEST: Electrical thickness MGF...")

    for kappa in [3.0, 4.0, 6.0]:
        p = from_kappa(kappa)
        assert abs(thickness_mgf(p, 0.0) - 1.0) < 1e-15, f"MGF(0) should be 1 at kappa {kappa}"
        lo, hi = mgf_lambda_range(kappa)
        assert thickness_mgf(p, hi) == math.inf, "MGF is infinite at the upper bound"
        inside = [thickness_mgf(p, lam) for lam in np.linspace(lo + 0.01, hi - 0.01, 7)]
        assert all(u < v for u, v in zip(inside, inside[1:])), "MGF increases in lambda"

    # flipped form is the same expression at 16/kappa
    p = from_kappa(3.0)
    assert kw_conjectured_mgf(p, 0.2) == thickness_mgf_at(16.0 / 3.0, 0.2), "KW form uses 16/kappa"
    assert abs(kw_conjectured_mgf(p, 0.2) - thickness_mgf(p, 0.2)) > 1e-3, "KW form differs from the MGF"

    print("  ✓ PASSED")


def test_loop_mass_matches_mgf():
    """Normalized loop mass at alpha(lambda) equals the thickness MGF in both regimes."""
    print("TEST: Loop mass ratio...")

    for kappa, lams in [(3.0, [0.1, 0.3, 0.55]), (6.0, [0.05, 0.15, 0.2])]:
        p = from_kappa(kappa)
        for lam in lams:
            ap = alpha_for_lambda(p, lam)
            got = normalized_loop_mass_ratio(ap)
            ref = thickness_mgf(p, lam)
            assert abs(got - ref) <= 1e-10 * ref, f"kappa {kappa}, lambda {lam}: {got} vs {ref}"

    p = from_kappa(3.0)
    try:
        loop_mass_ratio(alpha_params(p, p.q + 0.1))
        raise AssertionError("alpha >= Q should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_disk_constants():
    print("TEST: Disk length constants...")

    p = LQGParams.from_gamma(math.sqrt(2.0))
    assert abs(disk_length_constant(p) - 4.0) < 1e-12, f"R_gamma(sqrt 2) = 4, got {disk_length_constant(p)}"

    try:
        disk_length_constant(LQGParams.from_gamma(2.0))
        raise AssertionError("gamma = 2 should raise PoleError")
    except PoleError:
        pass

    # two routes to U-bar(g)^2 / R-bar(g)
    for g2 in [2.5, 3.0, 3.5]:
        p = LQGParams.from_gamma(math.sqrt(g2))
        ap = alpha_params(p, p.gamma)
        direct = u_bar(ap) ** 2 / reflection_coefficient(ap)
        closed = u_bar_squared_over_r_bar(p)
        assert abs(direct - closed) <= 1e-9 * abs(closed), f"gamma^2 = {g2}: {direct} vs {closed}"
        assert abs(welding_constant(p) - welding_constant_closed_form(p)) <= 1e-9 * welding_constant_closed_form(p)

    print("  ✓ PASSED")


def test_fzz_area_law():
    """The FZZ density is a probability density and the survival function matches it."""
    print("TEST: FZZ area law...")

    ap = _insertion(3.0, 0.5)
    total, _ = integrate.quad(lambda u: math.exp(u) * fzz_area_density(ap, math.exp(u)), -30.0, 60.0, limit=200)
    assert abs(total - 1.0) < 1e-6, f"FZZ density should integrate to 1, got {total}"

    # at ell = 1 the area above 1 is the density's mass above 1
    above, _ = integrate.quad(lambda u: math.exp(u) * fzz_area_density(ap, math.exp(u)), 0.0, 60.0, limit=200)
    survival = fzz_area_survival(ap, 1.0)
    assert abs(survival - above) < 1e-6, f"P(area > 1) {survival} vs integrated {above}"

    a0 = 2.0 / ap.gamma * (ap.q - ap.alpha)
    s = ap.base.sin_term
    for ell in [0.5, 2.0]:
        ref = special.gammainc(a0, ell * ell / (4.0 * s))
        assert abs(fzz_area_survival(ap, ell) - ref) < 1e-12, f"survival at ell {ell}"

    print("  ✓ PASSED")


def test_gqd_tail_consistency():
    print("TEST: Generalized disk tails...")

    p = from_kappa(6.0)
    coef, exponent = gqd_tail_coefficient(p)
    assert abs(exponent - (1.0 - 6.0 / 4.0)) < 1e-14, f"tail exponent {exponent}"
    assert coef > 0, f"tail coefficient should be positive, got {coef}"
    assert abs(fd_alpha_tail_exponent(alpha_params(p, p.gamma)) - exponent) < 1e-12, \
        "forested tail exponent reduces at alpha = gamma"

    ap = alpha_params(p, 1.4)
    fd_coef, fd_exponent = fd_alpha_tail_coefficient(ap)
    assert fd_exponent == fd_alpha_tail_exponent(ap), "coefficient reports its exponent"
    assert math.isfinite(fd_coef), f"coefficient off the pole should be finite, got {fd_coef}"

    # gamma = 1 puts kappa' at 16
    try:
        gqd_tail_coefficient(LQGParams.from_gamma(1.0))
        raise AssertionError("kappa' = 16 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_gqd1_transform_and_tail():
    """Small-mu behaviour of the one-point transform matches the area tail at x = 1e3."""
    print("TEST: One-point generalized disk transform...")

    for kp in [5.0, 6.0, 7.0]:
        p = from_kappa(kp)
        coef, exponent = gqd_tail_coefficient(p)
        rho = -exponent

        values = [gqd1_laplace(p, 1.0, mu) for mu in [1e-3, 1e-2, 0.1, 1.0]]
        assert all(0.0 < v < 1.0 for v in values), f"transform of a probability law at kappa' {kp}"
        assert all(u > v for u, v in zip(values, values[1:])), "transform decreases in mu"

        # 1 - phi(mu) ~ c Gamma(1 - rho) mu^rho is the transform side of P(A > x) ~ c x^{-rho}
        mu = 1e-4
        ratio = (1.0 - gqd1_laplace(p, 1.0, mu)) / mu ** rho
        expected = coef * special.gamma(1.0 - rho)
        assert abs(ratio - expected) <= 1e-2 * expected, f"small-mu slope {ratio} vs {expected}"

        x = 1e3
        tail = gqd1_tail_probability(p, x)
        target = coef * x ** exponent
        assert abs(tail - target) <= 0.03 * target, f"P(A > {x:g}) = {tail} vs {target} at kappa' {kp}"

    try:
        gqd1_laplace(from_kappa(6.0), 0.0, 1.0)
        raise AssertionError("ell = 0 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_kappa4_continuity():
    """The thickness MGF approaches its kappa = 4 value from both sides."""
    print("TEST: Continuity at kappa = 4...")

    h = 1e-6
    for lam in [-0.5, 0.0, 0.2, 0.4]:
        at = thickness_mgf_at(4.0, lam)
        below = thickness_mgf_at(4.0 - h, lam)
        above = thickness_mgf_at(4.0 + h, lam)
        assert math.isfinite(at), f"MGF at kappa 4, lambda {lam} should be finite"
        assert abs(below - at) < 1e-4 * abs(at), f"left limit at lambda {lam}: {below} vs {at}"
        assert abs(above - at) < 1e-4 * abs(at), f"right limit at lambda {lam}: {above} vs {at}"

    print("  ✓ PASSED")


def test_cascade_mass_above_one():
    """Mass of nu_theta beyond x > 1 against its incomplete-beta closed form."""
    print("TEST: Cascade measure tail mass...")

    for theta in [0.75, 1.25]:
        c = special.gamma(theta + 1.0) / math.pi * math.sin(math.pi * (theta - 0.5))
        a = 2.0 * theta + 1.0
        for x in [1.5, 3.0]:
            y = 1.0 / x
            # int_0^y u^{2 theta} (1 - u)^{-theta - 1} du
            closed = c * y ** a / a * special.hyp2f1(a, theta + 1.0, a + 1.0, y)
            got = nu_theta_mass_above(theta, x)
            assert abs(got - closed) <= 1e-8 * abs(closed), f"theta {theta}, x {x}: {got} vs {closed}"

    try:
        nu_theta_mass_above(1.25, 1.0)
        raise AssertionError("x <= 1 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_nonsimple_welding_ratio():
    """K-tilde'/R'^2 is the tail coefficient times the squared mean area, over R-bar(gamma)."""
    print("TEST: Non-simple welding ratio...")

    for kp in [5.0, 6.0, 7.0]:
        p = from_kappa(kp)
        coef, _ = gqd_tail_coefficient(p)
        mean = gqd_mean_area(p, 1.0)
        r_bar = reflection_coefficient(alpha_params(p, p.gamma))
        expected = coef * mean ** 2 * 8.0 * (p.q - p.gamma) ** 2 / (p.kappa * r_bar)
        got = ktilde_prime_over_rprime2(p)
        assert math.isfinite(got) and got != 0.0, f"ratio at kappa' {kp}: {got}"
        assert abs(got - expected) <= 1e-12 * abs(expected), f"{got} vs {expected}"
        assert eval_constant("Ktilde_prime_over_Rprime2", p) == got, "reachable by name"

    try:
        ktilde_prime_over_rprime2(LQGParams.from_gamma(1.0))
        raise AssertionError("kappa' = 16 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_stable_jump_law():
    print("TEST: Stable jump law...")

    p = from_kappa(4.0)
    assert abs(annulus_mass(1.0, 1.0, p) - 1.0 / (2.0 * math.pi)) < 1e-15, "annulus at beta = 3/2"

    for beta in [1.2, 1.5, 1.9]:
        for a, b in [(1.0, 0.3), (2.0, 5.0)]:
            direct = levy_jump_density(beta, a, b)
            via_qd = qd_ratio_jump_density(beta, a, b)
            assert abs(direct - via_qd) <= 1e-12 * direct, f"two forms differ at beta {beta}"

    assert abs(jump_second_moment(1.5, 2.0) - 4.0) < 1e-8, "second moment is a^2"
    assert abs(jump_second_moment(1.2, 1.0) - 1.0) < 1e-8, "second moment is a^2"

    trunc = truncated_jump_second_moment(1.5, 1.0, 0.01)
    assert 0.0 < 1.0 - trunc < 0.1, f"truncation removes a small positive amount, got {trunc}"
    assert truncated_jump_second_moment(1.5, 1.0, 0.0) == 1.0, "no floor gives a^2"

    assert abs(hitting_inverse_mean(1.5) - math.pi) < 1e-14, "E[1/tau] at beta = 3/2"
    ref = special.gamma(-1.3) * special.gamma(2.3)
    assert abs(hitting_inverse_mean(1.3) - ref) <= 1e-12 * abs(ref), "Gamma(-beta) Gamma(1+beta) form"
    assert tau_ratio_mean(1.0, 1.0) == 0.5 and tau_ratio_mean(2.0, 1.0) == 2.0 / 3.0

    for bad in [1.0, 2.0]:
        try:
            levy_jump_density(bad, 1.0, 1.0)
            raise AssertionError(f"beta = {bad} should raise DomainError")
        except DomainError:
            pass

    print("  ✓ PASSED")


def test_conformal_radius():
    """Moment normalization, the pole location and E[B1] * dilation = 1."""
    print("TEST: Conformal radius law...")

    p = from_kappa(6.0)
    assert abs(ssw_cr_moment(p, 0.0) - 1.0) < 1e-14, "E[CR^0] = 1"
    assert abs(cr_moment_pole(p) - (-1.0 + 1.0 / 3.0 + 18.0 / 32.0)) < 1e-15, "pole at kappa 6"
    assert abs(dilation_constant(p) - 1.0 / (2.0 * math.pi * math.sqrt(3.0))) < 1e-14, "dilation at kappa 6"

    for kappa in [3.0, 3.999, 4.0, 5.0, 6.0, 7.5]:
        q = from_kappa(kappa)
        product = cr_gap_mean(q) * dilation_constant(q)
        assert abs(product - 1.0) < 1e-6, f"E[B1] * dilation at kappa {kappa}: {product}"

    pole = cr_moment_pole(p)
    try:
        ssw_cr_moment(p, pole)
        raise AssertionError("lambda at the pole should raise PoleError")
    except PoleError:
        pass
    try:
        ssw_cr_moment(p, pole - 0.1)
        raise AssertionError("lambda left of the pole should raise DivergenceError")
    except DivergenceError:
        pass

    z = ssw_cr_moment(p, np.array([0.5 + 0.0j, 1.0 + 2.0j]))
    assert abs(z[0] - ssw_cr_moment(p, 0.5)) < 1e-12, "complex branch agrees on the real axis"

    print("  ✓ PASSED")


def test_cascade_measure():
    print("TEST: Cascade jump measure...")

    theta = 1.25
    c = special.gamma(theta + 1.0) / math.pi
    assert abs(nu_theta_density(theta, 0.75) - c * (0.75 * 0.25) ** (-theta - 1.0)) < 1e-10
    try:
        nu_theta_density(theta, 1.0)
        raise AssertionError("x = 1 should raise PoleError")
    except PoleError:
        pass

    value = psi_theta(theta, 1.0)
    assert math.isfinite(value), f"Psi should be finite, got {value}"
    try:
        psi_theta(theta, 2.0 * theta + 1.0)
        raise AssertionError("lambda >= 2 theta + 1 should raise DivergenceError")
    except DivergenceError:
        pass
    try:
        psi_theta(1.0, 0.5)
        raise AssertionError("theta = 1 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_eval_constant():
    print("TEST: Named constants...")

    p = LQGParams.from_gamma(math.sqrt(2.0))
    assert abs(eval_constant("R_gamma", p) - 4.0) < 1e-12, "R_gamma by name"
    assert abs(eval_constant(ConstantId.DELTA_ALPHA, p, alpha=p.gamma) - 1.0) < 1e-14, "Delta_gamma = 1"

    for bad in [("C_fd_ratio", {}), ("bogus", {}), ("U_bar", {}), ("M_prime", {})]:
        try:
            eval_constant(bad[0], p, **bad[1])
            raise AssertionError(f"{bad[0]} should raise DomainError")
        except DomainError:
            pass

    print("  ✓ PASSED")


def test_density_curve():
    print("TEST: DensityCurve container...")

    curve = DensityCurve([0.1, 0.2, 0.4], [1.0, 0.5, 0.25], stderr=[0.1, 0.1, 0.1], label="demo")
    frame = curve.to_frame()
    assert list(frame.columns) == ["x", "value", "stderr"], f"columns: {list(frame.columns)}"
    assert curve.summary()["points"] == 3

    try:
        DensityCurve([0.2, 0.1], [1.0, 1.0])
        raise AssertionError("non-increasing abscissae should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def run_all_tests():
    """Run all tests."""
    print("=" * 60)
    print("LAYER 3 CLOSED-FORM LAW TESTS")
    print("=" * 60)
    print()

    tests = [
        test_thickness_mgf,
        test_loop_mass_matches_mgf,
        test_disk_constants,
        test_fzz_area_law,
        test_gqd_tail_consistency,
        test_gqd1_transform_and_tail,
        test_kappa4_continuity,
        test_cascade_mass_above_one,
        test_nonsimple_welding_ratio,
        test_stable_jump_law,
        test_conformal_radius,
        test_cascade_measure,
        test_eval_constant,
        test_density_curve,
    ]

    passed = 0
    failed = 0

    for test in tests:
        try:
            test()
            passed += 1
        except Exception as e:
            print(f"  ✗ FAILED: {e}")
            failed += 1

    print()
    print("=" * 60)
    print(f"RESULTS: {passed} passed, {failed} failed, {passed + failed} total")
    print("=" * 60)

    return failed == 0


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
