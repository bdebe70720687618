# cle_integrability/core/checks.py
"""
Layer 8 — Verification Suites

Each suite returns a list of CheckResult rows (check, target, estimate, stderr,
tolerance, pass, anchor). A row passes when |estimate - target| <= tolerance;
tolerances are absolute in the row, built from the relative budgets in config.

Suites:
- identities: deterministic closed-form grids and constant identities
- levy:       hitting identities and their cutoff refinement, jump intensity, martingale, scaling, second moment
- cascade:    reweighted loop-length density and self-similarity
- looptree:   jump moment, its growth below order nu, and the exhaustive quotient comparison
- renewal:    gap-law round trip, mean gap and renewal rate against the dilation constant
"""

import logging
import math

import numpy as np

from cle_integrability.config import (
    MGF_KAPPAS, MGF_LAMBDA_POINTS, FZZ_ALPHA_FRACTIONS, FZZ_ELLS, FZZ_MUS,
    GQD_KAPPA_PRIMES, GQD_TAIL_X, WELDING_EPS, WELDING_DELTA,
    JUMP_SECOND_MOMENT_BETAS, PSI_THETA, LEVY_BETAS, LEVY_CHECK_HORIZON,
    LEVY_BIN_CUTOFF_MULTIPLE, LEVY_REFINE_FACTOR, CASCADE_KAPPAS, CASCADE_BINS, CASCADE_SCALE_FACTOR,
    CR_KAPPAS, CR_ROUNDTRIP_LAMBDAS, RENEWAL_HORIZON, RENEWAL_HORIZON_MULTIPLE,
    JUMP_MOMENT_STEPS, JUMP_MOMENT_EXCURSIONS, JUMP_MOMENT_ALPHAS, QUOTIENT_MAX_STEPS,
    JUMP_MOMENT_GROWTH_ORDER, JUMP_MOMENT_GROWTH_EXCURSIONS, JUMP_MOMENT_GROWTH_FACTOR,
    LOOPTREE_MIN_STEPS,
    N_SIGMA, MGF_TOL, FZZ_TOL, GQD_DERIVATIVE_TOL, GQD_MEAN_TOL, GQD_TAIL_TOL,
    WELDING_TOL, IDENTITY_TOL, QD_RATIO_TOL, JUMP_SECOND_MOMENT_TOL, PSI_THETA_TOL,
    KAPPA4_TOL, INVERSE_MEAN_TOL, JUMP_MOMENT_TOL, CR_ROUNDTRIP_TOL, CR_MEAN_TOL,
    DILATION_TOL, RENEWAL_TOL, DEFAULT_SEED, DEFAULT_REPLICAS, LEVY_JUMP_CUTOFF,
)
from cle_integrability.core import formulas as F
from cle_integrability.core.anchors import anchor_for
from cle_integrability.core.cascade import (
    cascade_config, loop_length_density_check, self_similarity_ks,
)
from cle_integrability.core.crrenewal import (
    build_cr_gap_law, estimate_renewal_rate, law_mean, law_transform,
    numerical_gap_mean, renewal_correction,
)
from cle_integrability.core.errors import UsageError
from cle_integrability.core.levy import (
    LevySimConfig, estimate_inverse_mean, estimate_jump_intensity,
    estimate_tau_ratio, estimate_terminal_mean, expected_jump_count,
    tau_scaling_ks, weighted_second_moment,
)
from cle_integrability.core.looptree import (
    DiscreteExcursion, ROOT, build_looptree, estimate_jump_moment, jump_moment_growth,
)
from cle_integrability.core.params import (
    LQGParams, alpha_for_lambda, alpha_params, delta_alpha, from_kappa,
)
from cle_integrability.core.specfun import DEFAULT_QUADRATURE, quad_or_raise

log = logging.getLogger(__name__)


class CheckResult:
    """One row of a verify report."""

    def __init__(self, check, target, estimate, tolerance, stderr=0.0, passed=None):
        self.check = check
        self.target = float(target)
        self.estimate = float(estimate)
        self.stderr = float(stderr)
        self.tolerance = float(tolerance)
        if passed is None:
            passed = abs(self.estimate - self.target) <= self.tolerance
        self.passed = bool(passed)
        self.anchor = anchor_for(check)

    def as_row(self):
        return {
            "check": self.check,
            "target": self.target,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "anchor": self.anchor,
        }

    def summary(self):
        mark = "✓ PASS" if self.passed else "✗ FAIL"
        return f"  {mark}  {self.check:<44} target={self.target:.8g}  estimate={self.estimate:.8g}"


def _rel(value, target):
    return abs(value - target) / abs(target)


def _mc_row(check, target, estimate, slack=0.0):
    # estimate is an MCEstimate; pass within N_SIGMA stderr plus a bias allowance
    return CheckResult(check, target, estimate.mean, N_SIGMA * estimate.stderr + slack,
                       stderr=estimate.stderr)


# =============================================================================
# IDENTITIES (deterministic)
# =============================================================================

def mgf_lambda_grid(kappa, points=MGF_LAMBDA_POINTS):
    """Admissible lambdas strictly inside the range, kept away from the pole."""
    lo, hi = F.mgf_lambda_range(kappa)
    return lo + (hi - lo) * np.linspace(0.05, 0.9, points)


def _mgf_rows():
    rows = []
    for kappa in MGF_KAPPAS:
        p = from_kappa(kappa)
        worst = 0.0
        for lam in mgf_lambda_grid(kappa):
            target = F.thickness_mgf(p, lam)
            value = F.normalized_loop_mass_ratio(alpha_for_lambda(p, lam))
            worst = max(worst, _rel(value, target))
        rows.append(CheckResult(f"mgf_identity[kappa={kappa:g}]", 0.0, worst, MGF_TOL))
    return rows


def _kw_rows():
    rows = []
    for kappa in MGF_KAPPAS:
        p = from_kappa(kappa)
        gap = max(
            abs(F.kw_conjectured_mgf(p, lam) - F.thickness_mgf_at(16.0 / kappa, lam))
            for lam in mgf_lambda_grid(kappa)
        )
        rows.append(CheckResult(f"kw_flip[kappa={kappa:g}]", 0.0, gap, 0.0))

    # near kappa = 8 the true moment has already blown up at lambda = 0.01
    p = from_kappa(7.99)
    true_value = F.thickness_mgf(p, 0.01)
    conjectured = F.kw_conjectured_mgf(p, 0.01)
    rows.append(CheckResult(
        "kw_divergence[kappa=7.99,lambda=0.01]", true_value, conjectured, math.inf,
        passed=math.isinf(true_value) and math.isfinite(conjectured),
    ))
    return rows


def _symmetric_defect(func, h=1e-4):
    # second-order continuity defect across kappa = 4
    return abs(0.5 * (func(4.0 + h) + func(4.0 - h)) - func(4.0))


def _kappa4_rows():
    cases = {
        "thickness": lambda k: F.thickness_mgf_at(k, 0.2),
        "dilation": lambda k: F.dilation_constant(from_kappa(k)),
        "cr_gap_mean": lambda k: F.cr_gap_mean(from_kappa(k)),
    }
    return [
        CheckResult(f"kappa4_continuity[{name}]", 0.0, _symmetric_defect(func), KAPPA4_TOL)
        for name, func in cases.items()
    ]


def fzz_quadrature(ap, ell, mu, cfg=None):
    """|M(alpha; ell)| times the quadrature of e^{-mu ell^2 x} against the unit-length area density."""
    cfg = cfg or DEFAULT_QUADRATURE
    a0 = 2.0 / ap.gamma * (ap.q - ap.alpha)
    t = mu * ell * ell
    peak = -math.log(4.0 * ap.base.sin_term * (a0 + 1.0))

    def integrand(y):
        x = math.exp(y)
        return x * math.exp(-t * x) * F.fzz_area_density(ap, x)

    integral = quad_or_raise(integrand, -40.0, 40.0, cfg, points=[peak])
    return F.disk_length_magnitude(ap, ell) * integral


def _fzz_rows():
    p = from_kappa(3.0)
    lo = p.gamma / 2.0
    worst = 0.0
    count = 0
    for frac in FZZ_ALPHA_FRACTIONS:
        ap = alpha_params(p, lo + frac * (p.q - lo))
        for ell in FZZ_ELLS:
            for mu in FZZ_MUS:
                target = F.fzz_laplace(ap, ell, mu)
                worst = max(worst, _rel(fzz_quadrature(ap, ell, mu), target))
                count += 1
    return [CheckResult(f"fzz_roundtrip[{count} points]", 0.0, worst, FZZ_TOL)]


def gqd_small_mu(p, relative_gap=1e-7):
    """mu at which the weighted transform sits within relative_gap of the mean area."""
    return 4.0 * p.sin_term * relative_gap ** (1.0 / (p.kappa_prime / 4.0 - 1.0))


def _gqd_rows():
    rows = []
    for kp in GQD_KAPPA_PRIMES:
        p = from_kappa(kp)
        mu, ell = 1.0, 1.0
        h = 1e-4 * mu
        slope = (F.gqd_laplace(p, ell, mu + h) - F.gqd_laplace(p, ell, mu - h)) / (2.0 * h)
        weighted = F.gqd_area_weighted_laplace(p, ell, mu)
        rows.append(CheckResult(f"gqd_derivative[kappa'={kp:g}]", weighted, -slope,
                                GQD_DERIVATIVE_TOL * weighted))

        mean = F.gqd_mean_area(p, ell)
        limit = F.gqd_area_weighted_laplace(p, ell, gqd_small_mu(p))
        rows.append(CheckResult(f"gqd_mean_limit[kappa'={kp:g}]", mean, limit, GQD_MEAN_TOL * mean))

        coef, exponent = F.gqd_tail_coefficient(p)
        target = coef * GQD_TAIL_X ** exponent
        tail = F.gqd1_tail_probability(p, GQD_TAIL_X)
        rows.append(CheckResult(f"gqd_tail[kappa'={kp:g},x={GQD_TAIL_X:g}]", target, tail,
                                GQD_TAIL_TOL * target))

        fd_exponent = F.fd_alpha_tail_exponent(alpha_params(p, p.gamma))
        rows.append(CheckResult(f"fd_tail_reduction[kappa'={kp:g}]", exponent, fd_exponent, IDENTITY_TOL))
    return rows


def _welding_rows():
    p = from_kappa(3.0)
    lo = p.gamma / 2.0
    rows = []
    for frac in FZZ_ALPHA_FRACTIONS[:2]:
        ap = alpha_params(p, lo + frac * (p.q - lo))
        exact = F.welding_mass_integral(ap, WELDING_EPS, WELDING_DELTA)
        ratio = exact / (F.welding_mass_asymptotic(ap) * math.log(WELDING_DELTA / WELDING_EPS))
        rows.append(CheckResult(f"welding_asymptotic[alpha={ap.alpha:.6g}]", 1.0, ratio, WELDING_TOL))
    return rows


def _stable_rows():
    rows = []
    for beta in JUMP_SECOND_MOMENT_BETAS:
        value = F.jump_second_moment(beta, 1.0)
        rows.append(CheckResult(f"jump_second_moment[beta={beta:g}]", 1.0, value, JUMP_SECOND_MOMENT_TOL))
    grid = np.geomspace(1e-3, 1e3, 61)
    for beta in LEVY_BETAS:
        worst = max(
            _rel(F.qd_ratio_jump_density(beta, 1.0, b), F.levy_jump_density(beta, 1.0, b))
            for b in grid
        )
        rows.append(CheckResult(f"qd_ratio_identity[beta={beta:.6g}]", 0.0, worst, QD_RATIO_TOL))
    return rows


def _cr_rows():
    rows = []
    for kappa in CR_KAPPAS:
        p = from_kappa(kappa)
        rows.append(CheckResult(f"cr_moment_normalization[kappa={kappa:g}]", 1.0,
                                F.ssw_cr_moment(p, 0.0), 1e-14))
        d = F.dilation_constant(p)
        rows.append(CheckResult(f"dilation_reciprocal[kappa={kappa:g}]", d,
                                1.0 / numerical_gap_mean(p), DILATION_TOL * d))
    return rows


def _constant_rows():
    rows = []
    for kappa in (2.5, 3.0, 3.5):
        p = LQGParams.from_gamma(math.sqrt(kappa))
        k = F.k_gamma(p)
        from_c = F.c_gamma(p) * math.pi * p.gamma / (2.0 * (p.q - p.gamma) ** 2)
        rows.append(CheckResult(f"k_from_c[gamma^2={kappa:g}]", k, from_c, IDENTITY_TOL * abs(k)))

        closed = F.welding_constant_closed_form(p)
        rows.append(CheckResult(f"welding_constant[gamma^2={kappa:g}]", closed,
                                F.welding_constant(p), IDENTITY_TOL * abs(closed)))

        ap = alpha_params(p, p.gamma)
        ratio = F.u_bar(ap) ** 2 / F.reflection_coefficient(ap)
        target = F.u_bar_squared_over_r_bar(p)
        rows.append(CheckResult(f"ubar_rbar_identity[gamma^2={kappa:g}]", target, ratio,
                                IDENTITY_TOL * abs(target)))

        rows.append(CheckResult(f"delta_gamma[gamma^2={kappa:g}]", 1.0, delta_alpha(p, p.gamma), 1e-14))

        kp = F.kprime_over_rprime2(p)
        rows.append(CheckResult(f"kprime_positive[gamma^2={kappa:g}]", 0.0, kp, math.inf, passed=kp > 0))

    rows.append(CheckResult("disk_length_constant[gamma=sqrt2]", 4.0,
                            F.disk_length_constant(LQGParams.from_gamma(math.sqrt(2.0))), 1e-12))
    rows.append(CheckResult("annulus_value[gamma^2=3,a=b=1]", 1.0 / (4.0 * math.pi),
                            F.annulus_mass(1.0, 1.0, from_kappa(3.0)), 1e-15))
    rows.append(CheckResult("dilation_value[kappa=6]", 1.0 / (2.0 * math.pi * math.sqrt(3.0)),
                            F.dilation_constant(from_kappa(6.0)), 1e-15))
    return rows


def _psi_rows():
    coarse = F.psi_theta(PSI_THETA, 1.0)
    fine = F.psi_theta(PSI_THETA, 1.0, DEFAULT_QUADRATURE.halved())
    return [CheckResult(f"psi_theta_resolution[theta={PSI_THETA:g},lambda=1]", fine, coarse, PSI_THETA_TOL)]


def identities_suite(**_):
    rows = []
    for block in (_mgf_rows, _kw_rows, _kappa4_rows, _fzz_rows, _gqd_rows, _welding_rows,
                  _stable_rows, _cr_rows, _constant_rows, _psi_rows):
        rows.extend(block())
    return rows


# =============================================================================
# LEVY
# =============================================================================

def _refinement_row(beta, seed, replicas, eps, target, coarse):
    """Shrinking the cutoff must not move the inverse-mean estimate away from its target."""
    fine_eps = eps / LEVY_REFINE_FACTOR
    fine = estimate_inverse_mean(LevySimConfig(beta=beta, jump_cutoff_eps=fine_eps, rng_seed=seed), replicas)
    slack = N_SIGMA * math.hypot(coarse.stderr, fine.stderr)
    return CheckResult(f"inverse_mean_refinement[beta={beta:.6g},eps={eps:g}->{fine_eps:g}]",
                       0.0, abs(fine.mean - target), abs(coarse.mean - target) + slack, stderr=fine.stderr)


def levy_rows(beta, seed, replicas, eps):
    cfg = LevySimConfig(beta=beta, jump_cutoff_eps=eps, rng_seed=seed)
    tag = f"beta={beta:.6g}"
    rows = [
        _mc_row(f"tau_ratio[{tag},a=1,b=1]", F.tau_ratio_mean(1.0, 1.0), estimate_tau_ratio(1.0, 1.0, cfg, replicas)),
        _mc_row(f"tau_ratio[{tag},a=2,b=1]", F.tau_ratio_mean(2.0, 1.0), estimate_tau_ratio(2.0, 1.0, cfg, replicas)),
    ]

    target = F.hitting_inverse_mean(beta)
    inverse = estimate_inverse_mean(cfg, replicas)
    rows.append(CheckResult(f"inverse_mean[{tag}]", target, inverse.mean, INVERSE_MEAN_TOL * target,
                            stderr=inverse.stderr))
    rows.append(_refinement_row(beta, seed, replicas, eps, target, inverse))

    b1 = LEVY_BIN_CUTOFF_MULTIPLE * eps
    rows.append(_mc_row(f"jump_intensity[{tag},b={b1:g}..1]",
                        expected_jump_count(beta, b1, 1.0, LEVY_CHECK_HORIZON),
                        estimate_jump_intensity(b1, 1.0, LEVY_CHECK_HORIZON, cfg, replicas)))
    rows.append(_mc_row(f"martingale[{tag}]", 0.0, estimate_terminal_mean(LEVY_CHECK_HORIZON, cfg, replicas)))

    ks = tau_scaling_ks(cfg, replicas)
    rows.append(CheckResult(f"tau_scaling[{tag}]", 0.0, ks["statistic"], ks["critical"], passed=ks["pass"]))

    floor = LEVY_BIN_CUTOFF_MULTIPLE * eps
    rows.append(_mc_row(f"weighted_second_moment[{tag},b>={floor:g}]",
                        F.truncated_jump_second_moment(beta, 1.0, floor),
                        weighted_second_moment(1.0, cfg, replicas, floor=floor)))
    return rows


def levy_suite(seed=DEFAULT_SEED, replicas=DEFAULT_REPLICAS, eps=LEVY_JUMP_CUTOFF, betas=None, **_):
    rows = []
    for beta in betas or LEVY_BETAS:
        log.info("levy suite: beta=%.6g, %d replicas, eps=%g", beta, replicas, eps)
        rows.extend(levy_rows(beta, seed, replicas, eps))
    return rows


def cutoff_refinement(beta, eps_values, seed, replicas):
    """Relative error of the inverse-mean estimate at each cutoff, for the truncation study."""
    target = F.hitting_inverse_mean(beta)
    out = []
    for eps in eps_values:
        cfg = LevySimConfig(beta=beta, jump_cutoff_eps=eps, rng_seed=seed)
        est = estimate_inverse_mean(cfg, replicas)
        out.append({"eps": eps, "estimate": est.mean, "stderr": est.stderr,
                    "rel_error": _rel(est.mean, target)})
    return out


# =============================================================================
# CASCADE
# =============================================================================

def cascade_suite(seed=DEFAULT_SEED, replicas=DEFAULT_REPLICAS, eps=LEVY_JUMP_CUTOFF, kappas=None, **_):
    rows = []
    a = 1.0
    bins = np.linspace(a / 2.0, 2.0 * a, CASCADE_BINS + 1)
    for kappa in kappas or CASCADE_KAPPAS:
        cfg = cascade_config(from_kappa(kappa), jump_cutoff_eps=eps, rng_seed=seed)
        tag = f"kappa={kappa:.6g},beta={cfg.beta:.6g}"
        report = loop_length_density_check(a, bins, cfg, replicas)
        table = report.table
        z = ((table["estimate"] - table["target"]).abs() / table["stderr"]).max()
        rows.append(CheckResult(f"loop_length_density[{tag}]", 0.0, z, N_SIGMA,
                                passed=report.passed(N_SIGMA)))
        ks = self_similarity_ks(a, CASCADE_SCALE_FACTOR, cfg, replicas)
        rows.append(CheckResult(f"self_similarity[{tag},c={CASCADE_SCALE_FACTOR:g}]", 0.0,
                                ks["statistic"], ks["critical"], passed=ks["pass"]))
    return rows


# =============================================================================
# LOOPTREE
# =============================================================================

def enumerate_excursions(max_steps):
    """Every first-passage excursion (steps in {-1, 1, 2, ...}) of length <= max_steps."""
    out = []

    def extend(prefix, level):
        if len(prefix) >= max_steps:
            return
        room = max_steps - len(prefix) - 1
        for step in [-1] + list(range(1, room + 1)):
            new = level + step
            if new == -1:
                out.append(prefix + [step])
            elif new >= 0 and new + 1 <= room:
                extend(prefix + [step], new)

    extend([], 0)
    return out


def direct_quotient(steps, scale=1.0):
    """
    Loops of the looptree read straight off the jump times: the parent of a jump is
    the latest earlier jump whose base level the walk has not come back to, and the
    position is the running minimum since that jump, relative to its base.
    """
    steps = list(steps)
    pre = np.concatenate(([0], np.cumsum(steps)))
    jumps = [i for i, s in enumerate(steps) if s > 0]
    loops = []
    for n, i in enumerate(jumps):
        parent, position = ROOT, 0.0
        for m in range(n - 1, -1, -1):
            j = jumps[m]
            low = pre[j + 1:i + 1].min()
            if low > pre[j]:
                parent = m
                position = ((low - pre[j]) % steps[j]) * scale
                break
        loops.append((steps[i] * scale, parent, position))
    return loops


def quotient_mismatches(max_steps=QUOTIENT_MAX_STEPS):
    """(number of excursions checked, number where build_looptree and direct_quotient differ)."""
    excursions = enumerate_excursions(max_steps)
    bad = 0
    for steps in excursions:
        tree = build_looptree(DiscreteExcursion(steps))
        fast = [(l.length, l.parent, l.position) for l in tree.loops]
        if fast != direct_quotient(steps):
            bad += 1
    return len(excursions), bad


def _jump_moment_growth_row(nu, seed, steps, excursions):
    """Order below nu: the estimate must grow significantly from n/FACTOR to n steps."""
    small = max(LOOPTREE_MIN_STEPS, steps // JUMP_MOMENT_GROWTH_FACTOR)
    replicas = min(excursions, JUMP_MOMENT_GROWTH_EXCURSIONS)
    low, high = jump_moment_growth(nu, JUMP_MOMENT_GROWTH_ORDER, [small, steps], replicas, seed)
    noise = N_SIGMA * math.hypot(low.stderr, high.stderr)
    return CheckResult(
        f"jump_moment_divergence[p={JUMP_MOMENT_GROWTH_ORDER:g},n={small}..{steps}]",
        low.mean, high.mean, math.inf, stderr=high.stderr,
        passed=small < steps and high.mean - low.mean > noise,
    )


def looptree_suite(seed=DEFAULT_SEED, steps=JUMP_MOMENT_STEPS, excursions=JUMP_MOMENT_EXCURSIONS, **_):
    rows = []
    p = LQGParams.from_gamma(math.sqrt(3.0))
    nu = 4.0 / p.kappa
    for alpha in JUMP_MOMENT_ALPHAS:
        target = F.jump_moment(alpha_params(p, alpha))
        order = 2.0 * alpha / p.gamma
        est = estimate_jump_moment(nu, order, steps, excursions, seed)
        rows.append(CheckResult(f"jump_moment[gamma=sqrt3,alpha={alpha:.6g}]", target, est.mean,
                                JUMP_MOMENT_TOL * target, stderr=est.stderr))
    rows.append(_jump_moment_growth_row(nu, seed, steps, excursions))
    checked, bad = quotient_mismatches()
    rows.append(CheckResult(f"looptree_quotient[n<={QUOTIENT_MAX_STEPS},{checked} excursions]", 0.0, bad, 0.0))
    return rows


# =============================================================================
# RENEWAL
# =============================================================================

def renewal_horizon(p):
    return max(RENEWAL_HORIZON, RENEWAL_HORIZON_MULTIPLE * F.cr_gap_mean(p))


def renewal_rows(kappa, seed, replicas):
    p = from_kappa(kappa)
    tag = f"kappa={kappa:g}"
    law = build_cr_gap_law(p)
    rows = []
    for lam in CR_ROUNDTRIP_LAMBDAS:
        rows.append(CheckResult(f"cr_roundtrip[{tag},lambda={lam:g}]", F.ssw_cr_moment(p, lam),
                                law_transform(law, lam), CR_ROUNDTRIP_TOL))
    mean = F.cr_gap_mean(p)
    rows.append(CheckResult(f"cr_mean[{tag}]", mean, law_mean(law), CR_MEAN_TOL * mean))

    horizon = renewal_horizon(p)
    target = F.dilation_constant(p)
    est = estimate_renewal_rate(law, horizon, replicas, seed)
    tolerance = max(RENEWAL_TOL * target, N_SIGMA * est.stderr + abs(renewal_correction(law, horizon)))
    rows.append(CheckResult(f"renewal_rate[{tag},C={horizon:.4g}]", target, est.mean, tolerance,
                            stderr=est.stderr))
    return rows


def renewal_suite(seed=DEFAULT_SEED, replicas=DEFAULT_REPLICAS, kappas=None, **_):
    rows = []
    for kappa in kappas or CR_KAPPAS:
        log.info("renewal suite: kappa=%g, %d replicas", kappa, replicas)
        rows.extend(renewal_rows(kappa, seed, replicas))
    return rows


SUITE_FUNCS = {
    "identities": identities_suite,
    "levy": levy_suite,
    "cascade": cascade_suite,
    "looptree": looptree_suite,
    "renewal": renewal_suite,
}


def run_suite(name, **options):
    """Rows of one suite, or of every suite in order for 'all'."""
    if name == "all":
        rows = []
        for suite in SUITE_FUNCS.values():
            rows.extend(suite(**options))
        return rows
    if name not in SUITE_FUNCS:
        raise UsageError(f"unknown suite '{name}' (choose from {', '.join(list(SUITE_FUNCS) + ['all'])})")
    return SUITE_FUNCS[name](**options)
