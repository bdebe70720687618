# cle_integrability/core/formulas.py
"""
Layer 3 — Closed-Form Laws

Every determined law and constant of the CLE / LQG integrability picture:
- Electrical-thickness moment generating function (and the flipped 16/kappa form)
- Loop-mass ratios in the insertion alpha, normalized at alpha = gamma
- Sphere area law (reflection coefficient), disk length law, FZZ area law
- Generalized quantum disk area transforms and tails
- Annulus masses, size-biased jump law of the stable process
- Conformal-radius moments and the dilation constant
- Jump measure nu_theta and the Laplace exponent Psi_theta of the cascade
- Named constants through eval_constant

All functions are pure. Domain violations raise errors from core.errors.
"""

import logging
import math
from enum import Enum

import numpy as np
import pandas as pd

from cle_integrability.config import KAPPA4_LIMIT_BAND
from cle_integrability.core.errors import (
    DivergenceError, DomainError, PoleError,
)
from cle_integrability.core.params import (
    alpha_params, delta_alpha, stable_index,
)
from cle_integrability.core.specfun import (
    DEFAULT_INVERSION, DEFAULT_QUADRATURE,
    bessel_k, bessel_k_bar, bessel_k_bar_series, cos_pi_sqrt,
    gamma_fn, incomplete_beta_half, invert_laplace, log_gamma_abs,
    lower_incomplete_gamma, quad_or_raise, sec_pi_sqrt, sinc_pi_sqrt,
)

log = logging.getLogger(__name__)


# =============================================================================
# RESULT CONTAINER
# =============================================================================

class DensityCurve:
    """Tabulated curve: strictly increasing abscissae with one value each."""

    def __init__(self, abscissae, values, stderr=None, effective_samples=None, label=""):
        x = np.asarray(abscissae, dtype=np.float64)
        y = np.asarray(values, dtype=np.float64)
        if x.shape != y.shape:
            raise DomainError(f"DensityCurve: {x.size} abscissae but {y.size} values")
        if x.size > 1 and not np.all(np.diff(x) > 0):
            raise DomainError("DensityCurve abscissae must be strictly increasing")
        self.abscissae = x
        self.values = y
        self.stderr = None if stderr is None else np.asarray(stderr, dtype=np.float64)
        self.effective_samples = (
            None if effective_samples is None else np.asarray(effective_samples, dtype=np.float64)
        )
        self.label = label

    def __len__(self):
        return self.abscissae.size

    def to_frame(self):
        frame = pd.DataFrame({"x": self.abscissae, "value": self.values})
        if self.stderr is not None:
            frame["stderr"] = self.stderr
        if self.effective_samples is not None:
            frame["ess"] = self.effective_samples
        return frame

    def summary(self):
        if not len(self):
            return {"error": "empty curve"}
        return {
            "label": self.label,
            "points": len(self),
            "x_min": float(self.abscissae[0]),
            "x_max": float(self.abscissae[-1]),
            "max_value": float(np.max(self.values)),
        }


# =============================================================================
# ELECTRICAL THICKNESS
# =============================================================================

def thickness_mgf_at(kappa, lam):
    """
    E[exp(lam * thickness)] for the loop parameter kappa:

        sin(pi (1 - kappa/4)) / (pi (1 - kappa/4)) * pi sqrt(s) / sin(pi sqrt(s)),
        s = (1 - kappa/4)^2 + lam kappa / 2

    written with sinc_pi_sqrt so s < 0 needs no complex arithmetic.
    Infinite for lam >= 1 - kappa/8.
    """
    if lam >= 1.0 - kappa / 8.0:
        return math.inf
    base = (1.0 - kappa / 4.0) ** 2
    s = base + lam * kappa / 2.0
    return sinc_pi_sqrt(base) / sinc_pi_sqrt(s)


def thickness_mgf(p, lam):
    return thickness_mgf_at(p.loop_kappa, lam)


def kw_conjectured_mgf(p, lam):
    """The conjectured form: the same expression with kappa replaced by 16/kappa."""
    return thickness_mgf_at(16.0 / p.loop_kappa, lam)


def mgf_lambda_range(kappa):
    """Open lambda interval on which alpha(lambda) is real and the MGF finite."""
    return 1.0 - kappa / 8.0 - 2.0 / kappa, 1.0 - kappa / 8.0


# =============================================================================
# LOOP MASS IN THE INSERTION
# =============================================================================

def _loop_mass_argument(p, alpha):
    if p.simple:
        return p.gamma / 2.0 * (p.q - alpha)
    return 2.0 / p.gamma * (p.q - alpha)


def _loop_mass_lower(p):
    # x = 1 (first sine zero) is reached at alpha = gamma/2, resp. 2/gamma
    return p.gamma / 2.0 if p.simple else 2.0 / p.gamma


def loop_mass_ratio(ap):
    """
    x / sin(pi x), the alpha-dependent factor of the loop mass with insertion alpha;
    x = (gamma/2)(Q - alpha) in the simple regime, (2/gamma)(Q - alpha) otherwise.
    """
    p = ap.base
    lower = _loop_mass_lower(p)
    if not lower < ap.alpha < p.q:
        raise DomainError(f"loop_mass_ratio needs alpha in ({lower:.6g}, {p.q:.6g}) (got {ap.alpha})")
    x = _loop_mass_argument(p, ap.alpha)
    sc = sinc_pi_sqrt(x * x)
    if abs(sc) < 1e-15:
        raise PoleError(f"loop_mass_ratio: sin(pi x) = 0 at x = {x}")
    return 1.0 / (math.pi * sc)


def normalized_loop_mass_ratio(ap):
    """loop_mass_ratio divided by its value at alpha = gamma (lambda = 0)."""
    p = ap.base
    x0 = _loop_mass_argument(p, p.gamma)
    return loop_mass_ratio(ap) * math.pi * sinc_pi_sqrt(x0 * x0)


# =============================================================================
# SPHERE AND DISK LAWS
# =============================================================================

def _require_insertion(ap, name):
    if not ap.gamma / 2.0 < ap.alpha < ap.q:
        raise DomainError(
            f"{name} needs alpha in (gamma/2, Q) = ({ap.gamma / 2.0:.6g}, {ap.q:.6g}) (got {ap.alpha})"
        )


def reflection_coefficient(ap):
    """
    Unit-volume reflection coefficient R-bar(alpha):

        - (pi G(g^2/4) / G(1 - g^2/4))^{z} / z * G(-y) / (G(y) G(z)),
        y = (g/2)(Q - alpha), z = (2/g)(Q - alpha).
    """
    _require_insertion(ap, "reflection_coefficient")
    g = ap.gamma
    g2 = g * g
    if g >= 2.0:
        raise PoleError("reflection_coefficient: Gamma(1 - gamma^2/4) has a pole at gamma = 2")
    y = g / 2.0 * (ap.q - ap.alpha)
    z = 2.0 / g * (ap.q - ap.alpha)
    base = math.pi * gamma_fn(g2 / 4.0) / gamma_fn(1.0 - g2 / 4.0)
    return -(base ** z) / z * gamma_fn(-y) / (gamma_fn(y) * gamma_fn(z))


def sphere_area_density(ap, a):
    """Area law of the sphere with two alpha insertions: (1/2) R-bar a^{(2/g)(alpha-Q)-1}."""
    if not a > 0:
        raise DomainError(f"sphere_area_density needs a > 0 (got {a})")
    exponent = 2.0 / ap.gamma * (ap.alpha - ap.q) - 1.0
    return 0.5 * reflection_coefficient(ap) * a ** exponent


def sphere_area_tail(ap):
    """Sphere mass with area above 1: gamma R-bar / (4 (Q - alpha))."""
    return ap.gamma * reflection_coefficient(ap) / (4.0 * (ap.q - ap.alpha))


def disk_length_constant(p):
    """R_gamma = (2 pi)^{4/g^2 - 1} / ((1 - g^2/4) Gamma(1 - g^2/4)^{4/g^2}), in logs."""
    g2 = p.kappa
    if p.gamma >= 2.0:
        raise PoleError("disk_length_constant has a pole at gamma = 2")
    log_value = (
        (4.0 / g2 - 1.0) * math.log(2.0 * math.pi)
        - math.log(1.0 - g2 / 4.0)
        - 4.0 / g2 * log_gamma_abs(1.0 - g2 / 4.0)
    )
    return math.exp(log_value)


def u_bar(ap):
    """U-bar(alpha) = (2^{-g alpha/2} 2 pi / Gamma(1 - g^2/4))^{(2/g)(Q-alpha)} Gamma(g alpha/2 - g^2/4)."""
    g = ap.gamma
    if not ap.alpha > g / 2.0:
        raise DomainError(f"u_bar needs alpha > gamma/2 (got alpha = {ap.alpha}, gamma = {g})")
    if g >= 2.0:
        raise PoleError("u_bar: Gamma(1 - gamma^2/4) has a pole at gamma = 2")
    base = 2.0 ** (-g * ap.alpha / 2.0) * 2.0 * math.pi / gamma_fn(1.0 - g * g / 4.0)
    power = 2.0 / g * (ap.q - ap.alpha)
    return base ** power * gamma_fn(g * ap.alpha / 2.0 - g * g / 4.0)


def _disk_length_prefactor(ap):
    # (2/g) 2^{-alpha^2/2} U-bar(alpha)
    return 2.0 / ap.gamma * 2.0 ** (-ap.alpha ** 2 / 2.0) * u_bar(ap)


def disk_length_magnitude(ap, ell):
    """|M(alpha; ell)| = (2/g) 2^{-alpha^2/2} U-bar(alpha) ell^{(2/g)(alpha-Q)-1}."""
    if not ell > 0:
        raise DomainError(f"disk_length_magnitude needs ell > 0 (got {ell})")
    return _disk_length_prefactor(ap) * ell ** (2.0 / ap.gamma * (ap.alpha - ap.q) - 1.0)


# =============================================================================
# FZZ AREA LAW
# =============================================================================

def _fzz_shape(ap, name):
    _require_insertion(ap, name)
    s = ap.base.sin_term
    if not s > 0:
        raise DomainError(f"{name} needs sin(pi gamma^2/4) > 0 (gamma = {ap.gamma})")
    return 2.0 / ap.gamma * (ap.q - ap.alpha), s


def fzz_area_density(ap, x):
    """Inverse-gamma density, shape (2/g)(Q-alpha) and scale 1/(4 sin(pi g^2/4)), at length 1."""
    a0, s = _fzz_shape(ap, "fzz_area_density")
    if not x > 0:
        raise DomainError(f"fzz_area_density needs x > 0 (got {x})")
    log_value = (
        -a0 * math.log(4.0 * s) - log_gamma_abs(a0)
        - (a0 + 1.0) * math.log(x) - 1.0 / (4.0 * x * s)
    )
    return math.exp(log_value)


def fzz_laplace(ap, ell, mu, cfg=None):
    """
    Area Laplace transform of the one-insertion disk with boundary length ell:

        (2/g) 2^{-alpha^2/2} U-bar ell^{-1} (2/Gamma(a0)) (sqrt(mu/s)/2)^{a0} K_{a0}(ell sqrt(mu/s))
    """
    a0, s = _fzz_shape(ap, "fzz_laplace")
    if not ell > 0 or not mu > 0:
        raise DomainError(f"fzz_laplace needs ell, mu > 0 (got ell = {ell}, mu = {mu})")
    root = math.sqrt(mu / s)
    return (
        _disk_length_prefactor(ap) / ell
        * 2.0 / gamma_fn(a0) * (root / 2.0) ** a0
        * bessel_k(a0, ell * root, cfg)
    )


def fzz_area_survival(ap, ell):
    """P(area > 1) at boundary length ell: lower-incomplete-gamma ratio at ell^2/(4 s)."""
    a0, s = _fzz_shape(ap, "fzz_area_survival")
    if not ell > 0:
        raise DomainError(f"fzz_area_survival needs ell > 0 (got {ell})")
    return lower_incomplete_gamma(a0, ell * ell / (4.0 * s)) / gamma_fn(a0)


def welding_mass_integral(ap, eps, delta, cfg=None):
    """int_eps^delta ell |M(alpha; ell)|^2 P(area > 1 | ell) d ell, by quadrature in log ell."""
    cfg = cfg or DEFAULT_QUADRATURE
    if not 0 < eps < delta:
        raise DomainError(f"welding_mass_integral needs 0 < eps < delta (got {eps}, {delta})")

    def integrand(u):
        ell = math.exp(u)
        m = disk_length_magnitude(ap, ell)
        return ell * ell * m * m * fzz_area_survival(ap, ell)

    return quad_or_raise(integrand, math.log(eps), math.log(delta), cfg)


def welding_mass_asymptotic(ap):
    """Coefficient of log(delta/eps) in welding_mass_integral as eps, delta -> 0."""
    a0, s = _fzz_shape(ap, "welding_mass_asymptotic")
    c = _disk_length_prefactor(ap)
    return c * c * (4.0 * s) ** (-a0) / (a0 * gamma_fn(a0))


# =============================================================================
# GENERALIZED QUANTUM DISK
# =============================================================================

def _require_nonsimple(p, name):
    if not 4.0 < p.kappa_prime < 8.0:
        raise DomainError(f"{name} needs kappa' in (4, 8) (got {p.kappa_prime})")


def m_prime(p, mu):
    """M' = 2 (mu / (4 sin(pi g^2/4)))^{kappa'/8}."""
    _require_nonsimple(p, "m_prime")
    if not mu > 0:
        raise DomainError(f"m_prime needs mu > 0 (got {mu})")
    return 2.0 * (mu / (4.0 * p.sin_term)) ** (p.kappa_prime / 8.0)


def gqd_laplace(p, ell, mu, cfg=None):
    """Area transform of the length-ell generalized disk, normalized: K-bar_{4/kappa'}(ell M')."""
    if not ell > 0:
        raise DomainError(f"gqd_laplace needs ell > 0 (got {ell})")
    return bessel_k_bar(4.0 / p.kappa_prime, ell * m_prime(p, mu), cfg)


def gqd_area_weighted_laplace(p, ell, mu, cfg=None):
    """E[A e^{-mu A}] = 2 (kappa'/(4 mu Gamma(4/kappa'))) (M' ell/2)^{4/kappa'+1} K_{1-4/kappa'}(M' ell)."""
    if not ell > 0:
        raise DomainError(f"gqd_area_weighted_laplace needs ell > 0 (got {ell})")
    kp = p.kappa_prime
    z = ell * m_prime(p, mu)
    nu = 4.0 / kp
    return 2.0 * kp / (4.0 * mu * gamma_fn(nu)) * (z / 2.0) ** (nu + 1.0) * bessel_k(1.0 - nu, z, cfg)


def gqd_mean_area(p, ell):
    """mu -> 0 limit of the weighted transform: (kappa'/(16 s)) Gamma(1-4/kappa')/Gamma(4/kappa') ell^{8/kappa'}."""
    _require_nonsimple(p, "gqd_mean_area")
    kp = p.kappa_prime
    return (
        kp / (16.0 * p.sin_term)
        * gamma_fn(1.0 - 4.0 / kp) / gamma_fn(4.0 / kp)
        * ell ** (8.0 / kp)
    )


def gqd1_laplace(p, ell, mu, cfg=None):
    """Area transform of the one-point generalized disk: K-bar_{1-4/kappa'}(M' ell)."""
    if not ell > 0:
        raise DomainError(f"gqd1_laplace needs ell > 0 (got {ell})")
    return bessel_k_bar(1.0 - 4.0 / p.kappa_prime, ell * m_prime(p, mu), cfg)


def gqd1_tail_probability(p, x, cfg=None):
    """
    P(A > x) for the unit-length one-point generalized disk, by Talbot inversion
    of (1 - phi(mu)) / mu with phi evaluated from the complex K-bar series.
    """
    _require_nonsimple(p, "gqd1_tail_probability")
    if not x > 0:
        raise DomainError(f"gqd1_tail_probability needs x > 0 (got {x})")
    kp = p.kappa_prime
    nu = 1.0 - 4.0 / kp
    four_s = 4.0 * p.sin_term

    def transform(mu):
        mu = np.asarray(mu, dtype=np.complex128)
        z = 2.0 * np.exp(kp / 8.0 * np.log(mu / four_s))
        return (1.0 - bessel_k_bar_series(nu, z)) / mu

    return invert_laplace(transform, x, cfg or DEFAULT_INVERSION)


def gqd_length_density(p, ell):
    """Length law of the generalized disk, R'_gamma set to 1: ell^{-2 - g^2/4}."""
    _require_nonsimple(p, "gqd_length_density")
    if not ell > 0:
        raise DomainError(f"gqd_length_density needs ell > 0 (got {ell})")
    return ell ** (-2.0 - p.kappa / 4.0)


def gqd1_length_density(p, ell):
    """Length law of the one-point generalized disk: gqd_length_density times the mean area."""
    return gqd_length_density(p, ell) * gqd_mean_area(p, ell)


def gqd_tail_coefficient(p):
    """
    Area tail of the one-point generalized disk, P(A > x) ~ c x^{1 - kappa'/4}.

    Returns:
        (c, exponent) with c = Gamma(4/k')/(Gamma(2-4/k') Gamma(2-k'/4)) (4 s)^{1-k'/4}
    """
    _require_nonsimple(p, "gqd_tail_coefficient")
    kp = p.kappa_prime
    exponent = 1.0 - kp / 4.0
    coef = (
        gamma_fn(4.0 / kp) / (gamma_fn(2.0 - 4.0 / kp) * gamma_fn(2.0 - kp / 4.0))
        * (4.0 * p.sin_term) ** exponent
    )
    return coef, exponent


def fd_alpha_tail_exponent(ap):
    """-1 - k'/4 + 2 alpha/g; at alpha = gamma it equals the generalized disk exponent 1 - k'/4."""
    _require_nonsimple(ap.base, "fd_alpha_tail_exponent")
    return -1.0 - ap.base.kappa_prime / 4.0 + 2.0 * ap.alpha / ap.gamma


def fd_alpha_tail_coefficient(ap):
    """
    Tail of the alpha-inserted forested disk area, P(A > x) ~ c x^{fd_alpha_tail_exponent}.

    Returns:
        (c, exponent). Gamma(alpha g/2 - 4/k') has its pole at alpha = gamma, so only
        the exponent, not the coefficient, continues to the generalized disk case.
    """
    p = ap.base
    _require_nonsimple(p, "fd_alpha_tail_coefficient")
    kp = p.kappa_prime
    g = p.gamma
    ag = ap.alpha * g / 2.0
    exponent = fd_alpha_tail_exponent(ap)
    coef = (
        gamma_fn(ag - 4.0 / kp)
        / (gamma_fn(2.0 - ag + 4.0 / kp) * gamma_fn(2.0 * ap.alpha / g - kp / 4.0))
        * (4.0 * p.sin_term) ** exponent
    )
    return coef, exponent


# =============================================================================
# ANNULUS AND STABLE JUMP LAW
# =============================================================================

def frak_c(beta):
    """cos(pi (beta - 3/2)) / pi; equals cos(pi(4/g^2 - 1))/pi and cos(pi(g^2/4 - 1))/pi."""
    return math.cos(math.pi * (beta - 1.5)) / math.pi


def _require_beta(beta):
    if not 1.0 < beta < 2.0:
        raise DomainError(f"beta must lie in (1, 2) (got {beta})")


def annulus_mass(a, b, p):
    """Quantum annulus mass between boundary lengths a and b: C / (sqrt(ab)(a + b))."""
    if not a > 0 or not b > 0:
        raise DomainError(f"annulus_mass needs a, b > 0 (got {a}, {b})")
    beta = stable_index(p).beta
    return frak_c(beta) / (math.sqrt(a * b) * (a + b))


def levy_jump_density(beta, a, b):
    """Size-biased jump law under boundary length a: C (a/b)^{beta+1} / (a + b)."""
    _require_beta(beta)
    if not a > 0 or not b > 0:
        raise DomainError(f"levy_jump_density needs a, b > 0 (got {a}, {b})")
    return frak_c(beta) / (a + b) * (a / b) ** (beta + 1.0)


def qd_ratio_jump_density(beta, a, b):
    """The same law written as C b |QD(b)| / (sqrt(ab)(a+b)|QD(a)|), |QD(x)| = x^{-beta-3/2}."""
    _require_beta(beta)
    qd_a = a ** (-beta - 1.5)
    qd_b = b ** (-beta - 1.5)
    return frak_c(beta) * b * qd_b / (math.sqrt(a * b) * (a + b) * qd_a)


def jump_second_moment(beta, a, cfg=None):
    """
    int_0^inf b^2 levy_jump_density(beta, a, b) db by quadrature (exactly a^2).

    Both halves are substituted so the integrand is smooth: v = b^{2-beta} on (0, a),
    w = b^{1-beta} on (a, inf).
    """
    cfg = cfg or DEFAULT_QUADRATURE
    _require_beta(beta)
    c = frak_c(beta) * a ** (beta + 1.0)

    def near(v):
        b = v ** (1.0 / (2.0 - beta))
        return c / ((2.0 - beta) * (a + b))

    def far(w):
        b = w ** (1.0 / (1.0 - beta))
        return c * b / ((beta - 1.0) * (a + b))

    head = quad_or_raise(near, 0.0, a ** (2.0 - beta), cfg)
    tail = quad_or_raise(far, 0.0, a ** (1.0 - beta), cfg)
    return head + tail


def truncated_jump_second_moment(beta, a, floor, cfg=None):
    """a^2 minus the contribution of jumps below floor: the target when small jumps are not recorded."""
    cfg = cfg or DEFAULT_QUADRATURE
    _require_beta(beta)
    if floor <= 0:
        return a * a
    c = frak_c(beta) * a ** (beta + 1.0)
    # b^2 * density = c b^{1-beta} / (a + b); the algebraic weight carries b^{1-beta}
    below = quad_or_raise(lambda b: c / (a + b), 0.0, floor, cfg, weight="alg", wvar=(1.0 - beta, 0.0))
    return a * a - below


def hitting_inverse_mean(beta):
    """E[1 / tau_{-1}] = pi / sin(-pi beta) = Gamma(-beta) Gamma(1 + beta)."""
    _require_beta(beta)
    return math.pi / math.sin(-math.pi * beta)


def tau_ratio_mean(a, b):
    """E[tau_{-a} / tau_{-a-b}] under the unweighted first-passage law: a / (a + b)."""
    if not a > 0 or b < 0:
        raise DomainError(f"tau_ratio_mean needs a > 0, b >= 0 (got {a}, {b})")
    return a / (a + b)


# =============================================================================
# CONFORMAL RADIUS AND DILATION
# =============================================================================

def _require_cle_kappa(p, name):
    k = p.loop_kappa
    if not 8.0 / 3.0 < k < 8.0:
        raise DomainError(f"{name} needs kappa in (8/3, 8) (got {k})")
    return k


def dilation_constant(p):
    """(1/pi)(kappa/4 - 1) cot(pi(1 - 4/kappa)); limit formula within KAPPA4_LIMIT_BAND of 4."""
    k = _require_cle_kappa(p, "dilation_constant")
    u = 1.0 - 4.0 / k
    if abs(k - 4.0) < KAPPA4_LIMIT_BAND:
        return (1.0 - math.pi ** 2 * u * u / 3.0) / (math.pi ** 2 * (1.0 - u))
    return (k / 4.0 - 1.0) / (math.pi * math.tan(math.pi * u))


def cr_gap_mean(p):
    """E[B_1] = -d/dlambda E[CR^lambda] at 0 = 4 pi tan(pi u) / (u kappa), u = 1 - 4/kappa."""
    k = _require_cle_kappa(p, "cr_gap_mean")
    u = 1.0 - 4.0 / k
    if abs(k - 4.0) < KAPPA4_LIMIT_BAND:
        return math.pi ** 2 * (1.0 - u) * (1.0 + math.pi ** 2 * u * u / 3.0)
    return 4.0 * math.pi * math.tan(math.pi * u) / (u * k)


def cr_moment_pole(p):
    """Largest lambda where cos(pi sqrt s) vanishes: -1 + 2/kappa + 3 kappa/32."""
    k = _require_cle_kappa(p, "cr_moment_pole")
    return -1.0 + 2.0 / k + 3.0 * k / 32.0


def ssw_cr_moment(p, lam):
    """
    E[CR^lam] = -cos(4 pi/kappa) / cos(pi sqrt s), s = (1 - 4/kappa)^2 - 8 lam/kappa.

    Real lam must lie right of cr_moment_pole. Complex lam (scalar or array) is
    evaluated on the analytic continuation for Laplace inversion.
    """
    k = _require_cle_kappa(p, "ssw_cr_moment")
    numerator = -math.cos(4.0 * math.pi / k)
    if np.iscomplexobj(lam):
        s = (1.0 - 4.0 / k) ** 2 - 8.0 * np.asarray(lam) / k
        out = numerator * sec_pi_sqrt(s)
        return complex(out) if np.ndim(out) == 0 else out
    pole = cr_moment_pole(p)
    if lam == pole:
        raise PoleError(f"ssw_cr_moment has a pole at lambda = {pole}")
    if lam < pole:
        raise DivergenceError(f"E[CR^lambda] is infinite for lambda <= {pole:.6g} (got {lam})")
    s = (1.0 - 4.0 / k) ** 2 - 8.0 * lam / k
    return numerator / cos_pi_sqrt(s)


# =============================================================================
# CASCADE JUMP MEASURE
# =============================================================================

def _require_theta(theta):
    if not 0.5 < theta < 1.5 or theta == 1.0:
        raise DomainError(f"theta must lie in (1/2, 3/2) minus {{1}} (got {theta})")


def nu_theta_density(theta, x):
    """
    nu_theta(x) = (Gamma(theta+1)/pi) [ (x(1-x))^{-theta-1} on (1/2, 1),
                                        sin(pi(theta - 1/2)) (x(x-1))^{-theta-1} on (1, inf) ].
    """
    _require_theta(theta)
    if not x > 0.5:
        raise DomainError(f"nu_theta_density needs x > 1/2 (got {x})")
    if x == 1.0:
        raise PoleError("nu_theta_density is singular at x = 1")
    c = gamma_fn(theta + 1.0) / math.pi
    if x < 1.0:
        return c * (x * (1.0 - x)) ** (-theta - 1.0)
    return c * math.sin(math.pi * (theta - 0.5)) * (x * (x - 1.0)) ** (-theta - 1.0)


def nu_theta_mass_above(theta, x, cfg=None):
    """nu_theta((x, inf)) for x > 1."""
    cfg = cfg or DEFAULT_QUADRATURE
    _require_theta(theta)
    if not x > 1.0:
        raise DomainError(f"nu_theta_mass_above needs x > 1 (got {x}); mass near 1 is infinite")
    return quad_or_raise(lambda t: nu_theta_density(theta, t), x, math.inf, cfg)


def _second_difference(x, lam):
    # (x^lam - 1 - lam (x - 1)) / (x - 1)^2, with a Taylor series near x = 1
    d = x - 1.0
    if abs(d) < 1e-3:
        total = 0.0
        coef = lam * (lam - 1.0) / 2.0
        power = 1.0
        for k in range(2, 9):
            total += coef * power
            coef *= (lam - k) / (k + 1.0)
            power *= d
        return total
    return (x ** lam - 1.0 - lam * d) / (d * d)


def psi_theta(theta, lam, cfg=None):
    """
    Laplace exponent of the cascade's Levy process:

        Psi(lam) = (Gamma(2-theta)/(2 Gamma(2-2theta) sin(pi theta))
                    + Gamma(theta+1) B_{1/2}(-theta, 2-theta)/pi) lam
                   + int (x^lam - 1 + lam(1 - x)) nu_theta(dx)

    The integral is split at 1 and 2; the two halves touching 1 carry the algebraic
    weight |x - 1|^{1-theta} to quad's 'alg' rule.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    _require_theta(theta)
    if not lam > 0:
        raise DomainError(f"psi_theta needs lambda > 0 (got {lam})")
    if lam >= 2.0 * theta + 1.0:
        raise DivergenceError(f"psi_theta diverges for lambda >= 2 theta + 1 = {2.0 * theta + 1.0}")

    c = gamma_fn(theta + 1.0) / math.pi
    sin_right = math.sin(math.pi * (theta - 0.5))
    drift = (
        gamma_fn(2.0 - theta) / (2.0 * gamma_fn(2.0 - 2.0 * theta) * math.sin(math.pi * theta))
        + c * incomplete_beta_half(-theta, 2.0 - theta, continued=True)
    )

    def left(x):
        return c * _second_difference(x, lam) * x ** (-theta - 1.0)

    def middle(x):
        return c * sin_right * _second_difference(x, lam) * x ** (-theta - 1.0)

    def right(x):
        return c * sin_right * (x ** lam - 1.0 + lam * (1.0 - x)) * (x * (x - 1.0)) ** (-theta - 1.0)

    jump_part = (
        quad_or_raise(left, 0.5, 1.0, cfg, weight="alg", wvar=(0.0, 1.0 - theta))
        + quad_or_raise(middle, 1.0, 2.0, cfg, weight="alg", wvar=(1.0 - theta, 0.0))
        + quad_or_raise(right, 2.0, math.inf, cfg)
    )
    return drift * lam + jump_part


# =============================================================================
# NAMED CONSTANTS
# =============================================================================

class ConstantId(str, Enum):
    R_GAMMA = "R_gamma"
    U_BAR = "U_bar"
    R_BAR = "R_bar"
    M_PRIME = "M_prime"
    C_FD_RATIO = "C_fd_ratio"
    D_ALPHA = "D_alpha"
    JUMP_MOMENT = "jump_moment"
    C_GAMMA = "C_gamma"
    KTILDE_GAMMA = "Ktilde_gamma"
    K_GAMMA = "K_gamma"
    CPRIME_OVER_RPRIME2 = "Cprime_over_Rprime2"
    KPRIME_OVER_RPRIME2 = "Kprime_over_Rprime2"
    KTILDE_PRIME_OVER_RPRIME2 = "Ktilde_prime_over_Rprime2"
    FRAK_C = "frakC"
    DELTA_ALPHA = "Delta_alpha"
    WELDING_C = "welding_C"
    E_B1 = "E_B1"


# constants that need an insertion alpha
ALPHA_CONSTANTS = {
    ConstantId.U_BAR, ConstantId.R_BAR, ConstantId.D_ALPHA,
    ConstantId.JUMP_MOMENT, ConstantId.DELTA_ALPHA,
}


def _gamma_pair(g2):
    # Gamma(g^2/4) Gamma(1 - g^2/4)
    return gamma_fn(g2 / 4.0) * gamma_fn(1.0 - g2 / 4.0)


def _require_below_two(p, name):
    if not p.gamma < 2.0:
        raise PoleError(f"{name} needs gamma < 2 (got {p.gamma})")


def d_alpha(ap):
    """(2pi)^{2-2a/g} 2^{2-aQ+a^2/2} Gamma(2a/g - 4/g^2)/Gamma(2 - 4/g^2) Gamma(1-g^2/4)^{2a/g-2}."""
    g, q, a = ap.gamma, ap.q, ap.alpha
    _require_below_two(ap.base, "D_alpha")
    return (
        (2.0 * math.pi) ** (2.0 - 2.0 * a / g)
        * 2.0 ** (2.0 - a * q + a * a / 2.0)
        * gamma_fn(2.0 * a / g - 4.0 / (g * g)) / gamma_fn(2.0 - 4.0 / (g * g))
        * gamma_fn(1.0 - g * g / 4.0) ** (2.0 * a / g - 2.0)
    )


def jump_moment(ap):
    """E[sum |jump|^{2a/g}] over a unit stable excursion of index 4/g^2."""
    g, a = ap.gamma, ap.alpha
    _require_below_two(ap.base, "jump_moment")
    g2 = g * g
    if not 2.0 * a / g > 4.0 / g2:
        raise DivergenceError(f"jump_moment needs 2 alpha/gamma > 4/gamma^2 (got alpha = {a})")
    return (
        gamma_fn(1.0 - g2 / 4.0) * gamma_fn(2.0 * a / g - 4.0 / g2)
        / (gamma_fn(-4.0 / g2) * gamma_fn(g * a / 2.0 - g2 / 4.0))
    )


def c_gamma(p):
    _require_below_two(p, "C_gamma")
    g2 = p.kappa
    return (
        _gamma_pair(g2) / (4.0 * math.pi * (p.q - p.gamma) ** 2)
        * math.tan(math.pi * (4.0 / g2 - 1.0))
    )


def ktilde_gamma(p):
    _require_below_two(p, "Ktilde_gamma")
    return p.gamma * _gamma_pair(p.kappa) / (16.0 * math.pi ** 2 * (p.q - p.gamma))


def k_gamma(p):
    _require_below_two(p, "K_gamma")
    g2 = p.kappa
    return (
        p.gamma / 8.0 * _gamma_pair(g2) / (p.q - p.gamma) ** 4
        * math.tan(math.pi * (4.0 / g2 - 1.0))
    )


def kprime_over_rprime2(p):
    """-(2/g)^5 pi^{2-8/g^2} 2^{-8/g^2} Gamma(4/g^2-1)/Gamma(2-4/g^2) Gamma(1-g^2/4)^{8/g^2+2} tan pi(g^2/4-1)."""
    _require_nonsimple(p, "Kprime_over_Rprime2")
    g, g2 = p.gamma, p.kappa
    return -(
        (2.0 / g) ** 5
        * math.pi ** (2.0 - 8.0 / g2)
        * 2.0 ** (-8.0 / g2)
        * gamma_fn(4.0 / g2 - 1.0) / gamma_fn(2.0 - 4.0 / g2)
        * gamma_fn(1.0 - g2 / 4.0) ** (8.0 / g2 + 2.0)
        * math.tan(math.pi * (g2 / 4.0 - 1.0))
    )


def cprime_over_rprime2(p):
    # K' = C' pi g / (2 (Q - g)^2), the same relation as K_gamma and C_gamma
    return kprime_over_rprime2(p) * 2.0 * (p.q - p.gamma) ** 2 / (math.pi * p.gamma)


def ktilde_prime_over_rprime2(p):
    _require_nonsimple(p, "Ktilde_prime_over_Rprime2")
    kp = p.kappa_prime
    s = p.sin_term
    tail_coef, _ = gqd_tail_coefficient(p)
    mean_coef = kp / (16.0 * s) * gamma_fn(1.0 - 4.0 / kp) / gamma_fn(4.0 / kp)
    r_bar = reflection_coefficient(alpha_params(p, p.gamma))
    return tail_coef * mean_coef ** 2 * 8.0 * (p.q - p.gamma) ** 2 / (p.kappa * r_bar)


def welding_constant(p):
    """2^{3-g^2}/(g^2 Gamma(4/g^2)) (4 s)^{1-4/g^2} U-bar(g)^2 / R-bar(g)."""
    _require_below_two(p, "welding_C")
    g2 = p.kappa
    ap = alpha_params(p, p.gamma)
    u = u_bar(ap)
    return (
        2.0 ** (3.0 - g2) / (g2 * gamma_fn(4.0 / g2))
        * (4.0 * p.sin_term) ** (1.0 - 4.0 / g2)
        * u * u / reflection_coefficient(ap)
    )


def welding_constant_closed_form(p):
    """(Q - g) Gamma(g^2/4) Gamma(1 - g^2/4) / (4 g)."""
    _require_below_two(p, "welding_C")
    return (p.q - p.gamma) * _gamma_pair(p.kappa) / (4.0 * p.gamma)


def u_bar_squared_over_r_bar(p):
    """Closed form of U-bar(g)^2 / R-bar(g), used to cross-check the two structure constants."""
    _require_below_two(p, "U_bar^2/R_bar")
    g, g2 = p.gamma, p.kappa
    return (
        2.0 ** (g2 - 5.0) * g
        * (4.0 * p.sin_term) ** (4.0 / g2 - 1.0)
        * gamma_fn(g2 / 4.0) * (p.q - g) * gamma_fn(1.0 - g2 / 4.0) * gamma_fn(4.0 / g2)
    )


def eval_constant(constant_id, p, alpha=None, mu=None):
    """
    Value of a named constant.

    Args:
        constant_id: ConstantId or its string value
        p: LQGParams
        alpha: insertion, for the constants in ALPHA_CONSTANTS
        mu: area parameter, for M_prime

    Returns:
        float
    """
    try:
        cid = ConstantId(constant_id)
    except ValueError:
        raise DomainError(f"unknown constant '{constant_id}'") from None

    if cid in ALPHA_CONSTANTS:
        if alpha is None:
            raise DomainError(f"{cid.value} needs an insertion alpha")
        ap = alpha_params(p, alpha)

    if cid is ConstantId.R_GAMMA:
        return disk_length_constant(p)
    if cid is ConstantId.U_BAR:
        return u_bar(ap)
    if cid is ConstantId.R_BAR:
        return reflection_coefficient(ap)
    if cid is ConstantId.M_PRIME:
        if mu is None:
            raise DomainError("M_prime needs mu")
        return m_prime(p, mu)
    if cid is ConstantId.C_FD_RATIO:
        raise DomainError("C_fd_ratio is not determined by the welding identities; no value exists")
    if cid is ConstantId.D_ALPHA:
        return d_alpha(ap)
    if cid is ConstantId.JUMP_MOMENT:
        return jump_moment(ap)
    if cid is ConstantId.C_GAMMA:
        return c_gamma(p)
    if cid is ConstantId.KTILDE_GAMMA:
        return ktilde_gamma(p)
    if cid is ConstantId.K_GAMMA:
        return k_gamma(p)
    if cid is ConstantId.CPRIME_OVER_RPRIME2:
        return cprime_over_rprime2(p)
    if cid is ConstantId.KPRIME_OVER_RPRIME2:
        return kprime_over_rprime2(p)
    if cid is ConstantId.KTILDE_PRIME_OVER_RPRIME2:
        return ktilde_prime_over_rprime2(p)
    if cid is ConstantId.FRAK_C:
        return frak_c(stable_index(p).beta)
    if cid is ConstantId.DELTA_ALPHA:
        return delta_alpha(p, alpha)
    if cid is ConstantId.WELDING_C:
        return welding_constant(p)
    return cr_gap_mean(p)
