# cle_integrability/core/specfun.py
"""
Layer 1 — Special Functions

Self-contained special functions used by every closed-form law:
- Gamma function (Lanczos rational sum + reflection) and log|Gamma|
- Lower incomplete gamma, incomplete beta on (0, 1/2)
- Modified Bessel K_nu by quadrature of its cosh integral, and the normalized K-bar
- sin(pi sqrt s)/(pi sqrt s) and cos(pi sqrt s) as entire functions of s
- Fixed-Talbot numerical Laplace inversion with a refinement self-check

Every function here is pure; configuration bundles are frozen pydantic models.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import integrate, optimize

from cle_integrability.config import (
    QUAD_ABS_TOL, QUAD_REL_TOL, QUAD_MAX_SUBDIVISIONS, QUAD_TRUNCATION_BOUND,
    SERIES_WINDOW, SERIES_TERMS,
    INVERSION_NODES, INVERSION_TIME_SCALE, INVERSION_REFINE_FACTOR,
    INVERSION_SELF_CHECK_TOL,
)
from cle_integrability.core.errors import (
    ConvergenceError, DivergenceError, DomainError, PoleError,
)

log = logging.getLogger(__name__)


# =============================================================================
# CONFIGURATION BUNDLES
# =============================================================================

class QuadratureConfig(BaseModel):
    """Tolerances for adaptive quadrature."""
    model_config = ConfigDict(frozen=True)

    abs_tol: float = QUAD_ABS_TOL
    rel_tol: float = QUAD_REL_TOL
    max_subdivisions: int = QUAD_MAX_SUBDIVISIONS
    truncation_bound: float = QUAD_TRUNCATION_BOUND

    @field_validator("abs_tol", "rel_tol", "truncation_bound")
    @classmethod
    def _positive(cls, v):
        if not v > 0:
            raise ValueError("must be > 0")
        return v

    @field_validator("max_subdivisions")
    @classmethod
    def _at_least_one(cls, v):
        if v < 1:
            raise ValueError("must be >= 1")
        return v

    def halved(self):
        """Same bundle with both tolerances halved (two-resolution checks)."""
        return self.model_copy(update={"abs_tol": self.abs_tol / 2, "rel_tol": self.rel_tol / 2})


class InversionConfig(BaseModel):
    """Fixed-Talbot contour: M nodes and a multiplier on the contour radius 2M/5."""
    model_config = ConfigDict(frozen=True)

    contour_nodes: int = INVERSION_NODES
    time_scale: float = INVERSION_TIME_SCALE

    @field_validator("contour_nodes")
    @classmethod
    def _enough_nodes(cls, v):
        if v < 8:
            raise ValueError("contour_nodes must be >= 8")
        return v

    @field_validator("time_scale")
    @classmethod
    def _positive_scale(cls, v):
        if not v > 0:
            raise ValueError("time_scale must be > 0")
        return v


DEFAULT_QUADRATURE = QuadratureConfig()
DEFAULT_INVERSION = InversionConfig()


def quad_or_raise(func, lo, hi, cfg, points=None, **extra):
    """scipy quad that raises ConvergenceError instead of warning."""
    kwargs = dict(epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions, full_output=1)
    if points is not None:
        kwargs["points"] = points
    kwargs.update(extra)
    out = integrate.quad(func, lo, hi, **kwargs)
    if len(out) > 3:
        raise ConvergenceError(f"quadrature on [{lo}, {hi}] did not converge: {out[3]}")
    return out[0]


# =============================================================================
# GAMMA FUNCTION
# =============================================================================

# Lanczos approximation, g = 6.0246800407767296, 13 terms (exp(g)-scaled sum).
# Coefficients ordered from highest degree down.
_LANCZOS_G = 6.024680040776729583740234375
_LANCZOS_NUM = (
    0.006061842346248906525783753964555936883222,
    0.5098416655656676188125178644804694509993,
    19.51992788247617482847860966235652136208,
    449.9445569063168119446858607650988409623,
    6955.999602515376140356310115515198987526,
    75999.29304014542649875303443598909137092,
    601859.6171681098786670226533699352302507,
    3481712.15498064590882071018964774556468,
    14605578.08768506808414169982791359218571,
    43338889.32467613834773723740590533316085,
    86363131.28813859145546927288977868422342,
    103794043.1163445451906271053616070238554,
    56906521.91347156388090791033559122686859,
)
_LANCZOS_DENOM = (
    1.0, 66.0, 1925.0, 32670.0, 357423.0, 2637558.0, 13339535.0,
    45995730.0, 105258076.0, 150917976.0, 120543840.0, 39916800.0, 0.0,
)


def _lanczos_sum(x):
    """Rational sum num(x)/denom(x); evaluated in 1/x above 1 to keep powers bounded."""
    if x <= 1.0:
        num = den = 0.0
        for n, d in zip(_LANCZOS_NUM, _LANCZOS_DENOM):
            num = num * x + n
            den = den * x + d
        return num / den
    w = 1.0 / x
    num = den = 0.0
    for n, d in zip(reversed(_LANCZOS_NUM), reversed(_LANCZOS_DENOM)):
        num = num * w + n
        den = den * w + d
    return num / den


def _check_pole(x):
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at x = {x}")


def _sin_pi(x):
    """sin(pi x) with argument reduction mod 2."""
    r = math.fmod(x, 2.0)
    return math.sin(math.pi * r)


def gamma_fn(x):
    """
    Gamma function.

    Args:
        x: real, not a non-positive integer

    Returns:
        Gamma(x); rel. error below 1e-12 for |x| <= 50, inf past the overflow point
    """
    x = float(x)
    _check_pole(x)
    if x < 0.5:
        return math.pi / (_sin_pi(x) * gamma_fn(1.0 - x))
    if x > 171.62:
        return math.inf
    zgh = x + _LANCZOS_G - 0.5
    # split the power so (zgh/e)^(x-1/2) does not overflow before the sum scales it
    half = (zgh / math.e) ** ((x - 0.5) / 2.0)
    return _lanczos_sum(x) * half * half


def log_gamma_abs(x):
    """log|Gamma(x)|, usable far past the overflow point of gamma_fn."""
    x = float(x)
    _check_pole(x)
    if x < 0.5:
        return math.log(math.pi) - math.log(abs(_sin_pi(x))) - log_gamma_abs(1.0 - x)
    zgh = x + _LANCZOS_G - 0.5
    return math.log(_lanczos_sum(x)) + (x - 0.5) * (math.log(zgh) - 1.0)


def gamma_sign(x):
    """Sign of Gamma(x) (+1 or -1)."""
    x = float(x)
    _check_pole(x)
    if x > 0:
        return 1.0
    return 1.0 if int(math.floor(x)) % 2 == 0 else -1.0


# =============================================================================
# INCOMPLETE GAMMA AND BETA
# =============================================================================

def lower_incomplete_gamma(a, y):
    """
    Unnormalized lower incomplete gamma  int_0^y t^(a-1) e^(-t) dt.

    Power series below y = a + 1, continued fraction for the upper part above.
    """
    if not a > 0:
        raise DomainError(f"lower_incomplete_gamma needs a > 0 (got a = {a})")
    if y < 0:
        raise DomainError(f"lower_incomplete_gamma needs y >= 0 (got y = {y})")
    if y == 0:
        return 0.0
    log_prefactor = a * math.log(y) - y
    if y < a + 1.0:
        term = 1.0 / a
        total = term
        n = 0
        while abs(term) > 1e-17 * abs(total):
            n += 1
            term *= y / (a + n)
            total += term
            if n > 10_000:
                raise ConvergenceError(f"incomplete gamma series stalled at a={a}, y={y}")
        return math.exp(log_prefactor) * total
    # modified Lentz for Gamma(a, y)
    tiny = 1e-300
    b = y + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 10_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        d = tiny if abs(d) < tiny else d
        c = b + an / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    else:
        raise ConvergenceError(f"incomplete gamma fraction stalled at a={a}, y={y}")
    upper = math.exp(log_prefactor) * h
    return gamma_fn(a) - upper


def incomplete_beta_half(a, b, cfg=None, continued=False):
    """
    B_{1/2}(a, b) = int_0^{1/2} t^(a-1) (1-t)^(b-1) dt.

    For a > 0 the substitution u = t^a removes the endpoint singularity and the
    remaining smooth integrand goes to adaptive quadrature. With continued=True a
    non-integer a <= 0 is accepted and the analytic continuation in a is returned,
    from the termwise-integrated binomial series of (1-t)^(b-1).
    """
    cfg = cfg or DEFAULT_QUADRATURE
    if a <= 0:
        if not continued:
            raise DivergenceError(f"B_1/2(a, b) diverges at t = 0 for a <= 0 (got a = {a})")
        if a == math.floor(a):
            raise PoleError(f"continued B_1/2(a, b) has a pole at integer a = {a}")
        return _incomplete_beta_half_series(a, b)
    upper = 0.5 ** a
    inv_a = 1.0 / a

    def integrand(u):
        return (1.0 - u ** inv_a) ** (b - 1.0)

    return inv_a * quad_or_raise(integrand, 0.0, upper, cfg)


def _incomplete_beta_half_series(a, b, terms=80):
    # (1-t)^(b-1) = sum_j c_j t^j,  c_{j+1} = c_j (j + 1 - b) / (j + 1)
    total = 0.0
    c = 1.0
    for j in range(terms):
        total += c * 0.5 ** (a + j) / (a + j)
        c *= (j + 1.0 - b) / (j + 1.0)
    return total


# =============================================================================
# MODIFIED BESSEL FUNCTION OF THE SECOND KIND
# =============================================================================

def _log_cosh(z):
    z = abs(z)
    return z + math.log1p(math.exp(-2.0 * z)) - math.log(2.0)


def bessel_k(nu, x, cfg=None):
    """
    K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.

    The log-integrand g(t) = -x (cosh t - 1) + log cosh(nu t) is shifted by its
    peak before integration; the range is cut where g has fallen by log(abs_tol).
    Returns 0.0 once exp(-x) underflows.
    """
    cfg = cfg or DEFAULT_QUADRATURE
    if not x > 0:
        raise DomainError(f"bessel_k needs x > 0 (got x = {x})")
    nu = abs(float(nu))

    def g(t):
        return -2.0 * x * math.sinh(0.5 * t) ** 2 + _log_cosh(nu * t)

    # peak: nu tanh(nu t) = x sinh t has a positive root only when nu^2 > x
    t_peak = 0.0
    if nu * nu > x:
        hi = math.asinh(nu / x)
        lo = min(1e-8, 0.5 * hi)
        t_peak = optimize.brentq(lambda t: nu * math.tanh(nu * t) - x * math.sinh(t), lo, hi)
    g_peak = g(t_peak)
    drop = math.log(cfg.abs_tol)

    t_hi = t_peak + 1.0
    while g(t_hi) - g_peak > drop and t_hi < cfg.truncation_bound:
        t_hi = min(2.0 * t_hi, cfg.truncation_bound)
    if g(t_hi) - g_peak > drop:
        t_cut = t_hi
        log.warning("bessel_k: truncation bound %.1f reached at nu=%g, x=%g", t_hi, nu, x)
    else:
        t_cut = optimize.brentq(lambda t: g(t) - g_peak - drop, t_peak, t_hi)

    points = [t_peak] if 0.0 < t_peak < t_cut else None
    integral = quad_or_raise(lambda t: math.exp(g(t) - g_peak), 0.0, t_cut, cfg, points=points)
    log_value = g_peak - x + math.log(integral)
    if log_value < -745.0:
        return 0.0
    return math.exp(log_value)


def bessel_k_bar(nu, x, cfg=None):
    """
    Normalized K_nu: (2^(1-nu) / Gamma(nu)) x^nu K_nu(x), equal to 1 at x = 0.

    For nu > 0 this is the Laplace transform of a probability law, so it lies in (0, 1].
    """
    if not nu > 0:
        raise DomainError(f"bessel_k_bar needs nu > 0 (got nu = {nu})")
    if x < 0:
        raise DomainError(f"bessel_k_bar needs x >= 0 (got x = {x})")
    if x == 0:
        return 1.0
    k = bessel_k(nu, x, cfg)
    if k == 0.0:
        return 0.0
    log_value = (1.0 - nu) * math.log(2.0) - log_gamma_abs(nu) + nu * math.log(x) + math.log(k)
    return math.exp(log_value)


def bessel_k_bar_series(nu, z, terms=40):
    """
    K-bar_nu(z) from the ascending series, for non-integer nu in (0, 1) and
    complex z on the principal branch:

        Gamma(1-nu) [ sum (z/2)^(2n) / (n! Gamma(n-nu+1))
                      - (z/2)^(2nu) sum (z/2)^(2n) / (n! Gamma(n+nu+1)) ]

    Accepts numpy arrays. Meant for moderate |z| (a few units).
    """
    if not 0 < nu < 1:
        raise DomainError(f"bessel_k_bar_series needs 0 < nu < 1 (got nu = {nu})")
    z = np.asarray(z, dtype=np.complex128)
    half = z / 2.0
    w = half * half
    a_coef = np.empty(terms)
    b_coef = np.empty(terms)
    a_coef[0] = 1.0 / gamma_fn(1.0 - nu)
    b_coef[0] = 1.0 / gamma_fn(1.0 + nu)
    for n in range(terms - 1):
        a_coef[n + 1] = a_coef[n] / ((n + 1.0) * (n + 1.0 - nu))
        b_coef[n + 1] = b_coef[n] / ((n + 1.0) * (n + 1.0 + nu))
    sum_a = np.zeros_like(w)
    sum_b = np.zeros_like(w)
    for n in range(terms - 1, -1, -1):
        sum_a = sum_a * w + a_coef[n]
        sum_b = sum_b * w + b_coef[n]
    with np.errstate(divide="ignore", invalid="ignore"):
        singular = np.where(half == 0, 0.0, np.exp(2.0 * nu * np.log(half)))
    return gamma_fn(1.0 - nu) * (sum_a - singular * sum_b)


# =============================================================================
# TRIG OF SQUARE ROOT AS ENTIRE FUNCTIONS OF s
# =============================================================================

def _series(s, odd):
    # sum_k (-pi^2 s)^k / (2k+1)!  (odd)   or   sum_k (-pi^2 s)^k / (2k)!
    u = -math.pi ** 2 * s
    term = np.ones_like(s)
    total = np.ones_like(s)
    for k in range(1, SERIES_TERMS):
        denom = (2 * k) * (2 * k + 1) if odd else (2 * k - 1) * (2 * k)
        term = term * u / denom
        total = total + term
    return total


def _entire_of_sqrt(s, odd):
    arr = np.asarray(s)
    scalar = arr.ndim == 0
    is_complex = np.iscomplexobj(arr)
    arr = np.atleast_1d(arr).astype(np.complex128 if is_complex else np.float64)
    out = np.empty_like(arr)
    small = np.abs(arr) < SERIES_WINDOW
    out[small] = _series(arr[small], odd)
    big = ~small
    if is_complex:
        r = np.pi * np.sqrt(arr[big])
        out[big] = np.sin(r) / r if odd else np.cos(r)
    else:
        vals = arr[big]
        pos = vals > 0
        r_pos = np.pi * np.sqrt(vals[pos])
        r_neg = np.pi * np.sqrt(-vals[~pos])
        res = np.empty_like(vals)
        res[pos] = np.sin(r_pos) / r_pos if odd else np.cos(r_pos)
        res[~pos] = np.sinh(r_neg) / r_neg if odd else np.cosh(r_neg)
        out[big] = res
    if scalar:
        v = out[0]
        return complex(v) if is_complex else float(v)
    return out


def sinc_pi_sqrt(s):
    """sin(pi sqrt s) / (pi sqrt s), entire in s (sinh form for s < 0)."""
    return _entire_of_sqrt(s, odd=True)


def cos_pi_sqrt(s):
    """cos(pi sqrt s), entire in s (cosh form for s < 0)."""
    return _entire_of_sqrt(s, odd=False)


def sec_pi_sqrt(s):
    """
    1 / cos(pi sqrt s) for complex s without overflow.

    With w = pi sqrt(s) taken in the upper half plane, sec w = 2 e^{iw} / (1 + e^{2iw})
    and |e^{iw}| <= 1.
    """
    w = np.pi * np.sqrt(np.asarray(s, dtype=np.complex128))
    w = np.where(w.imag < 0, -w, w)
    e = np.exp(1j * w)
    return 2.0 * e / (1.0 + e * e)


# =============================================================================
# NUMERICAL LAPLACE INVERSION (FIXED TALBOT)
# =============================================================================

def _talbot(transform, t, nodes, time_scale):
    """Fixed Talbot rule on an array of times; the transform must accept complex arrays."""
    rho = time_scale * 2.0 * nodes / 5.0
    theta = np.arange(1, nodes) * np.pi / nodes
    cot = 1.0 / np.tan(theta)
    shape = theta * (cot + 1j)
    sigma = theta + (theta * cot - 1.0) * cot

    scale = rho / t[:, None]
    p = scale * shape[None, :]
    p0 = rho / t
    values = np.asarray(transform(p), dtype=np.complex128)
    value0 = np.asarray(transform(p0.astype(np.complex128)), dtype=np.complex128)

    body = np.real(np.exp(t[:, None] * p) * values * (1.0 + 1j * sigma[None, :])).sum(axis=1)
    head = 0.5 * np.real(np.exp(rho) * value0)
    return rho / (nodes * t) * (head + body)


def invert_laplace(transform, t, cfg=None):
    """
    f(t) from its Laplace transform F by the fixed Talbot contour.

    The rule is re-run with ceil(1.5 M) nodes and the two results must agree to
    INVERSION_SELF_CHECK_TOL (absolute).

    Args:
        transform: F(p), vectorized over complex numpy arrays
        t: positive time or array of times
        cfg: InversionConfig

    Returns:
        float or numpy array of f(t)
    """
    cfg = cfg or DEFAULT_INVERSION
    t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    if np.any(t_arr <= 0):
        raise DomainError("Laplace inversion needs t > 0")
    coarse = _talbot(transform, t_arr, cfg.contour_nodes, cfg.time_scale)
    refined_nodes = int(math.ceil(INVERSION_REFINE_FACTOR * cfg.contour_nodes))
    fine = _talbot(transform, t_arr, refined_nodes, cfg.time_scale)
    gap = np.abs(coarse - fine)
    if not np.all(np.isfinite(coarse)) or np.max(gap) > INVERSION_SELF_CHECK_TOL:
        worst = int(np.nanargmax(np.where(np.isfinite(gap), gap, np.inf)))
        raise ConvergenceError(
            f"Talbot inversion unstable at t = {t_arr[worst]:.6g}: "
            f"M={cfg.contour_nodes} vs M={refined_nodes} differ by {gap[worst]:.3g}"
        )
    log.debug("talbot self-check max gap %.3g over %d times", float(np.max(gap)), t_arr.size)
    if np.ndim(t) == 0:
        return float(coarse[0])
    return coarse


def invert_laplace_cdf(phi, b, cfg=None):
    """
    CDF value F(b) of a sub-probability law from its Laplace transform phi,
    by inverting phi(lambda)/lambda; clipped to [0, 1].
    """
    def transform(p):
        return phi(p) / p

    values = invert_laplace(transform, b, cfg)
    return np.clip(values, 0.0, 1.0) if np.ndim(values) else min(max(values, 0.0), 1.0)
