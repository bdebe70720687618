# cle_integrability/core/params.py
"""
Layer 2 — Coupling Constants

The symbol table shared by every formula: gamma, Q, kappa, kappa', the stable
indices beta / theta / nu, and the insertion data alpha, lambda, W.

Loop parameter kappa in (0, 4] is the simple regime (gamma = sqrt(kappa));
kappa in (4, 8) is the non-simple regime (gamma = 4 / sqrt(kappa), kappa' = kappa).
"""

import math

from pydantic import BaseModel, ConfigDict

from cle_integrability.core.errors import DomainError


class LQGParams(BaseModel):
    """
    gamma in (0, 2]; q = gamma/2 + 2/gamma; kappa = gamma^2; kappa_prime = 16/gamma^2.

    loop_kappa is the CLE/SLE parameter the params were built from and `simple`
    says which regime formulas must use.
    """
    model_config = ConfigDict(frozen=True)

    gamma: float
    q: float
    kappa: float
    kappa_prime: float
    loop_kappa: float
    simple: bool

    @classmethod
    def from_gamma(cls, gamma, simple=True):
        if not 0 < gamma <= 2:
            raise DomainError(f"gamma must lie in (0, 2] (got {gamma})")
        kappa = gamma * gamma
        kappa_prime = 16.0 / kappa
        return cls(
            gamma=gamma,
            q=gamma / 2.0 + 2.0 / gamma,
            kappa=kappa,
            kappa_prime=kappa_prime,
            loop_kappa=kappa if simple else kappa_prime,
            simple=simple,
        )

    @property
    def sin_term(self):
        """sin(pi gamma^2 / 4), the scale of every area law."""
        return math.sin(math.pi * self.kappa / 4.0)

    def summary(self):
        return {
            "gamma": self.gamma, "Q": self.q, "kappa": self.kappa,
            "kappa_prime": self.kappa_prime, "loop_kappa": self.loop_kappa,
            "regime": "simple" if self.simple else "non-simple",
        }


class AlphaParams(BaseModel):
    """Insertion alpha with lambda = alpha^2/2 - Q alpha + 2 and W = 2 gamma (Q - alpha)."""
    model_config = ConfigDict(frozen=True)

    base: LQGParams
    alpha: float
    lam: float
    weight_w: float

    @property
    def gamma(self):
        return self.base.gamma

    @property
    def q(self):
        return self.base.q


class StableIndex(BaseModel):
    """beta = 4/kappa + 1/2, theta = 4/kappa, nu_looptree = 4/gamma^2 = kappa'/4."""
    model_config = ConfigDict(frozen=True)

    beta: float
    theta: float
    kappa_prime: float

    @property
    def nu_looptree(self):
        """Looptree index; defined only for kappa' in (4, 8)."""
        return _looptree_nu(self.kappa_prime)


def from_kappa(kappa):
    """
    Coupling constants for loop parameter kappa in (0, 8).

    kappa <= 4 gives gamma = sqrt(kappa); kappa > 4 gives gamma = 4/sqrt(kappa)
    and kappa_prime = kappa.
    """
    if not 0 < kappa < 8:
        raise DomainError(f"kappa must lie in (0, 8) (got {kappa})")
    if kappa <= 4:
        return LQGParams.from_gamma(math.sqrt(kappa), simple=True)
    p = LQGParams.from_gamma(4.0 / math.sqrt(kappa), simple=False)
    # keep the caller's kappa exactly rather than 16/gamma^2 after rounding
    return p.model_copy(update={"kappa_prime": kappa, "loop_kappa": kappa})


def lambda_of_alpha(p, alpha):
    return alpha * alpha / 2.0 - p.q * alpha + 2.0


def alpha_params(p, alpha):
    return AlphaParams(
        base=p,
        alpha=alpha,
        lam=lambda_of_alpha(p, alpha),
        weight_w=2.0 * p.gamma * (p.q - alpha),
    )


def alpha_for_lambda(p, lam):
    """
    The insertion alpha = Q - sqrt(Q^2 - 4 + 2 lambda) below Q solving lambda(alpha) = lambda.

    Raises DomainError when the discriminant is negative; the thickness MGF is then
    reached by analytic continuation in the formulas module.
    """
    disc = p.q * p.q - 4.0 + 2.0 * lam
    if disc < 0:
        raise DomainError(
            f"Q^2 - 4 + 2 lambda < 0 (lambda = {lam}, Q = {p.q}); "
            f"lambda must be >= {2.0 - p.q * p.q / 2.0}"
        )
    alpha = p.q - math.sqrt(disc)
    return AlphaParams(base=p, alpha=alpha, lam=lam, weight_w=2.0 * p.gamma * (p.q - alpha))


def delta_alpha(p, alpha):
    """Scaling dimension (alpha/2)(Q - alpha/2)."""
    return alpha / 2.0 * (p.q - alpha / 2.0)


def _looptree_nu(kappa_prime):
    if not 4 < kappa_prime < 8:
        raise DomainError(f"looptree index needs kappa' in (4, 8) (got {kappa_prime})")
    return kappa_prime / 4.0


def stable_index(p):
    """
    beta and theta from the loop parameter (needs kappa in (8/3, 8)). The looptree
    index nu_looptree raises DomainError unless kappa' is in (4, 8).
    """
    k = p.loop_kappa
    if not 8.0 / 3.0 < k < 8:
        raise DomainError(f"stable index needs kappa in (8/3, 8) (got {k})")
    theta = 4.0 / k
    return StableIndex(beta=theta + 0.5, theta=theta, kappa_prime=p.kappa_prime)


def looptree_index(p):
    """nu = 4/gamma^2 = kappa'/4, which lies in (1, 2) exactly when kappa' is in (4, 8)."""
    return _looptree_nu(p.kappa_prime)
