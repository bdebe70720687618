# cle_integrability/core/crrenewal.py
"""
Layer 7 — Conformal-Radius Renewal

The gap law B = -log CR between successive nested loops, recovered from its
moment formula E[e^{-lambda B}] = E[CR^lambda] by Talbot inversion:
- CDF on a log-spaced grid, upper end doubled until F >= CR_TAIL_TARGET
- exponential tail beyond the grid at the rate -lambda*, the first pole of the transform
- inverse-CDF sampling and the renewal count N(C) = max{n : B_1 + ... + B_n <= C}

The renewal rate E[N(C)]/C tends to the dilation constant.
"""

import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import integrate

from cle_integrability.config import (
    CR_GRID_NODES, CR_GRID_MIN, CR_TAIL_TARGET, RENEWAL_HORIZON_MULTIPLE,
)
from cle_integrability.core.errors import DomainError
from cle_integrability.core.formulas import (
    DensityCurve, cr_gap_mean, cr_moment_pole, ssw_cr_moment,
)
from cle_integrability.core.levy import MCEstimate, replica_streams
from cle_integrability.core.specfun import DEFAULT_INVERSION, invert_laplace_cdf

log = logging.getLogger(__name__)

_MAX_DOUBLINGS = 30
# partial sums within this relative distance of the horizon count as inside
_HORIZON_RTOL = 1e-12


class CRGapLaw(BaseModel):
    """Tabulated CDF of B (a DensityCurve of F over b) with an exponential tail past the last node."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kappa: Optional[float]
    curve: DensityCurve
    tail_rate: float

    @classmethod
    def point_mass(cls, g):
        """Degenerate law at g > 0 (deterministic renewal)."""
        if not g > 0:
            raise DomainError(f"point mass needs g > 0 (got {g})")
        return cls(kappa=None, curve=DensityCurve([float(g)], [1.0], label="point mass"), tail_rate=math.inf)

    @property
    def b(self):
        return self.curve.abscissae

    @property
    def cdf(self):
        return self.curve.values

    @property
    def is_point_mass(self):
        return len(self.curve) == 1

    @property
    def b_max(self):
        return float(self.b[-1])

    def summary(self):
        return {
            "kappa": self.kappa,
            "nodes": len(self.curve),
            "b_max": self.b_max,
            "F_at_b_max": float(self.cdf[-1]),
            "tail_rate": self.tail_rate,
        }


def _transform(p):
    def phi(lam):
        return ssw_cr_moment(p, np.asarray(lam, dtype=np.complex128))
    return phi


def build_cr_gap_law(p, grid=None, inv_cfg=None):
    """
    CDF of B from E[CR^lambda].

    Args:
        p: LQGParams with loop kappa in (8/3, 8)
        grid: increasing positive b values; default is CR_GRID_NODES log-spaced
              nodes on [CR_GRID_MIN, b_max] with F(b_max) >= CR_TAIL_TARGET
        inv_cfg: InversionConfig

    Returns:
        CRGapLaw
    """
    inv_cfg = inv_cfg or DEFAULT_INVERSION
    phi = _transform(p)
    tail_rate = -cr_moment_pole(p)

    if grid is None:
        b_max = 20.0 * cr_gap_mean(p)
        for _ in range(_MAX_DOUBLINGS):
            if invert_laplace_cdf(phi, b_max, inv_cfg) >= CR_TAIL_TARGET:
                break
            b_max *= 2.0
        else:
            raise DomainError(f"CDF never reached {CR_TAIL_TARGET} (last b_max = {b_max:.4g})")
        grid = np.geomspace(CR_GRID_MIN, b_max, CR_GRID_NODES)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid[0] <= 0 or not np.all(np.diff(grid) > 0):
        raise DomainError("grid must be increasing and positive")

    values = np.asarray(invert_laplace_cdf(phi, grid, inv_cfg), dtype=np.float64)
    dips = np.diff(values) < 0
    if dips.any():
        log.debug("cr gap CDF: %d non-monotone nodes flattened", int(dips.sum()))
        values = np.maximum.accumulate(values)
    log.info("cr gap law kappa=%.4g: %d nodes up to b=%.4g, F=%.6f",
             p.loop_kappa, grid.size, grid[-1], values[-1])
    curve = DensityCurve(grid, values, label=f"cr gap CDF, kappa={p.loop_kappa:.6g}")
    return CRGapLaw(kappa=p.loop_kappa, curve=curve, tail_rate=tail_rate)


def _with_origin(law):
    b = np.concatenate(([0.0], law.b))
    f = np.concatenate(([0.0], law.cdf))
    return b, f


def law_transform(law, lam):
    """Stieltjes transform int e^{-lam b} dF(b) = lam int e^{-lam b} F(b) db, tail included."""
    if law.is_point_mass:
        return math.exp(-lam * law.b_max)
    b, f = _with_origin(law)
    body = lam * integrate.simpson(np.exp(-lam * b) * f, x=b)
    edge = math.exp(-lam * b[-1])
    tail = edge - (1.0 - f[-1]) * lam * edge / (lam + law.tail_rate)
    return body + tail


def law_mean(law):
    """int (1 - F) db plus the exponential tail (1 - F(b_max)) / rate."""
    if law.is_point_mass:
        return law.b_max
    b, f = _with_origin(law)
    return integrate.simpson(1.0 - f, x=b) + (1.0 - f[-1]) / law.tail_rate


def law_second_moment(law):
    if law.is_point_mass:
        return law.b_max ** 2
    b, f = _with_origin(law)
    r = law.tail_rate
    b_max = b[-1]
    tail = 2.0 * (1.0 - f[-1]) * (b_max / r + 1.0 / (r * r))
    return integrate.simpson(2.0 * b * (1.0 - f), x=b) + tail


def law_to_frame(law):
    return law.curve.to_frame().rename(columns={"x": "b", "value": "F"})


def numerical_gap_mean(p, h=1e-5):
    """-phi'(0) by a central difference of E[CR^lambda]."""
    return -(ssw_cr_moment(p, h) - ssw_cr_moment(p, -h)) / (2.0 * h)


def sample_log_cr_gap(law, rng, size=None):
    """
    Inverse-CDF draws: bisection (searchsorted) on the table, linear interpolation
    between nodes, exponential tail past b_max.
    """
    if law.is_point_mass:
        return law.b_max if size is None else np.full(size, law.b_max)
    b = np.asarray(law.b)
    f = np.asarray(law.cdf)
    u = rng.random(size)
    u_arr = np.atleast_1d(u)
    out = np.empty_like(u_arr)

    below = u_arr < f[0]
    out[below] = b[0] * u_arr[below] / f[0] if f[0] > 0 else b[0]
    tail = u_arr >= f[-1]
    out[tail] = b[-1] + np.log((1.0 - f[-1]) / (1.0 - u_arr[tail])) / law.tail_rate

    mid = ~(below | tail)
    um = u_arr[mid]
    j = np.searchsorted(f, um, side="right")
    lo_f, hi_f = f[j - 1], f[j]
    frac = np.where(hi_f > lo_f, (um - lo_f) / np.where(hi_f > lo_f, hi_f - lo_f, 1.0), 0.0)
    out[mid] = b[j - 1] + frac * (b[j] - b[j - 1])
    return float(out[0]) if size is None else out


def renewal_count(law, horizon, rng):
    """N(C): number of partial sums of i.i.d. gaps that stay <= horizon."""
    mean = law_mean(law)
    block = int(2.0 * horizon / mean) + 16
    total = 0.0
    count = 0
    while True:
        gaps = sample_log_cr_gap(law, rng, size=block)
        sums = total + np.cumsum(gaps)
        inside = int(np.searchsorted(sums, horizon * (1.0 + _HORIZON_RTOL), side="right"))
        count += inside
        if inside < block:
            return count
        total = sums[-1]


def estimate_renewal_rate(law, horizon, replicas, seed):
    """MC mean of N(C)/C over independent replicas."""
    if not horizon > 0:
        raise DomainError(f"renewal horizon must be > 0 (got {horizon})")
    mean = law_mean(law)
    if horizon < RENEWAL_HORIZON_MULTIPLE * mean:
        log.warning("renewal horizon %.4g is below %.0f x E[B] = %.4g; edge bias is O(1/C)",
                    horizon, RENEWAL_HORIZON_MULTIPLE, RENEWAL_HORIZON_MULTIPLE * mean)
    rates = [renewal_count(law, horizon, rng) / horizon for rng in replica_streams(seed, replicas)]
    return MCEstimate.from_samples(rates)


def renewal_correction(law, horizon):
    """Second-order edge term (E[B^2]/(2 E[B]^2) - 1)/C of E[N(C)]/C."""
    mean = law_mean(law)
    return (law_second_moment(law) / (2.0 * mean * mean) - 1.0) / horizon
