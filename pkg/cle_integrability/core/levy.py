# cle_integrability/core/levy.py
"""
Layer 4 — Stable Levy Simulation

Spectrally positive beta-stable process with Levy measure 1_{x>0} x^{-beta-1} dx:
- Jumps above a cutoff eps as a compound Poisson stream (rate eps^-beta / beta,
  Pareto sizes by inverse CDF), compensated by the drift -eps^{1-beta}/(beta-1)
- Small jumps either dropped (drift_only) or replaced by a Brownian component
  with variance rate eps^{2-beta}/(2-beta) (gaussian_approx)
- First passage below -a detected exactly between jumps
- Monte-Carlo estimators for the hitting identities and the tau^-1 weighted jump law

Randomness flows only through numpy Generators built from SeedSequence(seed).spawn(n),
one per replica, aggregated in replica order.
"""

import logging
import math
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator
from scipy import optimize, stats

from cle_integrability.config import (
    DEFAULT_SEED, LEVY_JUMP_CUTOFF, LEVY_SMALL_JUMP_MODE, LEVY_ADAPTIVE_CUTOFF,
    LEVY_MAX_PATH_TIME, LEVY_BLOCK_SIZE, LEVY_RESCALE_BAND, LEVY_BIN_CUTOFF_MULTIPLE,
)
from cle_integrability.core.errors import DomainError, RejectionBudgetExceeded, SimulationTimeout
from cle_integrability.core.formulas import DensityCurve

log = logging.getLogger(__name__)

# two-sample KS critical coefficient c(alpha) at alpha = 0.01
KS_C_ONE_PERCENT = 1.628
# rejection attempts for a conditioned Brownian endpoint or hit time
_MAX_BRIDGE_TRIES = 1000


# =============================================================================
# CONFIGURATION AND RESULT TYPES
# =============================================================================

class LevySimConfig(BaseModel):
    """Simulation knobs for one stable index beta."""
    model_config = ConfigDict(frozen=True)

    beta: float
    jump_cutoff_eps: float = LEVY_JUMP_CUTOFF
    small_jump_mode: Literal["drift_only", "gaussian_approx"] = LEVY_SMALL_JUMP_MODE
    rng_seed: int = DEFAULT_SEED
    max_path_time: float = LEVY_MAX_PATH_TIME
    adaptive_cutoff: bool = LEVY_ADAPTIVE_CUTOFF

    @field_validator("beta")
    @classmethod
    def _beta_range(cls, v):
        if not 1.0 < v < 2.0:
            raise ValueError("beta must lie in (1, 2)")
        return v

    @field_validator("jump_cutoff_eps")
    @classmethod
    def _eps_range(cls, v):
        if not 0.0 < v <= 1.0:
            raise ValueError("jump_cutoff_eps must lie in (0, 1]")
        return v

    @field_validator("rng_seed")
    @classmethod
    def _seed_range(cls, v):
        if not 0 <= v < 2 ** 64:
            raise ValueError("rng_seed must be an unsigned 64-bit integer")
        return v

    @field_validator("max_path_time")
    @classmethod
    def _positive_time(cls, v):
        if not v > 0:
            raise ValueError("max_path_time must be > 0")
        return v


class JumpRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    time: float
    size: float


class LevyPath:
    """One simulated path: jump times and sizes up to the stopping time."""

    def __init__(self, jump_times, jump_sizes, tau_a, terminal_level, passage_times=None):
        self.jump_times = np.asarray(jump_times, dtype=np.float64)
        self.jump_sizes = np.asarray(jump_sizes, dtype=np.float64)
        self.tau_a = tau_a
        self.terminal_level = terminal_level
        self.passage_times = dict(passage_times or {})

    @property
    def jumps(self):
        return [JumpRecord(time=float(t), size=float(s)) for t, s in zip(self.jump_times, self.jump_sizes)]

    @property
    def n_jumps(self):
        return self.jump_sizes.size

    def summary(self):
        return {
            "tau_a": self.tau_a,
            "terminal_level": self.terminal_level,
            "n_jumps": int(self.n_jumps),
            "largest_jump": float(self.jump_sizes.max()) if self.n_jumps else 0.0,
        }


class MCEstimate:
    """Sample mean with its standard error."""

    def __init__(self, mean, stderr, n_replicas):
        if stderr < 0:
            raise DomainError(f"stderr must be >= 0 (got {stderr})")
        if n_replicas < 1:
            raise DomainError(f"n_replicas must be positive (got {n_replicas})")
        self.mean = float(mean)
        self.stderr = float(stderr)
        self.n_replicas = int(n_replicas)

    @classmethod
    def from_samples(cls, samples):
        x = np.asarray(samples, dtype=np.float64)
        n = x.size
        stderr = float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(x.mean(), stderr, n)

    def within(self, target, n_sigma=3.0, slack=0.0):
        return abs(self.mean - target) <= n_sigma * self.stderr + slack

    def summary(self):
        return {"mean": self.mean, "stderr": self.stderr, "n_replicas": self.n_replicas}

    def __repr__(self):
        return f"MCEstimate(mean={self.mean:.6g}, stderr={self.stderr:.3g}, n={self.n_replicas})"


def replica_streams(seed, n):
    """One independent Generator per replica, derived from the master seed."""
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(n)]


def require_replicas(n, minimum=100):
    if n < minimum:
        raise DomainError(f"need at least {minimum} replicas (got {n})")


# =============================================================================
# PATH SIMULATION
# =============================================================================

def _segment_rates(beta, eps):
    rate = eps ** (-beta) / beta
    drift = -(eps ** (1.0 - beta)) / (beta - 1.0)
    var_rate = eps ** (2.0 - beta) / (2.0 - beta)
    return rate, drift, var_rate


def _conditioned_hit_time(distance, drift, var_rate, window, rng):
    """Drifted-Brownian first passage over `distance`, conditioned to occur within `window`."""
    mean = distance / -drift
    shape = distance * distance / var_rate
    for _ in range(_MAX_BRIDGE_TRIES):
        h = rng.wald(mean, shape)
        if h <= window:
            return h
    # Rare window: invert the inverse-Gaussian CDF restricted to (0, window].
    law = stats.invgauss(mean / shape, scale=shape)
    mass = law.cdf(window)
    if not mass > 0.0:
        raise RejectionBudgetExceeded(
            f"passage over {distance:.4g} has no mass within {window:.4g} (mean {mean:.4g})"
        )
    log.debug("bridge rejection gave up; truncated inverse CDF with window mass %.3g", mass)
    target = rng.random() * mass
    return optimize.brentq(lambda h: law.cdf(h) - target, 0.0, window)


class _PathState:
    __slots__ = ("x", "t", "times", "sizes")

    def __init__(self):
        self.x = 0.0
        self.t = 0.0
        self.times = []
        self.sizes = []


def _run_to_level(state, level, depth, cfg, rng):
    """Advance state until the path first reaches `level` (< state.x); state.x ends at level."""
    beta = cfg.beta
    gaussian = cfg.small_jump_mode == "gaussian_approx"
    lo_band, hi_band = LEVY_RESCALE_BAND
    n = LEVY_BLOCK_SIZE

    while True:
        dist = state.x - level
        scale = max(1.0, dist / depth) if cfg.adaptive_cutoff else 1.0
        eps = cfg.jump_cutoff_eps * scale
        rate, drift, var_rate = _segment_rates(beta, eps)

        waits = rng.exponential(1.0 / rate, n)
        sizes = eps * (1.0 - rng.random(n)) ** (-1.0 / beta)
        moves = drift * waits
        if gaussian:
            moves = moves + rng.standard_normal(n) * np.sqrt(var_rate * waits)
        carried = np.concatenate(([0.0], np.cumsum(sizes[:-1])))
        pre = state.x + np.cumsum(moves) + carried
        start = np.concatenate(([state.x], pre[:-1] + sizes[:-1]))
        post = pre + sizes

        crossed = pre <= level
        if gaussian:
            gap_start = start - level
            gap_end = np.maximum(pre - level, 0.0)
            bridge = np.exp(-2.0 * gap_start * gap_end / (var_rate * waits))
            crossed |= rng.random(n) < bridge
        k_cross = int(np.argmax(crossed)) if crossed.any() else n

        k_band = n
        if cfg.adaptive_cutoff:
            # restart once the cutoff the new distance calls for leaves the band
            ratio = np.maximum(1.0, (post - level) / depth) / scale
            outside = (ratio < lo_band) | (ratio > hi_band)
            if outside.any():
                k_band = int(np.argmax(outside))

        clock = state.t + np.cumsum(waits)
        if k_cross <= k_band and k_cross < n:
            interval_start = state.t if k_cross == 0 else clock[k_cross - 1]
            distance = start[k_cross] - level
            if gaussian:
                h = _conditioned_hit_time(distance, drift, var_rate, waits[k_cross], rng)
            else:
                h = distance / -drift
            state.times.append(clock[:k_cross])
            state.sizes.append(sizes[:k_cross])
            state.t = interval_start + h
            state.x = level
            if state.t > cfg.max_path_time:
                raise SimulationTimeout(f"first passage to {level} at t = {state.t:.4g} exceeds max_path_time")
            return

        stop = k_band + 1 if k_band < n else n
        state.times.append(clock[:stop])
        state.sizes.append(sizes[:stop])
        state.t = clock[stop - 1]
        state.x = post[stop - 1]
        if state.t > cfg.max_path_time:
            raise SimulationTimeout(
                f"no first passage to {level} before max_path_time = {cfg.max_path_time:.4g}"
            )


def simulate_to_hitting(a, cfg, rng, levels=()):
    """
    Simulate the compensated process from 0 until it first reaches -a.

    Args:
        a: target depth > 0
        cfg: LevySimConfig
        rng: numpy Generator
        levels: intermediate depths in (0, a) whose first-passage times are recorded

    Returns:
        LevyPath with tau_a, terminal_level = -a and passage_times {depth: time}
    """
    if not a > 0:
        raise DomainError(f"simulate_to_hitting needs a > 0 (got {a})")
    targets = sorted(set(float(l) for l in levels if 0 < l < a)) + [float(a)]
    state = _PathState()
    passage = {}
    previous = 0.0
    for depth in targets:
        _run_to_level(state, -depth, depth - previous, cfg, rng)
        passage[depth] = state.t
        previous = depth
    times = np.concatenate(state.times) if state.times else np.empty(0)
    sizes = np.concatenate(state.sizes) if state.sizes else np.empty(0)
    return LevyPath(times, sizes, tau_a=state.t, terminal_level=-float(a), passage_times=passage)


def simulate_unconditioned(horizon, cfg, rng):
    """Path on [0, horizon] with the fixed cutoff; tau_a is nan, terminal_level is zeta_T."""
    if not horizon > 0:
        raise DomainError(f"simulate_unconditioned needs horizon > 0 (got {horizon})")
    beta = cfg.beta
    eps = cfg.jump_cutoff_eps
    rate, drift, var_rate = _segment_rates(beta, eps)
    n_jumps = rng.poisson(rate * horizon)
    times = np.sort(rng.uniform(0.0, horizon, n_jumps))
    sizes = eps * (1.0 - rng.random(n_jumps)) ** (-1.0 / beta)
    level = sizes.sum() + drift * horizon
    if cfg.small_jump_mode == "gaussian_approx":
        level += rng.standard_normal() * math.sqrt(var_rate * horizon)
    return LevyPath(times, sizes, tau_a=math.nan, terminal_level=float(level))


# =============================================================================
# MONTE-CARLO ESTIMATORS
# =============================================================================

def estimate_tau_ratio(a, b, cfg, n):
    """MC mean of tau_{-a} / tau_{-a-b}, both read off one path run to -(a+b)."""
    require_replicas(n)
    if not a > 0 or b < 0:
        raise DomainError(f"estimate_tau_ratio needs a > 0, b >= 0 (got {a}, {b})")
    if b == 0:
        return MCEstimate(1.0, 0.0, n)
    ratios = np.empty(n)
    for i, rng in enumerate(replica_streams(cfg.rng_seed, n)):
        path = simulate_to_hitting(a + b, cfg, rng, levels=(a,))
        ratios[i] = path.passage_times[float(a)] / path.tau_a
    return MCEstimate.from_samples(ratios)


def sample_hitting_times(a, cfg, n):
    require_replicas(n, minimum=1)
    return np.array([simulate_to_hitting(a, cfg, rng).tau_a for rng in replica_streams(cfg.rng_seed, n)])


def estimate_inverse_mean(cfg, n):
    """MC mean of 1 / tau_{-1}."""
    require_replicas(n)
    return MCEstimate.from_samples(1.0 / sample_hitting_times(1.0, cfg, n))


def simulate_weighted_paths(a, cfg, n):
    paths = [simulate_to_hitting(a, cfg, rng) for rng in replica_streams(cfg.rng_seed, n)]
    weights = np.array([1.0 / p.tau_a for p in paths])
    return paths, weights


def _check_bins(edges, cfg):
    floor = LEVY_BIN_CUTOFF_MULTIPLE * cfg.jump_cutoff_eps
    if edges[0] < floor:
        log.warning(
            "bin edge %.4g lies below %.0f x eps = %.4g; truncation bias is not negligible",
            edges[0], LEVY_BIN_CUTOFF_MULTIPLE, floor,
        )


def weighted_jump_histogram(a, bins, cfg, n, paths=None, weights=None):
    """
    Jump-count density (intensity of jump sizes) under the tau^-1 reweighted law.

    Each path contributes, per bin, its jump count weighted by 1/tau_{-a}; the bin
    totals are divided by the summed weights (self-normalized) and the bin width.
    Standard errors come from the delta method for a ratio of means.

    Returns:
        DensityCurve at bin midpoints, with stderr and effective sample size
    """
    require_replicas(n)
    edges = np.asarray(bins, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2 or not np.all(np.diff(edges) > 0):
        raise DomainError("bins must be an increasing array of at least two edges")
    _check_bins(edges, cfg)
    if paths is None:
        paths, weights = simulate_weighted_paths(a, cfg, n)

    counts = np.stack([np.histogram(p.jump_sizes, bins=edges)[0] for p in paths]).astype(np.float64)
    w = np.asarray(weights)
    y = counts * w[:, None]
    w_mean = w.mean()
    ratio = y.mean(axis=0) / w_mean
    resid = y - ratio[None, :] * w[:, None]
    stderr = resid.std(axis=0, ddof=1) / (math.sqrt(len(w)) * w_mean)

    widths = np.diff(edges)
    occupied = counts > 0
    ess = np.array([
        (w[occupied[:, j]].sum() ** 2 / (w[occupied[:, j]] ** 2).sum()) if occupied[:, j].any() else 0.0
        for j in range(widths.size)
    ])
    mids = 0.5 * (edges[:-1] + edges[1:])
    return DensityCurve(mids, ratio / widths, stderr=stderr / widths, effective_samples=ess,
                        label=f"weighted jump density beta={cfg.beta} a={a}")


def weighted_second_moment(a, cfg, n, floor=0.0):
    """
    Self-normalized MC estimate of int b^2 under the reweighted jump law, over
    jumps of size >= floor (exactly a^2 when floor = 0 and nothing is truncated).
    """
    require_replicas(n)
    paths, w = simulate_weighted_paths(a, cfg, n)
    y = np.array([np.sum(p.jump_sizes[p.jump_sizes >= floor] ** 2) for p in paths]) * w
    ratio = y.mean() / w.mean()
    stderr = (y - ratio * w).std(ddof=1) / (math.sqrt(n) * w.mean())
    return MCEstimate(ratio, stderr, n)


def estimate_jump_intensity(b1, b2, horizon, cfg, n):
    """
    Mean number of jumps with size in [b1, b2] over [0, horizon] on the
    unconditioned process; the exact value is horizon (b1^-beta - b2^-beta) / beta.
    """
    require_replicas(n, minimum=1)
    if not cfg.jump_cutoff_eps <= b1 < b2:
        raise DomainError(f"need eps <= b1 < b2 (got {b1}, {b2}, eps = {cfg.jump_cutoff_eps})")
    counts = np.empty(n)
    for i, rng in enumerate(replica_streams(cfg.rng_seed, n)):
        sizes = simulate_unconditioned(horizon, cfg, rng).jump_sizes
        counts[i] = np.count_nonzero((sizes >= b1) & (sizes <= b2))
    return MCEstimate.from_samples(counts)


def expected_jump_count(beta, b1, b2, horizon):
    return horizon * (b1 ** (-beta) - b2 ** (-beta)) / beta


def estimate_terminal_mean(horizon, cfg, n):
    """Mean of zeta_T for the unconditioned compensated process (a martingale, so 0)."""
    require_replicas(n, minimum=1)
    levels = [simulate_unconditioned(horizon, cfg, rng).terminal_level
              for rng in replica_streams(cfg.rng_seed, n)]
    return MCEstimate.from_samples(levels)


def tau_scaling_ks(cfg, n, a=2.0):
    """
    Two-sample KS test of tau_{-a} / a^beta against tau_{-1} on independent replicas.

    Returns:
        dict with statistic, pvalue, critical value at the 1% level, and pass flag
    """
    require_replicas(n)
    if not a > 0:
        raise DomainError(f"tau_scaling_ks needs a > 0 (got {a})")
    streams = replica_streams(cfg.rng_seed, 2 * n)
    tau1 = np.array([simulate_to_hitting(1.0, cfg, rng).tau_a for rng in streams[:n]])
    tau_a = np.array([simulate_to_hitting(a, cfg, rng).tau_a for rng in streams[n:]])
    result = stats.ks_2samp(tau_a / a ** cfg.beta, tau1)
    critical = KS_C_ONE_PERCENT * math.sqrt(2.0 / n)
    return {
        "statistic": float(result.statistic),
        "pvalue": float(result.pvalue),
        "critical": critical,
        "pass": bool(result.statistic < critical),
    }
