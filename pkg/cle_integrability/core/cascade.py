# cle_integrability/core/cascade.py
"""
Layer 5 — Perimeter Cascade

Reads the jumps of a first-passage path as outermost-loop lengths:
- under the tau^-1 reweighted law the ranked jump sizes of zeta on [0, tau_{-a}]
  are the outermost loop lengths of a disk with boundary length a
- kappa in (8/3, 4) gives the quantum-length cascade, kappa' in (4, 8) the
  quantum-natural-time cascade; both use beta = 4/kappa + 1/2

No randomness is added here: every sample is a transform of levy.simulate_to_hitting.
"""

import logging
import math

import numpy as np
import pandas as pd
from scipy import stats

from cle_integrability.config import (
    CASCADE_MIN_EFFECTIVE_SAMPLES, LEVY_BIN_CUTOFF_MULTIPLE,
)
from cle_integrability.core.errors import DomainError
from cle_integrability.core.formulas import levy_jump_density, qd_ratio_jump_density
from cle_integrability.core.levy import (
    KS_C_ONE_PERCENT, LevySimConfig, require_replicas, simulate_weighted_paths,
    weighted_jump_histogram,
)
from cle_integrability.core.params import stable_index
from cle_integrability.core.specfun import DEFAULT_QUADRATURE, quad_or_raise

log = logging.getLogger(__name__)


class LoopLengthSample:
    """Outermost loop lengths of one disk, sorted decreasingly, with the path's tau^-1 weight."""

    def __init__(self, lengths, weight, boundary_length_a):
        if not weight > 0:
            raise DomainError(f"loop-length weight must be > 0 (got {weight})")
        self.lengths = np.sort(np.asarray(lengths, dtype=np.float64))[::-1]
        self.weight = float(weight)
        self.boundary_length_a = float(boundary_length_a)

    def __len__(self):
        return self.lengths.size

    def summary(self):
        return {
            "boundary_length": self.boundary_length_a,
            "loops": len(self),
            "largest": float(self.lengths[0]) if len(self) else 0.0,
            "weight": self.weight,
        }


class DensityCheckReport:
    """Binwise comparison of the simulated loop-length density with its closed forms."""

    def __init__(self, table, chi2, pvalue, identity_gap, underpopulated):
        self.table = table
        self.chi2 = chi2
        self.pvalue = pvalue
        self.identity_gap = identity_gap
        self.underpopulated = underpopulated

    @property
    def max_rel_discrepancy(self):
        return float(self.table["rel_error"].max())

    def passed(self, n_sigma=3.0, min_pvalue=0.01):
        within = (self.table["estimate"] - self.table["target"]).abs() <= n_sigma * self.table["stderr"]
        return bool(within.all() and self.pvalue > min_pvalue)

    def summary(self):
        return {
            "bins": len(self.table),
            "max_rel_discrepancy": self.max_rel_discrepancy,
            "chi2": self.chi2,
            "pvalue": self.pvalue,
            "identity_gap": self.identity_gap,
            "underpopulated_bins": len(self.underpopulated),
        }


def cascade_config(p, **overrides):
    """LevySimConfig whose beta comes from the loop parameter of p."""
    return LevySimConfig(beta=stable_index(p).beta, **overrides)


def sample_outermost_lengths(a, cfg, n):
    require_replicas(n, minimum=1)
    paths, weights = simulate_weighted_paths(a, cfg, n)
    return [LoopLengthSample(p.jump_sizes, w, a) for p, w in zip(paths, weights)]


def _bin_average(func, lo, hi):
    return quad_or_raise(func, lo, hi, DEFAULT_QUADRATURE) / (hi - lo)


def loop_length_density_check(a, bins, cfg, n):
    """
    Compare the reweighted jump histogram with levy_jump_density (bin averages by
    quadrature) and record how far the QD-ratio form departs from it.

    Returns:
        DensityCheckReport
    """
    beta = cfg.beta
    curve = weighted_jump_histogram(a, bins, cfg, n)
    edges = np.asarray(bins, dtype=np.float64)
    targets = np.array([
        _bin_average(lambda b: levy_jump_density(beta, a, b), lo, hi)
        for lo, hi in zip(edges[:-1], edges[1:])
    ])
    grid = np.geomspace(edges[0], edges[-1], 64)
    identity_gap = max(
        abs(levy_jump_density(beta, a, b) - qd_ratio_jump_density(beta, a, b)) / levy_jump_density(beta, a, b)
        for b in grid
    )

    table = pd.DataFrame({
        "lo": edges[:-1],
        "hi": edges[1:],
        "estimate": curve.values,
        "stderr": curve.stderr,
        "target": targets,
        "ess": curve.effective_samples,
    })
    table["rel_error"] = (table["estimate"] - table["target"]).abs() / table["target"]
    safe = np.where(curve.stderr > 0, curve.stderr, np.inf)
    chi2 = float(np.sum(((curve.values - targets) / safe) ** 2))
    pvalue = float(stats.chi2.sf(chi2, df=len(targets)))

    underpopulated = table.index[table["ess"] < CASCADE_MIN_EFFECTIVE_SAMPLES].tolist()
    if underpopulated:
        log.warning("%d of %d bins have fewer than %d effective samples",
                    len(underpopulated), len(table), CASCADE_MIN_EFFECTIVE_SAMPLES)
    return DensityCheckReport(table, chi2, pvalue, identity_gap, underpopulated)


def rank_size_exponent(samples, lo, hi):
    """
    Tail index from pooled lengths: least-squares slope of log rank against log
    length over [lo, hi]. The jump intensity x^{-beta-1} makes the slope -beta.
    """
    pooled = np.sort(np.concatenate([s.lengths for s in samples]))[::-1]
    ranks = np.arange(1, pooled.size + 1, dtype=np.float64)
    window = (pooled >= lo) & (pooled <= hi)
    if np.count_nonzero(window) < 10:
        raise DomainError(f"rank_size_exponent: fewer than 10 lengths in [{lo}, {hi}]")
    slope, _ = np.polyfit(np.log(pooled[window]), np.log(ranks[window]), 1)
    return -float(slope)


def _uniform_lengths(samples, threshold, count, rng):
    # uniformly chosen loop under the weighted counting measure
    kept = [s.lengths[s.lengths > threshold] for s in samples]
    mass = np.array([s.weight * k.size for s, k in zip(samples, kept)])
    if mass.sum() == 0:
        raise DomainError(f"no loop lengths above {threshold}")
    picks = rng.choice(len(samples), size=count, p=mass / mass.sum())
    return np.array([kept[i][rng.integers(kept[i].size)] for i in picks])


def self_similarity_ks(a, c, cfg, n):
    """
    KS test that a uniformly chosen loop length under boundary length c*a, divided
    by c, has the law of one under boundary length a.
    """
    if not c > 0:
        raise DomainError(f"self_similarity_ks needs c > 0 (got {c})")
    threshold = LEVY_BIN_CUTOFF_MULTIPLE * cfg.jump_cutoff_eps * max(1.0, 1.0 / c)
    base = sample_outermost_lengths(a, cfg, n)
    scaled = sample_outermost_lengths(c * a, cfg.model_copy(update={"rng_seed": cfg.rng_seed + 1}), n)
    rng = np.random.default_rng([cfg.rng_seed, 2])
    x = _uniform_lengths(base, threshold, n, rng)
    y = _uniform_lengths(scaled, c * threshold, n, rng) / c
    result = stats.ks_2samp(x, y)
    critical = KS_C_ONE_PERCENT * math.sqrt(2.0 / n)
    return {
        "statistic": float(result.statistic),
        "pvalue": float(result.pvalue),
        "critical": critical,
        "pass": bool(result.statistic < critical),
    }
