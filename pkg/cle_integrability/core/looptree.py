# cle_integrability/core/looptree.py
"""
Layer 6 — Stable Looptrees

Discrete nu-stable excursions and the looptrees they encode:
- Step law P(-1) = q, P(k) = (1-q) k^{-nu-1} / zeta(nu+1), q tuned to mean zero
- Bridge to -1 by rejection, turned into a first-passage excursion by the cycle lemma
- Stack scan: each positive jump opens a loop, closed on the first return to its base level
- Jump-moment estimator over unit-duration excursions
- JSON and DOT serialization

Attachment positions are measured counterclockwise from the parent's root point.
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import special

from cle_integrability.config import (
    LOOPTREE_BATCH, LOOPTREE_MIN_STEPS, LOOPTREE_REJECTION_BUDGET,
)
from cle_integrability.core.errors import (
    DomainError, MalformedExcursion, RejectionBudgetExceeded,
)
from cle_integrability.core.levy import MCEstimate, replica_streams

log = logging.getLogger(__name__)

ROOT = -1


def _require_nu(nu):
    if not 1.0 < nu < 2.0:
        raise DomainError(f"looptree index nu must lie in (1, 2) (got {nu})")


# =============================================================================
# STEP LAW
# =============================================================================

def down_step_probability(nu):
    """q solving -q + (1-q) zeta(nu)/zeta(nu+1) = 0."""
    _require_nu(nu)
    m = special.zeta(nu) / special.zeta(nu + 1.0)
    return m / (1.0 + m)


def tail_constant(nu):
    """c in P(step = k) ~ c k^{-nu-1}."""
    return (1.0 - down_step_probability(nu)) / special.zeta(nu + 1.0)


def excursion_scale(nu, n):
    """(c Gamma(-nu) n)^{-1/nu}: rescaled jumps over n steps have Laplace exponent lambda^nu."""
    return (tail_constant(nu) * special.gamma(-nu) * n) ** (-1.0 / nu)


# =============================================================================
# EXCURSION
# =============================================================================

class DiscreteExcursion:
    """Left-continuous walk: steps >= -1, nonnegative partial sums, first hits -1 at step n."""

    def __init__(self, steps, nu=None, scale=1.0, time_step=1.0):
        self.steps = np.asarray(steps, dtype=np.int64)
        self.nu = nu
        self.scale = float(scale)
        self.time_step = float(time_step)
        self.validate()

    @property
    def n(self):
        return self.steps.size

    @property
    def duration(self):
        return self.n * self.time_step

    def validate(self):
        if self.n == 0:
            raise MalformedExcursion("empty step sequence")
        if np.any(self.steps < -1) or np.any(self.steps == 0):
            raise MalformedExcursion("steps must be -1 or positive integers")
        path = np.cumsum(self.steps)
        if path[-1] != -1:
            raise MalformedExcursion(f"steps sum to {path[-1]}, not -1")
        if self.n > 1 and path[:-1].min() < 0:
            raise MalformedExcursion("walk reaches -1 before the final step")

    def jumps(self):
        return self.steps[self.steps > 0]


def cycle_rotation(bridge):
    """
    Rotate a bridge ending at -1 so it first reaches -1 at its last step.

    The rotation starts right after the first minimum of S_0..S_{n-1}; that index
    is the only one with S_r < S_k before it and S_r <= S_k after it.
    """
    bridge = np.asarray(bridge, dtype=np.int64)
    if bridge.sum() != -1 or np.any(bridge < -1):
        raise MalformedExcursion("cycle_rotation needs a skip-free bridge ending at -1")
    levels = np.concatenate(([0], np.cumsum(bridge)[:-1]))
    earlier_min = np.concatenate(([np.iinfo(np.int64).max], np.minimum.accumulate(levels)[:-1]))
    later_min = np.minimum.accumulate(levels[::-1])[::-1]
    valid = np.flatnonzero((levels < earlier_min) & (levels <= later_min))
    if valid.size != 1:
        raise MalformedExcursion(f"cycle lemma: {valid.size} valid rotations instead of one")
    r = int(valid[0])
    return np.concatenate((bridge[r:], bridge[:r]))


def _sample_bridge(nu, n, rng, budget):
    """n i.i.d. steps conditioned to sum to -1, by rejection on the positive part."""
    q = down_step_probability(nu)
    attempts = 0
    while attempts < budget:
        batch = min(LOOPTREE_BATCH, budget - attempts)
        ups = rng.binomial(n, 1.0 - q, batch)
        width = max(int(ups.max()), 1)
        sizes = rng.zipf(nu + 1.0, (batch, width))
        mask = np.arange(width)[None, :] < ups[:, None]
        totals = np.where(mask, sizes, 0).sum(axis=1)
        ok = np.flatnonzero(totals == n - ups - 1)
        attempts += batch
        if ok.size:
            j = ok[0]
            m = int(ups[j])
            steps = np.full(n, -1, dtype=np.int64)
            steps[rng.choice(n, size=m, replace=False)] = sizes[j, :m]
            return steps, attempts - batch + j + 1
    raise RejectionBudgetExceeded(f"no bridge of {n} steps after {budget} attempts (nu = {nu})")


def sample_excursion(nu, n, rng, budget=LOOPTREE_REJECTION_BUDGET):
    """
    Discrete nu-stable excursion of n steps with jumps rescaled to unit duration.

    Returns:
        DiscreteExcursion with scale = excursion_scale(nu, n) and time_step = 1/n
    """
    _require_nu(nu)
    if n < LOOPTREE_MIN_STEPS:
        raise DomainError(f"sample_excursion needs n >= {LOOPTREE_MIN_STEPS} (got {n})")
    bridge, attempts = _sample_bridge(nu, n, rng, budget)
    log.debug("bridge accepted after %d attempts", attempts)
    return DiscreteExcursion(cycle_rotation(bridge), nu=nu, scale=excursion_scale(nu, n), time_step=1.0 / n)


# =============================================================================
# LOOPTREE
# =============================================================================

class Loop(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    length: float
    parent: int
    position: float


class Looptree:
    """Loops indexed in jump order; parent ROOT (-1) marks the loops hanging from the origin."""

    def __init__(self, loops, total_boundary, nu=None, steps=0, scale=1.0):
        self.loops = loops
        self.total_boundary = total_boundary
        self.nu = nu
        self.steps = steps
        self.scale = scale

    def __len__(self):
        return len(self.loops)

    @property
    def total_loop_length(self):
        return sum(l.length for l in self.loops)

    def depth(self):
        """Number of loops on the longest root-to-leaf chain."""
        depth = {}
        for loop in self.loops:
            depth[loop.id] = 1 + (depth[loop.parent] if loop.parent != ROOT else 0)
        return max(depth.values(), default=0)

    def to_json_dict(self):
        return {
            "nu": self.nu,
            "steps": self.steps,
            "scale": self.scale,
            "total_boundary": self.total_boundary,
            "root": ROOT,
            "loops": [l.model_dump() for l in self.loops],
        }

    def to_dot(self):
        lines = ["digraph looptree {", '  root [shape=point];']
        for l in self.loops:
            lines.append(f'  L{l.id} [shape=circle, label="{l.length:.6g}"];')
        for l in self.loops:
            src = "root" if l.parent == ROOT else f"L{l.parent}"
            lines.append(f'  {src} -> L{l.id} [label="{l.position:.6g}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def summary(self):
        return {
            "loops": len(self),
            "total_loop_length": self.total_loop_length,
            "total_boundary": self.total_boundary,
            "depth": self.depth(),
        }


def build_looptree(e):
    """
    Stack scan of the excursion.

    A jump of size k from level h opens a loop of length k*scale hanging from the
    innermost open loop T at position ((h - base_T) mod length_T)*scale; the loop
    closes when the walk first comes back down to h.
    """
    stack = []          # (loop id, base level, size)
    loops = []
    level = 0
    last = e.n - 1
    for i, step in enumerate(e.steps):
        if step > 0:
            if stack:
                pid, base, size = stack[-1]
                position = ((level - base) % size) * e.scale
            else:
                pid, position = ROOT, 0.0
            lid = len(loops)
            loops.append(Loop(id=lid, length=int(step) * e.scale, parent=pid, position=position))
            stack.append((lid, level, int(step)))
            level += int(step)
        else:
            if i == last and stack:
                raise MalformedExcursion(f"{len(stack)} loops still open at the final step")
            level -= 1
            while stack and stack[-1][1] == level:
                stack.pop()
    if stack:
        raise MalformedExcursion(f"{len(stack)} loops still open at the end of the excursion")
    return Looptree(loops, total_boundary=e.duration, nu=e.nu, steps=e.n, scale=e.scale)


# =============================================================================
# JUMP MOMENT
# =============================================================================

def estimate_jump_moment(nu, p, n, replicas, seed):
    """
    MC mean over unit-duration excursions of sum_jumps (k * scale)^p.
    Finite only for p > nu; below that the estimate keeps growing with n.
    """
    _require_nu(nu)
    if p <= nu:
        log.warning("jump moment of order p = %.4g <= nu = %.4g is infinite; estimate grows with n", p, nu)
    values = np.empty(replicas)
    for i, rng in enumerate(replica_streams(seed, replicas)):
        e = sample_excursion(nu, n, rng)
        values[i] = np.sum((e.jumps() * e.scale) ** p)
    return MCEstimate.from_samples(values)


def jump_moment_growth(nu, p, sizes, replicas, seed):
    """estimate_jump_moment at each n in sizes, for the convergence and divergence checks."""
    return [estimate_jump_moment(nu, p, n, replicas, seed) for n in sizes]


def jump_moment_params(nu, p):
    """(gamma, alpha) with nu = 4/gamma^2 and p = 2 alpha / gamma."""
    _require_nu(nu)
    gamma = 2.0 / math.sqrt(nu)
    return gamma, p * gamma / 2.0
