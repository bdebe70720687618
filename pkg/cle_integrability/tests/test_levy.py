#!/usr/bin/env python3
"""
Test Layer 4 stable Levy simulation: configuration, reproducibility, path
invariants and the exactly-Poisson jump counts.
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import math

import numpy as np
from pydantic import ValidationError

from cle_integrability.core.errors import DomainError, RejectionBudgetExceeded
from cle_integrability.core.levy import (
    LevySimConfig, MCEstimate, _conditioned_hit_time,
    estimate_inverse_mean, estimate_jump_intensity, estimate_tau_ratio, expected_jump_count,
    replica_streams, require_replicas, sample_hitting_times, simulate_to_hitting,
    simulate_unconditioned, tau_scaling_ks, weighted_jump_histogram,
)


def test_config_validation():
    print("TEST: Levy config validation...")

    cfg = LevySimConfig(beta=1.5)
    assert cfg.small_jump_mode in ("drift_only", "gaussian_approx"), "default small-jump mode"

    for bad in [dict(beta=1.0), dict(beta=2.0), dict(beta=1.5, jump_cutoff_eps=0.0),
                dict(beta=1.5, small_jump_mode="exact"), dict(beta=1.5, rng_seed=-1),
                dict(beta=1.5, max_path_time=0.0)]:
        try:
            LevySimConfig(**bad)
            raise AssertionError(f"{bad} should be rejected")
        except ValidationError:
            pass

    print("  ✓ PASSED")


def test_replica_streams():
    """Same seed gives the same streams; replicas are distinct from each other."""
    print("TEST: Replica streams...")

    first = [rng.random() for rng in replica_streams(11, 4)]
    again = [rng.random() for rng in replica_streams(11, 4)]
    other = [rng.random() for rng in replica_streams(12, 4)]
    assert first == again, "streams must be reproducible from the seed"
    assert len(set(first)) == 4, "replica streams should differ"
    assert first != other, "a different seed should give different streams"

    try:
        require_replicas(50)
        raise AssertionError("fewer than 100 replicas should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_hitting_path_invariants():
    print("TEST: First-passage path...")

    for mode in ["drift_only", "gaussian_approx"]:
        cfg = LevySimConfig(beta=1.5, jump_cutoff_eps=1e-2, small_jump_mode=mode)
        rng = replica_streams(cfg.rng_seed, 1)[0]
        path = simulate_to_hitting(2.0, cfg, rng, levels=(0.5, 1.0))

        assert path.terminal_level == -2.0, "path stops exactly at -a"
        assert path.tau_a > 0, f"tau should be positive, got {path.tau_a}"
        times = [path.passage_times[d] for d in (0.5, 1.0, 2.0)]
        assert times == sorted(times), f"passage times should increase with depth: {times}"
        assert times[-1] == path.tau_a, "deepest passage time is tau_a"
        assert np.all(path.jump_sizes >= cfg.jump_cutoff_eps), "recorded jumps sit above the cutoff"
        assert np.all(np.diff(path.jump_times) >= 0), "jump times are ordered"
        if path.n_jumps:
            assert path.jump_times[-1] <= path.tau_a, "no jump after the passage"
            assert path.jumps[0].size == float(path.jump_sizes[0]), "JumpRecord view"

        rng2 = replica_streams(cfg.rng_seed, 1)[0]
        repeat = simulate_to_hitting(2.0, cfg, rng2, levels=(0.5, 1.0))
        assert repeat.tau_a == path.tau_a, "same stream should give the same path"
        assert np.array_equal(repeat.jump_sizes, path.jump_sizes), "same stream should give the same jumps"

    try:
        simulate_to_hitting(0.0, LevySimConfig(beta=1.5), np.random.default_rng(0))
        raise AssertionError("a = 0 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_unconditioned_path():
    """Without the Brownian part the terminal level is the jump sum plus the compensator."""
    print("TEST: Unconditioned path...")

    beta, eps, horizon = 1.5, 1e-2, 0.5
    cfg = LevySimConfig(beta=beta, jump_cutoff_eps=eps, small_jump_mode="drift_only")
    path = simulate_unconditioned(horizon, cfg, np.random.default_rng(3))
    drift = -(eps ** (1.0 - beta)) / (beta - 1.0)
    expected = path.jump_sizes.sum() + drift * horizon
    assert abs(path.terminal_level - expected) < 1e-9, f"{path.terminal_level} vs {expected}"
    assert math.isnan(path.tau_a), "unconditioned paths carry no hitting time"
    assert np.all((path.jump_times >= 0) & (path.jump_times <= horizon)), "jump times inside [0, T]"

    print("  ✓ PASSED")


def test_jump_intensity():
    """Jumps above the cutoff are exactly Poisson, so the count matches its closed form."""
    print("TEST: Jump intensity...")

    beta, eps = 1.5, 1e-2
    cfg = LevySimConfig(beta=beta, jump_cutoff_eps=eps, rng_seed=5)
    est = estimate_jump_intensity(0.1, 1.0, 1.0, cfg, 400)
    target = expected_jump_count(beta, 0.1, 1.0, 1.0)
    assert est.within(target, n_sigma=4.0), f"intensity {est} vs {target}"

    try:
        estimate_jump_intensity(1e-3, 1.0, 1.0, cfg, 100)
        raise AssertionError("b1 below the cutoff should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_mc_estimate():
    print("TEST: MCEstimate...")

    est = MCEstimate.from_samples([1.0, 2.0, 3.0])
    assert est.mean == 2.0, f"mean {est.mean}"
    assert abs(est.stderr - 1.0 / math.sqrt(3.0)) < 1e-15, f"stderr {est.stderr}"
    assert est.within(2.5, n_sigma=1.0) and not est.within(4.0, n_sigma=1.0), "within band"
    assert est.within(4.0, n_sigma=1.0, slack=2.0), "slack widens the band"

    try:
        MCEstimate(0.0, -1.0, 10)
        raise AssertionError("negative stderr should raise DomainError")
    except DomainError:
        pass

    cfg = LevySimConfig(beta=1.5)
    trivial = estimate_tau_ratio(1.0, 0.0, cfg, 100)
    assert trivial.mean == 1.0 and trivial.stderr == 0.0, "b = 0 gives ratio 1 exactly"

    print("  ✓ PASSED")


def test_weighted_histogram_shape():
    print("TEST: Weighted jump histogram...")

    cfg = LevySimConfig(beta=1.5, jump_cutoff_eps=1e-2, rng_seed=9)
    edges = np.array([0.1, 0.2, 0.5, 1.0])
    curve = weighted_jump_histogram(1.0, edges, cfg, 100)
    assert len(curve) == 3, f"one value per bin, got {len(curve)}"
    assert np.allclose(curve.abscissae, [0.15, 0.35, 0.75]), "bin midpoints"
    assert np.all(curve.values >= 0) and np.all(curve.stderr >= 0), "densities and errors are non-negative"
    assert np.all(curve.effective_samples <= 100), "ESS cannot exceed the replica count"

    try:
        weighted_jump_histogram(1.0, [0.5, 0.2], cfg, 100)
        raise AssertionError("decreasing edges should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_hitting_time_samples():
    print("TEST: Hitting-time samples...")

    cfg = LevySimConfig(beta=1.5, jump_cutoff_eps=5e-2, rng_seed=11)
    taus = sample_hitting_times(1.0, cfg, 100)
    assert taus.shape == (100,) and np.all(taus > 0), "one positive passage time per replica"
    assert np.array_equal(taus, sample_hitting_times(1.0, cfg, 100)), "same seed, same samples"
    inverse = estimate_inverse_mean(cfg, 100)
    assert abs(inverse.mean - np.mean(1.0 / taus)) < 1e-12, "inverse mean reads the same replicas"

    try:
        sample_hitting_times(1.0, cfg, 0)
        raise AssertionError("zero replicas should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_tau_scaling_two_depths():
    """tau_{-a} / a^beta has the law of tau_{-1} on both sides of a = 1."""
    print("TEST: Passage-time scaling...")

    cfg = LevySimConfig(beta=1.5, jump_cutoff_eps=2e-2, rng_seed=13)
    for a in [0.5, 3.0]:
        ks = tau_scaling_ks(cfg, 150, a=a)
        assert ks["pass"], f"a = {a}: KS statistic {ks['statistic']:.3f} above {ks['critical']:.3f}"
        assert 0.0 <= ks["pvalue"] <= 1.0, "p-value is a probability"

    try:
        tau_scaling_ks(cfg, 150, a=0.0)
        raise AssertionError("a = 0 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_conditioned_hit_time_rare_window():
    """A window the rejection loop cannot hit still yields a passage inside it."""
    print("TEST: Conditioned hit time in a rare window...")

    # P(T <= 0.02) is about 4e-12 for mean 1 and shape 1
    first = _conditioned_hit_time(1.0, -1.0, 1.0, 0.02, np.random.default_rng(21))
    again = _conditioned_hit_time(1.0, -1.0, 1.0, 0.02, np.random.default_rng(21))
    assert 0.0 < first <= 0.02, f"hit time {first} outside the window"
    assert first == again, "same stream, same hit time"

    try:
        _conditioned_hit_time(1.0, -1.0, 1e-4, 1e-3, np.random.default_rng(21))
        raise AssertionError("a window with no mass should raise RejectionBudgetExceeded")
    except RejectionBudgetExceeded:
        pass

    print("  ✓ PASSED")


def run_all_tests():
    """Run all tests."""
    print("=" * 60)
    print("LAYER 4 LEVY SIMULATION TESTS")
    print("=" * 60)
    print()

    tests = [
        test_config_validation,
        test_replica_streams,
        test_hitting_path_invariants,
        test_unconditioned_path,
        test_jump_intensity,
        test_mc_estimate,
        test_weighted_histogram_shape,
        test_hitting_time_samples,
        test_tau_scaling_two_depths,
        test_conditioned_hit_time_rare_window,
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
