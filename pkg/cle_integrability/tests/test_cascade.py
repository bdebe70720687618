#!/usr/bin/env python3
"""
Test Layer 5 perimeter cascade: loop-length samples, the density report and
the rank-size tail index.
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import numpy as np

from cle_integrability.core.cascade import (
    LoopLengthSample, cascade_config, loop_length_density_check,
    rank_size_exponent, sample_outermost_lengths, self_similarity_ks,
)
from cle_integrability.core.errors import DomainError
from cle_integrability.core.params import from_kappa


def test_cascade_config():
    print("TEST: Cascade beta from kappa...")

    assert abs(cascade_config(from_kappa(4.0)).beta - 1.5) < 1e-15, "kappa 4 gives beta 3/2"
    assert abs(cascade_config(from_kappa(16.0 / 3.0)).beta - 1.25) < 1e-14, "kappa 16/3 gives beta 5/4"
    cfg = cascade_config(from_kappa(3.0), jump_cutoff_eps=0.05, rng_seed=3)
    assert cfg.jump_cutoff_eps == 0.05 and cfg.rng_seed == 3, "overrides pass through"

    try:
        cascade_config(from_kappa(2.0))
        raise AssertionError("kappa <= 8/3 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_loop_length_sample():
    print("TEST: LoopLengthSample...")

    s = LoopLengthSample([0.2, 0.9, 0.5], weight=2.0, boundary_length_a=1.0)
    assert list(s.lengths) == [0.9, 0.5, 0.2], f"lengths should be sorted decreasingly: {s.lengths}"
    assert len(s) == 3 and s.summary()["largest"] == 0.9, "summary"

    empty = LoopLengthSample([], weight=1.0, boundary_length_a=1.0)
    assert empty.summary()["largest"] == 0.0, "empty sample has no largest loop"

    try:
        LoopLengthSample([0.5], weight=0.0, boundary_length_a=1.0)
        raise AssertionError("zero weight should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_sample_outermost_lengths():
    print("TEST: Outermost loop samples...")

    cfg = cascade_config(from_kappa(4.0), jump_cutoff_eps=1e-2, rng_seed=21)
    samples = sample_outermost_lengths(1.0, cfg, 20)
    assert len(samples) == 20, "one sample per replica"
    for s in samples:
        assert s.weight > 0 and s.boundary_length_a == 1.0, "weights are 1 / tau"
        assert np.all(np.diff(s.lengths) <= 0), "lengths sorted decreasingly"

    again = sample_outermost_lengths(1.0, cfg, 20)
    assert all(np.array_equal(u.lengths, v.lengths) for u, v in zip(samples, again)), "reproducible"

    print("  ✓ PASSED")


def test_rank_size_exponent():
    """Exact Pareto quantiles recover the tail index from the rank-size slope."""
    print("TEST: Rank-size exponent...")

    beta = 1.5
    n = 10_000
    u = (np.arange(n) + 0.5) / n
    lengths = u ** (-1.0 / beta)
    half = n // 2
    samples = [
        LoopLengthSample(lengths[:half], 1.0, 1.0),
        LoopLengthSample(lengths[half:], 1.0, 1.0),
    ]
    slope = rank_size_exponent(samples, 2.0, 10.0)
    assert abs(slope - beta) < 0.01, f"rank-size slope should be {beta}, got {slope}"

    try:
        rank_size_exponent(samples, 1e6, 1e7)
        raise AssertionError("an empty window should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_density_report():
    print("TEST: Loop-length density report...")

    cfg = cascade_config(from_kappa(4.0), jump_cutoff_eps=1e-2, rng_seed=8)
    edges = np.linspace(0.5, 2.0, 5)
    report = loop_length_density_check(1.0, edges, cfg, 100)

    assert list(report.table.columns) == ["lo", "hi", "estimate", "stderr", "target", "ess", "rel_error"]
    assert len(report.table) == 4, "one row per bin"
    assert np.all(report.table["target"] > 0), "targets are positive bin averages"
    assert report.identity_gap < 1e-12, f"the two closed forms should agree, gap {report.identity_gap}"
    assert 0.0 <= report.pvalue <= 1.0, f"p-value out of range: {report.pvalue}"
    summary = report.summary()
    assert summary["bins"] == 4 and "max_rel_discrepancy" in summary, "summary keys"

    try:
        self_similarity_ks(1.0, 0.0, cfg, 100)
        raise AssertionError("c = 0 should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def run_all_tests():
    """Run all tests."""
    print("=" * 60)
    print("LAYER 5 PERIMETER CASCADE TESTS")
    print("=" * 60)
    print()

    tests = [
        test_cascade_config,
        test_loop_length_sample,
        test_sample_outermost_lengths,
        test_rank_size_exponent,
        test_density_report,
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
