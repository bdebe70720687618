#!/usr/bin/env python3
"""
Test Layer 6 stable looptrees: step law, cycle lemma, stack scan and
serialization.
"""

import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import json
import math

import numpy as np
from scipy import special

from cle_integrability.core.checks import (
    direct_quotient, enumerate_excursions, quotient_mismatches,
)
from cle_integrability.core.errors import DomainError, MalformedExcursion
from cle_integrability.core.looptree import (
    ROOT, DiscreteExcursion,
    build_looptree, cycle_rotation, down_step_probability, estimate_jump_moment,
    excursion_scale, jump_moment_growth, jump_moment_params, sample_excursion, tail_constant,
)


def test_step_law():
    """q makes the step law centred: q = (1 - q) zeta(nu) / zeta(nu + 1)."""
    print("TEST: Step law...")

    for nu in [1.2, 4.0 / 3.0, 1.5, 1.8]:
        q = down_step_probability(nu)
        drift = -q + (1.0 - q) * special.zeta(nu) / special.zeta(nu + 1.0)
        assert abs(drift) < 1e-12, f"mean step at nu {nu} is {drift}"
        assert 0.0 < q < 1.0, f"q out of range: {q}"
        assert excursion_scale(nu, 1000) > 0, "scale must be positive"

    s1, s2 = excursion_scale(1.5, 1000), excursion_scale(1.5, 8000)
    assert abs(s1 / s2 - 8.0 ** (1.0 / 1.5)) < 1e-10, "scale shrinks like n^{-1/nu}"

    for bad in [1.0, 2.0]:
        try:
            down_step_probability(bad)
            raise AssertionError(f"nu = {bad} should raise DomainError")
        except DomainError:
            pass

    print("  ✓ PASSED")


def test_tail_constant():
    """P(step = k) = c k^{-nu-1} for k >= 1, and the scale turns c Gamma(-nu) n into 1."""
    print("TEST: Step tail constant...")

    for nu in [1.2, 1.5, 1.8]:
        c = tail_constant(nu)
        q = down_step_probability(nu)
        assert abs(q + c * special.zeta(nu + 1.0) - 1.0) < 1e-14, f"step law mass at nu {nu}"
        n = 1000
        normalized = c * special.gamma(-nu) * n * excursion_scale(nu, n) ** nu
        assert abs(normalized - 1.0) < 1e-12, f"c Gamma(-nu) n scale^nu = {normalized}"

    print("  ✓ PASSED")


def test_malformed_excursions():
    print("TEST: Malformed excursions...")

    for steps in [[], [0, -1], [1, -1], [-1, 1, -1], [-2, 1], [2, -1, -1, -1, 1, -1]]:
        try:
            DiscreteExcursion(steps)
            raise AssertionError(f"{steps} should raise MalformedExcursion")
        except MalformedExcursion:
            pass

    e = DiscreteExcursion([-1])
    assert e.n == 1 and len(build_looptree(e)) == 0, "a single down step has no loops"

    print("  ✓ PASSED")


def test_cycle_rotation():
    print("TEST: Cycle lemma rotation...")

    rotated = cycle_rotation([-1, 2, -1, -1])
    assert list(rotated) == [2, -1, -1, -1], f"rotation {list(rotated)}"
    DiscreteExcursion(rotated)

    rng = np.random.default_rng(4)
    for _ in range(50):
        ups = rng.integers(1, 4, size=3)
        bridge = np.concatenate((ups, -np.ones(int(ups.sum()) + 1, dtype=np.int64)))
        rng.shuffle(bridge)
        DiscreteExcursion(cycle_rotation(bridge))

    try:
        cycle_rotation([1, -1])
        raise AssertionError("a bridge not ending at -1 should raise MalformedExcursion")
    except MalformedExcursion:
        pass

    print("  ✓ PASSED")


def test_build_small_looptree():
    """Hand-checked scan: a loop of length 2 carrying a loop of length 1 at position 1."""
    print("TEST: Stack scan on a small excursion...")

    tree = build_looptree(DiscreteExcursion([2, -1, 1, -1, -1, -1]))
    got = [(l.id, l.length, l.parent, l.position) for l in tree.loops]
    assert got == [(0, 2.0, ROOT, 0.0), (1, 1.0, 0, 1.0)], f"loops {got}"
    assert tree.depth() == 2, f"depth {tree.depth()}"
    assert tree.total_loop_length == 3.0 and tree.total_boundary == 6.0, "totals"

    scaled = build_looptree(DiscreteExcursion([2, -1, 1, -1, -1, -1], scale=0.5, time_step=0.25))
    assert scaled.loops[1].position == 0.5 and scaled.loops[0].length == 1.0, "scale applies to lengths and positions"
    assert scaled.total_boundary == 1.5, "boundary is the duration"

    print("  ✓ PASSED")


def test_scan_matches_direct_quotient():
    """The stack scan agrees with the loop structure read directly off the walk."""
    print("TEST: Stack scan vs direct quotient...")

    checked, bad = quotient_mismatches(7)
    assert checked == len(enumerate_excursions(7)) and checked > 100, f"checked {checked}"
    assert bad == 0, f"{bad} of {checked} excursions disagree"

    steps = [3, -1, 2, -1, 1, -1, -1, -1, -1, -1]
    tree = build_looptree(DiscreteExcursion(steps))
    assert [(l.length, l.parent, l.position) for l in tree.loops] == direct_quotient(steps)

    print("  ✓ PASSED")


def test_sample_excursion():
    print("TEST: Sampled excursions...")

    nu = 1.5
    e = sample_excursion(nu, 200, np.random.default_rng(17))
    assert e.n == 200 and abs(e.duration - 1.0) < 1e-12, "unit duration"
    assert e.scale == excursion_scale(nu, 200), "jumps rescaled by the excursion scale"

    again = sample_excursion(nu, 200, np.random.default_rng(17))
    assert np.array_equal(e.steps, again.steps), "same generator state gives the same excursion"

    t1 = json.dumps(build_looptree(e).to_json_dict(), sort_keys=True)
    t2 = json.dumps(build_looptree(again).to_json_dict(), sort_keys=True)
    assert t1 == t2, "looptree JSON should be identical for the same seed"

    try:
        sample_excursion(nu, 10, np.random.default_rng(0))
        raise AssertionError("too few steps should raise DomainError")
    except DomainError:
        pass

    print("  ✓ PASSED")


def test_serialization():
    print("TEST: JSON and DOT output...")

    tree = build_looptree(DiscreteExcursion([2, -1, 1, -1, -1, -1], nu=1.5))
    doc = tree.to_json_dict()
    assert set(doc) == {"nu", "steps", "scale", "total_boundary", "root", "loops"}, f"keys {set(doc)}"
    assert doc["root"] == ROOT and doc["steps"] == 6, "root id and step count"
    assert doc["loops"][1] == {"id": 1, "length": 1.0, "parent": 0, "position": 1.0}, f"loop {doc['loops'][1]}"
    json.dumps(doc)

    dot = tree.to_dot()
    assert dot.startswith("digraph looptree {"), "DOT header"
    assert "root -> L0" in dot and "L0 -> L1" in dot, f"DOT edges missing:\n{dot}"
    assert dot.rstrip().endswith("}"), "DOT footer"

    print("  ✓ PASSED")


def test_jump_moment_estimator():
    print("TEST: Jump moment estimator...")

    gamma, alpha = jump_moment_params(4.0 / 3.0, 2.0)
    assert abs(gamma - math.sqrt(3.0)) < 1e-14 and abs(alpha - math.sqrt(3.0)) < 1e-14, "(gamma, alpha)"

    est = estimate_jump_moment(1.5, 2.0, 100, 5, seed=3)
    assert est.n_replicas == 5 and est.mean > 0 and math.isfinite(est.mean), f"estimate {est}"
    repeat = estimate_jump_moment(1.5, 2.0, 100, 5, seed=3)
    assert repeat.mean == est.mean, "estimator is reproducible from the seed"

    sizes = jump_moment_growth(1.5, 2.0, [100, 200], 5, seed=3)
    assert len(sizes) == 2 and sizes[0].mean == est.mean, "growth runs the same estimator at each n"

    print("  ✓ PASSED")


def run_all_tests():
    """Run all tests."""
    print("=" * 60)
    print("LAYER 6 LOOPTREE TESTS")
    print("=" * 60)
    print()

    tests = [
        test_step_law,
        test_tail_constant,
        test_malformed_excursions,
        test_cycle_rotation,
        test_build_small_looptree,
        test_scan_matches_direct_quotient,
        test_sample_excursion,
        test_serialization,
        test_jump_moment_estimator,
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
