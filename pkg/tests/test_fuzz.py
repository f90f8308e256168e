import json
import math

import numpy as np

from raydiv.fuzz import (
    FuzzReport,
    FuzzViolation,
    random_distribution,
    random_pair,
    run_property_fuzz,
    values_match,
)
from raydiv.simulation import trial_rng


def test_random_distribution_shape():
    rng = trial_rng(1, 0)
    for _ in range(30):
        dist = random_distribution(rng, max_atoms=9)
        assert 2 <= dist.size <= 9
        assert np.all(np.diff(dist.atoms) > 0)
        assert np.all(dist.weights > 0)
        assert abs(float(dist.weights.sum()) - 1.0) <= 1e-12


def test_random_distribution_on_given_atoms():
    rng = trial_rng(2, 0)
    atoms = np.array([1.0, 4.0, 7.0])
    dist = random_distribution(rng, max_atoms=3, atoms=atoms)
    assert np.array_equal(dist.atoms, atoms)


def test_random_pair_supports():
    rng = trial_rng(3, 0)
    for _ in range(30):
        mu, nu = random_pair(rng, max_atoms=8)
        assert np.array_equal(mu.atoms, nu.atoms)
    for _ in range(30):
        mu, nu = random_pair(rng, max_atoms=8, mutual=False)
        assert set(mu.atoms.tolist()) <= set(nu.atoms.tolist())


def test_values_match_handles_infinities():
    assert values_match(1.0, 1.0 + 1e-12, 1e-10)
    assert not values_match(1.0, 2.0, 1e-10)
    assert values_match(math.inf, math.inf, 1e-10)
    assert not values_match(math.inf, 5.0, 1e-10)


def test_clean_fuzz_run():
    report = run_property_fuzz(pairs=50, max_atoms=10, seed=7)
    assert report.passed
    assert report.pairs == 50
    assert report.violations == ()
    assert report.checks_run > 50 * 20


def test_fuzz_is_reproducible():
    a = run_property_fuzz(pairs=10, max_atoms=6, seed=3)
    b = run_property_fuzz(pairs=10, max_atoms=6, seed=3)
    assert a == b


def test_zero_pairs_report():
    report = run_property_fuzz(pairs=0)
    assert report.passed
    assert report.pairs == 0
    assert report.checks_run == 0


def test_impossible_slack_produces_reproducible_witnesses():
    report = run_property_fuzz(pairs=5, max_atoms=6, seed=1, slack=-1.0)
    assert not report.passed
    v = report.violations[0]
    assert isinstance(v, FuzzViolation)
    payload = json.loads(v.mu_json)
    assert len(payload["atoms"]) == len(payload["weights"])
    assert 0 <= v.pair_index < 5


def test_report_passed_property():
    assert FuzzReport(1, 1, ()).passed
    bad = FuzzViolation("x", "d", 0, "{}", "{}")
    assert not FuzzReport(1, 1, (bad,)).passed
