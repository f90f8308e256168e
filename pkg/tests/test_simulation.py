import numpy as np
import pytest

from raydiv import (
    GcConfig,
    coverage_time,
    empirical_measure,
    make_distribution,
    run_sweep,
    run_trial,
    sample_atoms,
    trial_rng,
    write_trace_csv,
)
from raydiv.simulation import format_float, trace_rows

NU3 = make_distribution([1.0, 2.0, 3.0], [0.2, 0.5, 0.3])


class StubRng:
    """Replays a fixed uniform stream through the sampler interface."""

    def __init__(self, stream):
        self.stream = list(stream)
        self.cursor = 0

    def random(self, n=None):
        if n is None:
            u = self.stream[self.cursor]
            self.cursor += 1
            return u
        out = self.stream[self.cursor : self.cursor + n]
        self.cursor += n
        return np.asarray(out, dtype=np.float64)


def test_inverse_cdf_boundaries():
    # prefix masses 0.2, 0.7, 1.0; a draw exactly at a boundary moves right
    atoms = sample_atoms(NU3, [0.0, 0.1, 0.2, 0.5, 0.7, 0.9, 1.0])
    assert atoms.tolist() == [1.0, 1.0, 2.0, 2.0, 3.0, 3.0, 3.0]


def test_empirical_measure_counts():
    emp = empirical_measure(NU3, [0.1, 0.5, 0.9])
    assert emp.sample_size == 3
    assert emp.base.atoms.tolist() == [1.0, 2.0, 3.0]
    assert np.allclose(emp.base.weights, [1 / 3, 1 / 3, 1 / 3])
    assert emp.counts.tolist() == [1, 1, 1]


def test_trial_on_stubbed_stream():
    values = run_trial(NU3, 3, StubRng([0.1, 0.5, 0.9]), generators=("tv",))
    tv = values["tv"]
    # empirical [1/3,1/3,1/3]: reverse supremum is 2/3 - 0.7 -> 0, forward 1/3 - 0.2
    assert abs(tv.forward - (1 / 3 - 0.2)) < 1e-14
    assert tv.reverse is not None
    assert abs(tv.symmetrized - max(tv.forward, tv.reverse)) < 1e-16


def test_trial_reverse_undefined_until_covered():
    values = run_trial(NU3, 2, StubRng([0.1, 0.5]), generators=("tv", "kl"))
    for name in ("tv", "kl"):
        assert values[name].reverse is None
        assert values[name].symmetrized is None
        assert values[name].forward > 0


def test_trial_rejects_bad_size():
    with pytest.raises(ValueError):
        run_trial(NU3, 0, trial_rng(0, 0))


def test_trial_rng_keying():
    a = trial_rng(42, 0).random(4)
    b = trial_rng(42, 0).random(4)
    c = trial_rng(42, 1).random(4)
    d = trial_rng(43, 0).random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)
    with pytest.raises(ValueError):
        trial_rng(-1, 0)


def test_coverage_time_stub_and_single_atom():
    assert coverage_time(make_distribution([5.0], [1.0]), StubRng([0.4])) == 1
    # draws land on atoms 1, 1, 2, 3: covered after the fourth
    assert coverage_time(NU3, StubRng([0.05, 0.1, 0.5, 0.9])) == 4


def test_coverage_time_mean_in_expected_range():
    times = [coverage_time(NU3, trial_rng(7, t)) for t in range(1000)]
    mean = float(np.mean(times))
    assert 3 <= mean <= 30
    assert min(times) >= 3


def test_sweep_medians_shrink():
    config = GcConfig(NU3, (20, 200), trials=20, generators=("tv",), seed=5)
    trace = run_sweep(config)
    small = trace.stat("tv", 20, "forward_median")
    large = trace.stat("tv", 200, "forward_median")
    assert large < small
    assert trace.cells[("tv", 200)].reverse_defined_fraction == 1.0


def test_sweep_is_deterministic():
    config = GcConfig(NU3, (10, 50), trials=8, generators=("tv", "kl"), seed=11)
    first = run_sweep(config)
    second = run_sweep(config)
    assert first.cells.keys() == second.cells.keys()
    for key in first.cells:
        assert first.cells[key].stats == second.cells[key].stats


def test_single_atom_target_all_zero():
    config = GcConfig(make_distribution([2.0], [1.0]), (1,), trials=1,
                      generators=("tv",), seed=0)
    trace = run_sweep(config)
    assert trace.stat("tv", 1, "forward_median") == 0.0
    assert trace.stat("tv", 1, "reverse_median") == 0.0
    assert trace.cells[("tv", 1)].reverse_defined_fraction == 1.0


def test_config_validation():
    with pytest.raises(ValueError):
        GcConfig(NU3, (), trials=1, generators=("tv",), seed=0)
    with pytest.raises(ValueError):
        GcConfig(NU3, (10, 10), trials=1, generators=("tv",), seed=0)
    with pytest.raises(ValueError):
        GcConfig(NU3, (10,), trials=0, generators=("tv",), seed=0)
    with pytest.raises(ValueError):
        GcConfig(NU3, (10,), trials=1, generators=(), seed=0)
    with pytest.raises(KeyError):
        GcConfig(NU3, (10,), trials=1, generators=("nope",), seed=0)


def test_format_float_round_trips():
    for x in (0.1, 1 / 3, 0.30000000000000004, 1e-17, 123456.789):
        assert float(format_float(x)) == x


def test_trace_rows_and_csv(tmp_path):
    config = GcConfig(NU3, (5,), trials=4, generators=("tv",), seed=3)
    trace = run_sweep(config)
    rows = list(trace_rows(trace))
    assert len(rows) == 9  # 3 series x 3 stat kinds
    assert {r[0] for r in rows} == {"tv"}
    assert {r[1] for r in rows} == {5}

    path = tmp_path / "trace.csv"
    write_trace_csv(trace, path, header_lines=("# test",))
    lines = path.read_text().splitlines()
    assert lines[0] == "# test"
    assert lines[1] == "generator,n,stat,value,reverse_defined_fraction"
    assert len(lines) == 2 + 9
    for line in lines[2:]:
        fields = line.split(",")
        assert len(fields) == 5
        if fields[3]:
            float(fields[3])  # parses and round-trips through 17 digits

    # undefined reverse cells render as empty values
    parsed = {}
    for line in lines[2:]:
        g, n, stat, value, frac = line.split(",")
        parsed[stat] = value
    if trace.cells[("tv", 5)].reverse_defined_fraction == 0.0:
        assert parsed["reverse_median"] == ""


def test_csv_byte_identical_across_runs(tmp_path):
    config = GcConfig(NU3, (10, 30), trials=6, generators=("tv", "chi2"), seed=9)
    p1 = tmp_path / "a.csv"
    p2 = tmp_path / "b.csv"
    write_trace_csv(run_sweep(config), p1)
    write_trace_csv(run_sweep(config), p2)
    assert p1.read_bytes() == p2.read_bytes()
