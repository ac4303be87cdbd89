import pytest

from qrl import ASCENDING, PreconditionError, decide
from qrl.bench import FAMILIES, family_ladder, family_units, run_bench


class TestFamilies:
    def test_units_family_shape(self):
        F = family_units(60)
        assert F.validate() == []
        assert abs(F.size - 60) <= 3

    def test_ladder_family_shape(self):
        F = family_ladder(160)
        assert F.validate() == []
        assert abs(F.size - 160) <= 8

    def test_families_decide_true(self):
        for name, build in FAMILIES.items():
            t = decide(build(96))
            assert t.verdict.value == "TRUE", name

    def test_structural_bounds_hold(self):
        for build in FAMILIES.values():
            F = build(200)
            t = decide(F)
            assert len(t.steps) <= F.size
            for s in t.steps:
                assert s.size_after < s.size_before
                assert s.closure_iterations <= 2 * len(F.prefix) + 1


class TestRunBench:
    def test_report_shape(self):
        r = run_bench(family="ladder", max_size=400, samples=3)
        assert r["schema"] == "qrl-bench/1"
        assert r["family"] == "ladder"
        assert r["policy"] == str(ASCENDING)
        assert len(r["rows"]) >= 2
        for row in r["rows"]:
            assert set(row) == {
                "target_size",
                "size",
                "vars",
                "clauses",
                "seconds",
                "steps",
                "closure_iterations",
                "verdict",
            }
            assert row["seconds"] >= 0
            assert row["steps"] <= row["size"]

    def test_sizes_ascend(self):
        r = run_bench(family="units", max_size=500, samples=4)
        sizes = [row["size"] for row in r["rows"]]
        assert sizes == sorted(sizes)
        assert sizes[-1] <= 500 + 3

    def test_exponent_reported(self):
        r = run_bench(family="ladder", max_size=400, samples=3)
        assert isinstance(r["time_exponent"], float)
        assert isinstance(r["steps_exponent"], float)

    def test_unknown_family_rejected(self):
        with pytest.raises(PreconditionError):
            run_bench(family="nope", max_size=100)

    def test_tiny_max_still_reports(self):
        r = run_bench(family="units", max_size=10, samples=2)
        assert len(r["rows"]) == 1  # clamped below the log-spacing floor

    def test_nonpositive_max_rejected(self):
        with pytest.raises(PreconditionError):
            run_bench(family="units", max_size=0)
