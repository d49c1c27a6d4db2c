"""Sweep configuration, grids, and emission invariants."""

import math

import pytest

from lqnash.sweep import (
    AGrid,
    ConfigError,
    SweepOutputs,
    a_points,
    format_float,
    parse_config,
    rows_to_csv,
    run_sweep,
    SweepConfig,
)


def minimal_doc(**overrides):
    doc = {
        "q1": 0.5, "r1": 1.0, "q2": 1.0,
        "a_grid": {"min": 0.5, "max": 2.0, "count": 4},
        "r2_values": [1.0],
        "outputs": {"csv": "out.csv"},
    }
    doc.update(overrides)
    return doc


class TestConfig:
    def test_defaults(self):
        config = parse_config(minimal_doc())
        assert config.b1 == 1.0 and config.b2 == 1.0 and config.x0 == 1.0
        assert config.a_grid.spacing == "linear"

    @pytest.mark.parametrize(
        "patch, message",
        [
            ({"a_grid": {"min": 0.0, "max": 1.0, "count": 4}}, "a_grid.min"),
            ({"a_grid": {"min": 2.0, "max": 1.0, "count": 4}}, "a_grid.max"),
            ({"a_grid": {"min": 0.5, "max": 1.0, "count": 0}}, "a_grid.count"),
            ({"a_grid": {"min": 0.5, "max": 1.0, "count": 4, "spacing": "cubic"}}, "spacing"),
            ({"r2_values": []}, "r2_values"),
            ({"r2_values": [1.0, -2.0]}, "r2_values"),
            ({"q1": 0.0}, "q1"),
            ({"b2": 0.0}, "b2"),
        ],
    )
    def test_invariant_violations(self, patch, message):
        with pytest.raises(ConfigError, match=message):
            parse_config(minimal_doc(**patch))

    def test_missing_key(self):
        doc = minimal_doc()
        del doc["r2_values"]
        with pytest.raises(ConfigError):
            parse_config(doc)

    def test_non_object(self):
        with pytest.raises(ConfigError):
            parse_config([1, 2, 3])


class TestAPoints:
    def test_linear_endpoints(self):
        pts = a_points(AGrid(min=0.5, max=2.0, count=4))
        assert pts[0] == 0.5 and pts[-1] == 2.0
        assert len(pts) == 4
        steps = [b - a for a, b in zip(pts, pts[1:])]
        assert all(math.isclose(s, steps[0]) for s in steps)

    def test_log_endpoints_and_ratios(self):
        pts = a_points(AGrid(min=0.01, max=1.0, count=5, spacing="log"))
        assert pts[0] == 0.01 and math.isclose(pts[-1], 1.0)
        ratios = [b / a for a, b in zip(pts, pts[1:])]
        assert all(math.isclose(r, ratios[0]) for r in ratios)

    def test_single_point(self):
        assert a_points(AGrid(min=0.7, max=0.7, count=1)) == [0.7]


class TestEmission:
    def test_csv_deterministic_and_lf_only(self):
        config = SweepConfig(
            q1=0.5, r1=1.0, q2=1.0,
            a_grid=AGrid(min=0.5, max=3.5, count=7),
            r2_values=(2.0, 1.0),
            outputs=SweepOutputs(csv="unused.csv"),
        )
        rows = run_sweep(config)
        text = rows_to_csv(rows)
        assert text == rows_to_csv(run_sweep(config))
        assert "\r" not in text
        assert len(text.splitlines()) == 1 + 7 * 2
        # r2 values are swept in ascending order regardless of input order
        r2_col = [line.split(",")[1] for line in text.splitlines()[1:]]
        assert r2_col == sorted(r2_col, key=float)

    def test_format_float_sig_digits(self):
        assert format_float(1.2290953879362431) == "1.22909538794"
        assert format_float(0.1) == "0.1"
        assert format_float(-5056.0) == "-5056"
