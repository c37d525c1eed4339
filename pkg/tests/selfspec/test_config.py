"""Tests for JSON job configuration loading."""

from __future__ import annotations

import json
import re
from typing import TYPE_CHECKING, Any

import pytest

from selfspec.cli.config import JobConfig, config_from_mapping, load_config, parse_depth, parse_number

from .conftest import assert_selfspec_error

if TYPE_CHECKING:
    from pathlib import Path

BASE: dict[str, Any] = {"n": 2, "a": ["1/3", "1/3", "1/3"], "beta": [0, "2/3", 1], "d": [0, 0, "1/2"]}


def _with(**changes: Any) -> dict[str, Any]:
    return {**BASE, **changes}


class TestParseNumber:
    @pytest.mark.parametrize(("raw", "expected"), [(2, 2.0), (0.5, 0.5), ("1/3", 1 / 3), (" -2/4 ", -0.5), ("3", 3.0)])
    def test_accepted(self, raw: Any, expected: float):
        assert parse_number(raw, "x") == expected

    @pytest.mark.parametrize("raw", [True, None, "1/0", "one", [1]])
    def test_rejected(self, raw: Any):
        err = assert_selfspec_error(parse_number, raw, "x", kind="InvalidConfig")
        assert err.message.startswith("x:")


class TestParseDepth:
    @pytest.mark.parametrize(("raw", "expected"), [("auto", "auto"), (3, 3), ("12", 12)])
    def test_accepted(self, raw: Any, expected: int | str):
        assert parse_depth(raw) == expected

    @pytest.mark.parametrize("raw", [0, -1, "x", 2.5, True])
    def test_rejected(self, raw: Any):
        assert_selfspec_error(parse_depth, raw, kind="InvalidConfig")


class TestConfigFromMapping:
    def test_defaults(self):
        config = config_from_mapping(BASE)
        assert config == JobConfig(n=2, N=3, a=(1 / 3,) * 3, beta=(0.0, 2 / 3, 1.0), d=(0.0, 0.0, 0.5))
        assert config.depth == "auto"
        assert config.format == "csv"
        assert config.output == "-"

    def test_all_fields(self):
        config = config_from_mapping(
            _with(
                N=3,
                depth=9,
                pos_count=4,
                neg_count=1,
                rel_tol=1e-8,
                auto_depth_tol="1/100",
                output="out.csv",
                format="text",
                force=True,
            )
        )
        assert (config.depth, config.pos_count, config.neg_count) == (9, 4, 1)
        assert config.auto_depth_tol == 0.01
        assert (config.output, config.format, config.force) == ("out.csv", "text", True)

    def test_params_validate(self):
        params = config_from_mapping(BASE).params()
        assert params.m == 3

    @pytest.mark.parametrize(
        ("data", "match"),
        [
            (_with(extra=1), "Unknown configuration keys: extra"),
            (_with(seed=5), "Unknown configuration keys: seed"),
            ({"n": 2, "a": [0.5, 0.5]}, "Missing configuration keys: beta, d"),
            (_with(N=4), "N=4"),
            (_with(format="json"), "format"),
            (_with(force="yes"), "force"),
            (_with(output=3), "output"),
            (_with(n=0), "n: expected an integer"),
            (_with(pos_count=-1), "pos_count"),
            (_with(a="1/3"), "a: expected a list"),
            (_with(beta=[0, "x", 1]), r"beta\[1\]"),
        ],
    )
    def test_invalid(self, data: dict[str, Any], match: str):
        err = assert_selfspec_error(config_from_mapping, data, kind="InvalidConfig")
        assert re.search(match, err.message)


class TestLoadConfig:
    def test_round_trip_file(self, tmp_path: Path):
        path = tmp_path / "job.json"
        path.write_text(json.dumps(_with(depth=6, pos_count=3)))
        config = load_config(path)
        assert (config.depth, config.pos_count) == (6, 3)

    def test_missing_file(self, tmp_path: Path):
        err = assert_selfspec_error(load_config, tmp_path / "absent.json", kind="InvalidConfig")
        assert "Cannot read" in err.message

    def test_invalid_json(self, tmp_path: Path):
        path = tmp_path / "job.json"
        path.write_text("{")
        err = assert_selfspec_error(load_config, path, kind="InvalidConfig")
        assert "invalid JSON" in err.message

    def test_not_an_object(self, tmp_path: Path):
        path = tmp_path / "job.json"
        path.write_text("[1, 2]")
        assert_selfspec_error(load_config, path, kind="InvalidConfig")
