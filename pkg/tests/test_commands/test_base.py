"""Unit tests for shared subcommand plumbing."""

import argparse
import json

import pydantic
import pytest

from src.commands.artifacts import MANIFEST_NAME, ArtifactWriter
from src.commands.base import COMMANDS, CommonOptions, SeededOptions, parse_pair
from src.commands.validate import ValidateInput
from src.utils.digests import file_sha256


class TestParsePair:
    """Test suite for parse_pair."""

    @pytest.mark.parametrize("value", ["40x20", "40X20", "40,20", (40, 20), ["40", "20"]])
    def test_accepted_forms(self, value):
        """Test WxH text and two-element sequences."""
        assert parse_pair(value, "clusters") == (40, 20)

    def test_rejects_other_shapes(self):
        """Test a three-part value is rejected."""
        with pytest.raises(ValueError):
            parse_pair("4x4x4", "clusters")


class TestCommonOptions:
    """Test suite for CommonOptions and SeededOptions."""

    def test_defaults(self):
        """Test the default grid and output directory."""
        options = CommonOptions()

        assert options.grid_spec.width == 200
        assert options.grid_spec.cell_size_m == 500.0
        assert options.day_count == 75
        assert options.seed is None

    def test_grid_spec_uses_cell_size(self):
        """Test the grid string and cell size combine into a GridSpec."""
        spec = CommonOptions(grid="40x20", cell_size_m=250).grid_spec
        assert (spec.width, spec.height, spec.cell_size_m) == (40, 20, 250.0)

    def test_list_fields_split_commas(self):
        """Test config-file strings become lists."""
        params = ValidateInput.model_validate({"traces": "t.csv", "rasters": "a.csv, b.csv"})
        assert [p.name for p in params.rasters] == ["a.csv", "b.csv"]

    def test_unknown_option_rejected(self):
        """Test misspelled config keys fail validation."""
        with pytest.raises(pydantic.ValidationError):
            CommonOptions.model_validate({"gird": "40x40"})

    def test_invalid_grid(self):
        """Test a malformed grid string fails validation."""
        with pytest.raises(pydantic.ValidationError):
            CommonOptions(grid="forty")

    def test_seed_required(self):
        """Test seeded commands have no default seed."""
        with pytest.raises(pydantic.ValidationError):
            SeededOptions()


class TestRegistry:
    """Test suite for the command registry."""

    def test_every_command_registered(self):
        """Test the full subcommand set."""
        assert sorted(COMMANDS) == [
            "metrics", "reid-space", "reid-time", "sanitize", "sweep", "synth", "validate",
        ]

    def test_parser_defaults_suppressed(self):
        """Test unset flags do not appear in the parsed namespace."""
        parser = argparse.ArgumentParser()
        subparsers = parser.add_subparsers(dest="command")
        COMMANDS["validate"].add_parser(subparsers, [])

        args = vars(parser.parse_args(["validate", "--traces", "t.csv"]))

        assert args == {"command": "validate", "traces": "t.csv"}


class TestArtifactWriter:
    """Test suite for ArtifactWriter."""

    def test_manifest_lists_artifacts(self, tmp_path):
        """Test the manifest is sorted and carries file digests."""
        writer = ArtifactWriter(tmp_path)
        writer.csv("b.csv", [{"x": 1}])
        writer.json("a/a.json", {"z": 1, "a": 2})

        manifest = writer.finalize("validate")

        assert [a.path for a in manifest.artifacts] == ["a/a.json", "b.csv"]
        assert manifest.artifacts[1].sha256 == file_sha256(tmp_path / "b.csv")
        assert json.loads((tmp_path / MANIFEST_NAME).read_text())["command"] == "validate"

    def test_json_keys_sorted(self, tmp_path):
        """Test dict payloads are written with sorted keys."""
        path = ArtifactWriter(tmp_path).json("out.json", {"z": 1, "a": 2})
        assert path.read_text() == '{\n  "a": 2,\n  "z": 1\n}\n'

    def test_csv_columns_and_line_endings(self, tmp_path):
        """Test explicit columns are honored and lines end with LF."""
        path = ArtifactWriter(tmp_path).csv("rows.csv", [{"b": 2, "a": 1}], columns=["a", "b"])
        assert path.read_bytes() == b"a,b\n1,2\n"

    def test_repeated_writes_recorded_once(self, tmp_path):
        """Test rewriting a path keeps one manifest entry."""
        writer = ArtifactWriter(tmp_path)
        writer.json("x.json", {"v": 1})
        writer.json("x.json", {"v": 2})

        assert len(writer.finalize("sweep").artifacts) == 1
