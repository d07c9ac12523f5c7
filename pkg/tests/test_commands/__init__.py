"""Tests for CLI subcommands."""
