"""Bundled reference data (holiday calendar)."""
