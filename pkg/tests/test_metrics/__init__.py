"""Tests for re-identification risk metrics."""
