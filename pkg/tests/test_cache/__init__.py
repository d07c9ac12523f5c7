"""Tests for caching layer."""
