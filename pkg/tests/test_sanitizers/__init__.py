"""Tests for location sanitizers."""
