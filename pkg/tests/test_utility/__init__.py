"""Tests for utility evaluation."""
