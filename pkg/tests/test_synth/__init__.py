"""Tests for synthetic city and release generation."""
