"""Shared utility functions and helpers."""
