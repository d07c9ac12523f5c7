"""Test suite for gridtrace."""
