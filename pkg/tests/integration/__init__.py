"""Integration tests for the gridtrace command line."""
