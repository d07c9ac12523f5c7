"""gridtrace - re-identification and privacy toolkit for grid-anonymized mobility traces."""

__version__ = "0.1.0"
