"""
Subcommands of the gridtrace CLI.

Importing this package registers every subcommand in COMMANDS.
"""

from src.commands import metrics, reid_space, reid_time, sanitize, sweep, synth, validate
from src.commands.artifacts import MANIFEST_NAME, ArtifactWriter
from src.commands.base import COMMANDS, Command, CommonOptions, SeededOptions, command

__all__ = [
    # Registry
    "COMMANDS",
    "Command",
    "command",
    # Options
    "CommonOptions",
    "SeededOptions",
    # Artifacts
    "ArtifactWriter",
    "MANIFEST_NAME",
    # Subcommand modules
    "metrics",
    "reid_space",
    "reid_time",
    "sanitize",
    "sweep",
    "synth",
    "validate",
]
