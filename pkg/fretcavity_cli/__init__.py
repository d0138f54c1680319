"""fretcavity CLI tool."""

__version__ = "2026.10.1"
