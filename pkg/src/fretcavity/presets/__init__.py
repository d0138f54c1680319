"""Sweep presets shipped with fretcavity, one ``<name>.conf`` per reproduced result."""
