"""Tests for the netCommander integration."""
