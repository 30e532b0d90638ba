"""Tests for configuration resolution."""
