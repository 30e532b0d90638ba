"""Tests for embedding and generation providers."""
