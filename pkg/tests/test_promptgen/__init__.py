"""Tests for prompt templates, assembly and response parsing."""
