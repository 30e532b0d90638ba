"""Tests for memory data models and schemas."""
