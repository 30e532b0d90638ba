"""Tests for clustering, graph construction and export."""
