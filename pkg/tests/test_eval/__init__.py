"""Tests for metrics, dataset ingestion and the evaluation runner."""
