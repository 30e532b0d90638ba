"""Tests for walk scoring, the context-aware walk and retrieval baselines."""
