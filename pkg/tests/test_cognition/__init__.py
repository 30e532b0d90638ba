"""Tests for segmentation and hierarchical summarization."""
