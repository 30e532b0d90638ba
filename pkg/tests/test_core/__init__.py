"""Tests for history loading, the LaMP adapter, store persistence and the memory builder."""
