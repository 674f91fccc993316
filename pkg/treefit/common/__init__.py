"""Shared helpers for logging, error mapping, workers and formatting."""
