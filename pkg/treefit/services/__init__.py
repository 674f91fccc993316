"""Algorithms, one service per concern, plus the command orchestration."""
