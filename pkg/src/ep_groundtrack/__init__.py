"""Adaptive repeat-groundtrack maintenance for low-thrust LEO spacecraft."""
