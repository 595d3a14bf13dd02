"""Pointer-anchored chart context for low-vision chart reading: a
deterministic overlay layout engine (dynamic context and mini-map), the
quiz/session apparatus around it, pointer-trace logging, and the
trajectory statistics pipeline."""

__version__ = "0.1.0"
