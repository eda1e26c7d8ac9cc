"""Abelian covers of the projective plane whose covering map is the canonical map."""

__version__ = "0.1.0"
