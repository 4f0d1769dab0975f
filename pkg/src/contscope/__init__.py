"""Finite-model toolkit: continuation monad, strengths, pile-ups, and
quantifier-scope disambiguation with three scope-assignment strategies."""

__version__ = "0.1.0"
