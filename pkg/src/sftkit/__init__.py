"""Finite-window tools for paradoxical subshifts, seeded Wang tilings and
SFT extensions of effectively closed actions on F2 x F2."""

__version__ = "0.1.0"
