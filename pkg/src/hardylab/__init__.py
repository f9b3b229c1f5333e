"""Numerical toolkit for the sharp discrete Hardy inequality with the
Keller-Pinchover-Pogorzelski weight."""

__version__ = "0.1.0"
