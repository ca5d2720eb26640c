"""Verification and simulation toolkit for generalised Maxwell and Weyl equations."""

__version__ = "0.1.0"
