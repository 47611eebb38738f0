"""Verification toolkit for 3-class groups of pure cubic fields Q(cbrt p)."""

__version__ = "0.1.0"
