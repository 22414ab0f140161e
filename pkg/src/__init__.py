"""Covert communication coding lab."""
__version__ = "0.1.0"
__author__ = "Covert Lab Team"
