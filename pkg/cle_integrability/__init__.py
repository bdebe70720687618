# cle_integrability/__init__.py
"""Closed-form CLE / LQG integrability laws with Monte-Carlo verification."""

__version__ = "0.1.0"
