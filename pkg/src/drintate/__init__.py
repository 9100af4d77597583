"""Exact arithmetic for Drinfeld modules over Tate algebras at desk scale."""

__version__ = "0.1.0"
