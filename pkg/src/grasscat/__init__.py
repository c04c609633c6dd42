"""Profiles, root data and Auslander-Reiten translates for CM(B_{k,n})."""

__version__ = "0.1.0"
