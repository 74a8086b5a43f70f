"""Riemannian steepest descent for the smallest eigenpair of SPD problems."""

from ._core import Error, Session, table, validate

__all__ = ["Error", "Session", "table", "validate"]
