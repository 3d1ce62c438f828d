"""Shared exception types."""

from __future__ import annotations


class SocgraphError(Exception):
    """Base class for all library errors."""


class GraphFormatError(SocgraphError):
    """Malformed graph text (bad header, bad edge line, duplicate edge)."""


class TableFormatError(SocgraphError):
    """Malformed process-table or experiment text."""


class BudgetExceededError(SocgraphError):
    """A scan would exceed the configured step budget."""


class InvariantError(SocgraphError):
    """An internal invariant that should hold by construction was violated."""
