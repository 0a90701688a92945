"""Shared exception types for configuration, protocol, and consistency failures."""


class GameError(Exception):
    """Base class for all engine errors."""


class ConfigError(GameError):
    """A game or strategy configuration violates its preconditions."""


class ProtocolViolation(GameError):
    """A move broke the rules of the game being played."""


class StrategyFault(GameError):
    """A pluggable strategy returned an illegal move."""


class InvariantViolation(GameError):
    """An internal consistency check failed; indicates an engine bug."""
