"""Shared exception types."""


class ContractError(RuntimeError):
    """An internal structural guarantee failed; carries a witness in the message."""


class GuardError(RuntimeError):
    """A size guard refused to run an exponential search; override explicitly."""
