"""Exception hierarchy shared by the library and the CLI exit-code map."""


class StegoError(Exception):
    """Base class for all library errors."""


class ConfigError(StegoError):
    """Invalid configuration: bad channel spec, bad key, bad parameter."""


class ProtocolError(StegoError):
    """Malformed protocol data: unknown address array, framing, bad trace."""


class CounterError(StegoError):
    """Counter discipline violated (overflow or detected desynchronization)."""
