"""Exception hierarchy shared across the package."""


class TirilmanError(Exception):
    """Base class for all package-specific failures."""


class CapExceeded(TirilmanError):
    """An input exceeds a configured support / size cap."""


class OracleCapExceeded(CapExceeded):
    """A brute-force oracle was handed a vector above its tiny cap."""


class RegimeError(TirilmanError):
    """A suite that requires gamma*3^(1/q) < 1 was run outside that regime."""


class LpFailure(TirilmanError):
    """The LP solver could not produce a usable vertex."""


class LpStall(LpFailure):
    """Pivoting stalled; the caller may perturb and retry."""


class NotConverged(TirilmanError):
    """Cutting plane hit its iteration cap before certifying feasibility."""


class TooCoarse(TirilmanError):
    """A single coordinate is too large for the requested chunk size."""


class ChunkCountError(TirilmanError):
    """A chunk decomposition violated its chunk-count bound."""


class ParseError(TirilmanError):
    """Malformed input file; carries a line number when available."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line
