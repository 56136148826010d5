class MnlBanditError(Exception):
    """Base class for every error raised by the library"""


class InvalidSubsetError(MnlBanditError):
    """Offered subset is empty or has repeated items"""


class ItemIndexError(MnlBanditError, IndexError):
    """Item index outside [0, n)"""


class InvalidRankingError(MnlBanditError):
    """Ranking has duplicates or items outside the offered subset"""


class InvalidScaleError(MnlBanditError):
    """Scale factor is not strictly positive"""


class InvalidParameterError(MnlBanditError, ValueError):
    """Algorithm or instance parameter outside its valid range"""


class InvalidOutcomeError(MnlBanditError):
    """Pairwise outcome whose winner equals its loser"""


class InsufficientPoolError(MnlBanditError):
    """Pool holds fewer items than the number requested"""


class DegenerateInstanceError(MnlBanditError):
    """A bound constant needs a strictly positive gap that the instance lacks"""


class TooLargeError(MnlBanditError):
    """Brute-force enumeration refused for an oversized input"""


class MismatchedOutcomeSpaceError(MnlBanditError):
    """Empirical histogram and exact distribution disagree on their outcomes"""


class UnknownEnvironmentError(MnlBanditError, ValueError):
    """Environment name is not one of the presets"""


class ConfigError(MnlBanditError, ValueError):
    """Malformed or inconsistent configuration document"""


class OutputError(MnlBanditError):
    """Writing or reading a result file failed"""
