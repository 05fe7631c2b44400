"""Error hierarchy shared by the library and the command line.

The command line maps each family to an exit code (see ``app.py``).
"""


class SNCError(Exception):
    """Base class for every error raised by this package"""


class ParameterError(SNCError, ValueError):
    """A parameter or field element violates its domain"""


class UnsupportedParametersError(ParameterError):
    """The fitted dependence model has no parameters for this configuration"""


class ComparisonError(ParameterError):
    """Model and simulation outputs describe different configurations"""


class EncodingError(SNCError):
    """A coded payload could not be formed"""


class NotDecodableError(SNCError):
    """The decoder does not hold enough information to recover the generation"""


class ModelConstructionError(SNCError):
    """The Markov chain is malformed (non-stochastic rows, singular I - Q)"""


class SynthesisError(SNCError):
    """A decoder state (r, c) could not be synthesised for the dependence oracle"""


class FitError(SNCError):
    """Not enough informative samples to fit a curve"""


class SimulationCapError(SNCError):
    """A generation did not decode within the transmission cap"""

