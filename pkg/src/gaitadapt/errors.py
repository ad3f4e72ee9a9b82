"""Exception hierarchy for the gait planning and adaptation toolkit."""


class GaitAdaptError(Exception):
    """Base class for every error raised by :mod:`gaitadapt`."""


# --- gait parameters -------------------------------------------------------

class InvalidGaitParamsError(GaitAdaptError, ValueError):
    """Gait parameters violate an ordering or sign invariant."""


class InvalidTimingError(InvalidGaitParamsError):
    """SSP period is not strictly inside (0, cycle period)."""


class NonPositiveParameterError(InvalidGaitParamsError):
    """A parameter that must be strictly positive is not."""


class KinematicallyUnreachableError(InvalidGaitParamsError):
    """Some planned posture needs a hip-to-ankle distance beyond the leg."""


# --- polynomial solver -----------------------------------------------------

class PolynomialError(GaitAdaptError):
    pass


class SingularSystemError(PolynomialError, ArithmeticError):
    """The boundary-condition system has no unique solution."""


class TooFewConditionsError(PolynomialError, ValueError):
    pass


class CountMismatchError(PolynomialError, ValueError):
    """Number of constraints differs from number of unknown coefficients."""


class OutOfDomainError(PolynomialError, ValueError):
    pass


# --- kinematics ------------------------------------------------------------

class KinematicsError(GaitAdaptError):
    def __init__(self, message, side=None):
        super().__init__(message)
        self.side = side


class UnreachableError(KinematicsError):
    """Hip-to-ankle distance exceeds thigh + shank."""


class SingularPostureError(KinematicsError):
    """Knee within the singularity guard of full extension."""


# --- balance ---------------------------------------------------------------

class NoSupportError(GaitAdaptError):
    """Net vertical contact force is not positive (free fall)."""


class NoStanceFootError(GaitAdaptError):
    pass


# --- adaptation / simulation -----------------------------------------------

class OffsetAboveApexError(GaitAdaptError, ValueError):
    """Switch trigger offset is not below the swing apex height."""


class DSPExhaustedError(GaitAdaptError):
    """Double support ended while the swing foot was still searching for ground."""


class SimulationError(GaitAdaptError):
    """Wraps an error raised inside the simulation loop with its tick index."""

    def __init__(self, message, tick, cause):
        super().__init__(f"tick {tick}: {message}")
        self.tick = tick
        self.cause = cause


class EmptyTraceError(GaitAdaptError, ValueError):
    pass


class ConfigError(GaitAdaptError, ValueError):
    """Malformed or unknown entry in a key-value configuration file."""
