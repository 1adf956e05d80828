from typing import Optional, Any


class RelayError(Exception):
	"""Base class for all the errors raised by `ltirelay`."""


class DomainError(RelayError, ValueError):
	"""A parameter or an argument is outside of its domain."""


class GridMismatchError(DomainError):
	"""Two spectrum grids that are combined have different sizes."""


class ConstraintViolationError(RelayError, ValueError):
	"""
	A power budget or a structural constraint of an allocation is violated.

	Attributes
	----------
	violation : float
		The magnitude of the violation (in the units of the violated constraint).
	"""
	def __init__(self, message: str, violation: float = 0.0):
		super().__init__(message)
		self.violation = float(violation)


class DegenerateInputError(RelayError, ValueError):
	"""The water level of the water-filling rule is undefined or unbounded."""


class InfeasibleProblemError(RelayError, RuntimeError):
	"""The inner solve could not produce a feasible point."""


class ConvergenceError(RelayError, RuntimeError):
	"""
	An iterative procedure did not converge.

	Attributes
	----------
	last_iterate : Any
		The last iterate reached before giving up.
	residuals : dict
		The residuals at the last iterate.
	"""
	def __init__(self, message: str, last_iterate: Optional[Any] = None, residuals: Optional[dict] = None):
		super().__init__(message)
		self.last_iterate = last_iterate
		self.residuals = residuals if residuals is not None else {}


class IndefiniteCovarianceError(RelayError, ValueError):
	"""The Toeplitz covariance built from a spectrum is not positive semidefinite."""


class SynthesisError(RelayError, RuntimeError):
	"""The synthesized filter bank falls short of the required rate."""
