from typing import Optional
from dataclasses import dataclass, asdict, replace, fields
from ltirelay.channel import ChannelParams
from ltirelay.errors import DomainError


@dataclass(frozen = True)
class SolverOptions:
	"""
	Settings of the mode optimizer and of the bin oracle.

	Attributes
	----------
	n_starts : int
		Number of multistart seeds. Default is `64`.
	seed : Optional[int]
		Seed of `numpy.random.default_rng`. Default is `0`.
	inner_tol : float
		Tolerance of the inner concave solve and of the oracle alternations. Default is `1e-10`.
	outer_tol : float
		Tolerance of the gain line searches. Default is `1e-7`.
	lambda_cap : Optional[float]
		Half-width of the gain search box. Defaults to `10 * sqrt(gamma P / sigma2)`.
	n_modes : Optional[int]
		Number of relay gain slots. Defaults to 7 (real), 49 (complex), 4 (frequency division).
	max_sweeps : int
		Maximum number of coordinate sweeps per start. Default is `40`.
	scan_points : int
		Number of grid points of the coarse scan preceding every golden-section line search. Default is `129`.
	polish : bool
		If `True` (default), the best start is polished by line searches on the true objective.
	max_iter : int
		Maximum number of alternations per price in the bin oracle. Default is `200`.
	"""
	n_starts: int = 64
	seed: Optional[int] = 0
	inner_tol: float = 1e-10
	outer_tol: float = 1e-7
	lambda_cap: Optional[float] = None
	n_modes: Optional[int] = None
	max_sweeps: int = 40
	scan_points: int = 129
	polish: bool = True
	max_iter: int = 200

	_default_modes = {'real': 7, 'complex': 49, 'fd': 4}

	def __post_init__(self):
		if self.n_starts < 1:
			raise DomainError(f"'n_starts' - incorrect value. Must be >= 1, received - {self.n_starts}")
		for name in ["inner_tol", "outer_tol"]:
			if not getattr(self, name) > 0.0:
				raise DomainError(f"'{name}' - incorrect value. Must be positive, received - {getattr(self, name)}")
		if self.lambda_cap is not None and not self.lambda_cap > 0.0:
			raise DomainError(f"'lambda_cap' - incorrect value. Must be positive, received - {self.lambda_cap}")
		if self.n_modes is not None and self.n_modes < 1:
			raise DomainError(f"'n_modes' - incorrect value. Must be >= 1, received - {self.n_modes}")
		if self.max_sweeps < 1 or self.max_iter < 1:
			raise DomainError(f"'max_sweeps' and 'max_iter' must be >= 1, received - {self.max_sweeps}, {self.max_iter}")
		if self.scan_points < 8:
			raise DomainError(f"'scan_points' - incorrect value. Must be >= 8, received - {self.scan_points}")

	def box(self, params: ChannelParams) -> float:
		"""Half-width of the gain search box for the given channel."""
		return self.lambda_cap if self.lambda_cap is not None else 10.0 * params.gain_scale

	def modes_for(self, form: str) -> int:
		"""Number of gain slots for the form `"real"`, `"complex"` or `"fd"`."""
		limit = self._default_modes[form]
		return limit if self.n_modes is None else min(self.n_modes, limit)

	def replace(self, **changes) -> 'SolverOptions':
		return replace(self, **changes)

	def to_dict(self) -> dict:
		return asdict(self)

	@classmethod
	def from_dict(cls, data: dict) -> 'SolverOptions':
		known = {x.name for x in fields(cls)}
		unknown = set(data) - known
		if unknown:
			raise DomainError(f"'options' - incorrect keys. Accepts {sorted(known)}, received - {sorted(unknown)}")
		return cls(**data)
