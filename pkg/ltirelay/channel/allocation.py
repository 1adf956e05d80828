from typing import List, Optional, Any
from dataclasses import dataclass, field
import warnings
import numpy as np
from pandas import DataFrame
from ltirelay.channel.params import ChannelParams, _gain_to_json, _gain_from_json
from ltirelay.errors import DomainError, ConstraintViolationError
from ltirelay.util import to_unit


class _ModeSet:
	"""
	Band fractions and power fractions of a set of modes; mode 0 carries no relay gain.

	Subclasses attach the relay gains and define how they enter the relay power.

	Attributes
	----------
	tau : np.ndarray
		Band fractions of the J+1 modes.
	theta : np.ndarray
		Power fractions of the J+1 modes.
	"""

	_max_modes = 49
	_gain_name = "gain"

	def __init__(self, tau, theta, gains, **extra_params):
		tol = extra_params.get('tol', 1e-9)
		tau, theta = np.array(tau, dtype = float).ravel(), np.array(theta, dtype = float).ravel()
		gains = np.array(gains).ravel()

		if len(tau) != len(theta) or len(tau) != len(gains) + 1:
			raise DomainError(f"'tau', 'theta' must have one entry more than '{self._gain_name}', received - {len(tau)}, {len(theta)}, {len(gains)}")
		if len(gains) > self._max_modes:
			raise DomainError(f"'{self._gain_name}' - too many relay modes. Accepts at most {self._max_modes}, received - {len(gains)}")
		if not (np.all(np.isfinite(tau)) and np.all(np.isfinite(theta)) and np.all(np.isfinite(gains))):
			raise DomainError("The allocation contains non-finite entries")
		if np.any(tau < -tol) or np.any(theta < -tol):
			raise DomainError(f"'tau' and 'theta' must be nonnegative, received - {tau}, {theta}")
		tau, theta = np.clip(tau, 0.0, None), np.clip(theta, 0.0, None)
		if abs(tau.sum() - 1.0) > tol:
			raise DomainError(f"'tau' - incorrect value. Must sum to 1, received sum - {tau.sum()}")
		if abs(theta.sum() - 1.0) > tol:
			raise DomainError(f"'theta' - incorrect value. Must sum to 1, received sum - {theta.sum()}")
		empty = (tau == 0.0) & (theta > 0.0)
		if np.any(empty):
			raise ConstraintViolationError(f"Power is allocated to an empty band (modes {list(np.nonzero(empty)[0])})", violation = float(theta[empty].max()))

		self.tau, self.theta = tau, theta
		self.tau.setflags(write = False)
		self.theta.setflags(write = False)
		self._set_gains(gains)

	def _set_gains(self, gains: np.ndarray):
		raise NotImplementedError

	def _power_gains(self) -> np.ndarray:
		"""Per-mode relay power gain (|λ|² or η) for modes 1..J."""
		raise NotImplementedError

	@property
	def n_modes(self) -> int:
		"""Number of relay modes J (mode 0 excluded)."""
		return len(self.tau) - 1

	def active(self, tol: float = 1e-6) -> List[int]:
		"""Indices of the modes with `tau > tol` (mode 0 included)."""
		return list(np.nonzero(self.tau > tol)[0])

	def relay_power(self, params: ChannelParams) -> float:
		"""
		Relay transmit power of the allocation.

		`sum_j |g_j|² (|a|² theta_j P + tau_j sigma2)` over the relay modes, which is linear in `(tau, theta)`.
		"""
		w = self._power_gains()
		return float(np.sum(w * (abs(params.a) ** 2 * self.theta[1:] * params.P + self.tau[1:] * params.sigma2)))

	def check_feasible(self, params: ChannelParams, tol: float = 1e-9):
		"""
		Check the relay power budget.

		Raises
		------
		ConstraintViolationError
			If the relay power exceeds `gamma * P` by more than `tol` (relative to `max(1, gamma * P)`).
		"""
		excess = self.relay_power(params) - params.relay_budget
		if excess > tol * max(1.0, params.relay_budget):
			raise ConstraintViolationError(f"Relay power exceeds the budget {params.relay_budget} by {excess}", violation = excess)

	def _table(self) -> dict:
		return {'tau': self.tau, 'theta': self.theta}

	def to_dataframe(self) -> DataFrame:
		"""One row per mode, mode 0 first."""
		data = {'mode': np.arange(len(self.tau))}
		data.update(self._table())
		return DataFrame(data)

	def __len__(self):
		return len(self.tau)

	def __eq__(self, other):
		if type(other) is not type(self) or len(other) != len(self):
			return False
		return bool(np.array_equal(self.tau, other.tau) and np.array_equal(self.theta, other.theta) and np.array_equal(self._gains_array(), other._gains_array()))

	def _gains_array(self) -> np.ndarray:
		raise NotImplementedError

	def _rebuild(self, tau, theta, gains):
		raise NotImplementedError

	def canonical(self, **extra_params):
		"""
		Canonical form of the allocation.

		Zero-gain modes are merged into mode 0, modes with a negligible band are dropped
		(their band and power are moved to mode 0), equal gains are merged and the gains
		are sorted descending by real part, then by magnitude.

		Other parameters
		----------------
		tau_tol : float
			Bands below this value are pruned. Default is `1e-12`.
		gain_tol : float
			Gains closer than this are merged. Default is `1e-9`.
		"""
		tau_tol, gain_tol = extra_params.get('tau_tol', 1e-12), extra_params.get('gain_tol', 1e-9)
		tau0, theta0 = self.tau[0], self.theta[0]
		groups = []
		for t, th, g in zip(self.tau[1:], self.theta[1:], self._gains_array()):
			if abs(g) <= gain_tol or t <= tau_tol:
				tau0, theta0 = tau0 + t, theta0 + th
				continue
			for group in groups:
				if abs(group[2] - g) <= gain_tol:
					group[0], group[1] = group[0] + t, group[1] + th
					break
			else:
				groups.append([t, th, g])
		groups.sort(key = lambda x: (np.real(x[2]), abs(x[2])), reverse = True)
		tau = [tau0] + [x[0] for x in groups]
		theta = [theta0] + [x[1] for x in groups]
		return self._rebuild(tau, theta, [x[2] for x in groups])

	def __str__(self):
		return f"{type(self).__name__}(modes = {self.n_modes}, structure = \n{str(self.to_dataframe())})"


class ModeAllocation(_ModeSet):
	"""
	Band fractions, power fractions and relay gains of an LTI relay allocation.

	Mode 0 is the relay-silent mode. Modes `1..J` carry the relay gains `lam`.
	The gains are real for the real form (`J <= 7`) and complex for the complex form (`J <= 49`).

	Attributes
	----------
	tau : np.ndarray
		Band fractions of the J+1 modes.
	theta : np.ndarray
		Power fractions of the J+1 modes.
	lam : np.ndarray
		Relay gains of modes `1..J`.
	form : str
		Either `"real"` or `"complex"`.
	"""

	_forms_available = ["real", "complex"]
	_gain_name = "lam"

	def __init__(self, tau, theta, lam, **extra_params):
		"""
		Parameters
		----------
		tau
			Band fractions (J+1 entries, nonnegative, summing to 1).
		theta
			Power fractions (J+1 entries, nonnegative, summing to 1).
		lam
			Relay gains (J entries).

		Other parameters
		----------------
		form : str
			Either `"real"` or `"complex"`. Defaults to `"real"` when all the gains are real.
		tol : float
			Tolerance used for the simplex checks. Default is `1e-9`.
		"""
		lam = np.array(lam).ravel()
		form = extra_params.get('form', "real" if np.all(np.imag(lam) == 0.0) else "complex")
		if form not in self._forms_available:
			raise DomainError(f"'form' - incorrect value. Accepts {self._forms_available}, received - {form}")
		if form == "real" and np.any(np.imag(lam) != 0.0):
			raise DomainError("'lam' - complex gains are given for the real form")
		self.form = form
		self._max_modes = 7 if form == "real" else 49
		super().__init__(tau, theta, lam, **extra_params)

	def _set_gains(self, gains):
		self.lam = np.real(gains).astype(float) if self.form == "real" else gains.astype(complex)
		self.lam.setflags(write = False)

	def _power_gains(self):
		return np.abs(self.lam) ** 2

	def _gains_array(self):
		return self.lam

	@classmethod
	def direct(cls) -> 'ModeAllocation':
		"""Mode-0-only allocation (the relay stays silent)."""
		return cls([1.0], [1.0], [])

	@classmethod
	def single_mode(cls, lam: complex) -> 'ModeAllocation':
		"""All the band and all the power in one relay mode with gain `lam`."""
		return cls([0.0, 1.0], [0.0, 1.0], [lam])

	def _rebuild(self, tau, theta, gains):
		return ModeAllocation(tau, theta, np.array(gains, dtype = self.lam.dtype), form = self.form)

	def _table(self):
		res = super()._table()
		res['lam'] = np.concatenate([[0.0], self.lam]).astype(self.lam.dtype)
		return res

	def to_dict(self) -> dict:
		"""JSON-safe dictionary; complex gains are stored as `[re, im]`."""
		return {
			'form': self.form,
			'tau': [float(x) for x in self.tau],
			'theta': [float(x) for x in self.theta],
			'lam': [_gain_to_json(x) if self.form == "complex" else float(np.real(x)) for x in self.lam]
		}

	@classmethod
	def from_dict(cls, data: dict) -> 'ModeAllocation':
		lam = [_gain_from_json(x) for x in data['lam']]
		form = data.get('form', "real")
		return cls(data['tau'], data['theta'], np.array(lam, dtype = complex if form == "complex" else float), form = form)

	def __repr__(self):
		return f"ModeAllocation(tau = {list(self.tau)}, theta = {list(self.theta)}, lam = {list(self.lam)}, form = '{self.form}')"


class FDAllocation(_ModeSet):
	"""
	Allocation of the frequency-division linear relaying scheme.

	Mode 0 plus at most 4 relay modes with nonnegative power gains `eta`.

	Attributes
	----------
	tau : np.ndarray
		Band fractions of the J+1 modes.
	theta : np.ndarray
		Power fractions of the J+1 modes.
	eta : np.ndarray
		Relay power gains of modes `1..J`.
	"""

	_max_modes = 4
	_gain_name = "eta"

	def _set_gains(self, gains):
		if np.any(np.imag(gains) != 0.0) or np.any(np.real(gains) < 0.0):
			raise DomainError(f"'eta' - incorrect value. Accepts nonnegative reals, received - {gains}")
		self.eta = np.real(gains).astype(float)
		self.eta.setflags(write = False)

	def _power_gains(self):
		return self.eta

	def _gains_array(self):
		return self.eta

	def _rebuild(self, tau, theta, gains):
		return FDAllocation(tau, theta, np.array(gains, dtype = float))

	def _table(self):
		res = super()._table()
		res['eta'] = np.concatenate([[0.0], self.eta])
		return res

	def to_dict(self) -> dict:
		return {'tau': [float(x) for x in self.tau], 'theta': [float(x) for x in self.theta], 'eta': [float(x) for x in self.eta]}

	@classmethod
	def from_dict(cls, data: dict) -> 'FDAllocation':
		return cls(data['tau'], data['theta'], data['eta'])

	def __repr__(self):
		return f"FDAllocation(tau = {list(self.tau)}, theta = {list(self.theta)}, eta = {list(self.eta)})"


@dataclass(frozen = True)
class RateReport:
	"""
	Comparison of the LTI relaying capacity with the baselines for one channel.

	All the rates are stored in bits per channel use.

	Attributes
	----------
	params : ChannelParams
		The channel the report is computed for.
	c_lti : float
		Capacity with LTI relaying (real form).
	c_fd : float
		Capacity of frequency-division linear relaying.
	r_iaf : float
		Rate of the full-power instantaneous amplify-and-forward relay.
	r_iaf_opt : float
		Rate of the instantaneous amplify-and-forward relay with the best gain.
	r_direct : float
		Rate without the relay.
	cutset : float
		Unlimited look-ahead cut-set bound.
	cutset_classical : float
		Classical (causal relay) cut-set bound.
	allocation : ModeAllocation
		The allocation achieving `c_lti`.
	fd_allocation : Optional[FDAllocation]
		The allocation achieving `c_fd`.
	relay_power : float
		Relay power used by `allocation`.
	kkt : Any
		The [`KKTReport`][ltirelay.optimizer.kkt.KKTReport] of `allocation`.
	diagnostics : dict
		Solver diagnostics (starts, inner solves, warnings).
	"""
	params: ChannelParams
	c_lti: float
	c_fd: float
	r_iaf: float
	r_iaf_opt: float
	r_direct: float
	cutset: float
	cutset_classical: float
	allocation: ModeAllocation
	fd_allocation: Optional[FDAllocation] = None
	relay_power: float = 0.0
	kkt: Any = None
	diagnostics: dict = field(default_factory = dict)

	_schemes = ["lti", "fd", "iaf", "iaf-opt", "direct", "cutset", "cutset-classical"]

	def __post_init__(self):
		for name in ["r_direct", "r_iaf", "r_iaf_opt"]:
			if getattr(self, name) > self.c_lti + 1e-6:
				warnings.warn(f"'{name}' = {getattr(self, name)} exceeds c_lti = {self.c_lti}", category = RuntimeWarning)
		if self.c_lti > self.cutset + 1e-6:
			warnings.warn(f"c_lti = {self.c_lti} exceeds the cut-set bound {self.cutset}", category = RuntimeWarning)

	def rates(self, unit: str = "bits") -> dict:
		"""Rates of all the schemes, keyed by scheme name."""
		values = [self.c_lti, self.c_fd, self.r_iaf, self.r_iaf_opt, self.r_direct, self.cutset, self.cutset_classical]
		return {scheme: float(to_unit(value, unit)) for scheme, value in zip(self._schemes, values)}

	def to_dataframe(self, unit: str = "bits") -> DataFrame:
		"""One row per scheme with its rate."""
		rates = self.rates(unit)
		return DataFrame({'scheme': list(rates.keys()), f"rate_{unit}": list(rates.values())})

	def to_dict(self, unit: str = "bits") -> dict:
		rates = self.rates(unit)
		return {
			'params': self.params.to_dict(),
			'unit': unit,
			'c_lti': rates['lti'],
			'c_fd': rates['fd'],
			'r_iaf': rates['iaf'],
			'r_iaf_opt': rates['iaf-opt'],
			'r_direct': rates['direct'],
			'cutset': rates['cutset'],
			'cutset_classical': rates['cutset-classical'],
			'allocation': self.allocation.to_dict(),
			'fd_allocation': self.fd_allocation.to_dict() if self.fd_allocation is not None else None,
			'relay_power': float(self.relay_power),
			'relay_budget': float(self.params.relay_budget),
			'kkt': self.kkt.to_dict() if self.kkt is not None else None,
			'scope': "c_lti upper-bounds the capacity of causal LTI relaying",
			'diagnostics': self.diagnostics
		}

	def __str__(self):
		return f"RateReport({self.params}, rates = \n{str(self.to_dataframe())})"
