from typing import List, Optional, Callable
from dataclasses import dataclass, field
import numpy as np
import pandas as pd
from ltirelay.channel import ChannelParams, iaf_rate, iaf_rate_optimal, iaf_optimal_gain, direct_rate
from ltirelay.optimizer import SolverOptions, optimize_lti_real, optimize_lti_complex, optimize_fd, cutset_bound
from ltirelay.errors import DomainError
from ltirelay.util import to_unit, UNITS


@dataclass(frozen = True)
class SweepSpec:
	"""
	A one-parameter sweep of the channel.

	Attributes
	----------
	param : str
		Swept field, one of `"P"`, `"gamma"`, `"a"`, `"b"`.
	values : List[float]
		Values of the swept field.
	fixed : ChannelParams
		The other fields of the channel.
	schemes : List[str]
		Schemes evaluated at every value.
	"""
	param: str
	values: List[float]
	fixed: ChannelParams = field(default_factory = ChannelParams)
	schemes: List[str] = field(default_factory = lambda: ["lti", "iaf", "direct", "cutset"])

	_params_available = ["P", "gamma", "a", "b"]
	_schemes_available = ["lti", "lti-complex", "fd", "iaf", "iaf-opt", "direct", "cutset", "cutset-classical"]
	_scales_available = ["linear", "log"]

	def __post_init__(self):
		if self.param not in self._params_available:
			raise DomainError(f"'param' - incorrect value. Accepts {self._params_available}, received - {self.param}")
		if len(self.values) == 0:
			raise DomainError("'values' - the sweep is empty")
		unknown = [x for x in self.schemes if x not in self._schemes_available]
		if unknown or len(self.schemes) == 0:
			raise DomainError(f"'schemes' - incorrect value. Accepts {self._schemes_available}, received - {self.schemes}")
		for value in self.values:
			self.params_at(value)

	@classmethod
	def grid(cls, lo: float, hi: float, count: int, scale: str = "linear") -> List[float]:
		"""`count` values from `lo` to `hi`, evenly spaced on a linear or a log scale."""
		if scale not in cls._scales_available:
			raise DomainError(f"'scale' - incorrect value. Accepts {cls._scales_available}, received - {scale}")
		if count < 1:
			raise DomainError(f"'count' - incorrect value. Accepts positive integers, received - {count}")
		if scale == "log":
			if not (lo > 0.0 and hi > 0.0):
				raise DomainError(f"A log grid needs positive ends, received - {lo}, {hi}")
			return [float(x) for x in np.geomspace(lo, hi, count)]
		return [float(x) for x in np.linspace(lo, hi, count)]

	def params_at(self, value: float) -> ChannelParams:
		"""The channel at one value of the sweep."""
		return self.fixed.replace(**{self.param: value})


def evaluate_scheme(scheme: str, params: ChannelParams, opts: Optional[SolverOptions] = None) -> dict:
	"""
	Rate of one scheme for one channel.

	Returns
	-------
	dict
		`rate` in bits, `relay_power` (NaN for the bounds) and `modes`, the number of active relay modes.
	"""
	if scheme in ["lti", "lti-complex", "fd"]:
		optimize = {"lti": optimize_lti_real, "lti-complex": optimize_lti_complex, "fd": optimize_fd}[scheme]
		alloc, rate = optimize(params, opts)[:2]
		return {'rate': rate, 'relay_power': alloc.relay_power(params), 'modes': len([j for j in alloc.active() if j > 0])}

	if scheme == "iaf":
		return {'rate': iaf_rate(params), 'relay_power': params.relay_budget, 'modes': 1}

	if scheme == "iaf-opt":
		gain = iaf_optimal_gain(params)
		power = abs(gain) ** 2 * (abs(params.a) ** 2 * params.P + params.sigma2)
		return {'rate': iaf_rate_optimal(params), 'relay_power': power, 'modes': int(gain != 0)}

	if scheme == "direct":
		return {'rate': direct_rate(params), 'relay_power': 0.0, 'modes': 0}

	if scheme in ["cutset", "cutset-classical"]:
		return {'rate': cutset_bound(params, lookahead = scheme == "cutset"), 'relay_power': np.nan, 'modes': 0}

	raise DomainError(f"'scheme' - incorrect value. Accepts {SweepSpec._schemes_available}, received - {scheme}")


def run_sweep(spec: SweepSpec, opts: Optional[SolverOptions] = None, **extra_params) -> pd.DataFrame:
	"""
	Evaluate every scheme at every value of a sweep.

	Parameters
	----------
	spec
		The sweep.
	opts
		The solver settings of the optimized schemes.

	Other parameters
	----------------
	unit : str
		Either `"bits"` (default) or `"nats"`. Names the rate column `rate_<unit>`.
	on_row : Callable
		Called with every row (a dict) as soon as it is computed.

	Returns
	-------
	pd.DataFrame
		Columns `param`, `value`, `scheme`, `rate_<unit>`, `relay_power`, `modes`, one row per
		(value, scheme) in the order of the sweep.
	"""
	unit = extra_params.get('unit', "bits")
	if unit not in UNITS:
		raise DomainError(f"'unit' - incorrect value. Accepts {UNITS}, received - {unit}")
	on_row: Optional[Callable] = extra_params.get('on_row')
	rate_column = f"rate_{unit}"

	rows = []
	for value in spec.values:
		params = spec.params_at(value)
		for scheme in spec.schemes:
			res = evaluate_scheme(scheme, params, opts)
			row = {'param': spec.param, 'value': value, 'scheme': scheme, rate_column: float(to_unit(res['rate'], unit)), 'relay_power': res['relay_power'], 'modes': res['modes']}
			rows.append(row)
			if on_row is not None:
				on_row(row)
	return pd.DataFrame(rows, columns = ['param', 'value', 'scheme', rate_column, 'relay_power', 'modes'])
