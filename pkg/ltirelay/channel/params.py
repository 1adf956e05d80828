from typing import Union
from dataclasses import dataclass, asdict, replace
import numpy as np
from ltirelay.errors import DomainError

Gain = Union[float, complex]


def _gain_to_json(value: Gain):
	value = complex(value)
	return value.real if value.imag == 0.0 else [value.real, value.imag]


def _gain_from_json(value) -> Gain:
	if isinstance(value, (list, tuple)):
		if len(value) != 2:
			raise DomainError(f"'gain' - incorrect value. Accepts a number or [re, im], received - {value}")
		return complex(value[0], value[1]) if value[1] != 0.0 else float(value[0])
	return value


@dataclass(frozen = True)
class ChannelParams:
	"""
	The five scalars that define a relay channel instance.

	The source-destination gain is fixed to 1. Relay power is `gamma * P`.

	Attributes
	----------
	a : Union[float, complex]
		Source to relay channel gain.
	b : Union[float, complex]
		Relay to destination channel gain.
	gamma : float
		Relay power ratio, must be positive.
	P : float
		Source power, must be positive.
	sigma2 : float
		Noise variance at the relay and at the destination, must be positive.
	"""
	a: Gain = 1.0
	b: Gain = 1.0
	gamma: float = 1.0
	P: float = 1.0
	sigma2: float = 1.0

	def __post_init__(self):
		for name in ["a", "b"]:
			value = getattr(self, name)
			if isinstance(value, bool) or not isinstance(value, (int, float, complex, np.number)) or not np.isfinite(value):
				raise DomainError(f"'{name}' - incorrect value. Accepts a finite real or complex number, received - {value}")
		for name in ["gamma", "P", "sigma2"]:
			value = getattr(self, name)
			if isinstance(value, bool) or not isinstance(value, (int, float, np.floating, np.integer)) or not np.isfinite(value) or value <= 0.0:
				raise DomainError(f"'{name}' - incorrect value. Accepts a finite positive number, received - {value}")

	@property
	def snr(self) -> float:
		"""Direct path SNR `P / sigma2`."""
		return self.P / self.sigma2

	@property
	def relay_budget(self) -> float:
		"""Relay power budget `gamma * P`."""
		return self.gamma * self.P

	@property
	def gain_scale(self) -> float:
		"""Natural relay gain scale `sqrt(gamma * P / sigma2)`."""
		return float(np.sqrt(self.gamma * self.P / self.sigma2))

	@property
	def is_real(self) -> bool:
		"""`True` when both `a` and `b` are real."""
		return np.imag(self.a) == 0.0 and np.imag(self.b) == 0.0

	def replace(self, **changes) -> 'ChannelParams':
		"""Return a copy with some of the fields changed (validated again)."""
		return replace(self, **changes)

	def to_dict(self) -> dict:
		"""JSON-safe dictionary, complex gains are stored as `[re, im]`."""
		res = asdict(self)
		res['a'], res['b'] = _gain_to_json(self.a), _gain_to_json(self.b)
		for key in ["gamma", "P", "sigma2"]:
			res[key] = float(res[key])
		return res

	@classmethod
	def from_dict(cls, data: dict) -> 'ChannelParams':
		"""Inverse of [`to_dict`][ltirelay.channel.params.ChannelParams.to_dict]."""
		unknown = set(data) - {"a", "b", "gamma", "P", "sigma2"}
		if unknown:
			raise DomainError(f"'params' - incorrect keys. Accepts ['a', 'b', 'gamma', 'P', 'sigma2'], received - {sorted(unknown)}")
		data = dict(data)
		for key in ["a", "b"]:
			if key in data:
				data[key] = _gain_from_json(data[key])
		return cls(**data)

	def __str__(self):
		return f"ChannelParams(a = {self.a}, b = {self.b}, gamma = {self.gamma}, P = {self.P}, sigma2 = {self.sigma2})"

	__repr__ = __str__
