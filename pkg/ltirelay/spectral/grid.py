from typing import Optional, Union
import numpy as np
from ltirelay.channel import ChannelParams
from ltirelay.errors import DomainError, GridMismatchError


class SpectrumGrid:
	"""
	Uniform samples of a spectrum or of a frequency response over `[0, 2pi)`.

	Sample `k` sits at `omega_k = 2 pi k / m`.

	Attributes
	----------
	values : np.ndarray
		The samples, real for power spectra.
	kind : str
		Either `"psd"` or `"response"`.
	"""

	_kinds_available = ["psd", "response"]

	def __init__(self, values, kind: str = "psd", **extra_params):
		"""
		Parameters
		----------
		values
			The samples.
		kind
			Either `"psd"` (power spectral density, real and nonnegative) or `"response"`.

		Other parameters
		----------------
		tol : float
			Tolerance of the nonnegativity check of power spectra. Default is `1e-12`.
		"""
		if kind not in self._kinds_available:
			raise DomainError(f"'kind' - incorrect value. Accepts {self._kinds_available}, received - {kind}")
		values = np.array(values).ravel()
		if len(values) < 1:
			raise DomainError("'values' - the grid is empty")
		if not np.all(np.isfinite(values)):
			raise DomainError("'values' - the grid contains non-finite samples")
		if kind == "psd":
			tol = extra_params.get('tol', 1e-12)
			if np.any(np.imag(values) != 0.0):
				raise DomainError("'values' - a power spectrum must be real")
			values = np.real(values).astype(float)
			if np.any(values < -tol):
				raise DomainError(f"'values' - a power spectrum must be nonnegative, received minimum - {values.min()}")
			values = np.clip(values, 0.0, None)
		self.values, self.kind = values, kind
		self.values.setflags(write = False)

	@property
	def m(self) -> int:
		"""Grid size."""
		return len(self.values)

	@property
	def omega(self) -> np.ndarray:
		"""Grid frequencies."""
		return 2 * np.pi * np.arange(self.m) / self.m

	def mean(self) -> Union[float, complex]:
		"""Periodic trapezoidal rule, `(1 / 2pi) int f(omega) d omega`."""
		res = np.mean(self.values)
		return float(res) if np.isrealobj(self.values) else complex(res)

	def mirrored(self) -> np.ndarray:
		"""Samples at `2pi - omega_k`."""
		return np.roll(self.values[::-1], 1)

	def is_conjugate_symmetric(self, tol: float = 1e-9) -> bool:
		"""Whether `value(omega) = conj(value(2pi - omega))` within `tol`."""
		return bool(np.max(np.abs(self.values - np.conj(self.mirrored()))) <= tol)

	def check_same_grid(self, other: 'SpectrumGrid'):
		"""
		Raises
		------
		GridMismatchError
			If `other` has a different size.
		"""
		if other.m != self.m:
			raise GridMismatchError(f"Spectrum grids of different sizes are combined - {self.m} and {other.m}")

	def __len__(self):
		return self.m

	def __str__(self):
		return f"SpectrumGrid(kind = '{self.kind}', m = {self.m}, mean = {self.mean()})"

	__repr__ = __str__


class FilterTaps:
	"""
	Two-sided impulse response `h_-L, ..., h_L` of the relay filter.

	The frequency response is `H(omega) = sum_j h_j exp(-i j omega)`.

	Attributes
	----------
	taps : np.ndarray
		The `2L + 1` taps, `taps[L + j] = h_j`.
	"""

	def __init__(self, taps):
		taps = np.array(taps).ravel()
		if len(taps) % 2 != 1:
			raise DomainError(f"'taps' - incorrect length. Accepts an odd number of taps h_-L..h_L, received - {len(taps)}")
		if not np.all(np.isfinite(taps)):
			raise DomainError("'taps' - non-finite taps")
		self.taps = taps.astype(float) if np.all(np.imag(taps) == 0.0) else taps.astype(complex)
		self.taps.setflags(write = False)

	@classmethod
	def one_tap(cls, lam: Union[float, complex], L: int = 0) -> 'FilterTaps':
		"""The memoryless filter `h_0 = lam`, padded to the half-length `L`."""
		res = np.zeros(2 * L + 1, dtype = complex if np.iscomplexobj(lam) else float)
		res[L] = lam
		return cls(res)

	@classmethod
	def symmetric(cls, *causal_part) -> 'FilterTaps':
		"""Filter with `h_j` given for `j >= 0` and `h_-j = conj(h_j)`."""
		half = np.array(causal_part).ravel()
		if len(half) == 0:
			raise DomainError("'causal_part' - at least h_0 is required")
		return cls(np.concatenate([np.conj(half[:0:-1]), half]))

	@property
	def L(self) -> int:
		"""Half-length."""
		return (len(self.taps) - 1) // 2

	@property
	def indices(self) -> np.ndarray:
		return np.arange(-self.L, self.L + 1)

	def tap(self, j: int) -> Union[float, complex]:
		"""The tap `h_j` (0 outside of `[-L, L]`)."""
		return self.taps[self.L + j] if abs(j) <= self.L else 0.0

	def response(self, m: int) -> SpectrumGrid:
		"""
		Frequency response on an `m`-point grid.

		Taps are folded modulo `m`, so the samples are exact for any `m`.
		"""
		if m < 1:
			raise DomainError(f"'m' - incorrect value. Accepts positive grid sizes, received - {m}")
		buffer = np.zeros(m, dtype = complex)
		np.add.at(buffer, self.indices % m, self.taps)
		return SpectrumGrid(np.fft.fft(buffer), kind = "response")

	@property
	def stability_margin(self) -> float:
		"""`sum_j |h_j|`."""
		return float(np.sum(np.abs(self.taps)))

	@property
	def tail_mass(self) -> float:
		"""`sum_{|j| > L/2} |h_j|`."""
		return float(np.sum(np.abs(self.taps[np.abs(self.indices) > self.L / 2])))

	@property
	def energy(self) -> float:
		"""`sum_j |h_j|²`."""
		return float(np.sum(np.abs(self.taps) ** 2))

	@property
	def is_real(self) -> bool:
		return not np.iscomplexobj(self.taps)

	def is_symmetric(self, tol: float = 1e-12) -> bool:
		"""Whether `h_-j = conj(h_j)` within `tol`."""
		return bool(np.max(np.abs(self.taps - np.conj(self.taps[::-1]))) <= tol)

	def relay_power_white(self, params: ChannelParams, P: Optional[float] = None) -> float:
		"""Relay transmit power for a white source of power `P` (default `params.P`), `(|a|² P + sigma2) sum_j |h_j|²`."""
		P = params.P if P is None else P
		return (abs(params.a) ** 2 * P + params.sigma2) * self.energy

	def to_dict(self) -> dict:
		return {'L': self.L, 'taps': [[float(np.real(x)), float(np.imag(x))] for x in self.taps]}

	@classmethod
	def from_dict(cls, data: dict) -> 'FilterTaps':
		taps = np.array([complex(x[0], x[1]) for x in data['taps']])
		if len(taps) != 2 * int(data['L']) + 1:
			raise DomainError(f"'taps' - expected {2 * int(data['L']) + 1} taps for L = {data['L']}, received - {len(taps)}")
		return cls(taps)

	def __len__(self):
		return len(self.taps)

	def __eq__(self, other):
		return isinstance(other, FilterTaps) and np.array_equal(self.taps, other.taps)

	def __str__(self):
		return f"FilterTaps(L = {self.L}, stability_margin = {self.stability_margin}, energy = {self.energy})"

	__repr__ = __str__


def folded_positions(m: int):
	"""
	Position of every grid frequency on `[0, pi]`, as a fraction of `pi`.

	Returns
	-------
	tuple(np.ndarray, np.ndarray)
		The positions `x_k` and the mask of the samples on `(pi, 2pi)`, which are mirrored.
	"""
	k = np.arange(m)
	mirror = 2 * k > m
	return np.where(mirror, 2.0 * (m - k) / m, 2.0 * k / m), mirror


def band_index(widths, m: int) -> np.ndarray:
	"""
	Band of every grid sample for contiguous bands of the given widths (fractions of `pi`).

	A sample on an edge goes to the upper band on `[0, pi]` and to the lower band on
	`(pi, 2pi)`, so that band `j` holds exactly `widths[j] m` samples when the edges fall on the grid.
	"""
	edges = np.cumsum(np.asarray(widths, dtype = float))[:-1]
	x, mirror = folded_positions(m)
	res = np.where(mirror, np.searchsorted(edges, x, side = 'left'), np.searchsorted(edges, x, side = 'right'))
	return np.clip(res, 0, len(widths) - 1)


def flat_spectrum(value: float, m: int) -> SpectrumGrid:
	"""White spectrum with the power `value`."""
	return SpectrumGrid(np.full(m, float(value)))


def constant_response(lam: Union[float, complex], m: int) -> SpectrumGrid:
	"""Response of the memoryless filter with the gain `lam`."""
	return SpectrumGrid(np.full(m, lam, dtype = complex if np.iscomplexobj(lam) else float), kind = "response")


def smooth_test_spectrum(params: ChannelParams, m: int) -> SpectrumGrid:
	"""
	The standard smooth test spectrum `P (1 + 0.5 cos(omega))`.

	Its power is `P` and its autocovariance vanishes beyond lag 1.
	"""
	omega = 2 * np.pi * np.arange(m) / m
	return SpectrumGrid(params.P * (1.0 + 0.5 * np.cos(omega)))
