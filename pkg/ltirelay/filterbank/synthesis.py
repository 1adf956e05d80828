from typing import Optional
import json
import numpy as np
from ltirelay.channel import ChannelParams
from ltirelay.spectral import FilterTaps, spectral_rate, spectrum_fr
from ltirelay.filterbank.bands import BandPlan, bank_response, source_spectrum
from ltirelay.errors import DomainError, ConstraintViolationError
from ltirelay.util import to_unit

SCHEMA_VERSION = "1.0"
_tap_formats = ["text", "json"]


def synthesize_taps(plan: BandPlan, L: int) -> FilterTaps:
	"""
	Truncated impulse response `h_-L, ..., h_L` of the filter bank.

	The taps are the inverse DFT of [`bank_response`][ltirelay.filterbank.bands.bank_response]
	on a power-of-two grid of at least `8L` points, made conjugate symmetric for a conjugate plan.
	Real gains give real symmetric taps.

	Parameters
	----------
	plan
		The band plan.
	L
		Half-length, at least 1.

	Returns
	-------
	FilterTaps
		The taps.
	"""
	if isinstance(L, bool) or not isinstance(L, (int, np.integer)) or L < 1:
		raise DomainError(f"'L' - incorrect value. Accepts integers >= 1, received - {L}")
	size = 1 << int(np.ceil(np.log2(max(8 * L, 16 * plan.n_bands, 64))))
	h = np.fft.ifft(bank_response(plan, size).values)
	j = np.arange(-L, L + 1)
	taps = h[j % size]
	if plan.conjugate:
		taps = 0.5 * (taps + np.conj(taps[::-1]))
	return FilterTaps(np.real(taps) if plan.is_real else taps)


def _relay_response(plan: BandPlan, m: int, taps: Optional[FilterTaps]):
	return bank_response(plan, m) if taps is None else taps.response(m)


def bank_relay_power(plan: BandPlan, params: ChannelParams, m: int = 4096, taps: Optional[FilterTaps] = None) -> float:
	"""Relay power of the plan, the mean of the relay output spectrum, for the ideal bank or for `taps`."""
	return spectrum_fr(source_spectrum(plan, m), _relay_response(plan, m, taps), params).mean()


def achieved_rate(plan: BandPlan, params: ChannelParams, m: int = 4096, **extra_params) -> float:
	"""
	Rate of the plan's source spectrum through the filter bank.

	Parameters
	----------
	plan
		A plan built from a feasible allocation.
	params
		The channel.
	m
		Grid size. Default is `4096`.

	Other parameters
	----------------
	taps : FilterTaps
		Evaluate this truncated filter instead of the ideal bank response.
	unit : str
		Either `"bits"` (default) or `"nats"`.

	Returns
	-------
	float
		The achieved rate.

	Raises
	------
	ConstraintViolationError
		If the relay power exceeds `gamma P (1 + 1e-3)`.
	"""
	taps = extra_params.get('taps')
	f_s, H = source_spectrum(plan, m), _relay_response(plan, m, taps)
	relay = spectrum_fr(f_s, H, params).mean()
	if relay > params.relay_budget * (1.0 + 1e-3):
		raise ConstraintViolationError(f"The filter bank uses relay power {relay} above the budget {params.relay_budget}", violation = relay - params.relay_budget)
	return float(to_unit(spectral_rate(f_s, H, params), extra_params.get('unit', "bits")))


def save_taps(filename: str, taps: FilterTaps, **extra_params):
	"""
	Write the taps to a file.

	The text format has one line `index real imag` per tap. The JSON format stores
	`schema_version`, `L`, `delta`, the plan and the taps as `[re, im]` pairs. Both keep the
	floats exactly.

	Other parameters
	----------------
	format : str
		Either `"text"` or `"json"`. Defaults to `"json"` for `.json` files and `"text"` otherwise.
	plan : BandPlan
		The plan the taps are synthesized from, stored in the JSON format.
	"""
	fmt = extra_params.get('format', "json" if str(filename).endswith(".json") else "text")
	if fmt not in _tap_formats:
		raise DomainError(f"'format' - incorrect value. Accepts {_tap_formats}, received - {fmt}")
	if fmt == "text":
		res = ""
		for j, value in zip(taps.indices, taps.taps):
			res += f"{j} {float(np.real(value))!r} {float(np.imag(value))!r}\n"
	else:
		plan = extra_params.get('plan')
		data = {'schema_version': SCHEMA_VERSION, 'delta': plan.delta if plan is not None else None, 'plan': plan.to_dict() if plan is not None else None}
		data.update(taps.to_dict())
		res = json.dumps(data, indent = 1)

	with open(filename, 'w') as f:
		f.write(res)


def load_taps(filename: str, **extra_params) -> FilterTaps:
	"""
	Read the taps written by [`save_taps`][ltirelay.filterbank.synthesis.save_taps].

	Other parameters
	----------------
	format : str
		Either `"text"` or `"json"`. Defaults to `"json"` for `.json` files and `"text"` otherwise.
	"""
	fmt = extra_params.get('format', "json" if str(filename).endswith(".json") else "text")
	if fmt not in _tap_formats:
		raise DomainError(f"'format' - incorrect value. Accepts {_tap_formats}, received - {fmt}")
	with open(filename, 'r') as f:
		if fmt == "json":
			return FilterTaps.from_dict(json.load(f))
		rows = [line.split() for line in f if line.strip()]

	indices = [int(x[0]) for x in rows]
	L = (len(rows) - 1) // 2
	if indices != list(range(-L, L + 1)):
		raise DomainError(f"'{filename}' - the tap indices must run from -L to L")
	taps = np.array([complex(float(x[1]), float(x[2])) for x in rows])
	return FilterTaps(taps)
