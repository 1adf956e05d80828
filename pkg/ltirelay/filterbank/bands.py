from typing import List
from dataclasses import dataclass, field
import numpy as np
import pandas as pd
from ltirelay.channel import ChannelParams, ModeAllocation
from ltirelay.channel.params import _gain_to_json, _gain_from_json
from ltirelay.spectral import SpectrumGrid, folded_positions, band_index
from ltirelay.errors import DomainError


@dataclass(frozen = True)
class BandPlan:
	"""
	Contiguous bands on `[0, pi)` realizing a mode allocation, mirrored on `[pi, 2pi)`.

	Attributes
	----------
	widths : np.ndarray
		Band widths as fractions of `pi`, summing to 1.
	gains : np.ndarray
		Relay gain of every band, 0 for the direct mode.
	psd : np.ndarray
		Source power density of every band, `theta_j P / tau_j`.
	delta : float
		Half-width of the raised-cosine transitions at the interior edges, in rad.
	modes : List[int]
		Mode of the allocation behind every band.
	conjugate : bool
		If `True`, the mirrored half carries the conjugated gains (real channels), so the
		filter has a conjugate-symmetric response.
	"""
	widths: np.ndarray
	gains: np.ndarray
	psd: np.ndarray
	delta: float = 0.0
	modes: List[int] = field(default_factory = list)
	conjugate: bool = True

	def __post_init__(self):
		if not (len(self.widths) == len(self.gains) == len(self.psd)) or len(self.widths) == 0:
			raise DomainError(f"'widths', 'gains', 'psd' must have the same positive length, received - {len(self.widths)}, {len(self.gains)}, {len(self.psd)}")
		if np.any(np.asarray(self.widths) <= 0.0) or abs(float(np.sum(self.widths)) - 1.0) > 1e-9:
			raise DomainError(f"'widths' - incorrect value. Accepts positive widths summing to 1, received - {list(self.widths)}")
		if np.any(np.asarray(self.psd) < 0.0):
			raise DomainError("'psd' - a band carries a negative power density")
		if not 0.0 <= self.delta < np.pi * float(np.min(self.widths)) / 4:
			raise DomainError(f"'delta' - incorrect value. Accepts [0, {np.pi * float(np.min(self.widths)) / 4}), received - {self.delta}")

	@property
	def n_bands(self) -> int:
		return len(self.widths)

	@property
	def edges(self) -> np.ndarray:
		"""Band edges in rad, from 0 to `pi`."""
		return np.pi * np.concatenate([[0.0], np.cumsum(self.widths)])

	@property
	def is_real(self) -> bool:
		return not np.iscomplexobj(self.gains)

	def to_dataframe(self) -> pd.DataFrame:
		"""One row per band."""
		edges = self.edges
		return pd.DataFrame({'mode': self.modes if len(self.modes) else list(range(self.n_bands)), 'start': edges[:-1], 'stop': edges[1:], 'gain': self.gains, 'psd': self.psd})

	def to_dict(self) -> dict:
		return {
			'widths': [float(x) for x in self.widths],
			'gains': [_gain_to_json(x) if not self.is_real else float(x) for x in self.gains],
			'psd': [float(x) for x in self.psd],
			'delta': float(self.delta),
			'modes': [int(x) for x in self.modes],
			'conjugate': bool(self.conjugate)
		}

	@classmethod
	def from_dict(cls, data: dict) -> 'BandPlan':
		gains = [_gain_from_json(x) for x in data['gains']]
		gains = np.array(gains, dtype = complex if any(isinstance(x, complex) for x in gains) else float)
		return cls(np.array(data['widths'], dtype = float), gains, np.array(data['psd'], dtype = float), float(data.get('delta', 0.0)), list(data.get('modes', [])), bool(data.get('conjugate', True)))

	def __str__(self):
		return f"BandPlan(delta = {self.delta}, bands = \n{str(self.to_dataframe())})"


def plan_bands(alloc: ModeAllocation, params: ChannelParams, delta: float = 0.01 * np.pi) -> BandPlan:
	"""
	Lay the modes of an allocation out as contiguous bands.

	Mode `j` gets a band of width `pi tau_j`, modes ascending in frequency. Modes without band are skipped.
	The mirrored half carries conjugated gains for a real channel and the same gains otherwise.

	Parameters
	----------
	alloc
		A feasible allocation.
	params
		The channel, used for the band power densities.
	delta
		Half-width of the edge transitions in rad, below a quarter of the narrowest band. Default is `0.01 pi`.

	Returns
	-------
	BandPlan
		The band plan.

	Raises
	------
	DomainError
		If `delta` is negative or too large for the narrowest band.
	ConstraintViolationError
		If the allocation violates the relay budget.
	"""
	alloc.check_feasible(params)
	used = [j for j in range(len(alloc.tau)) if alloc.tau[j] > 0.0]
	tau = alloc.tau[used]
	gains = np.concatenate([[0.0], alloc.lam]).astype(alloc.lam.dtype if alloc.n_modes else float)[used]
	if delta < 0.0 or delta >= np.pi * float(tau.min()) / 4:
		raise DomainError(f"'delta' - incorrect value. Accepts [0, {np.pi * float(tau.min()) / 4}) for the narrowest band, received - {delta}")
	return BandPlan(tau / tau.sum(), gains, alloc.theta[used] * params.P / tau, float(delta), used, bool(params.is_real))


def _transitions(plan: BandPlan, m: int):
	"""Grid samples within `delta` of every interior edge and their signed distance to it."""
	x, mirror = folded_positions(m)
	omega = np.pi * x
	res = []
	if plan.delta > 0.0:
		for i, edge in enumerate(plan.edges[1:-1]):
			distance = omega - edge
			res.append((i, np.abs(distance) < plan.delta, distance))
	return res, mirror


def bank_response(plan: BandPlan, m: int) -> SpectrumGrid:
	"""
	Frequency response of the filter bank on an `m`-point grid.

	Piecewise constant with the band gains; across an interior edge the response moves from one
	gain to the next along a raised cosine of half-width `delta`. Conjugate symmetric when
	`plan.conjugate` is set.

	Parameters
	----------
	plan
		The band plan.
	m
		Grid size, at least `16` per band.

	Returns
	-------
	SpectrumGrid
		The response.
	"""
	if m < 16 * plan.n_bands:
		raise DomainError(f"'m' - incorrect value. Accepts at least {16 * plan.n_bands} for {plan.n_bands} bands, received - {m}")
	gains = np.asarray(plan.gains)
	values = gains[band_index(plan.widths, m)].astype(complex)
	transitions, mirror = _transitions(plan, m)
	for i, near, distance in transitions:
		ramp = 0.5 * (1.0 + np.sin(np.pi * distance[near] / (2.0 * plan.delta)))
		values[near] = gains[i] + (gains[i + 1] - gains[i]) * ramp
	values = np.where(mirror & plan.conjugate, np.conj(values), values)
	return SpectrumGrid(np.real(values) if plan.is_real else values, kind = "response")


def source_spectrum(plan: BandPlan, m: int) -> SpectrumGrid:
	"""Source power spectrum of the plan, zero within the edge transitions."""
	values = np.asarray(plan.psd)[band_index(plan.widths, m)].astype(float)
	transitions, __ = _transitions(plan, m)
	for __, near, __ in transitions:
		values[near] = 0.0
	return SpectrumGrid(values)
