from typing import Union
import numpy as np
from ltirelay.channel.params import ChannelParams
from ltirelay.channel.allocation import ModeAllocation, FDAllocation
from ltirelay.errors import DomainError
from ltirelay.util import to_unit

ArrayLike = Union[float, complex, np.ndarray]


def cap(x: ArrayLike, unit: str = "bits") -> ArrayLike:
	"""
	Gaussian channel capacity `0.5 * log(1 + x)`.

	Parameters
	----------
	x
		Nonnegative SNR (scalar or array).
	unit
		Either `"bits"` (default) or `"nats"`.

	Returns
	-------
	Union[float, np.ndarray]
		The capacity per channel use.
	"""
	x_arr = np.asarray(x, dtype = float)
	if np.any(x_arr < 0.0) or np.any(np.isnan(x_arr)):
		raise DomainError(f"'x' - incorrect value. Accepts nonnegative SNR, received - {x}")
	res = to_unit(0.5 * np.log2(1.0 + x_arr), unit)
	return float(res) if np.ndim(res) == 0 else res


def effective_snr_lti(params: ChannelParams, lam: ArrayLike) -> ArrayLike:
	"""
	Effective SNR of a subband where the relay applies the gain `lam`.

	`(P/sigma2) |1 + a b lam|² / (1 + |b|² |lam|²)`
	"""
	lam = np.asarray(lam)
	res = params.snr * np.abs(1.0 + params.a * params.b * lam) ** 2 / (1.0 + abs(params.b) ** 2 * np.abs(lam) ** 2)
	return float(res) if np.ndim(res) == 0 else res


def effective_snr_fd(params: ChannelParams, eta: ArrayLike) -> ArrayLike:
	"""
	Effective SNR of a frequency-division relay mode with the power gain `eta`.

	`(P/sigma2) (1 + |a|²|b|² eta / (1 + |b|² eta))`
	"""
	eta_arr = np.asarray(eta, dtype = float)
	if np.any(eta_arr < 0.0):
		raise DomainError(f"'eta' - incorrect value. Accepts nonnegative gains, received - {eta}")
	b2 = abs(params.b) ** 2
	res = params.snr * (1.0 + abs(params.a) ** 2 * b2 * eta_arr / (1.0 + b2 * eta_arr))
	return float(res) if np.ndim(res) == 0 else res


def matched_filter_snr(params: ChannelParams, lam: complex) -> float:
	"""
	Matched-filter SNR of the frequency-division data model.

	The destination observes the direct signal on one band and the relayed copy on
	another, `y = h x + n` with `h = [1, a b lam]` and the noise covariance
	`diag(sigma2, sigma2 (1 + |b|² |lam|²))`. The output SNR is `P h^H R^-1 h`.
	"""
	h = np.array([1.0, params.a * params.b * lam], dtype = complex)
	noise = np.diag([params.sigma2, params.sigma2 * (1.0 + abs(params.b) ** 2 * abs(lam) ** 2)]).astype(complex)
	return float(np.real(params.P * np.vdot(h, np.linalg.solve(noise, h))))


def _aligned_phase(params: ChannelParams) -> complex:
	ab = params.a * params.b
	return np.conj(ab) / abs(ab) if ab != 0 else 1.0


def _as_gain(params: ChannelParams, magnitude: float) -> Union[float, complex]:
	gain = magnitude * _aligned_phase(params)
	return float(np.real(gain)) if params.is_real else complex(gain)


def iaf_gain(params: ChannelParams) -> Union[float, complex]:
	"""
	Gain of the full-power instantaneous amplify-and-forward relay.

	The magnitude meets the relay budget with equality, `|lam|² (|a|² P + sigma2) = gamma P`,
	and the phase is aligned with `conj(a b)`.
	"""
	return _as_gain(params, np.sqrt(params.relay_budget / (abs(params.a) ** 2 * params.P + params.sigma2)))


def iaf_rate(params: ChannelParams, unit: str = "bits") -> float:
	"""Rate of the full-power instantaneous amplify-and-forward relay."""
	return cap(effective_snr_lti(params, iaf_gain(params)), unit)


def iaf_optimal_gain(params: ChannelParams) -> Union[float, complex]:
	"""
	Best single-tap relay gain.

	The effective SNR grows in `|lam|` up to `|a| / |b|`, so the best gain is
	`min(|a| / |b|, |iaf_gain|)` with the aligned phase. For `b = 0` the relay is useless and the gain is 0.
	"""
	if params.b == 0:
		return _as_gain(params, 0.0)
	full = np.sqrt(params.relay_budget / (abs(params.a) ** 2 * params.P + params.sigma2))
	return _as_gain(params, min(abs(params.a) / abs(params.b), full))


def iaf_rate_optimal(params: ChannelParams, unit: str = "bits") -> float:
	"""Rate of the instantaneous amplify-and-forward relay with the best gain."""
	return cap(effective_snr_lti(params, iaf_optimal_gain(params)), unit)


def direct_rate(params: ChannelParams, unit: str = "bits") -> float:
	"""Rate without the relay, `cap(P / sigma2)`."""
	return cap(params.snr, unit)


def mode_objective(params: ChannelParams, tau: np.ndarray, theta: np.ndarray, lam: np.ndarray) -> float:
	"""
	Objective `sum_j tau_j cap(theta_j s_j / tau_j)` of a mode allocation, in bits.

	No validation is done; `s_0 = P / sigma2` and `s_j` is the effective SNR of the gain `lam_j`.
	Terms with `tau_j = 0` contribute 0.
	"""
	tau, theta = np.asarray(tau, dtype = float), np.asarray(theta, dtype = float)
	s = np.concatenate([[params.snr], np.atleast_1d(effective_snr_lti(params, np.asarray(lam)))])
	return _perspective_sum(tau, theta, s)


def _perspective_sum(tau: np.ndarray, theta: np.ndarray, s: np.ndarray) -> float:
	positive = tau > 0.0
	safe_tau = np.where(positive, tau, 1.0)
	terms = np.where(positive, tau * 0.5 * np.log2(1.0 + theta * s / safe_tau), 0.0)
	return float(np.sum(terms))


def allocation_rate(params: ChannelParams, alloc: ModeAllocation, unit: str = "bits") -> float:
	"""
	Rate of a mode allocation.

	Parameters
	----------
	params
		The channel.
	alloc
		The allocation to evaluate.
	unit
		Either `"bits"` (default) or `"nats"`.

	Returns
	-------
	float
		The achieved rate.

	Raises
	------
	ConstraintViolationError
		If the allocation exceeds the relay power budget.
	"""
	alloc.check_feasible(params)
	return float(to_unit(mode_objective(params, alloc.tau, alloc.theta, alloc.lam), unit))


def relay_power_of(params: ChannelParams, alloc: ModeAllocation) -> float:
	"""Relay power `sum_j tau_j |lam_j|² (|a|² theta_j P / tau_j + sigma2)` used by the allocation."""
	return alloc.relay_power(params)


def fd_allocation_rate(params: ChannelParams, alloc: FDAllocation, unit: str = "bits") -> float:
	"""Rate of a frequency-division allocation (checks the relay budget)."""
	alloc.check_feasible(params)
	s = np.concatenate([[params.snr], np.atleast_1d(effective_snr_fd(params, alloc.eta))])
	return float(to_unit(_perspective_sum(alloc.tau, alloc.theta, s), unit))
