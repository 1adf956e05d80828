from typing import Tuple, List, Optional
import warnings
import numpy as np
import pandas as pd
from scipy.linalg import toeplitz, cho_factor, eigvalsh
from ltirelay.channel import ChannelParams, ModeAllocation
from ltirelay.spectral.grid import SpectrumGrid, FilterTaps, band_index, folded_positions
from ltirelay.errors import DomainError, IndefiniteCovarianceError
from ltirelay.util import LN2, to_unit


def _check_pair(f_s: SpectrumGrid, H: SpectrumGrid):
	if f_s.kind != "psd":
		raise DomainError(f"'f_s' - incorrect kind. Accepts 'psd', received - {f_s.kind}")
	f_s.check_same_grid(H)


def spectrum_fd(f_s: SpectrumGrid, H: SpectrumGrid, params: ChannelParams) -> SpectrumGrid:
	"""
	Spectrum of the noise-whitened destination output.

	`f_d = 1 + |1 + a b H|² f_s / (sigma2 (1 + |b|² |H|²))`, which is at least 1.

	Raises
	------
	GridMismatchError
		If the grids have different sizes.
	"""
	_check_pair(f_s, H)
	h = H.values
	gain = np.abs(1.0 + params.a * params.b * h) ** 2 / (params.sigma2 * (1.0 + abs(params.b) ** 2 * np.abs(h) ** 2))
	return SpectrumGrid(1.0 + gain * f_s.values)


def spectrum_fr(f_s: SpectrumGrid, H: SpectrumGrid, params: ChannelParams) -> SpectrumGrid:
	"""Spectrum of the relay output, `(|a|² f_s + sigma2) |H|²`. Its mean is the relay power."""
	_check_pair(f_s, H)
	return SpectrumGrid((abs(params.a) ** 2 * f_s.values + params.sigma2) * np.abs(H.values) ** 2)


def spectral_rate(f_s: SpectrumGrid, H: SpectrumGrid, params: ChannelParams, unit: str = "bits") -> float:
	"""
	Rate of a stationary input spectrum and a relay response.

	`(1 / 4pi) int log(f_d(omega)) d omega`, evaluated with the periodic trapezoidal rule on the grid.
	"""
	f_d = spectrum_fd(f_s, H, params)
	return float(to_unit(np.mean(0.5 * np.log2(f_d.values)), unit))


def autocovariance(f_s: SpectrumGrid, n: int) -> np.ndarray:
	"""
	Autocovariances `r_0, ..., r_{n-1}` of a spectrum, by the inverse DFT of the grid.

	The spectrum is floored at 0 first. A grid smaller than `2n` aliases the lags and raises a `RuntimeWarning`.
	"""
	if f_s.m < 2 * n:
		warnings.warn(f"The spectrum grid ({f_s.m}) is smaller than 2n = {2 * n}, the autocovariances alias", category = RuntimeWarning)
	r = np.fft.ifft(np.clip(f_s.values, 0.0, None))
	r = r[np.arange(n) % f_s.m]
	return np.real(r) if f_s.is_conjugate_symmetric() else r


def covariance_matrix(f_s: SpectrumGrid, n: int) -> np.ndarray:
	"""Hermitian Toeplitz covariance of `n` consecutive samples of the source."""
	r = autocovariance(f_s, n)
	return toeplitz(r, np.conj(r))


def filter_matrix(taps: FilterTaps, n: int) -> np.ndarray:
	"""Banded Toeplitz matrix of the filter, `(H_n)_{ik} = h_{i-k}`."""
	column = np.array([taps.tap(j) for j in range(n)])
	row = np.array([taps.tap(-j) for j in range(n)])
	return toeplitz(column, row)


def _logdet(matrix: np.ndarray) -> float:
	factor, __ = cho_factor(matrix, lower = True)
	return 2.0 * float(np.sum(np.log(np.real(np.diag(factor)))))


def _block(f_s: SpectrumGrid, taps: FilterTaps, n: int):
	if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
		raise DomainError(f"'n' - incorrect value. Accepts positive block sizes, received - {n}")
	if n < 2 * taps.L + 1:
		warnings.warn(f"Block size {n} is smaller than the filter length {2 * taps.L + 1}", category = RuntimeWarning)
	sigma = covariance_matrix(f_s, n)
	lowest = eigvalsh(sigma, subset_by_index = [0, 0])[0]
	if lowest < -1e-9 * max(1.0, abs(sigma[0, 0])):
		raise IndefiniteCovarianceError(f"The Toeplitz covariance is indefinite (smallest eigenvalue {lowest}); floor the spectrum or refine the grid")
	return sigma, filter_matrix(taps, n)


def toeplitz_mi(f_s: SpectrumGrid, taps: FilterTaps, params: ChannelParams, n: int, unit: str = "bits") -> float:
	"""
	Mutual information per channel use of an `n`-block of the LTI relay channel.

	`(1/2n) log(|(I + ab H) S (I + ab H)^H + sigma2 (I + |b|² H H^H)| / |sigma2 (I + |b|² H H^H)|)`
	with the Toeplitz source covariance `S` and filter matrix `H`. Both determinants are taken from
	Cholesky factors.

	Parameters
	----------
	f_s
		Source spectrum.
	taps
		Relay filter.
	params
		The channel.
	n
		Block size. Values below `2L + 1` raise a `RuntimeWarning`.
	unit
		Either `"bits"` (default) or `"nats"`.

	Raises
	------
	IndefiniteCovarianceError
		If the Toeplitz covariance of `f_s` is not positive semidefinite.
	"""
	sigma, H = _block(f_s, taps, n)
	eye = np.eye(n)
	G = eye + params.a * params.b * H
	noise = params.sigma2 * (eye + abs(params.b) ** 2 * (H @ H.conj().T))
	total = G @ sigma @ G.conj().T + noise
	total = 0.5 * (total + total.conj().T)
	rate = (_logdet(total) - _logdet(noise)) / (2.0 * n * LN2)
	return float(to_unit(max(rate, 0.0), unit))


def convergence_gap(f_s: SpectrumGrid, taps: FilterTaps, params: ChannelParams, n: int) -> float:
	"""`|toeplitz_mi(n) - spectral_rate|` in bits, with the spectral rate taken on the grid of `f_s`."""
	return abs(toeplitz_mi(f_s, taps, params, n) - spectral_rate(f_s, taps.response(f_s.m), params))


def power_checks(f_s: SpectrumGrid, taps: FilterTaps, params: ChannelParams, n: int) -> Tuple[float, float]:
	"""
	Finite-block power deviations from the spectral powers.

	Returns
	-------
	tuple(float, float)
		`|tr(S)/n - mean(f_s)|` and `|tr(H (|a|² S + sigma2 I) H^H)/n - mean((|a|² f_s + sigma2) |H|²)|`.
	"""
	sigma, H = _block(f_s, taps, n)
	source_gap = abs(float(np.real(np.trace(sigma))) / n - f_s.mean())
	relay = H @ (abs(params.a) ** 2 * sigma + params.sigma2 * np.eye(n)) @ H.conj().T
	relay_gap = abs(float(np.real(np.trace(relay))) / n - spectrum_fr(f_s, taps.response(f_s.m), params).mean())
	return source_gap, relay_gap


def mode_spectra(alloc: ModeAllocation, params: ChannelParams, m: int = 4096) -> Tuple[SpectrumGrid, SpectrumGrid]:
	"""
	Piecewise-constant source spectrum and relay response of a mode allocation.

	Mode `j` occupies a band of width `pi tau_j` on `[0, pi)`, modes in ascending order, mirrored
	on `(pi, 2pi)`, with conjugated gains for a real channel. The band carries the source density `theta_j P / tau_j`
	and the gain `lam_j`. When the band edges fall on grid points the rates and powers of the
	spectra equal the ones of the allocation.

	Returns
	-------
	tuple(SpectrumGrid, SpectrumGrid)
		The source spectrum and the relay response.
	"""
	used = [j for j in range(len(alloc.tau)) if alloc.tau[j] > 0.0]
	tau = alloc.tau[used]
	density = alloc.theta[used] * params.P / tau
	gains = np.concatenate([[0.0], alloc.lam]).astype(complex)[used]

	index = band_index(tau, m)
	__, mirror = folded_positions(m)
	h = np.where(mirror & params.is_real, np.conj(gains[index]), gains[index])
	if alloc.form == "real":
		h = np.real(h)
	return SpectrumGrid(density[index]), SpectrumGrid(h, kind = "response")


def convergence_table(f_s: SpectrumGrid, taps: FilterTaps, params: ChannelParams, block_sizes: Optional[List[int]] = None) -> pd.DataFrame:
	"""
	Toeplitz convergence study over several block sizes.

	Returns
	-------
	pd.DataFrame
		Columns `n`, `toeplitz_mi`, `spectral_rate`, `gap`, `source_gap`, `relay_gap`.
	"""
	block_sizes = [32, 64, 128, 256] if block_sizes is None else block_sizes
	limit = spectral_rate(f_s, taps.response(f_s.m), params)
	rows = []
	for n in block_sizes:
		mi = toeplitz_mi(f_s, taps, params, n)
		source_gap, relay_gap = power_checks(f_s, taps, params, n)
		rows.append({'n': n, 'toeplitz_mi': mi, 'spectral_rate': limit, 'gap': abs(mi - limit), 'source_gap': source_gap, 'relay_gap': relay_gap})
	return pd.DataFrame(rows, columns = ['n', 'toeplitz_mi', 'spectral_rate', 'gap', 'source_gap', 'relay_gap'])
