from typing import Optional, Tuple, List, Callable
from dataclasses import dataclass, field
import warnings
import numpy as np
from ltirelay.channel import ChannelParams, ModeAllocation, FDAllocation, iaf_gain, iaf_optimal_gain, allocation_rate, fd_allocation_rate, effective_snr_lti
from ltirelay.optimizer.options import SolverOptions
from ltirelay.optimizer.inner import InnerSolution, solve_modes, pricing
from ltirelay.optimizer.kkt import KKTReport, kkt_residual
from ltirelay.errors import DomainError
from ltirelay.util import golden_section_max, LN2

_ACTIVE = 1e-12


@dataclass
class SearchResult:
	"""
	Outcome of a multistart gain search.

	Attributes
	----------
	allocation : Union[ModeAllocation, FDAllocation]
		The canonical allocation of the best start.
	rate : float
		Its rate in bits.
	solution : InnerSolution
		The inner solution behind the allocation, with its prices.
	diagnostics : dict
		Number of starts and inner solves, the index of the best start, the optimality
		gap certificate (largest reduced profit at the final prices) and box-edge hits.
	"""
	allocation: object
	rate: float
	solution: InnerSolution
	diagnostics: dict = field(default_factory = dict)


class GainSearch:
	"""
	Multistart coordinate search over the relay gain slots.

	For fixed gains the band and power split is solved exactly by
	[`solve_modes`][ltirelay.optimizer.inner.solve_modes]. A gain slot whose band is empty is
	moved to the maximizer of the reduced profit at the current prices (coarse scan plus
	golden-section refinement), which never lowers the inner optimum. The best start is then
	polished by golden-section line searches of the inner optimum along every active gain and
	by secant steps on the reduced gradient until each active gain is stationary.

	Attributes
	----------
	params : ChannelParams
		The channel.
	opts : SolverOptions
		The solver settings.
	form : str
		One of `"real"`, `"complex"`, `"fd"`.
	n_slots : int
		Number of relay gain slots.
	box : float
		Half-width of the gain box (`|lam| <= box`, or `0 <= eta <= box²` for `"fd"`).
	inner_solves : int
		Number of inner solves performed so far.
	"""

	_forms_available = ["real", "complex", "fd"]

	def __init__(self, params: ChannelParams, opts: Optional[SolverOptions] = None, form: str = "real"):
		if form not in self._forms_available:
			raise DomainError(f"'form' - incorrect value. Accepts {self._forms_available}, received - {form}")
		self.params, self.opts, self.form = params, opts if opts is not None else SolverOptions(), form
		self.kind = "fd" if form == "fd" else "lti"
		self.n_slots = self.opts.modes_for(form)
		self.box = self.opts.box(params)
		self.upper = self.box ** 2 if form == "fd" else self.box
		self.x_tol = self.opts.outer_tol * (params.gain_scale ** 2 if form == "fd" else params.gain_scale)
		self.rng = np.random.default_rng(self.opts.seed)
		self.inner_solves = 0

	def __repr__(self):
		return f"GainSearch(params = {self.params}, form = '{self.form}', n_slots = {self.n_slots}, box = {self.box})"

	def _solve(self, gains: np.ndarray) -> InnerSolution:
		self.inner_solves += 1
		return solve_modes(self.params, gains, self.kind)

	def seeds(self) -> List:
		"""Deterministic seeds: the IAF gains, 0 and the natural gain scale with both signs."""
		g = self.params.gain_scale
		if self.form == "fd":
			return [min(x, self.upper) for x in [abs(iaf_gain(self.params)) ** 2, 0.0, g ** 2, abs(iaf_optimal_gain(self.params)) ** 2]]
		phase = iaf_gain(self.params) / abs(iaf_gain(self.params))
		res = [iaf_gain(self.params), 0.0, g * phase, -g * phase, iaf_optimal_gain(self.params)]
		res = [x if abs(x) <= self.box else self.box * x / abs(x) for x in res]
		return [complex(x) for x in res] if self.form == "complex" else [float(np.real(x)) for x in res]

	def random_gains(self, k: int) -> np.ndarray:
		"""Uniform draws from the search box."""
		if self.form == "fd":
			return self.rng.uniform(0.0, self.upper, k)
		if self.form == "complex":
			return self.box * np.sqrt(self.rng.uniform(0.0, 1.0, k)) * np.exp(1j * self.rng.uniform(-np.pi, np.pi, k))
		return self.rng.uniform(-self.box, self.box, k)

	def start_vectors(self) -> List[np.ndarray]:
		"""Initial gain vectors of all the starts; start 0 holds all the seeds."""
		seeds, res = self.seeds(), []
		dtype = complex if self.form == "complex" else float
		for k in range(self.opts.n_starts):
			head = seeds[:self.n_slots] if k == 0 else [seeds[(k - 1) % len(seeds)]]
			tail = self.random_gains(self.n_slots - len(head))
			res.append(np.concatenate([np.array(head, dtype = dtype), tail.astype(dtype)]))
		return res

	def _refine_1d(self, func: Callable, grid: np.ndarray, top: int = 3) -> Tuple[float, float]:
		"""Best point of a scan, refined by golden section around the best local maxima."""
		values = func(grid)
		n = len(grid)
		left = np.concatenate([[-np.inf], values[:-1]])
		right = np.concatenate([values[1:], [-np.inf]])
		peaks = np.nonzero((values >= left) & (values >= right))[0]
		peaks = peaks[np.argsort(-values[peaks])][:top]
		best_x, best_v = grid[int(np.argmax(values))], float(values.max())
		for i in peaks:
			lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n - 1)]
			x, v = golden_section_max(func, lo, hi, tol = self.x_tol)
			if v > best_v:
				best_x, best_v = x, v
		return best_x, best_v

	def best_candidate(self, sol: InnerSolution) -> Tuple[complex, float]:
		"""
		Gain with the largest reduced profit at the prices of `sol`.

		Returns
		-------
		tuple(Union[float, complex], float)
			The gain and its reduced profit (positive means the gain improves the solution).
		"""
		profit = lambda g: pricing(self.params, g, sol, self.kind)
		n = self.opts.scan_points
		if self.form == "real":
			grid = np.unique(np.concatenate([np.linspace(-self.box, self.box, n), self.seeds()]))
			return self._refine_1d(profit, grid)
		if self.form == "fd":
			grid = np.unique(np.concatenate([np.linspace(0.0, self.box, n) ** 2, self.seeds()]))
			return self._refine_1d(profit, grid)

		# complex gains: polar scan, then alternating golden sections on phase and magnitude
		r_grid, phi_grid = np.linspace(0.0, self.box, n), np.linspace(-np.pi, np.pi, 64, endpoint = False)
		values = profit(r_grid[:, None] * np.exp(1j * phi_grid[None, :]))
		i, k = np.unravel_index(int(np.argmax(values)), values.shape)
		r, phi, best = r_grid[i], phi_grid[k], float(values[i, k])
		dr, dphi = r_grid[1] - r_grid[0], phi_grid[1] - phi_grid[0]
		for __ in range(4):
			phi, __v = golden_section_max(lambda p: profit(r * np.exp(1j * p)), phi - dphi, phi + dphi, tol = 1e-9)
			r, v = golden_section_max(lambda x: profit(x * np.exp(1j * phi)), max(0.0, r - dr), min(self.box, r + dr), tol = self.x_tol)
			dr, dphi = dr / 4.0, dphi / 4.0
			best = max(best, v)
		for seed in self.seeds():
			value = float(profit(np.array(seed)))
			if value > best:
				r, phi, best = abs(seed), float(np.angle(seed)), value
		return complex(r * np.exp(1j * phi)), best

	def column_search(self, gains: np.ndarray) -> InnerSolution:
		"""Fill the empty gain slots with profitable gains until none is left."""
		gains = gains.copy()
		sol = self._solve(gains)
		for __ in range(self.opts.max_sweeps):
			candidate, profit = self.best_candidate(sol)
			if profit <= 1e-13 * max(1.0, sol.rate):
				break
			empty = np.nonzero(sol.tau[1:] <= _ACTIVE)[0]
			if len(empty) == 0:
				break
			trial = gains.copy()
			trial[empty[0]] = candidate
			new = self._solve(trial)
			if new.rate <= sol.rate + 1e-15:
				break
			gains, sol = trial, new
		return sol

	def polish(self, sol: InnerSolution) -> InnerSolution:
		"""Golden-section line searches of the inner optimum along every active gain, then secant steps to stationarity."""
		gains = sol.gains.copy()
		step = 2.0 * self.box / (self.opts.scan_points - 1)
		for level in range(2):
			h = step / 10 ** level
			for j in np.nonzero(sol.tau[1:] > _ACTIVE)[0]:
				for coordinate in (["magnitude", "phase"] if self.form == "complex" else ["value"]):
					current = gains[j]
					if coordinate == "phase":
						base = abs(current)
						if base == 0.0:
							continue
						make = lambda p: base * np.exp(1j * p)
						lo, hi, tol = np.angle(current) - h / max(base, 1e-300), np.angle(current) + h / max(base, 1e-300), 1e-10
					elif coordinate == "magnitude":
						direction = current / abs(current) if abs(current) > 0 else 1.0
						make = lambda x: x * direction
						lo, hi, tol = max(0.0, abs(current) - h), min(self.box, abs(current) + h), self.x_tol
					else:
						make = lambda x: x
						scale = 2.0 * np.sqrt(self.upper) * h if self.form == "fd" else h
						lower = 0.0 if self.form == "fd" else -self.box
						lo, hi, tol = max(lower, current - scale), min(self.upper, current + scale), self.x_tol

					def value(x):
						trial = gains.copy()
						trial[j] = make(float(x))
						return self._solve(trial).rate

					x, v = golden_section_max(np.vectorize(value), lo, hi, tol = tol)
					if v > sol.rate + 1e-15:
						gains[j] = make(x)
						sol = self._solve(gains)
		for __ in range(2):
			for j in np.nonzero(sol.tau[1:] > _ACTIVE)[0]:
				sol = self.refine_stationary(sol, j)
		return self._merge(sol)

	def reduced_gradient(self, sol: InnerSolution, j: int, direction: complex = 1.0) -> float:
		"""
		Derivative of the inner optimum along `gains[j] + x direction` at the prices of `sol`.

		With the band and power split held fixed this is `dF_j/dx - beta dR_j/dx`, where
		`F_j = tau_j cap(theta_j s_j / tau_j)` and `R_j = |lam_j|² (kappa theta_j + tau_j)`.
		"""
		params = self.params
		tau, theta = sol.tau[j + 1], sol.theta[j + 1]
		c = params.a * params.b * direction
		b2 = abs(params.b) ** 2
		x = float(np.real(complex(sol.gains[j]) / direction))
		num = abs(1.0 + c * x) ** 2
		den = 1.0 + b2 * x ** 2
		s = params.snr * num / den
		ds = params.snr * ((2.0 * np.real(c) + 2.0 * abs(c) ** 2 * x) * den - 2.0 * b2 * x * num) / den ** 2
		kappa = abs(params.a) ** 2 * params.snr
		return float(theta * ds / (2.0 * LN2 * (1.0 + theta * s / tau)) - sol.beta * 2.0 * x * (kappa * theta + tau))

	def refine_stationary(self, sol: InnerSolution, j: int) -> InnerSolution:
		"""
		Secant steps on the reduced gradient of the active gain `j`.

		A step is kept only if the mode stays active and the rate stays within roundoff of
		the rate of `sol`. Complex gains move along their current phase.
		"""
		if self.form == "fd":
			return sol
		current = complex(sol.gains[j])
		direction = current / abs(current) if self.form == "complex" and abs(current) > 0.0 else 1.0
		lower = 0.0 if self.form == "complex" else -self.box
		floor = sol.rate - 1e-10 * max(1.0, sol.rate)

		x0, g0 = float(np.real(current / direction)), self.reduced_gradient(sol, j, direction)
		x1 = float(np.clip(x0 + np.sign(g0) * 1e-5 * self.params.gain_scale, lower, self.box))
		best, best_g = sol, abs(g0)
		for __ in range(30):
			if x1 == x0 or best_g <= 1e-13:
				break
			trial = sol.gains.copy()
			trial[j] = x1 * direction if self.form == "complex" else x1
			new = self._solve(trial)
			if new.tau[j + 1] <= _ACTIVE:
				break
			g1 = self.reduced_gradient(new, j, direction)
			if new.rate >= floor and abs(g1) < best_g:
				best, best_g = new, abs(g1)
			if g1 == g0:
				break
			x0, g0, x1 = x1, g1, float(np.clip(x1 - g1 * (x1 - x0) / (g1 - g0), lower, self.box))
		return best

	def _merge(self, sol: InnerSolution) -> InnerSolution:
		"""Merge active gains that coincide up to the line-search tolerance."""
		gains, tau = sol.gains.copy(), sol.tau[1:]
		active = [j for j in np.nonzero(tau > _ACTIVE)[0]]
		changed = False
		for p, i in enumerate(active):
			for j in active[p + 1:]:
				if tau[i] > 0.0 and tau[j] > 0.0 and abs(gains[i] - gains[j]) <= 100.0 * self.x_tol:
					gains[i] = (tau[i] * gains[i] + tau[j] * gains[j]) / (tau[i] + tau[j])
					gains[j] = 0.0
					changed = True
		if not changed:
			return sol
		merged = self._solve(gains)
		return merged if merged.rate >= sol.rate - 1e-10 * max(1.0, sol.rate) else sol

	def _key(self, sol: InnerSolution) -> Tuple:
		active = sorted([sol.gains[j] for j in np.nonzero(sol.tau[1:] > _ACTIVE)[0]], key = lambda x: (np.real(x), abs(x)), reverse = True)
		return tuple((-float(np.real(x)), -float(abs(x))) for x in active)

	def run(self) -> SearchResult:
		"""
		Run all the starts, polish the best one and return its canonical allocation.

		Ties between starts (within 1e-12 bits) are broken lexicographically on the sorted active gains.
		"""
		best, best_start = None, 0
		for k, start in enumerate(self.start_vectors()):
			sol = self.column_search(start)
			if best is None or sol.rate > best.rate + 1e-12 or (abs(sol.rate - best.rate) <= 1e-12 and self._key(sol) < self._key(best)):
				best, best_start = sol, k
		if self.opts.polish:
			best = self.polish(best)

		gain_tol = 1e-9 * self.params.gain_scale ** (2 if self.form == "fd" else 1)
		if self.form == "fd":
			allocation = FDAllocation(best.tau, best.theta, np.real(best.gains)).canonical(tau_tol = _ACTIVE, gain_tol = gain_tol)
			rate = fd_allocation_rate(self.params, allocation)
			active = allocation.eta
		else:
			allocation = ModeAllocation(best.tau, best.theta, best.gains, form = self.form).canonical(tau_tol = _ACTIVE, gain_tol = gain_tol)
			rate = allocation_rate(self.params, allocation)
			active = allocation.lam

		hits = [complex(x) if self.form == "complex" else float(x) for x in active if abs(x) >= self.upper * (1.0 - 1e-6)]
		if hits:
			warnings.warn(f"Relay gains {hits} sit on the search box edge {self.upper}; consider a larger 'lambda_cap'", category = RuntimeWarning)

		certificate = max(0.0, float(self.best_candidate(best)[1]))
		diagnostics = {
			'form': self.form,
			'n_starts': self.opts.n_starts,
			'inner_solves': self.inner_solves,
			'best_start': best_start,
			'gap_certificate': certificate,
			'box_edge_hits': len(hits),
			'relay_price': float(best.beta),
			'source_price': float(best.alpha)
		}
		return SearchResult(allocation, rate, best, diagnostics)


def search_modes(params: ChannelParams, opts: Optional[SolverOptions] = None, form: str = "real") -> SearchResult:
	"""Run a [`GainSearch`][ltirelay.optimizer.search.GainSearch] and return the full result."""
	if form in ["real", "fd"] and not params.is_real:
		raise DomainError(f"Form '{form}' requires real 'a' and 'b', received - {params.a}, {params.b}. Use the complex form instead.")
	return GainSearch(params, opts, form).run()


def optimize_lti_real(params: ChannelParams, opts: Optional[SolverOptions] = None) -> Tuple[ModeAllocation, float, KKTReport]:
	"""
	Capacity with LTI relaying for real channel gains (at most 7 real relay modes).

	Parameters
	----------
	params
		The channel, `a` and `b` must be real.
	opts
		The solver settings. Defaults to `SolverOptions()`.

	Returns
	-------
	tuple(ModeAllocation, float, KKTReport)
		The canonical allocation (gains sorted descending, empty modes pruned), its rate in
		bits and the KKT report of the allocation.
	"""
	res = search_modes(params, opts, "real")
	return res.allocation, res.rate, kkt_residual(params, res.allocation)


def optimize_lti_complex(params: ChannelParams, opts: Optional[SolverOptions] = None) -> Tuple[ModeAllocation, float, KKTReport]:
	"""
	Capacity with LTI relaying with complex relay gains (at most 49 relay modes).

	The gains are searched in polar coordinates `r e^{i phi}`. For real `a` and `b` the
	value agrees with [`optimize_lti_real`][ltirelay.optimizer.search.optimize_lti_real].
	"""
	res = search_modes(params, opts, "complex")
	return res.allocation, res.rate, kkt_residual(params, res.allocation)


def optimize_fd(params: ChannelParams, opts: Optional[SolverOptions] = None) -> Tuple[FDAllocation, float]:
	"""
	Capacity of frequency-division linear relaying (at most 4 relay modes).

	Returns
	-------
	tuple(FDAllocation, float)
		The canonical allocation and its rate in bits.
	"""
	res = search_modes(params, opts, "fd")
	return res.allocation, res.rate


def phase_alignment_check(params: ChannelParams, alloc: ModeAllocation, n_phases: int = 7200) -> float:
	"""
	Largest phase deviation of the active relay gains from the best phase on a dense grid.

	For every active mode the effective SNR at the mode's magnitude is scanned over
	`n_phases` phases in `[-pi, pi)`.

	Returns
	-------
	float
		The largest wrapped angular deviation in radians (0 if no relay mode is active).
	"""
	phases = np.linspace(-np.pi, np.pi, n_phases, endpoint = False)
	worst = 0.0
	for j in alloc.active():
		if j == 0 or alloc.lam[j - 1] == 0:
			continue
		lam = alloc.lam[j - 1]
		snr = effective_snr_lti(params, abs(lam) * np.exp(1j * phases))
		deviation = np.angle(np.exp(1j * (np.angle(lam) - phases[int(np.argmax(snr))])))
		worst = max(worst, abs(float(deviation)))
	return worst
