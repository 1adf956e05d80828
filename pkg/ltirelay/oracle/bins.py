from typing import Optional, List, Tuple
from dataclasses import dataclass
import warnings
import numpy as np
from scipy.optimize import brentq
from ltirelay.channel import ChannelParams, iaf_gain
from ltirelay.optimizer import SolverOptions, waterfill_mu
from ltirelay.errors import DomainError, ConvergenceError, ConstraintViolationError
from ltirelay.util import LN2, golden_section_max


@dataclass(frozen = True)
class BinSolution:
	"""
	Powers and relay gains of `n` frequency bins.

	Attributes
	----------
	params : ChannelParams
		The channel.
	n : int
		Number of bins.
	mu : np.ndarray
		Bin powers, nonnegative.
	lam : np.ndarray
		Bin relay gains (real).
	rate : float
		`(1/n) sum_i cap(mu_i g(lam_i))` in bits.
	source_used : float
		`sum_i mu_i`, at most `n P`.
	relay_used : float
		`sum_i (a² mu_i + sigma2) lam_i²`, at most `n gamma P`.
	alpha : float
		Source power price at the solution.
	beta : float
		Relay power price at the solution.
	iterations : int
		Total number of alternations performed.
	"""
	params: ChannelParams
	n: int
	mu: np.ndarray
	lam: np.ndarray
	rate: float
	source_used: float
	relay_used: float
	alpha: float = 0.0
	beta: float = 0.0
	iterations: int = 0

	def __post_init__(self):
		if np.any(self.mu < 0.0):
			raise ConstraintViolationError("Bin powers must be nonnegative", violation = float(-self.mu.min()))
		if self.source_used > self.n * self.params.P + 1e-6:
			raise ConstraintViolationError("Source power budget exceeded", violation = self.source_used - self.n * self.params.P)
		if self.relay_used > self.n * self.params.relay_budget + 1e-6:
			raise ConstraintViolationError("Relay power budget exceeded", violation = self.relay_used - self.n * self.params.relay_budget)

	def slackness(self) -> dict:
		"""Complementary slackness products of both budgets, per bin."""
		return {
			'source': abs(self.alpha * (self.n * self.params.P - self.source_used)) / self.n,
			'relay': abs(self.beta * (self.n * self.params.relay_budget - self.relay_used)) / self.n
		}

	def to_dict(self) -> dict:
		return {
			'n': self.n,
			'rate': self.rate,
			'source_used': self.source_used,
			'relay_used': self.relay_used,
			'alpha': self.alpha,
			'beta': self.beta,
			'iterations': self.iterations,
			'mu': [float(x) for x in self.mu],
			'lam': [float(x) for x in self.lam]
		}

	def __str__(self):
		return f"BinSolution(n = {self.n}, rate = {self.rate}, source_used = {self.source_used}, relay_used = {self.relay_used})"

	__repr__ = __str__


class BinOracle:
	"""
	Alternating maximization of the finite-n bin problem.

	For a relay price `beta` the bins alternate between a gain step (each `lam_i` maximizes
	`cap(mu_i g(lam)) - beta (a² mu_i + sigma2) lam²` by golden section over the brackets
	formed by `-box, 0, lam_IAF, box`) and a power step (two-price water-filling with the source
	price set by the source budget). The relay price is then adjusted by a safeguarded
	regula falsi until the relay budget is met.

	Attributes
	----------
	params : ChannelParams
		The channel, real gains only.
	n : int
		Number of bins.
	opts : SolverOptions
		The solver settings.
	box : float
		Half-width of the gain box.
	"""

	def __init__(self, params: ChannelParams, n: int, opts: Optional[SolverOptions] = None):
		if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
			raise DomainError(f"'n' - incorrect value. Accepts integers >= 2, received - {n}")
		if not params.is_real:
			raise DomainError(f"The bin oracle requires real 'a' and 'b', received - {params.a}, {params.b}")
		self.params, self.n = params, int(n)
		self.opts = opts if opts is not None else SolverOptions()
		self.box = self.opts.box(params)
		self.a, self.b = float(np.real(params.a)), float(np.real(params.b))
		self.lam_iaf = float(np.clip(np.real(iaf_gain(params)), -self.box, self.box))
		self.x_tol = 1e-2 * self.opts.outer_tol * params.gain_scale

	def __repr__(self):
		return f"BinOracle(params = {self.params}, n = {self.n})"

	def gain(self, lam: np.ndarray) -> np.ndarray:
		"""Bin gain `g(lam) = (1 + a b lam)² / (sigma2 (1 + b² lam²))`."""
		return (1.0 + self.a * self.b * lam) ** 2 / (self.params.sigma2 * (1.0 + self.b ** 2 * lam ** 2))

	def rate(self, mu: np.ndarray, lam: np.ndarray) -> float:
		return float(np.mean(0.5 * np.log2(1.0 + mu * self.gain(lam))))

	def relay_used(self, mu: np.ndarray, lam: np.ndarray) -> float:
		return float(np.sum((self.a ** 2 * mu + self.params.sigma2) * lam ** 2))

	def gain_step(self, mu: np.ndarray, beta: float) -> np.ndarray:
		"""Best gain of every bin for the given powers and relay price."""
		weight = self.a ** 2 * mu + self.params.sigma2
		profit = lambda x: 0.5 * np.log2(1.0 + mu * self.gain(x)) - beta * weight * x ** 2
		points = [0.0] + sorted(set([-self.box, self.lam_iaf, self.box]) - {0.0})
		edges = sorted(set(points))
		best_x = np.zeros(self.n)
		best_v = profit(best_x)
		for p in points[1:]:
			x = np.full(self.n, p)
			v = profit(x)
			better = v > best_v + 1e-15
			best_x, best_v = np.where(better, x, best_x), np.where(better, v, best_v)
		for lo, hi in zip(edges[:-1], edges[1:]):
			x, v = golden_section_max(profit, np.full(self.n, lo), np.full(self.n, hi), tol = self.x_tol)
			better = v > best_v + 1e-15
			best_x, best_v = np.where(better, x, best_x), np.where(better, v, best_v)
		return best_x

	def power_step(self, lam: np.ndarray, beta: float) -> Tuple[np.ndarray, float]:
		"""Two-price water-filling with the source price set by the source budget."""
		total = self.n * self.params.P
		g = self.gain(lam)
		if np.all(g == 0.0):
			return np.zeros(self.n), 0.0
		unbounded = beta == 0.0 or np.any(self.a ** 2 * lam ** 2 == 0.0)
		if not unbounded:
			mu = waterfill_mu(lam, 0.0, beta, self.params)
			if np.sum(mu) <= total:
				return mu, 0.0
		excess = lambda alpha: float(np.sum(waterfill_mu(lam, alpha, beta, self.params))) - total
		hi = float(g.max()) / (2.0 * LN2)
		lo = hi
		for __ in range(400):
			lo *= 0.5
			if excess(lo) > 0.0:
				break
		alpha = brentq(excess, lo, hi, xtol = 1e-300, rtol = 8.9e-16, maxiter = 500)
		mu = waterfill_mu(lam, alpha, beta, self.params)
		if np.sum(mu) > 0.0:
			mu = mu * (total / np.sum(mu))
		return mu, alpha

	def fixed_point(self, beta: float, mu: np.ndarray, lam: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float, int]:
		"""
		Alternate the gain and power steps at a fixed relay price.

		Raises
		------
		ConvergenceError
			If the Lagrangian does not settle within `max_iter` alternations.
		"""
		value = -np.inf
		for it in range(1, self.opts.max_iter + 1):
			lam = self.gain_step(mu, beta)
			mu, alpha = self.power_step(lam, beta)
			new = self.rate(mu, lam) - beta * self.relay_used(mu, lam) / self.n
			if abs(new - value) <= self.opts.inner_tol * max(1.0, abs(new)):
				return mu, lam, alpha, it
			value = new
		raise ConvergenceError(f"The bin alternation did not converge in {self.opts.max_iter} iterations at relay price {beta}", last_iterate = (mu, lam), residuals = {'lagrangian_change': abs(new - value), 'beta': beta})

	def solve_from(self, lam0: np.ndarray) -> BinSolution:
		"""
		Solve the bin problem from one initial gain pattern.

		The powers start from the water-filling of `lam0`, so a pattern with silent bins starts
		with its power on the relayed bins.
		"""
		budget = self.n * self.params.relay_budget
		lam = np.array(lam0, dtype = float)
		mu, __ = self.power_step(lam, 0.0)
		mu, lam, alpha, iterations = self.fixed_point(0.0, mu, lam)
		relay = self.relay_used(mu, lam)
		if relay <= budget * (1.0 + 1e-12):
			return self._solution(mu, lam, alpha, 0.0, iterations)

		lo, state_lo = 0.0, (mu, lam, alpha, relay)
		hi = 1.0 / (self.a ** 2 * self.params.P + self.params.sigma2)
		state_hi = None
		for __ in range(600):
			mu, lam, alpha, it = self.fixed_point(hi, mu, lam)
			iterations += it
			relay = self.relay_used(mu, lam)
			if relay <= budget:
				state_hi = (mu, lam, alpha, relay)
				break
			lo, state_lo = hi, (mu, lam, alpha, relay)
			hi *= 2.0
		if state_hi is None:
			raise ConvergenceError("Could not find a relay price meeting the relay budget", last_iterate = (mu, lam), residuals = {'relay_excess': relay - budget})

		f_lo, f_hi, side = state_lo[3] - budget, state_hi[3] - budget, 0
		for step in range(200):
			if hi - lo <= 1e-13 * hi or abs(f_hi) <= 1e-8 * budget:
				break
			beta = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
			if step % 3 == 2 or not lo < beta < hi:
				beta = 0.5 * (lo + hi)
			mu, lam, alpha, it = self.fixed_point(beta, state_hi[0], state_hi[1])
			iterations += it
			relay = self.relay_used(mu, lam)
			f = relay - budget
			if f > 0.0:
				lo, f_lo = beta, f
				if side == 1:
					f_hi *= 0.5
				side = 1
			else:
				hi, f_hi, state_hi = beta, f, (mu, lam, alpha, relay)
				if side == -1:
					f_lo *= 0.5
				side = -1
		mu, lam, alpha, relay = state_hi
		return self._solution(mu, lam, alpha, hi, iterations)

	def _solution(self, mu, lam, alpha, beta, iterations) -> BinSolution:
		return BinSolution(self.params, self.n, mu, lam, self.rate(mu, lam), float(np.sum(mu)), self.relay_used(mu, lam), float(alpha), float(beta), iterations)

	def patterns(self, count: int) -> List[np.ndarray]:
		"""Initial gain patterns: all IAF, all zero, all `a/b`, IAF on a fraction k/8 of the bins, then random."""
		res = [np.full(self.n, self.lam_iaf), np.zeros(self.n)]
		if self.b != 0.0:
			res.append(np.full(self.n, float(np.clip(self.a / self.b, -self.box, self.box))))
		for k in range(1, 8):
			x = np.zeros(self.n)
			x[:int(k * self.n / 8)] = self.lam_iaf
			res.append(x)
		rng = np.random.default_rng(self.opts.seed)
		while len(res) < count:
			res.append(rng.uniform(-self.box, self.box, self.n))
		return res[:count]


def oracle_optimize(params: ChannelParams, n: int, opts: Optional[SolverOptions] = None, **extra_params) -> BinSolution:
	"""
	Optimize `n` frequency bins directly and return the best solution over the initial patterns.

	Parameters
	----------
	params
		The channel, real gains only.
	n
		Number of bins, at least 2.
	opts
		The solver settings. `max_iter`, `inner_tol`, `outer_tol`, `lambda_cap` and `seed` are used.

	Other parameters
	----------------
	n_patterns : int
		Number of initial gain patterns. Default is `max(10, min(opts.n_starts, 12))`, so that all
		the deterministic patterns are tried.

	Returns
	-------
	BinSolution
		The best solution found.

	Raises
	------
	ConvergenceError
		If no pattern converged. The error of the last pattern is raised.
	"""
	oracle = BinOracle(params, n, opts)
	count = extra_params.get('n_patterns', max(10, min(oracle.opts.n_starts, 12)))
	best, error = None, None
	for lam0 in oracle.patterns(count):
		try:
			sol = oracle.solve_from(lam0)
		except ConvergenceError as err:
			warnings.warn(f"A bin oracle start did not converge: {err}", category = RuntimeWarning)
			error = err
			continue
		if best is None or sol.rate > best.rate + 1e-12:
			best = sol
	if best is None:
		raise error
	return best
