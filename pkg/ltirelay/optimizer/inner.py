from typing import Tuple
from dataclasses import dataclass
import numpy as np
from scipy.optimize import brentq
from ltirelay.channel import ChannelParams, effective_snr_lti, effective_snr_fd
from ltirelay.channel.rates import _perspective_sum
from ltirelay.errors import DomainError, InfeasibleProblemError
from ltirelay.util import LN2

_forms_available = ["lti", "fd"]
_TIE = 1e-14


def mode_costs(params: ChannelParams, gains: np.ndarray, form: str = "lti") -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
	"""
	Per-mode data of the inner problem in noise-normalized units, mode 0 first.

	Parameters
	----------
	params
		The channel.
	gains
		Relay gains `lam` (form `"lti"`) or relay power gains `eta` (form `"fd"`).
	form
		Either `"lti"` or `"fd"`.

	Returns
	-------
	tuple(np.ndarray, np.ndarray, np.ndarray)
		Effective SNR `s`, relay cost per unit band `u` and relay cost per unit power share `v`.
		The relay budget in the same units is `gamma P / sigma2`.
	"""
	if form not in _forms_available:
		raise DomainError(f"'form' - incorrect value. Accepts {_forms_available}, received - {form}")
	gains = np.atleast_1d(np.asarray(gains))
	if form == "fd":
		w = np.real(gains).astype(float)
		s_relay = np.atleast_1d(effective_snr_fd(params, w))
	else:
		w = np.abs(gains) ** 2
		s_relay = np.atleast_1d(effective_snr_lti(params, gains))
	s = np.concatenate([[params.snr], s_relay])
	u = np.concatenate([[0.0], w])
	v = np.concatenate([[0.0], abs(params.a) ** 2 * params.snr * w])
	return s, u, v


def _profits(alpha: float, beta: float, s: np.ndarray, u: np.ndarray, v: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
	"""Best band profit of every mode at the prices (alpha, beta) and the power density achieving it."""
	q = alpha + beta * v
	with np.errstate(divide = 'ignore', invalid = 'ignore'):
		x = np.where(s > 0.0, np.maximum(0.0, 1.0 / (2.0 * LN2 * q) - 1.0 / np.where(s > 0.0, s, 1.0)), 0.0)
	x = np.where(np.isfinite(x), x, 0.0)
	return 0.5 * np.log2(1.0 + x * s) - q * x - beta * u, x


def _best(psi: np.ndarray, cost: np.ndarray) -> int:
	"""Index of the most profitable mode; near ties go to the cheapest mode, then to the lowest index."""
	top = psi.max()
	ties = np.nonzero(psi >= top - _TIE * (1.0 + abs(top)))[0]
	return int(ties[np.argmin(cost[ties])])


def _solo_alpha(j: int, beta: float, s: np.ndarray, v: np.ndarray) -> float:
	"""Source price at which mode `j` alone uses all the source power."""
	return s[j] / (2.0 * LN2 * (1.0 + s[j])) - beta * v[j] if s[j] > 0.0 else -np.inf


@dataclass
class _PriceSplit:
	alpha: float
	tau: np.ndarray
	x: np.ndarray
	relay: float
	nu: float


def _split(alpha: float, beta: float, pair: Tuple[int, int], s, u, v) -> _PriceSplit:
	psi, x = _profits(alpha, beta, s, u, v)
	i, k = pair
	tau = np.zeros(len(s))
	if i == k or abs(x[i] - x[k]) < 1e-300:
		tau[i] = 1.0
		x_used = np.zeros(len(s))
		x_used[i] = 1.0
	else:
		# density above 1 on mode i, below 1 on mode k: mix so that the source budget is met
		t = min(max((1.0 - x[k]) / (x[i] - x[k]), 0.0), 1.0)
		tau[i], tau[k] = t, 1.0 - t
		x_used = np.zeros(len(s))
		x_used[i], x_used[k] = x[i], x[k]
		if t == 0.0 or t == 1.0:
			x_used[k if t == 0.0 else i] = 1.0
	relay = float(np.sum(tau * (u + v * x_used)))
	return _PriceSplit(alpha, tau, x_used, relay, float(psi.max()))


def _solve_at_price(beta: float, s: np.ndarray, u: np.ndarray, v: np.ndarray) -> _PriceSplit:
	"""
	Maximize the Lagrangian for a fixed relay price `beta` over the two simplexes.

	The dual function in the source price is `alpha + max_j psi_j(alpha)`; its minimizer is
	either the solo point of a single mode or a crossing of two modes on the upper envelope.
	"""
	cost = u + v
	value = 0.5 * np.log2(1.0 + s) - beta * cost
	order = np.lexsort((cost, -value))
	j = int(order[0])
	a_solo = _solo_alpha(j, beta, s, v)
	if a_solo > 0.0:
		psi, __ = _profits(a_solo, beta, s, u, v)
		if psi.max() <= psi[j] + _TIE * (1.0 + abs(psi[j])):
			return _split(a_solo, beta, (j, j), s, u, v)

	profit = lambda k, alpha: _profits(alpha, beta, s[k:k + 1], u[k:k + 1], v[k:k + 1])[0][0]

	hi = 1.0 / (2.0 * LN2)
	k_hi = _best(_profits(hi, beta, s, u, v)[0], cost)
	lo = hi
	for __ in range(250):
		lo *= 1e-3
		psi, x = _profits(lo, beta, s, u, v)
		k_lo = _best(psi, cost)
		if x[k_lo] > 1.0:
			break
	else:
		raise InfeasibleProblemError("Could not bracket the source price of the inner problem")

	cand = lo
	for __ in range(400):
		solo = False
		if k_lo == k_hi:
			cand = _solo_alpha(k_lo, beta, s, v)
			solo = lo < cand < hi
			if not solo:
				cand = np.sqrt(lo * hi)
		else:
			f_lo, f_hi = profit(k_lo, lo) - profit(k_hi, lo), profit(k_lo, hi) - profit(k_hi, hi)
			if f_lo <= 0.0:
				cand = lo
			elif f_hi >= 0.0:
				cand = hi
			else:
				cand = brentq(lambda a: profit(k_lo, a) - profit(k_hi, a), lo, hi, xtol = 1e-300, rtol = 8.9e-16, maxiter = 200)
		psi, x = _profits(cand, beta, s, u, v)
		k = _best(psi, cost)
		top = max(psi[k_lo], psi[k_hi])
		if psi[k] <= top + _TIE * (1.0 + abs(top)):
			if k_lo == k_hi:
				if solo:
					return _split(cand, beta, (k_lo, k_lo), s, u, v)
				if x[k_lo] > 1.0:
					lo = cand
				else:
					hi = cand
			elif x[k_lo] >= 1.0 >= x[k_hi]:
				return _split(cand, beta, (k_lo, k_hi), s, u, v)
			elif x[k_lo] < 1.0:
				hi, k_hi = cand, k_lo
			else:
				lo, k_lo = cand, k_hi
		elif x[k] > 1.0:
			lo, k_lo = cand, k
		else:
			hi, k_hi = cand, k
		if hi - lo <= 4e-16 * hi:
			break
	return _split(cand, beta, (k_lo, k_hi), s, u, v)


@dataclass
class InnerSolution:
	"""
	Optimal band and power split for fixed relay gains, with its dual prices.

	Attributes
	----------
	gains : np.ndarray
		The fixed relay gains (mode 0 excluded).
	tau : np.ndarray
		Band fractions, mode 0 first.
	theta : np.ndarray
		Power fractions, mode 0 first.
	rate : float
		Optimal objective in bits.
	alpha : float
		Source power price.
	beta : float
		Relay power price (noise-normalized units).
	nu : float
		Price of the band constraint, the largest band profit at (alpha, beta).
	relay : float
		Relay power used, in units of `sigma2`.
	"""
	gains: np.ndarray
	tau: np.ndarray
	theta: np.ndarray
	rate: float
	alpha: float
	beta: float
	nu: float
	relay: float


def solve_modes(params: ChannelParams, gains: np.ndarray, form: str = "lti") -> InnerSolution:
	"""
	Exact inner solve for fixed relay gains.

	The relay price is located by a safeguarded regula falsi on the relay usage. When the
	usage jumps across the budget, the two bracketing splits are mixed so that the relay
	budget is met exactly.
	"""
	gains = np.atleast_1d(np.asarray(gains))
	s, u, v = mode_costs(params, gains, form)
	budget = params.gamma * params.snr

	def finish(split: _PriceSplit, beta: float) -> InnerSolution:
		theta = split.tau * split.x
		return InnerSolution(gains, split.tau, theta, _perspective_sum(split.tau, theta, s), split.alpha, beta, split.nu, split.relay)

	best = _solve_at_price(0.0, s, u, v)
	if best.relay <= budget * (1.0 + 1e-12):
		return finish(best, 0.0)

	solve = lambda beta: _solve_at_price(beta, s, u, v)
	hi = 1.0
	sol_hi = solve(hi)
	if sol_hi.relay <= budget:
		lo, sol_lo = 0.5 * hi, solve(0.5 * hi)
		while sol_lo.relay <= budget and lo > 1e-300:
			hi, sol_hi = lo, sol_lo
			lo = 0.5 * lo
			sol_lo = solve(lo)
		if sol_lo.relay <= budget:
			lo, sol_lo = 0.0, best
	else:
		lo, sol_lo = hi, sol_hi
		while sol_hi.relay > budget:
			lo, sol_lo = hi, sol_hi
			hi *= 2.0
			if hi > 1e300:
				raise InfeasibleProblemError("The relay budget cannot be met for any relay price")
			sol_hi = solve(hi)

	f_lo, f_hi, side = sol_lo.relay - budget, sol_hi.relay - budget, 0
	for it in range(300):
		if hi - lo <= 1e-15 * hi:
			break
		beta = (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
		if it % 3 == 2 or not lo < beta < hi:
			beta = 0.5 * (lo + hi)
		sol = solve(beta)
		f = sol.relay - budget
		if abs(f) <= 1e-12 * budget:
			return finish(sol, beta)
		if f > 0.0:
			lo, f_lo, sol_lo = beta, f, sol
			if side == 1:
				f_hi *= 0.5
			side = 1
		else:
			hi, f_hi, sol_hi = beta, f, sol
			if side == -1:
				f_lo *= 0.5
			side = -1

	w = (budget - sol_hi.relay) / (sol_lo.relay - sol_hi.relay)
	w = min(max(w, 0.0), 1.0)
	tau = w * sol_lo.tau + (1.0 - w) * sol_hi.tau
	theta = w * sol_lo.tau * sol_lo.x + (1.0 - w) * sol_hi.tau * sol_hi.x
	relay = float(np.sum(tau * u + theta * v))
	return InnerSolution(gains, tau, theta, _perspective_sum(tau, theta, s), sol_hi.alpha, hi, sol_hi.nu, relay)


def inner_concave_solve(params: ChannelParams, lambdas, **extra_params) -> Tuple[np.ndarray, np.ndarray, float]:
	"""
	Optimal band and power fractions for fixed relay gains.

	Maximizes `sum_j tau_j cap(theta_j s_j / tau_j)` over the two simplexes subject to the
	relay budget, which is linear in `(tau, theta)`. Mode 0 (no relay) is always included.

	Parameters
	----------
	params
		The channel.
	lambdas
		The relay gains of modes `1..J`, `J <= 49`.

	Other parameters
	----------------
	form : str
		`"lti"` (default) for the gains `lam` or `"fd"` for the frequency-division power gains `eta`.

	Returns
	-------
	tuple(np.ndarray, np.ndarray, float)
		`tau`, `theta` (mode 0 first) and the optimal rate in bits.
	"""
	lambdas = np.atleast_1d(np.asarray(lambdas))
	if len(lambdas) > 49:
		raise DomainError(f"'lambdas' - too many modes. Accepts at most 49, received - {len(lambdas)}")
	if not np.all(np.isfinite(lambdas)):
		raise DomainError(f"'lambdas' - incorrect value. Accepts finite gains, received - {lambdas}")
	sol = solve_modes(params, lambdas, extra_params.get('form', "lti"))
	return sol.tau, sol.theta, sol.rate


def pricing(params: ChannelParams, candidates: np.ndarray, sol: InnerSolution, form: str = "lti") -> np.ndarray:
	"""
	Reduced profit of candidate gains at the prices of an inner solution.

	A candidate whose profit is positive would raise the inner optimum if it were added as a mode.
	"""
	candidates = np.asarray(candidates)
	s, u, v = mode_costs(params, candidates.ravel(), form)
	psi, __ = _profits(sol.alpha, sol.beta, s[1:], u[1:], v[1:])
	return (psi - sol.nu).reshape(candidates.shape)
