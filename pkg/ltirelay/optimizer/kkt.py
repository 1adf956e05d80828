from typing import Union, List
from dataclasses import dataclass, field, asdict
import numpy as np
from scipy.optimize import lsq_linear
from ltirelay.channel import ChannelParams, ModeAllocation
from ltirelay.channel.rates import mode_objective
from ltirelay.errors import DomainError, DegenerateInputError
from ltirelay.util import LN2


@dataclass(frozen = True)
class KKTReport:
	"""
	Multipliers and residuals of the optimality conditions of a mode allocation.

	The multipliers are expressed in bits per unit of the noise-normalized constraint.

	Attributes
	----------
	alpha : float
		Source power multiplier.
	beta : float
		Relay power multiplier.
	nu : float
		Band constraint multiplier.
	max_stationarity_residual : float
		Largest violation of the stationarity conditions.
	complementary_slackness_residual : float
		`|beta (relay budget - relay power)|`.
	active_modes : List[int]
		Modes used in the multiplier recovery.
	"""
	alpha: float
	beta: float
	nu: float
	max_stationarity_residual: float
	complementary_slackness_residual: float
	active_modes: List[int] = field(default_factory = list)

	def __post_init__(self):
		if self.max_stationarity_residual < 0.0 or self.complementary_slackness_residual < 0.0:
			raise DomainError("KKT residuals must be nonnegative")

	def to_dict(self) -> dict:
		res = asdict(self)
		res['active_modes'] = [int(x) for x in self.active_modes]
		return res


def waterfill_mu(lam: Union[float, np.ndarray], alpha: float, beta: float, params: ChannelParams) -> Union[float, np.ndarray]:
	"""
	Two-price water-filling power of a frequency bin with the relay gain `lam`.

	`mu = max(0, 1 / (2 ln2 (alpha + beta |a|² |lam|²)) - 1 / g(lam))` with the bin gain
	`g(lam) = |1 + a b lam|² / (sigma2 (1 + |b|² |lam|²))`.

	Parameters
	----------
	lam
		Relay gain(s) of the bin(s).
	alpha
		Source power price, nonnegative.
	beta
		Relay power price, nonnegative.
	params
		The channel.

	Returns
	-------
	Union[float, np.ndarray]
		The bin power(s).

	Raises
	------
	DegenerateInputError
		If the total price `alpha + beta |a|² |lam|²` vanishes: the water level is then undefined
		(for `g = 0`) or unbounded.
	"""
	if alpha < 0.0 or beta < 0.0:
		raise DomainError(f"'alpha', 'beta' - incorrect values. Accepts nonnegative prices, received - {alpha}, {beta}")
	lam = np.asarray(lam)
	q = alpha + beta * abs(params.a) ** 2 * np.abs(lam) ** 2
	g = np.abs(1.0 + params.a * params.b * lam) ** 2 / (params.sigma2 * (1.0 + abs(params.b) ** 2 * np.abs(lam) ** 2))
	if np.any(q <= 0.0):
		if np.any((q <= 0.0) & (g == 0.0)):
			raise DegenerateInputError("Both the bin gain and the total price are zero, the water level is undefined")
		raise DegenerateInputError("The total price is zero, the water level is unbounded")
	with np.errstate(divide = 'ignore'):
		mu = np.where(g > 0.0, np.maximum(0.0, 1.0 / (2.0 * LN2 * q) - 1.0 / np.where(g > 0.0, g, 1.0)), 0.0)
	return float(mu) if np.ndim(mu) == 0 else mu


def kkt_residual(params: ChannelParams, alloc: ModeAllocation, **extra_params) -> KKTReport:
	"""
	Recover the multipliers of a mode allocation and measure the KKT violation.

	The gradients of the objective and of the relay power with respect to `tau`, `theta` and
	the relay gains are taken by central finite differences. The multipliers `(alpha, beta, nu)`
	are fitted by bounded least squares on the active modes, `alpha, beta >= 0`.
	A silent active band (`theta_j = 0`) enters through the one-sided condition
	`dF/dtheta_j <= alpha + beta dR/dtheta_j`.

	Parameters
	----------
	params
		The channel.
	alloc
		A feasible allocation.

	Other parameters
	----------------
	active_tol : float
		Modes with `tau > active_tol` are active. Default is `1e-6`.
	step : float
		Relative finite-difference step. Default is `1e-6`.

	Returns
	-------
	KKTReport
		The multipliers and the residuals.
	"""
	active_tol, step = extra_params.get('active_tol', 1e-6), extra_params.get('step', 1e-6)
	alloc.check_feasible(params)
	kappa = abs(params.a) ** 2 * params.snr
	budget = params.gamma * params.snr
	complex_form = alloc.form == "complex"

	tau, theta = np.array(alloc.tau), np.array(alloc.theta)
	lam = np.array(alloc.lam, dtype = complex if complex_form else float)

	F = lambda t, th, l: mode_objective(params, t, th, l)
	R = lambda t, th, l: float(np.sum(np.abs(l) ** 2 * (kappa * th[1:] + t[1:])))

	def grad(func, which: str, j: int, one_sided: bool = False, imaginary: bool = False):
		args = [tau.copy(), theta.copy(), lam.copy()]
		index = {"tau": 0, "theta": 1, "lam": 2}[which]
		k = j if which != "lam" else j - 1
		scale = params.gain_scale if which == "lam" else 1.0
		h = step * max(abs(args[index][k]), 1e-3 * scale)
		shift = 1j * h if imaginary else h
		if which != "lam" and abs(args[index][k]) < h:
			one_sided = True
		if one_sided:
			args[index][k] = args[index][k] + shift
			up = func(*args)
			return (up - func(tau, theta, lam)) / h
		args[index][k] = args[index][k] + shift
		up = func(*args)
		args[index][k] = args[index][k] - 2 * shift
		down = func(*args)
		return (up - down) / (2 * h)

	active = list(np.nonzero(tau > active_tol)[0])
	rows, rhs, inequalities = [], [], []
	for j in active:
		rows.append([0.0, grad(R, "tau", j), 1.0])
		rhs.append(grad(F, "tau", j))
		if theta[j] > 0.0:
			rows.append([1.0, grad(R, "theta", j), 0.0])
			rhs.append(grad(F, "theta", j))
		else:
			inequalities.append(([1.0, grad(R, "theta", j, one_sided = True), 0.0], grad(F, "theta", j, one_sided = True)))
		if j >= 1:
			parts = [False, True] if complex_form else [False]
			for imaginary in parts:
				rows.append([0.0, grad(R, "lam", j, imaginary = imaginary), 0.0])
				rhs.append(grad(F, "lam", j, imaginary = imaginary))

	A, y = np.array(rows, dtype = float).reshape(-1, 3), np.array(rhs, dtype = float)
	slack = budget - R(tau, theta, lam)
	lower, upper = np.array([0.0, 0.0, -np.inf]), np.array([np.inf, np.inf, np.inf])
	if slack > 1e-9 * max(budget, 1.0):
		A[:, 1] = 0.0
		upper[1] = 1e-300
	fit = lsq_linear(A, y, bounds = (lower, upper), method = 'bvls', tol = 1e-14)
	alpha, beta, nu = fit.x
	if slack > 1e-9 * max(budget, 1.0):
		beta = 0.0

	multipliers = np.array([alpha, beta, nu])
	residual = float(np.max(np.abs(A @ multipliers - y))) if len(y) else 0.0
	for row, value in inequalities:
		residual = max(residual, value - float(np.dot(row, multipliers)))

	return KKTReport(
		alpha = float(alpha),
		beta = float(beta),
		nu = float(nu),
		max_stationarity_residual = max(residual, 0.0),
		complementary_slackness_residual = abs(float(beta) * max(slack, 0.0)),
		active_modes = [int(x) for x in active]
	)
