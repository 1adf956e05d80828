import numpy as np
from ltirelay.channel import ChannelParams, cap
from ltirelay.errors import DomainError
from ltirelay.util import golden_section_max


def cutset_bound(params: ChannelParams, lookahead: bool = False, unit: str = "bits") -> float:
	"""
	Cut-set upper bound of the full-duplex Gaussian relay channel.

	The bound is `max over rho in [0, 1] of min(broadcast cut, multiple-access cut)`, with the
	multiple-access cut `cap((P + |b|² gamma P + 2 rho |b| sqrt(gamma) P) / sigma2)`. The
	broadcast cut is `cap((1 - rho²)(1 + |a|²) P / sigma2)` for a causal relay (default) and
	`cap((1 + |a|²) P / sigma2)` with unlimited look-ahead, when the relay may use its future
	observations. The maximum is found by golden-section search over `rho`.

	Parameters
	----------
	params
		The channel, `a` and `b` must be real.
	lookahead
		If `True`, returns the unlimited look-ahead bound, which also bounds noncausal LTI relaying.
	unit
		Either `"bits"` (default) or `"nats"`.

	Returns
	-------
	float
		The bound.
	"""
	if not params.is_real:
		raise DomainError(f"The cut-set bound requires real 'a' and 'b', received - {params.a}, {params.b}")
	a2, b = abs(params.a) ** 2, abs(params.b)
	root = np.sqrt(params.gamma)

	def both_cuts(rho):
		broadcast = (1.0 + a2) * params.snr * (1.0 if lookahead else 1.0 - rho ** 2)
		multiple_access = params.snr * (1.0 + b ** 2 * params.gamma + 2.0 * rho * b * root)
		return np.minimum(broadcast, multiple_access)

	rho, __ = golden_section_max(both_cuts, 0.0, 1.0, tol = 1e-12)
	snr = max(float(both_cuts(rho)), float(both_cuts(0.0)), float(both_cuts(1.0)))
	return cap(snr, unit)
