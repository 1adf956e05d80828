from dataclasses import dataclass
import numpy as np
import pandas as pd
from ltirelay.channel import ChannelParams, ModeAllocation
from ltirelay.oracle.bins import BinSolution
from ltirelay.errors import DomainError, ConstraintViolationError


@dataclass(frozen = True)
class ClusterSummary:
	"""
	Bin gains grouped into modes.

	Entry 0 is always the direct mode (bins with `lam ~ 0`), possibly with no bins.

	Attributes
	----------
	centers : np.ndarray
		Gain of each cluster, `centers[0] = 0`.
	counts : np.ndarray
		Number of bins in each cluster.
	tau : np.ndarray
		Bandwidth fractions, `counts / n`.
	theta : np.ndarray
		Power fractions, the share of the source power of each cluster.
	"""
	centers: np.ndarray
	counts: np.ndarray
	tau: np.ndarray
	theta: np.ndarray

	@property
	def n_nonzero(self) -> int:
		"""Number of clusters with a nonzero gain."""
		return len(self.centers) - 1

	def to_dataframe(self) -> pd.DataFrame:
		return pd.DataFrame({'center': self.centers, 'count': self.counts, 'tau': self.tau, 'theta': self.theta})

	def __str__(self):
		return self.to_dataframe().to_string()

	__repr__ = __str__


def cluster_lambdas(sol: BinSolution, tol: float = 1e-3) -> ClusterSummary:
	"""
	Group the bin gains of a solution by single linkage.

	Two bins are in the same cluster when their gains are chained by gaps of at most
	`tol` times the gain scale `sqrt(gamma P / sigma2)`. The center of a cluster is the gain that
	keeps its relay power: `sign * sqrt(sum w lam² / sum w)` with `w = a² mu + sigma2`.

	Parameters
	----------
	sol
		A bin solution.
	tol
		Relative clustering tolerance. Default is `1e-3`.

	Returns
	-------
	ClusterSummary
		The clusters, the direct mode first.
	"""
	if not tol > 0.0:
		raise DomainError(f"'tol' - incorrect value. Accepts positive values, received - {tol}")
	params = sol.params
	step = tol * params.gain_scale
	lam, mu = np.asarray(sol.lam, dtype = float), np.asarray(sol.mu, dtype = float)
	weight = abs(params.a) ** 2 * mu + params.sigma2
	total_power = float(np.sum(mu))

	zero = np.abs(lam) <= step
	groups = [np.nonzero(zero)[0]]
	rest = np.nonzero(~zero)[0]
	if len(rest):
		order = rest[np.argsort(lam[rest], kind = 'stable')]
		start = 0
		for k in range(1, len(order) + 1):
			if k == len(order) or lam[order[k]] - lam[order[k - 1]] > step:
				groups.append(order[start:k])
				start = k

	centers, counts, theta = [0.0], [len(groups[0])], [float(np.sum(mu[groups[0]]))]
	for group in groups[1:]:
		w, x = weight[group], lam[group]
		sign = np.sign(np.mean(x))
		centers.append(float(sign * np.sqrt(np.sum(w * x ** 2) / np.sum(w))))
		counts.append(len(group))
		theta.append(float(np.sum(mu[group])))
	counts = np.array(counts, dtype = int)
	theta = np.array(theta) / total_power if total_power > 0.0 else np.where(counts > 0, counts / sol.n, 0.0)
	return ClusterSummary(
		centers = np.array(centers),
		counts = counts,
		tau = counts / sol.n,
		theta = theta
	)


def lift_to_allocation(summary: ClusterSummary, params: ChannelParams) -> ModeAllocation:
	"""
	Turn clustered bins into a mode allocation.

	Returns
	-------
	ModeAllocation
		An allocation with one mode per cluster, in the real form when it has at most 7 modes.

	Raises
	------
	ConstraintViolationError
		If the resulting allocation violates the relay power budget.
	"""
	form = "real" if summary.n_nonzero <= 7 else "complex"
	alloc = ModeAllocation(summary.tau, summary.theta, summary.centers[1:], form = form)
	excess = alloc.relay_power(params) - params.relay_budget
	if excess > 1e-6 * max(1.0, params.relay_budget):
		raise ConstraintViolationError(f"The lifted allocation uses {alloc.relay_power(params)} of the relay budget {params.relay_budget}", violation = excess)
	return alloc
