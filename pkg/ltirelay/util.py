from typing import Callable, Tuple, Union
from functools import wraps
import numpy as np
from rich.errors import LiveError
from ltirelay.errors import DomainError


LN2 = np.log(2.0)
GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0
UNITS = ["bits", "nats"]


def to_unit(rate: Union[float, np.ndarray], unit: str = "bits") -> Union[float, np.ndarray]:
	"""
	Convert a rate given in bits per channel use to the requested unit.

	Parameters
	----------
	rate
		The rate in bits per channel use.
	unit
		Either `"bits"` or `"nats"`.

	Returns
	-------
	Union[float, np.ndarray]
		The rate expressed in `unit`.
	"""
	if unit not in UNITS:
		raise DomainError(f"'unit' - incorrect value. Accepts {UNITS}, received - {unit}")
	return rate * LN2 if unit == "nats" else rate


def golden_section_max(func: Callable, lo: Union[float, np.ndarray], hi: Union[float, np.ndarray], tol: float = 1e-10, max_iter: int = 200) -> Tuple:
	"""
	Maximize a function on the interval(s) `[lo, hi]` by golden-section search.

	The search is vectorized: `lo` and `hi` may be arrays, in which case `func` must
	act elementwise and one independent search is performed per element.
	The function is assumed unimodal on each interval; otherwise a local maximum is returned.

	Parameters
	----------
	func
		The function to maximize. Takes and returns arrays of the same shape.
	lo
		Lower end(s) of the search interval.
	hi
		Upper end(s) of the search interval.
	tol
		Absolute width of the final bracket.
	max_iter
		Maximum number of bracket reductions.

	Returns
	-------
	tuple(Union[float, np.ndarray], Union[float, np.ndarray])
		The maximizer(s) and the corresponding function value(s).
	"""
	scalar = np.ndim(lo) == 0 and np.ndim(hi) == 0
	lo, hi = np.broadcast_arrays(np.asarray(lo, dtype = float), np.asarray(hi, dtype = float))
	lo, hi = lo.astype(float).copy(), hi.astype(float).copy()

	x1, x2 = hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo)
	f1, f2 = np.asarray(func(x1), dtype = float), np.asarray(func(x2), dtype = float)
	for _ in range(max_iter):
		if np.all(hi - lo <= tol):
			break
		right = f2 > f1
		lo = np.where(right, x1, lo)
		hi = np.where(right, hi, x2)
		x_new = np.where(right, lo + GOLDEN * (hi - lo), hi - GOLDEN * (hi - lo))
		f_new = np.asarray(func(x_new), dtype = float)
		x1, x2, f1, f2 = np.where(right, x2, x_new), np.where(right, x_new, x1), np.where(right, f2, f_new), np.where(right, f_new, f2)

	x_best, f_best = np.where(f1 >= f2, x1, x2), np.maximum(f1, f2)
	if scalar:
		return float(x_best), float(f_best)
	return x_best, f_best


def term_logging(func: Callable):
	"""Decorator with the fancy status logging"""
	def status_message(func_name):

		if func_name in ["capacity"]:
			return ["Optimizing the LTI relay modes", "Rate report ready"]

		if func_name in ["oracle_check"]:
			return ["Running the bin oracle", "Bin oracle done"]

		if func_name in ["verify"]:
			return ["Evaluating the Toeplitz convergence", "Toeplitz study done"]

		if func_name in ["synthesize"]:
			return ["Synthesizing the relay filter bank", "Filter bank synthesized"]

		return [f"Running '{func_name}'", ""]

	@wraps(func)
	def wrapper(self, *args, **kwargs):
		res = None
		if not self.console_output:
			res = func(self, *args, **kwargs)
		else:
			progress, finished = status_message(func.__name__)
			try:
				with self.console.status(progress):
					res = func(self, *args, **kwargs)
				self.console.log("[green]" + finished)
			except LiveError:
				res = func(self, *args, **kwargs)

		return res

	return wrapper
