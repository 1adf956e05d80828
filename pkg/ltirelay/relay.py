from typing import Optional, List
import numpy as np
import pandas as pd
from rich.console import Console
from rich.table import Table
from rich.live import Live
from ltirelay.channel import ChannelParams, RateReport, iaf_gain, iaf_rate, iaf_rate_optimal, direct_rate, allocation_rate
from ltirelay.optimizer import SolverOptions, search_modes, kkt_residual, optimize_lti_real, optimize_fd, cutset_bound
from ltirelay.oracle import oracle_optimize, cluster_lambdas, lift_to_allocation
from ltirelay.spectral import FilterTaps, flat_spectrum, smooth_test_spectrum, mode_spectra, convergence_table
from ltirelay.filterbank import plan_bands, synthesize_taps, achieved_rate, bank_relay_power, save_taps
from ltirelay.sweep import SweepSpec, run_sweep
from ltirelay.errors import ConvergenceError, SynthesisError
from ltirelay.util import term_logging


class RelayChannel:
	"""
	A relay channel with the solver settings and the console used to report progress.

	Every long computation of the package is available as a method.

	Attributes
	----------
	params : ChannelParams
		The channel.
	opts : SolverOptions
		The solver settings.
	console_output : bool
		If `True`, the progress is shown in the console.
	console : Console
		The `rich` console, writing to stderr.
	"""

	def __init__(self, params: Optional[ChannelParams] = None, opts: Optional[SolverOptions] = None, **calc_options):
		"""
		Parameters
		----------
		params
			The channel. Defaults to `ChannelParams()`.
		opts
			The solver settings. Defaults to `SolverOptions()`.

		Other parameters
		----------------
		console_output : bool
			If `True` (default is `True`), prints the calculations progress in the console.
		"""
		self.params = params if params is not None else ChannelParams()
		self.opts = opts if opts is not None else SolverOptions()
		self.console_output = calc_options.get("console_output", True)
		self.console = Console(stderr = True)

	def __repr__(self):
		return f"RelayChannel(params = {self.params}, opts = {self.opts}, console_output = {self.console_output})"

	def __str__(self):
		return f"RelayChannel(params = {self.params})"

	def _magnitudes(self) -> ChannelParams:
		"""The channel with `|a|` and `|b|`, which leaves the frequency-division rate and the cut-set bounds unchanged."""
		return self.params.replace(a = float(abs(self.params.a)), b = float(abs(self.params.b)))

	@term_logging
	def capacity(self) -> RateReport:
		"""
		Optimize the LTI relay and compare it with the baselines.

		The real form is used for real `a` and `b`, the complex form otherwise.

		Returns
		-------
		RateReport
			The report, rates in bits.
		"""
		form = "real" if self.params.is_real else "complex"
		res = search_modes(self.params, self.opts, form)
		kkt = kkt_residual(self.params, res.allocation)
		magnitudes = self._magnitudes()
		fd_allocation, c_fd = optimize_fd(magnitudes, self.opts)
		return RateReport(
			params = self.params,
			c_lti = res.rate,
			c_fd = c_fd,
			r_iaf = iaf_rate(self.params),
			r_iaf_opt = iaf_rate_optimal(self.params),
			r_direct = direct_rate(self.params),
			cutset = cutset_bound(magnitudes, lookahead = True),
			cutset_classical = cutset_bound(magnitudes),
			allocation = res.allocation,
			fd_allocation = fd_allocation,
			relay_power = res.allocation.relay_power(self.params),
			kkt = kkt,
			diagnostics = res.diagnostics
		)

	def sweep(self, spec: SweepSpec, **extra_params) -> pd.DataFrame:
		"""
		Run a sweep, showing the rows in a live table.

		Other parameters
		----------------
		unit : str
			Either `"bits"` (default) or `"nats"`.

		Returns
		-------
		pd.DataFrame
			See [`run_sweep`][ltirelay.sweep.run_sweep].
		"""
		unit = extra_params.get('unit', "bits")
		if not self.console_output:
			return run_sweep(spec, self.opts, unit = unit)

		table = Table(title = f"Sweeping {spec.param}")
		for column in ["value", "scheme", f"rate [{unit}]", "relay power", "modes"]:
			table.add_column(column, style = "green")

		def add_row(row: dict):
			table.add_row(str(row['value']), row['scheme'], f"{row[f'rate_{unit}']:.6f}", f"{row['relay_power']:.6g}", str(row['modes']))

		with Live(table, console = self.console, refresh_per_second = 10) as live:
			res = run_sweep(spec, self.opts, unit = unit, on_row = add_row)
			live.refresh()
		self.console.log(f"[green]Sweep done, {len(res)} rows")
		return res

	@term_logging
	def oracle_check(self, n: int, **extra_params) -> dict:
		"""
		Cross-check the mode optimizer with the bin oracle.

		Parameters
		----------
		n
			Number of bins.

		Other parameters
		----------------
		tol : float
			Relative clustering tolerance. Default is `1e-3`.
		n_patterns : int
			Number of initial gain patterns of the oracle.

		Returns
		-------
		dict
			`bin_rate`, `mode_rate`, `lifted_rate`, `relative_gap`, `clusters` (nonzero gain
			clusters), the cluster table and the oracle prices.
		"""
		oracle_params = {key: extra_params[key] for key in ['n_patterns'] if key in extra_params}
		sol = oracle_optimize(self.params, n, self.opts, **oracle_params)
		summary = cluster_lambdas(sol, extra_params.get('tol', 1e-3))
		lifted = lift_to_allocation(summary, self.params)
		__, mode_rate, __ = optimize_lti_real(self.params, self.opts)
		return {
			'n': n,
			'bin_rate': sol.rate,
			'mode_rate': mode_rate,
			'lifted_rate': allocation_rate(self.params, lifted),
			'relative_gap': abs(mode_rate - sol.rate) / max(mode_rate, 1e-300),
			'clusters': summary.n_nonzero,
			'cluster_table': summary.to_dataframe().to_dict(orient = 'list'),
			'lifted_allocation': lifted.to_dict(),
			'source_used': sol.source_used,
			'relay_used': sol.relay_used,
			'alpha': sol.alpha,
			'beta': sol.beta,
			'iterations': sol.iterations
		}

	def standard_taps(self) -> FilterTaps:
		"""The 3-tap symmetric test filter `(h_0, h_1) = (0.5, 0.25) lam_IAF`."""
		gain = iaf_gain(self.params)
		return FilterTaps.symmetric(0.5 * gain, 0.25 * gain)

	@term_logging
	def verify(self, **extra_params) -> dict:
		"""
		Toeplitz convergence study.

		Runs [`convergence_table`][ltirelay.spectral.toeplitz.convergence_table] for the smooth test
		spectrum with the standard 3-tap filter, a flat spectrum with the IAF gain, and the mode
		spectrum of the optimized allocation with its filter bank truncated to `L = 4`.

		Other parameters
		----------------
		block_sizes : List[int]
			Default is `[32, 64, 128, 256]`.
		grid_size : int
			Spectrum grid size. Default is `4096`.

		Returns
		-------
		dict
			One table per study, keyed `"smooth"`, `"flat"` and `"modes"`.

		Raises
		------
		ConvergenceError
			If the gap at the largest block size exceeds the gap at the smallest one.
		"""
		block_sizes: List[int] = sorted(extra_params.get('block_sizes', [32, 64, 128, 256]))
		m = extra_params.get('grid_size', 4096)

		alloc = search_modes(self.params, self.opts, "real" if self.params.is_real else "complex").allocation
		mode_psd, __ = mode_spectra(alloc, self.params, m)
		studies = {
			'smooth': (smooth_test_spectrum(self.params, m), self.standard_taps()),
			'flat': (flat_spectrum(self.params.P, m), FilterTaps.one_tap(iaf_gain(self.params))),
			'modes': (mode_psd, synthesize_taps(plan_bands(alloc, self.params, 0.0), 4))
		}
		res = {}
		for name, (f_s, taps) in studies.items():
			table = convergence_table(f_s, taps, self.params, block_sizes)
			if table['gap'].iloc[-1] > table['gap'].iloc[0] + 1e-12:
				raise ConvergenceError(f"The Toeplitz gap of the '{name}' study does not decay", last_iterate = table, residuals = {'gap_first': float(table['gap'].iloc[0]), 'gap_last': float(table['gap'].iloc[-1])})
			res[name] = table
		return res

	@term_logging
	def synthesize(self, delta: float = 0.01 * np.pi, L: int = 4096, out: Optional[str] = None, **extra_params) -> dict:
		"""
		Realize the optimized allocation as a filter bank.

		Parameters
		----------
		delta
			Transition half-width in rad. Default is `0.01 pi`.
		L
			Half-length of the synthesized filter. Default is `4096`.
		out
			If given, the taps are written to this file (JSON for `.json` files, text otherwise).

		Other parameters
		----------------
		grid_size : int
			Grid size of the rate evaluation. Default is `4096`.
		min_ratio : float
			Smallest accepted `achieved / c_lti`. Default is `0.9`.

		Returns
		-------
		dict
			`c_lti`, `achieved` (ideal bank), `achieved_taps` (truncated filter), `ratio`,
			`stability_margin`, `tail_mass`, `relay_power`, `L`, `delta` and the plan.

		Raises
		------
		SynthesisError
			If the achieved rate is below `min_ratio * c_lti`.
		"""
		m, min_ratio = extra_params.get('grid_size', 4096), extra_params.get('min_ratio', 0.9)
		res = search_modes(self.params, self.opts, "real" if self.params.is_real else "complex")
		plan = plan_bands(res.allocation, self.params, delta)
		taps = synthesize_taps(plan, L)
		achieved = achieved_rate(plan, self.params, m)
		summary = {
			'c_lti': res.rate,
			'achieved': achieved,
			'achieved_taps': achieved_rate(plan, self.params, m, taps = taps),
			'ratio': achieved / res.rate,
			'stability_margin': taps.stability_margin,
			'tail_mass': taps.tail_mass,
			'relay_power': bank_relay_power(plan, self.params, m),
			'relay_budget': self.params.relay_budget,
			'L': L,
			'delta': delta,
			'plan': plan.to_dict()
		}
		if achieved < min_ratio * res.rate:
			raise SynthesisError(f"The filter bank achieves {achieved}, below {min_ratio} of c_lti = {res.rate}")
		if out is not None:
			save_taps(out, taps, plan = plan)
		return summary
