import unittest
import itertools
import numpy as np
from ltirelay import RelayChannel
from ltirelay.channel import ChannelParams, iaf_rate, iaf_rate_optimal, direct_rate
from ltirelay.optimizer import SolverOptions, search_modes, cutset_bound
from ltirelay.spectral import smooth_test_spectrum, convergence_table
from ltirelay.sweep import SweepSpec, run_sweep


class SandwichTest(unittest.TestCase):

	def test_grid(self):

		opts = SolverOptions(n_starts = 2)
		grid = itertools.product([0.5, 1.0, 2.0], [0.5, 1.0, 2.0], [0.5, 1.0, 2.0], [0.1, 1.0, 10.0])

		for a, b, gamma, P in grid:
			params = ChannelParams(a = a, b = b, gamma = gamma, P = P)
			rate = search_modes(params, opts).rate
			with self.subTest(a = a, b = b, gamma = gamma, P = P):
				self.assertGreaterEqual(rate, max(iaf_rate(params), direct_rate(params)) - 1e-6)
				self.assertLessEqual(rate, cutset_bound(params, lookahead = True) + 1e-6)


class SingleModeTest(unittest.TestCase):

	def test_power_limited_relay(self):

		opts = SolverOptions(n_starts = 4)

		for P in [1.0 / 3.0, 1.0, 3.0, 10.0]:
			params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = P)
			with self.subTest(P = P):
				self.assertAlmostEqual(search_modes(params, opts).rate, iaf_rate_optimal(params), delta = 1e-3)

	def test_gap_to_iaf(self):

		spec = SweepSpec("P", SweepSpec.grid(0.1, 10.0, 5, "log"), ChannelParams(a = 2.0, b = 1.0, gamma = 1.0), ["lti", "iaf", "cutset"])
		res = run_sweep(spec, SolverOptions(n_starts = 2))

		for value in spec.values:
			rates = res[res['value'] == value].set_index('scheme')['rate_bits']
			with self.subTest(P = value):
				self.assertGreaterEqual(rates['lti'] - rates['iaf'], -1e-6)
				self.assertLessEqual(rates['lti'] - rates['iaf'], 0.1)
				self.assertGreater(rates['cutset'] - rates['iaf'], rates['lti'] - rates['iaf'])


class PhaseInvarianceTest(unittest.TestCase):

	def test_complex_form(self):

		opts = SolverOptions(n_starts = 2, n_modes = 4)

		for (a, b), P in itertools.product([(1.0, 2.0), (2.0, 1.0)], [0.1, 1.0, 10.0]):
			params = ChannelParams(a = a, b = b, P = P)
			with self.subTest(a = a, b = b, P = P):
				self.assertAlmostEqual(search_modes(params, opts, "complex").rate, search_modes(params, opts, "real").rate, delta = 1e-4)

	def test_rotated_gain(self):

		opts = SolverOptions(n_starts = 2, n_modes = 4)

		for (a, b), P in itertools.product([(1.0, 2.0), (2.0, 1.0)], [0.1, 1.0, 10.0]):
			real = search_modes(ChannelParams(a = a, b = b, P = P), opts, "real").rate
			rotated = search_modes(ChannelParams(a = 1.0j * a, b = b, P = P), opts, "complex").rate
			with self.subTest(a = a, b = b, P = P):
				self.assertAlmostEqual(rotated, real, delta = 1e-4)

	def test_default_mode_count(self):

		opts = SolverOptions(n_starts = 2)
		real = search_modes(ChannelParams(a = 2.0, b = 1.0, P = 1.0), opts, "real").rate

		self.assertEqual(opts.modes_for("complex"), 49)
		self.assertAlmostEqual(search_modes(ChannelParams(a = 2.0, b = 1.0, P = 1.0), opts, "complex").rate, real, delta = 1e-4)
		self.assertAlmostEqual(search_modes(ChannelParams(a = 2.0j, b = 1.0, P = 1.0), opts, "complex").rate, real, delta = 1e-4)


class DegenerateChannelTest(unittest.TestCase):

	def setUp(self):

		self.opts = SolverOptions(n_starts = 2)

	def test_no_relay_link(self):

		params = ChannelParams(a = 2.0, b = 0.0, P = 3.0)

		self.assertAlmostEqual(search_modes(params, self.opts).rate, direct_rate(params), delta = 1e-6)

	def test_relay_hears_noise(self):

		params = ChannelParams(a = 0.0, b = 2.0, P = 3.0)

		self.assertAlmostEqual(search_modes(params, self.opts).rate, direct_rate(params), delta = 1e-6)

	def test_small_relay_budget(self):

		params = ChannelParams(a = 1.0, b = 1.0, gamma = 1e-12, P = 1.0)
		rate = search_modes(params, self.opts).rate

		self.assertGreaterEqual(rate, direct_rate(params) - 1e-9)
		self.assertLessEqual(rate, direct_rate(params) + 1e-5)

	def test_noise_scaling(self):

		params = ChannelParams(a = 2.0, b = 1.0, gamma = 0.5, P = 1.0, sigma2 = 1.0)
		scaled = params.replace(P = 10.0, sigma2 = 10.0)

		self.assertAlmostEqual(search_modes(scaled, self.opts).rate, search_modes(params, self.opts).rate, delta = 1e-6)


class OracleAgreementTest(unittest.TestCase):

	def test_bins(self):

		for a, b in [(1.0, 2.0), (2.0, 1.0)]:
			relay = RelayChannel(ChannelParams(a = a, b = b), SolverOptions(n_starts = 4), console_output = False)
			res = relay.oracle_check(64)
			with self.subTest(a = a, b = b):
				self.assertLessEqual(res['clusters'], 7)
				self.assertLessEqual(res['relative_gap'], 0.01)


class ToeplitzConvergenceTest(unittest.TestCase):

	def test_smooth_spectrum(self):

		params = ChannelParams(a = 1.0, b = 2.0)
		taps = RelayChannel(params, console_output = False).standard_taps()
		table = convergence_table(smooth_test_spectrum(params, 4096), taps, params, [32, 64, 128, 256])

		self.assertTrue(np.all(np.diff(table['gap']) <= 1e-12))
		self.assertLessEqual(table['gap'].iloc[-1], 0.01)
		self.assertLessEqual(table['relay_gap'].iloc[-1], table['relay_gap'].iloc[0])
		self.assertLessEqual(table['source_gap'].iloc[-1], table['source_gap'].iloc[0] + 1e-12)


class SynthesisTest(unittest.TestCase):

	def test_filter_bank(self):

		for a, b in [(1.0, 2.0), (2.0, 1.0)]:
			params = ChannelParams(a = a, b = b)
			relay = RelayChannel(params, SolverOptions(n_starts = 4), console_output = False)
			res = relay.synthesize(0.01 * np.pi, 4096)
			with self.subTest(a = a, b = b):
				self.assertGreaterEqual(res['achieved'], 0.99 * res['c_lti'])
				self.assertLessEqual(res['relay_power'], params.relay_budget * (1.0 + 1e-3))


if __name__ == '__main__':
	unittest.main()
