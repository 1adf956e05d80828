import unittest
import numpy as np
from ltirelay.channel import ChannelParams, cap, iaf_rate, direct_rate
from ltirelay.optimizer import SolverOptions, cutset_bound
from ltirelay.sweep import SweepSpec, evaluate_scheme, run_sweep
from ltirelay.errors import DomainError


class SweepSpecTest(unittest.TestCase):

	def test_validation(self):

		with self.assertRaises(DomainError):
			SweepSpec("sigma2", [1.0])

		with self.assertRaises(DomainError):
			SweepSpec("P", [])

		with self.assertRaises(DomainError):
			SweepSpec("P", [1.0], schemes = ["lti", "dtmf"])

		with self.assertRaises(DomainError):
			SweepSpec("P", [1.0], schemes = [])

		with self.assertRaises(DomainError):
			SweepSpec("P", [1.0, -1.0])

	def test_params_at(self):

		spec = SweepSpec("gamma", [0.5, 2.0], ChannelParams(a = 2.0, P = 3.0))
		params = spec.params_at(2.0)

		self.assertEqual(params.gamma, 2.0)
		self.assertEqual(params.a, 2.0)
		self.assertEqual(params.P, 3.0)

	def test_grid(self):

		np.testing.assert_allclose(SweepSpec.grid(0.0, 1.0, 5), [0.0, 0.25, 0.5, 0.75, 1.0], atol = 1e-15)
		np.testing.assert_allclose(SweepSpec.grid(0.1, 10.0, 3, "log"), [0.1, 1.0, 10.0], rtol = 1e-12)

		with self.assertRaises(DomainError):
			SweepSpec.grid(0.0, 10.0, 3, "log")

		with self.assertRaises(DomainError):
			SweepSpec.grid(0.0, 1.0, 0)

		with self.assertRaises(DomainError):
			SweepSpec.grid(0.0, 1.0, 3, "db")


class EvaluateSchemeTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_closed_forms(self):

		iaf = evaluate_scheme("iaf", self.params)
		direct = evaluate_scheme("direct", self.params)
		optimal = evaluate_scheme("iaf-opt", self.params)

		self.assertAlmostEqual(iaf['rate'], iaf_rate(self.params), delta = 1e-15)
		self.assertEqual(iaf['relay_power'], 1.0)
		self.assertEqual(direct, {'rate': 0.5, 'relay_power': 0.0, 'modes': 0})
		self.assertAlmostEqual(optimal['rate'], cap(2.0), delta = 1e-12)
		self.assertAlmostEqual(optimal['relay_power'], 0.5, delta = 1e-15)
		self.assertEqual(optimal['modes'], 1)

	def test_bounds(self):

		res = evaluate_scheme("cutset-classical", self.params)

		self.assertAlmostEqual(res['rate'], cutset_bound(self.params), delta = 1e-15)
		self.assertTrue(np.isnan(res['relay_power']))

	def test_optimized(self):

		res = evaluate_scheme("lti", self.params, SolverOptions(n_starts = 2))

		self.assertAlmostEqual(res['rate'], cap(2.0), delta = 1e-6)

	def test_unknown(self):

		with self.assertRaises(DomainError):
			evaluate_scheme("tdma", self.params)


class RunSweepTest(unittest.TestCase):

	def setUp(self):

		self.spec = SweepSpec("P", [0.5, 1.0, 2.0], ChannelParams(a = 1.0, b = 2.0), ["iaf", "direct", "cutset"])

	def test_table(self):

		res = run_sweep(self.spec)

		self.assertEqual(list(res.columns), ['param', 'value', 'scheme', 'rate_bits', 'relay_power', 'modes'])
		self.assertEqual(len(res), 9)
		self.assertEqual(list(res['scheme'][:3]), ["iaf", "direct", "cutset"])
		self.assertAlmostEqual(res['rate_bits'].iloc[4], direct_rate(ChannelParams(a = 1.0, b = 2.0)), delta = 1e-15)

	def test_nats(self):

		bits, nats = run_sweep(self.spec), run_sweep(self.spec, unit = "nats")

		self.assertIn('rate_nats', nats.columns)
		np.testing.assert_allclose(nats['rate_nats'], bits['rate_bits'] * np.log(2.0), rtol = 1e-14)

		with self.assertRaises(DomainError):
			run_sweep(self.spec, unit = "dB")

	def test_callback(self):

		rows = []
		run_sweep(self.spec, on_row = rows.append)

		self.assertEqual(len(rows), 9)
		self.assertEqual(rows[-1]['scheme'], "cutset")

	def test_ordering(self):

		spec = SweepSpec("P", [0.1, 1.0, 10.0], ChannelParams(a = 2.0, b = 1.0), ["lti", "iaf", "direct", "cutset"])
		res = run_sweep(spec, SolverOptions(n_starts = 2))

		for value in spec.values:
			rates = res[res['value'] == value].set_index('scheme')['rate_bits']
			with self.subTest(P = value):
				self.assertGreaterEqual(rates['lti'], max(rates['iaf'], rates['direct']) - 1e-6)
				self.assertLessEqual(rates['lti'], rates['cutset'] + 1e-6)


if __name__ == '__main__':
	unittest.main()
