import unittest
import numpy as np
from ltirelay.channel import ChannelParams, ModeAllocation
from ltirelay.optimizer import KKTReport, waterfill_mu, kkt_residual
from ltirelay.errors import DomainError, DegenerateInputError, ConstraintViolationError


class WaterfillTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_values(self):

		self.assertAlmostEqual(waterfill_mu(0.0, 1.0 / (2.0 * np.log(2.0)), 0.0, self.params), 0.0, delta = 1e-12)
		self.assertAlmostEqual(waterfill_mu(0.0, 1.0 / (4.0 * np.log(2.0)), 0.0, self.params), 1.0, delta = 1e-12)

	def test_relay_price(self):

		lam = np.array([0.0, 0.5, 1.0])
		cheap = waterfill_mu(lam, 0.2, 0.0, self.params)
		dear = waterfill_mu(lam, 0.2, 0.5, self.params)

		self.assertEqual(cheap[0], dear[0])
		self.assertTrue(np.all(dear[1:] < cheap[1:]))

	def test_dead_bin(self):

		self.assertEqual(waterfill_mu(-0.5, 0.3, 0.0, self.params), 0.0)

	def test_degenerate(self):

		with self.assertRaises(DegenerateInputError):
			waterfill_mu(0.5, 0.0, 0.0, self.params)

		with self.assertRaises(DegenerateInputError):
			waterfill_mu(-0.5, 0.0, 0.0, self.params)

		with self.assertRaises(DomainError):
			waterfill_mu(0.5, -1.0, 0.0, self.params)


class KKTResidualTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_optimal_single_mode(self):

		report = kkt_residual(self.params, ModeAllocation.single_mode(0.5))

		self.assertLess(report.max_stationarity_residual, 1e-6)
		self.assertEqual(report.beta, 0.0)
		self.assertEqual(report.complementary_slackness_residual, 0.0)
		self.assertEqual(report.active_modes, [1])
		self.assertGreater(report.alpha, 0.0)

	def test_suboptimal_gain(self):

		report = kkt_residual(self.params, ModeAllocation.single_mode(0.2))

		self.assertGreater(report.max_stationarity_residual, 1e-3)

	def test_infeasible(self):

		with self.assertRaises(ConstraintViolationError):
			kkt_residual(self.params, ModeAllocation.single_mode(3.0))

	def test_report(self):

		with self.assertRaises(DomainError):
			KKTReport(0.0, 0.0, 0.0, -1.0, 0.0)

		data = KKTReport(0.1, 0.0, 0.2, 1e-9, 0.0, [0, 2]).to_dict()

		self.assertEqual(data['active_modes'], [0, 2])


if __name__ == '__main__':
	unittest.main()
