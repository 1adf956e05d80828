import unittest
import numpy as np
from ltirelay.channel import ChannelParams
from ltirelay.optimizer import SolverOptions
from ltirelay.errors import DomainError


class SolverOptionsTest(unittest.TestCase):

	def setUp(self):

		self.opts = SolverOptions()

	def test_defaults(self):

		self.assertEqual(self.opts.n_starts, 64)
		self.assertEqual(self.opts.seed, 0)
		self.assertEqual(self.opts.inner_tol, 1e-10)
		self.assertEqual(self.opts.outer_tol, 1e-7)
		self.assertIsNone(self.opts.lambda_cap)

	def test_box(self):

		params = ChannelParams(gamma = 2.0, P = 8.0)

		self.assertAlmostEqual(self.opts.box(params), 40.0, delta = 1e-12)
		self.assertEqual(self.opts.replace(lambda_cap = 3.0).box(params), 3.0)

	def test_modes(self):

		self.assertEqual(self.opts.modes_for("real"), 7)
		self.assertEqual(self.opts.modes_for("complex"), 49)
		self.assertEqual(self.opts.modes_for("fd"), 4)

		opts = SolverOptions(n_modes = 5)

		self.assertEqual(opts.modes_for("real"), 5)
		self.assertEqual(opts.modes_for("fd"), 4)

	def test_validation(self):

		with self.assertRaises(DomainError):
			SolverOptions(n_starts = 0)

		with self.assertRaises(DomainError):
			SolverOptions(inner_tol = 0.0)

		with self.assertRaises(DomainError):
			SolverOptions(lambda_cap = -1.0)

		with self.assertRaises(DomainError):
			SolverOptions(scan_points = 4)

	def test_dict(self):

		opts = SolverOptions(n_starts = 8, seed = None)

		self.assertEqual(SolverOptions.from_dict(opts.to_dict()), opts)

		with self.assertRaises(DomainError):
			SolverOptions.from_dict({'starts': 8})


if __name__ == '__main__':
	unittest.main()
