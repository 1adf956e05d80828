import unittest
import numpy as np
from ltirelay.channel import ChannelParams
from ltirelay.errors import DomainError, RelayError


class ChannelParamsTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 2.0, b = 0.5, gamma = 2.0, P = 10.0, sigma2 = 2.0)

	def test_defaults(self):

		params = ChannelParams()

		self.assertEqual((params.a, params.b, params.gamma, params.P, params.sigma2), (1.0, 1.0, 1.0, 1.0, 1.0))
		self.assertTrue(params.is_real)

	def test_derived(self):

		self.assertEqual(self.params.snr, 5.0)
		self.assertEqual(self.params.relay_budget, 20.0)
		self.assertAlmostEqual(self.params.gain_scale, np.sqrt(10.0), delta = 1e-15)

	def test_negative_power(self):

		with self.assertRaises(DomainError):
			ChannelParams(P = -1.0)

		with self.assertRaises(ValueError):
			ChannelParams(sigma2 = 0.0)

		with self.assertRaises(RelayError):
			ChannelParams(gamma = float('nan'))

	def test_bad_gain(self):

		with self.assertRaises(DomainError):
			ChannelParams(a = True)

		with self.assertRaises(DomainError):
			ChannelParams(b = float('inf'))

		with self.assertRaises(DomainError):
			ChannelParams(a = "1.0")

	def test_complex(self):

		params = ChannelParams(a = 1.0 + 1.0j, b = 2.0)

		self.assertFalse(params.is_real)

	def test_replace(self):

		params = self.params.replace(P = 1.0)

		self.assertEqual(params.P, 1.0)
		self.assertEqual(params.a, 2.0)
		self.assertEqual(self.params.P, 10.0)

		with self.assertRaises(DomainError):
			self.params.replace(gamma = -2.0)

	def test_frozen(self):

		with self.assertRaises(AttributeError):
			self.params.P = 3.0

	def test_dict(self):

		params = ChannelParams(a = 1.0 - 0.5j, b = 2.0, gamma = 0.5)
		data = params.to_dict()

		self.assertEqual(data['a'], [1.0, -0.5])
		self.assertEqual(data['b'], 2.0)
		self.assertEqual(ChannelParams.from_dict(data), params)

	def test_from_dict_unknown_key(self):

		with self.assertRaises(DomainError):
			ChannelParams.from_dict({'a': 1.0, 'noise': 1.0})


if __name__ == '__main__':
	unittest.main()
