import unittest
import numpy as np
from hypothesis import given, settings, strategies as st
from ltirelay.channel import ChannelParams, ModeAllocation, FDAllocation, cap, effective_snr_lti, effective_snr_fd, matched_filter_snr, iaf_gain, iaf_rate, iaf_optimal_gain, iaf_rate_optimal, direct_rate, allocation_rate, relay_power_of, fd_allocation_rate, mode_objective
from ltirelay.errors import DomainError, ConstraintViolationError


class CapTest(unittest.TestCase):

	def test_values(self):

		self.assertEqual(cap(0.0), 0.0)
		self.assertAlmostEqual(cap(1.0), 0.5, delta = 1e-15)
		self.assertAlmostEqual(cap(3.0), 1.0, delta = 1e-15)
		self.assertAlmostEqual(cap(1.0, "nats"), 0.5 * np.log(2.0), delta = 1e-15)

	def test_array(self):

		np.testing.assert_allclose(cap(np.array([0.0, 1.0, 3.0])), [0.0, 0.5, 1.0], atol = 1e-15)

	def test_negative(self):

		with self.assertRaises(DomainError):
			cap(-1.0)

		with self.assertRaises(DomainError):
			cap(float('nan'))

	def test_unit(self):

		with self.assertRaises(DomainError):
			cap(1.0, "dB")


class RatesTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_effective_snr(self):

		self.assertAlmostEqual(effective_snr_lti(self.params, 0.0), 1.0, delta = 1e-15)
		self.assertAlmostEqual(effective_snr_lti(self.params, 0.5), 2.0, delta = 1e-15)
		# the relayed copy cancels the direct one
		self.assertAlmostEqual(effective_snr_lti(self.params, -0.5), 0.0, delta = 1e-15)

	def test_effective_snr_no_relay_link(self):

		params = self.params.replace(b = 0.0)

		np.testing.assert_allclose(effective_snr_lti(params, np.array([-3.0, 0.1, 7.0])), 1.0, atol = 1e-15)

	def test_iaf(self):

		lam = iaf_gain(self.params)
		s = (1.0 + 2.0 * np.sqrt(0.5)) ** 2 / 3.0

		self.assertAlmostEqual(lam, np.sqrt(0.5), delta = 1e-15)
		self.assertAlmostEqual(iaf_rate(self.params), 0.5 * np.log2(1.0 + s), delta = 1e-12)
		self.assertAlmostEqual(iaf_rate(self.params), 0.7787, delta = 2e-4)

	def test_iaf_uses_full_budget(self):

		params = ChannelParams(a = 2.0, b = -1.5, gamma = 0.7, P = 3.0, sigma2 = 0.5)
		lam = iaf_gain(params)

		self.assertLess(lam, 0.0)
		self.assertAlmostEqual(lam ** 2 * (4.0 * 3.0 + 0.5), params.relay_budget, delta = 1e-12)

	def test_iaf_complex_phase(self):

		params = ChannelParams(a = 1.0j, b = 1.0, gamma = 1.0, P = 1.0)
		lam = iaf_gain(params)

		self.assertAlmostEqual(np.angle(params.a * params.b * lam), 0.0, delta = 1e-12)

	def test_iaf_optimal(self):

		self.assertAlmostEqual(iaf_optimal_gain(self.params), 0.5, delta = 1e-15)
		self.assertAlmostEqual(iaf_rate_optimal(self.params), cap(2.0), delta = 1e-12)
		self.assertGreater(iaf_rate_optimal(self.params), iaf_rate(self.params))

		self.assertEqual(iaf_optimal_gain(self.params.replace(b = 0.0)), 0.0)

	def test_iaf_optimal_low_power(self):

		params = self.params.replace(P = 0.1)

		self.assertAlmostEqual(iaf_optimal_gain(params), iaf_gain(params), delta = 1e-15)
		self.assertAlmostEqual(iaf_rate_optimal(params), iaf_rate(params), delta = 1e-15)

	def test_direct(self):

		self.assertAlmostEqual(direct_rate(self.params), 0.5, delta = 1e-15)
		self.assertAlmostEqual(direct_rate(self.params, "nats"), 0.5 * np.log(2.0), delta = 1e-15)

	def test_effective_snr_fd(self):

		self.assertAlmostEqual(effective_snr_fd(self.params, 0.0), 1.0, delta = 1e-15)
		self.assertAlmostEqual(effective_snr_fd(self.params, 1.0), 1.0 + 4.0 / 5.0, delta = 1e-15)

		with self.assertRaises(DomainError):
			effective_snr_fd(self.params, -1.0)


class MatchedFilterTest(unittest.TestCase):

	@settings(max_examples = 1000, deadline = None)
	@given(
		a = st.floats(min_value = -10.0, max_value = 10.0),
		b = st.floats(min_value = -10.0, max_value = 10.0),
		lam = st.floats(min_value = -10.0, max_value = 10.0),
		P = st.floats(min_value = 1e-3, max_value = 1e3),
		sigma2 = st.floats(min_value = 1e-3, max_value = 1e3)
	)
	def test_identity(self, a, b, lam, P, sigma2):

		params = ChannelParams(a = a, b = b, P = P, sigma2 = sigma2)
		fd = effective_snr_fd(params, lam ** 2)
		mf = matched_filter_snr(params, lam)

		self.assertLessEqual(abs(fd - mf), 1e-12 * fd)


class ConcavityTest(unittest.TestCase):

	@settings(max_examples = 500, deadline = None)
	@given(
		a = st.floats(min_value = -5.0, max_value = 5.0),
		b = st.floats(min_value = -5.0, max_value = 5.0),
		lam = st.lists(st.floats(min_value = -5.0, max_value = 5.0), min_size = 2, max_size = 2),
		first = st.lists(st.floats(min_value = 0.0, max_value = 1.0), min_size = 6, max_size = 6),
		second = st.lists(st.floats(min_value = 0.0, max_value = 1.0), min_size = 6, max_size = 6),
		P = st.floats(min_value = 1e-2, max_value = 1e2)
	)
	def test_midpoint(self, a, b, lam, first, second, P):

		params = ChannelParams(a = a, b = b, P = P)
		split = lambda x: (np.array(x[:3]) + 1e-3, np.array(x[3:]) + 1e-3)
		(tau1, theta1), (tau2, theta2) = split(first), split(second)
		tau1, theta1, tau2, theta2 = [x / x.sum() for x in (tau1, theta1, tau2, theta2)]

		middle = mode_objective(params, 0.5 * (tau1 + tau2), 0.5 * (theta1 + theta2), lam)
		average = 0.5 * (mode_objective(params, tau1, theta1, lam) + mode_objective(params, tau2, theta2, lam))

		self.assertGreaterEqual(middle, average - 1e-10)


class AllocationRateTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_direct_allocation(self):

		self.assertAlmostEqual(allocation_rate(self.params, ModeAllocation.direct()), direct_rate(self.params), delta = 1e-15)

	def test_single_mode(self):

		alloc = ModeAllocation.single_mode(0.5)

		self.assertAlmostEqual(allocation_rate(self.params, alloc), cap(2.0), delta = 1e-12)
		self.assertAlmostEqual(relay_power_of(self.params, alloc), 0.5, delta = 1e-15)

	def test_infeasible(self):

		with self.assertRaises(ConstraintViolationError) as err:
			allocation_rate(self.params, ModeAllocation.single_mode(2.0))

		self.assertAlmostEqual(err.exception.violation, 8.0 - 1.0, delta = 1e-12)

	def test_relay_power_linear(self):

		first = ModeAllocation([0.2, 0.8], [0.5, 0.5], [0.3])
		second = ModeAllocation([0.6, 0.4], [0.1, 0.9], [0.3])
		mixed = ModeAllocation([0.4, 0.6], [0.3, 0.7], [0.3])

		expected = 0.5 * relay_power_of(self.params, first) + 0.5 * relay_power_of(self.params, second)

		self.assertAlmostEqual(relay_power_of(self.params, mixed), expected, delta = 1e-15)

	def test_two_mode_rate(self):

		alloc = ModeAllocation([0.5, 0.5], [0.25, 0.75], [0.5])
		expected = 0.5 * cap(0.25 / 0.5 * 1.0) + 0.5 * cap(0.75 / 0.5 * 2.0)

		self.assertAlmostEqual(allocation_rate(self.params, alloc), expected, delta = 1e-12)

	def test_fd_rate(self):

		self.assertAlmostEqual(fd_allocation_rate(self.params, FDAllocation([1.0], [1.0], [])), 0.5, delta = 1e-15)

		alloc = FDAllocation([0.0, 1.0], [0.0, 1.0], [0.25])

		self.assertAlmostEqual(fd_allocation_rate(self.params, alloc), cap(effective_snr_fd(self.params, 0.25)), delta = 1e-12)


if __name__ == '__main__':
	unittest.main()
