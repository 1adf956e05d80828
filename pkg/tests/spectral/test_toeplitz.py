import unittest
import warnings
import numpy as np
from ltirelay.channel import ChannelParams, ModeAllocation, cap, iaf_gain, iaf_rate, allocation_rate
from ltirelay.spectral import SpectrumGrid, FilterTaps, flat_spectrum, constant_response, smooth_test_spectrum, spectrum_fd, spectrum_fr, spectral_rate, autocovariance, covariance_matrix, filter_matrix, toeplitz_mi, convergence_gap, power_checks, mode_spectra, convergence_table
from ltirelay.errors import DomainError, GridMismatchError


class SpectralRateTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_flat(self):

		f_s, H = flat_spectrum(1.0, 16), constant_response(iaf_gain(self.params), 16)

		self.assertAlmostEqual(spectral_rate(f_s, H, self.params), iaf_rate(self.params), delta = 1e-12)
		self.assertAlmostEqual(spectral_rate(f_s, H, self.params, "nats"), iaf_rate(self.params, "nats"), delta = 1e-12)
		self.assertAlmostEqual(spectrum_fr(f_s, H, self.params).mean(), self.params.relay_budget, delta = 1e-12)

	def test_output_spectrum(self):

		f_s, H = flat_spectrum(1.0, 8), constant_response(-0.5, 8)

		np.testing.assert_allclose(spectrum_fd(f_s, H, self.params).values, 1.0, atol = 1e-15)

	def test_grid_mismatch(self):

		with self.assertRaises(GridMismatchError):
			spectral_rate(flat_spectrum(1.0, 8), constant_response(0.5, 16), self.params)

		with self.assertRaises(DomainError):
			spectral_rate(constant_response(0.5, 8), constant_response(0.5, 8), self.params)


class ToeplitzTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_autocovariance(self):

		r = autocovariance(smooth_test_spectrum(self.params, 64), 4)

		self.assertTrue(np.isrealobj(r))
		np.testing.assert_allclose(r, [1.0, 0.25, 0.0, 0.0], atol = 1e-14)

	def test_alias_warning(self):

		with warnings.catch_warnings(record = True) as caught:
			warnings.simplefilter("always")
			autocovariance(flat_spectrum(1.0, 8), 8)

		self.assertTrue(any(issubclass(x.category, RuntimeWarning) for x in caught))

	def test_matrices(self):

		sigma = covariance_matrix(smooth_test_spectrum(self.params, 64), 3)

		np.testing.assert_allclose(sigma, [[1.0, 0.25, 0.0], [0.25, 1.0, 0.25], [0.0, 0.25, 1.0]], atol = 1e-14)

		H = filter_matrix(FilterTaps.symmetric(1.0, 2.0j), 3)

		np.testing.assert_array_equal(H, [[1.0, -2.0j, 0.0], [2.0j, 1.0, -2.0j], [0.0, 2.0j, 1.0]])

	def test_one_tap_white(self):

		f_s, taps = flat_spectrum(1.0, 64), FilterTaps.one_tap(iaf_gain(self.params))

		self.assertAlmostEqual(toeplitz_mi(f_s, taps, self.params, 16), iaf_rate(self.params), delta = 1e-12)
		self.assertAlmostEqual(convergence_gap(f_s, taps, self.params, 16), 0.0, delta = 1e-12)

		source_gap, relay_gap = power_checks(f_s, taps, self.params, 16)

		self.assertAlmostEqual(source_gap, 0.0, delta = 1e-12)
		self.assertAlmostEqual(relay_gap, 0.0, delta = 1e-12)

	def test_smooth_spectrum_convergence(self):

		f_s = smooth_test_spectrum(self.params, 4096)
		gain = iaf_gain(self.params)
		taps = FilterTaps.symmetric(0.5 * gain, 0.25 * gain)

		small, large = convergence_gap(f_s, taps, self.params, 32), convergence_gap(f_s, taps, self.params, 256)

		self.assertLessEqual(large, small)
		self.assertLessEqual(large, 0.01)

		__, relay_small = power_checks(f_s, taps, self.params, 32)
		__, relay_large = power_checks(f_s, taps, self.params, 256)

		self.assertLessEqual(relay_large, relay_small)

	def test_power_noise_scaling(self):

		f_s, taps = smooth_test_spectrum(self.params, 256), FilterTaps.symmetric(0.5, 0.1, 0.1)
		reference = toeplitz_mi(f_s, taps, self.params, 32)

		for c in [1e-3, 0.5, 7.5, 1e3]:
			params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = c, sigma2 = c)
			with self.subTest(c = c):
				self.assertAlmostEqual(toeplitz_mi(SpectrumGrid(c * f_s.values), taps, params, 32), reference, delta = 1e-9)

	def test_sign_alignment(self):

		f_s = flat_spectrum(1.0, 64)

		for lam in [0.05, 0.5, 2.0, 10.0]:
			aligned = toeplitz_mi(f_s, FilterTaps.one_tap(lam), self.params, 16)
			opposed = toeplitz_mi(f_s, FilterTaps.one_tap(-lam), self.params, 16)
			with self.subTest(lam = lam):
				self.assertGreaterEqual(aligned, opposed - 1e-12)

	def test_block_size(self):

		with self.assertRaises(DomainError):
			toeplitz_mi(flat_spectrum(1.0, 16), FilterTaps.one_tap(0.5), self.params, 0)

		with warnings.catch_warnings(record = True) as caught:
			warnings.simplefilter("always")
			toeplitz_mi(flat_spectrum(1.0, 64), FilterTaps.symmetric(0.5, 0.1, 0.1), self.params, 3)

		self.assertTrue(any("filter length" in str(x.message) for x in caught))

	def test_convergence_table(self):

		f_s = smooth_test_spectrum(self.params, 512)
		table = convergence_table(f_s, FilterTaps.symmetric(0.3, 0.1), self.params, [16, 64])

		self.assertEqual(list(table.columns), ['n', 'toeplitz_mi', 'spectral_rate', 'gap', 'source_gap', 'relay_gap'])
		self.assertEqual(list(table['n']), [16, 64])
		self.assertEqual(table['spectral_rate'].nunique(), 1)


class ModeSpectraTest(unittest.TestCase):

	def setUp(self):

		self.params = ChannelParams(a = 1.0, b = 2.0, gamma = 1.0, P = 1.0)

	def test_single_mode(self):

		f_s, H = mode_spectra(ModeAllocation.single_mode(0.5), self.params, 64)

		np.testing.assert_allclose(f_s.values, 1.0, atol = 1e-15)
		np.testing.assert_allclose(H.values, 0.5, atol = 1e-15)
		self.assertAlmostEqual(spectral_rate(f_s, H, self.params), cap(2.0), delta = 1e-12)

	def test_two_modes(self):

		alloc = ModeAllocation([0.25, 0.75], [0.5, 0.5], [0.5])
		f_s, H = mode_spectra(alloc, self.params, 64)

		self.assertAlmostEqual(f_s.mean(), self.params.P, delta = 1e-12)
		self.assertAlmostEqual(spectral_rate(f_s, H, self.params), allocation_rate(self.params, alloc), delta = 1e-12)
		self.assertAlmostEqual(spectrum_fr(f_s, H, self.params).mean(), alloc.relay_power(self.params), delta = 1e-12)

	def test_complex_channel(self):

		params = ChannelParams(a = 1.0 + 1.0j, b = 1.0, gamma = 1.0, P = 1.0)
		alloc = ModeAllocation([0.5, 0.5], [0.5, 0.5], [0.3 - 0.3j])
		f_s, H = mode_spectra(alloc, params, 64)

		self.assertAlmostEqual(spectral_rate(f_s, H, params), allocation_rate(params, alloc), delta = 1e-12)
		self.assertAlmostEqual(spectrum_fr(f_s, H, params).mean(), alloc.relay_power(params), delta = 1e-12)


if __name__ == '__main__':
	unittest.main()
