"""Spectrum grids, relay filter taps and the Toeplitz mutual information with its spectral limit."""
from ltirelay.spectral.grid import SpectrumGrid, FilterTaps, folded_positions, band_index, flat_spectrum, constant_response, smooth_test_spectrum
from ltirelay.spectral.toeplitz import spectrum_fd, spectrum_fr, spectral_rate, autocovariance, covariance_matrix, filter_matrix, toeplitz_mi, convergence_gap, power_checks, mode_spectra, convergence_table
