from ltirelay.errors import RelayError, DomainError, GridMismatchError, ConstraintViolationError, DegenerateInputError, InfeasibleProblemError, ConvergenceError, IndefiniteCovarianceError, SynthesisError
from ltirelay.channel import ChannelParams, ModeAllocation, FDAllocation, RateReport, cap, effective_snr_lti, effective_snr_fd, matched_filter_snr, iaf_gain, iaf_rate, iaf_optimal_gain, iaf_rate_optimal, direct_rate, allocation_rate, relay_power_of, fd_allocation_rate
from ltirelay.optimizer import SolverOptions, KKTReport, inner_concave_solve, waterfill_mu, kkt_residual, optimize_lti_real, optimize_lti_complex, optimize_fd, phase_alignment_check, cutset_bound
from ltirelay.oracle import BinSolution, ClusterSummary, oracle_optimize, cluster_lambdas, lift_to_allocation
from ltirelay.spectral import SpectrumGrid, FilterTaps, spectrum_fd, spectrum_fr, spectral_rate, toeplitz_mi, convergence_gap, power_checks, mode_spectra
from ltirelay.filterbank import BandPlan, plan_bands, bank_response, synthesize_taps, achieved_rate
from ltirelay.sweep import SweepSpec, run_sweep
from ltirelay.relay import RelayChannel

__version__ = "0.1.0"
