"""Finite-mode capacity optimizers, cut-set bounds and KKT verification."""
from ltirelay.optimizer.options import SolverOptions
from ltirelay.optimizer.inner import InnerSolution, mode_costs, solve_modes, inner_concave_solve, pricing
from ltirelay.optimizer.kkt import KKTReport, waterfill_mu, kkt_residual
from ltirelay.optimizer.search import SearchResult, GainSearch, search_modes, optimize_lti_real, optimize_lti_complex, optimize_fd, phase_alignment_check
from ltirelay.optimizer.bounds import cutset_bound
