"""Channel parameters, mode allocations and the closed-form rate expressions."""
from ltirelay.channel.params import ChannelParams
from ltirelay.channel.allocation import ModeAllocation, FDAllocation, RateReport
from ltirelay.channel.rates import cap, effective_snr_lti, effective_snr_fd, matched_filter_snr, iaf_gain, iaf_rate, iaf_optimal_gain, iaf_rate_optimal, direct_rate, mode_objective, allocation_rate, relay_power_of, fd_allocation_rate
