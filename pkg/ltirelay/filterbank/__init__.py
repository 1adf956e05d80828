"""Band plans, filter-bank responses and the synthesis of relay filter taps."""
from ltirelay.filterbank.bands import BandPlan, plan_bands, bank_response, source_spectrum
from ltirelay.filterbank.synthesis import synthesize_taps, bank_relay_power, achieved_rate, save_taps, load_taps
