"""Current-consumption, battery-lifetime and energy-cost model of a Class A
LoRaWAN end-device using the LR-FHSS physical layer (LoRa DR0/DR5 included
for comparison)."""

from .airtime import PayloadTimeVariant, RxMode, TxTimeBreakdown, lrfhss_tx_time, min_duty_cycle_period
from .phy import DataRateSpec, dr_spec, max_frm_payload, phy_payload_size
from .power import (
    AckWindow,
    Mode,
    TransmissionPlan,
    avg_current,
    avg_current_confirmed,
    avg_current_unconfirmed,
    battery_lifetime,
    energy_cost_per_bit,
    evaluate,
    state_sequence,
)
from .profile import DEFAULT_PROFILE, RadioStateProfile, load_profile
from .trace import integrate_trace, render_trace

__version__ = "0.1.0"
