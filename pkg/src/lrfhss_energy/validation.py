"""Reproduction checks against the published characterization and results."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import airtime, phy
from .airtime import PayloadTimeVariant
from .power import (
    HOURS_PER_YEAR,
    Mode,
    TransmissionPlan,
    avg_current,
    avg_current_unconfirmed,
    battery_lifetime,
    duty_cycle_minimum,
    energy_cost_per_bit,
)
from .profile import DEFAULT_PROFILE, RadioStateProfile, get_leaf, leaf_paths


@dataclass(frozen=True)
class Check:
    group: str
    name: str
    expected: float
    actual: float
    tolerance: float
    relative: bool = False
    upper: Optional[float] = None

    @property
    def passed(self) -> bool:
        if self.upper is not None:
            return self.expected <= self.actual <= self.upper
        err = abs(self.actual - self.expected)
        if self.relative:
            err /= abs(self.expected)
        return err <= self.tolerance

    def describe_tolerance(self) -> str:
        if self.upper is not None:
            return f"[{self.expected:g}, {self.upper:g}]"
        return f"±{self.tolerance * 100:g}%" if self.relative else f"±{self.tolerance:g}"


# Published state characterization (durations ms, currents mA), stored apart
# from the profile defaults so a loaded profile can be checked against it.
PUBLISHED_STATES = {
    ("preTx", "duration_ms"): 2.370,
    ("preTx", "current_ma"): 3.8,
    ("tx", "current_ma"): 25.7,
    ("hop", "duration_ms"): 0.225,
    ("hop", "current_ma"): 12.3,
    ("postTx", "current_ma"): 3.7,
    ("postTx", "duration_ms", "dr8_10"): 10.40,
    ("postTx", "duration_ms", "dr9_11"): 12.40,
    ("postTx", "duration_ms", "dr0"): 0.676,
    ("postTx", "duration_ms", "dr5"): 0.676,
    ("rx1wait", "duration_ms"): 1000.0,
    ("rx1wait", "current_ma"): 0.0005,
    ("preRx1", "duration_ms"): 1.300,
    ("preRx1", "current_ma"): 2.3,
    ("rx1", "current_ma"): 5.8,
    ("rx1", "duration_ms", "dr8_10"): 99.20,
    ("rx1", "duration_ms", "dr9_11"): 49.50,
    ("rx1", "duration_ms", "dr0"): 198.40,
    ("rx1", "duration_ms", "dr5"): 16.40,
    ("rx1", "ack_duration_ms", "dr8_10"): 576.4,
    ("rx1", "ack_duration_ms", "dr9_11"): 286.6,
    ("rx1", "ack_duration_ms", "dr0"): 991.8,
    ("rx1", "ack_duration_ms", "dr5"): 41.20,
    ("postRx1", "duration_ms"): 0.700,
    ("postRx1", "current_ma"): 1.2,
    ("rx2wait", "duration_ms"): 911.2,
    ("rx2wait", "current_ma"): 0.0005,
    ("preRx2", "duration_ms"): 1.500,
    ("preRx2", "current_ma"): 1.8,
    ("rx2", "duration_ms"): 198.4,
    ("rx2", "ack_duration_ms"): 1141.0,
    ("rx2", "current_ma"): 5.8,
    ("postRx2", "duration_ms"): 0.700,
    ("postRx2", "current_ma"): 1.2,
    ("sleep", "current_ma"): 0.0005,
    ("supply_v",): 3.3,
    ("battery_mah",): 230.0,
}

# (header, payload 1 B, payload max, hops 1 B, hops max, tx 1 B, tx max)
PUBLISHED_LRFHSS_TIMES = {
    "dr8_10": (700.4, 870.4, 3379.2, 2.475, 7.875, 1573.3, 4087.5),
    "dr9_11": (466.9, 435.2, 3353.6, 1.350, 7.650, 903.5, 3828.2),
}
PUBLISHED_LORA_TX = {0: (1056.7, 2793.5), 5: (65.50, 399.6)}
PUBLISHED_DUTY_MIN_S = {
    0: (105.7, 279.3),
    5: (6.550, 39.96),
    8: (157.3, 408.7),
    10: (157.3, 408.7),
    9: (90.35, 382.8),
    11: (90.35, 382.8),
}

MIN = 60.0
DAY = 86400.0


def _plan(dr, payload, period_s, profile, variant, n_symb, mode=Mode.UNCONFIRMED, **kw):
    if payload == "max":
        payload = phy.max_frm_payload(dr)
    return TransmissionPlan(
        dr, payload, period_s, mode=mode, profile=profile, variant=variant, n_symb=n_symb, **kw
    )


def _years(plan):
    return battery_lifetime(avg_current(plan), plan.battery) / HOURS_PER_YEAR


def _duty_min(dr, payload, profile, variant, n_symb):
    return duty_cycle_minimum(_plan(dr, payload, 1e6, profile, variant, n_symb))


def profile_checks(profile: RadioStateProfile) -> list[Check]:
    out = []
    present = set(leaf_paths(profile))
    for path, value in PUBLISHED_STATES.items():
        assert path in present, path
        out.append(
            Check("states", ".".join(path), value, get_leaf(profile, path), 1e-6, relative=True)
        )
    return out


def airtime_checks(profile, variant) -> list[Check]:
    out = []
    hop = profile.duration("hop")
    for group, row in PUBLISHED_LRFHSS_TIMES.items():
        header, pay1, paymax, hops1, hopsmax, tx1, txmax = row
        for dr in (8, 10) if group == "dr8_10" else (9, 11):
            lo = airtime.lrfhss_tx_time(dr, 1, 0, variant, hop)
            hi = airtime.lrfhss_tx_time(dr, phy.max_frm_payload(dr), 0, variant, hop)
            out += [
                Check("airtime", f"DR{dr} T_header", header, lo.t_header_ms, 0.1),
                Check("airtime", f"DR{dr} T_payload 1B", pay1, lo.t_payload_ms, 0.1),
                Check("airtime", f"DR{dr} T_payload max", paymax, hi.t_payload_ms, 0.1),
                Check("airtime", f"DR{dr} T_freqHops 1B", hops1, lo.t_freq_hops_ms, 0.001),
                Check("airtime", f"DR{dr} T_freqHops max", hopsmax, hi.t_freq_hops_ms, 0.001),
                Check("airtime", f"DR{dr} T_Tx 1B", tx1, lo.t_tx_ms, 0.1),
                Check("airtime", f"DR{dr} T_Tx max", txmax, hi.t_tx_ms, 0.1),
            ]
    for dr, (tx1, txmax) in PUBLISHED_LORA_TX.items():
        out += [
            Check("airtime", f"DR{dr} T_Tx 1B", tx1, airtime.lora_tx_time(dr, 1), 0.1),
            Check("airtime", f"DR{dr} T_Tx max", txmax, airtime.lora_tx_time(dr, phy.max_frm_payload(dr)), 0.1),
        ]
    return out


def duty_cycle_checks(profile, variant, n_symb) -> list[Check]:
    out = []
    for dr, (one, mx) in PUBLISHED_DUTY_MIN_S.items():
        out += [
            Check("duty", f"DR{dr} 1B minimum period s", one, _duty_min(dr, 1, profile, variant, n_symb), 1e-3, True),
            Check("duty", f"DR{dr} max minimum period s", mx, _duty_min(dr, "max", profile, variant, n_symb), 1e-3, True),
        ]
    return out


def headline_checks(profile, variant, n_symb) -> list[Check]:
    def plan(dr, payload, period_s, **kw):
        return _plan(dr, payload, period_s, profile, variant, n_symb, **kw)

    out = []
    lifetimes = [
        ("DR8 max @500 min", 8, "max", 500 * MIN, 6.5, 0.05),
        ("DR9 max @500 min", 9, "max", 500 * MIN, 6.9, 0.05),
        ("DR9 max @1 day", 9, "max", DAY, 16.0, 0.05),
        ("DR8 max @1 day", 8, "max", DAY, 15.0, 0.07),
        ("DR9 1B @500 min", 9, 1, 500 * MIN, 20.0, 0.05),
        ("DR8 1B @500 min", 8, 1, 500 * MIN, 14.0, 0.05),
        ("DR0 1B @500 min", 0, 1, 500 * MIN, 18.0, 0.05),
    ]
    for name, dr, payload, period, expected, tol in lifetimes:
        out.append(Check("lifetime", f"{name} years", expected, _years(plan(dr, payload, period)), tol, True))

    peak_period = _duty_min(8, "max", profile, variant, n_symb)
    out.append(
        Check("current", "DR8 max peak mA", 0.27, avg_current_unconfirmed(plan(8, "max", peak_period)), 0.07, True)
    )

    deltas = [(8, 0.015, 0.045), (9, 0.015, 0.045), (10, 0.015, 0.045), (11, 0.015, 0.045),
              (0, 0.057 - 0.02, 0.057 + 0.02), (5, 0.184 - 0.03, 0.184 + 0.03)]
    for dr, lo, hi in deltas:
        period = _duty_min(dr, "max", profile, variant, n_symb)
        un = avg_current(plan(dr, "max", period))
        conf = avg_current(plan(dr, "max", period, mode=Mode.CONFIRMED))
        out.append(Check("current", f"DR{dr} confirmed/unconfirmed - 1", lo, conf / un - 1, 0, upper=hi))

    sleep20 = _years(plan(9, "max", 5 * 3600, sleep_current_ma=0.020))
    out.append(Check("lifetime", "DR9 max @5 h, 20 uA sleep, years", 1.0, sleep20, 0.15, True))

    for dr, expected in ((8, 21.0), (9, 31.0)):
        period = _duty_min(dr, "max", profile, variant, n_symb)
        costs = {}
        for payload in (1, "max"):
            p = plan(dr, payload, period, mode=Mode.CONFIRMED)
            costs[payload] = energy_cost_per_bit(avg_current(p), p.voltage, p.period_s, p.frm_payload_bytes)
        out.append(Check("energy", f"DR{dr} cost ratio 1B/max", expected, costs[1] / costs["max"], 0.20, True))
    return out


def run_validation(
    profile: RadioStateProfile = DEFAULT_PROFILE,
    variant: PayloadTimeVariant = airtime.DEFAULT_VARIANT,
    n_symb: Optional[int] = None,
) -> list[Check]:
    variant = PayloadTimeVariant(variant)
    return (
        profile_checks(profile)
        + airtime_checks(profile, variant)
        + duty_cycle_checks(profile, variant, n_symb)
        + headline_checks(profile, variant, n_symb)
    )
