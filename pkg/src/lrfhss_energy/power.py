"""Per-cycle state machine, average current, battery lifetime and energy cost."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from . import airtime, phy
from .airtime import PayloadTimeVariant, TxTimeBreakdown
from .errors import (
    DutyCycleViolation,
    InvalidInput,
    InvalidStateRequest,
    PayloadTooLarge,
    UndefinedEnergyCost,
    UnsupportedDataRate,
)
from .profile import DEFAULT_PROFILE, RadioStateProfile

HOURS_PER_YEAR = 8760.0


class Mode(enum.Enum):
    UNCONFIRMED = "unconfirmed"
    CONFIRMED = "confirmed"


class AckWindow(enum.Enum):
    NONE = "none"
    RX1 = "rx1"
    RX2 = "rx2"


class Segment(NamedTuple):
    state: str
    duration_ms: float
    current_ma: float


@dataclass(frozen=True)
class TransmissionPlan:
    dr_index: int
    frm_payload_bytes: int
    period_s: float
    mode: Mode = Mode.UNCONFIRMED
    fopts_bytes: int = 0
    battery_mah: Optional[float] = None
    supply_v: Optional[float] = None
    p1: float = 0.5
    sleep_current_ma: Optional[float] = None
    variant: PayloadTimeVariant = airtime.DEFAULT_VARIANT
    n_symb: Optional[int] = None
    duty: float = airtime.DEFAULT_DUTY_CYCLE
    allow_duty_violation: bool = False
    profile: RadioStateProfile = field(default=DEFAULT_PROFILE, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "variant", PayloadTimeVariant(self.variant))
        if self.dr_index not in phy.MODELED_DRS:
            phy.dr_spec(self.dr_index)
            raise UnsupportedDataRate(
                f"DR{self.dr_index} has no measured state data; supported: "
                + ", ".join(f"DR{d}" for d in phy.MODELED_DRS)
            )
        if self.frm_payload_bytes < 1:
            raise InvalidInput("a periodic uplink carries at least 1 byte of FRM payload")
        cap = phy.max_frm_payload(self.dr_index)
        if self.frm_payload_bytes > cap:
            raise PayloadTooLarge(
                f"DR{self.dr_index} carries at most {cap} B of FRM payload, got {self.frm_payload_bytes}"
            )
        phy.phy_payload_size(self.frm_payload_bytes, self.fopts_bytes)
        if not 0.0 <= self.p1 <= 1.0:
            raise InvalidInput(f"p1 must be a probability, got {self.p1}")
        if not self.period_s > 0:
            raise InvalidInput("period must be positive")
        for name in ("battery_mah", "supply_v"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise InvalidInput(f"{name} must be positive")
        if self.sleep_current_ma is not None and self.sleep_current_ma < 0:
            raise InvalidInput("sleep current must be non-negative")
        if self.n_symb is not None and self.n_symb < 1:
            raise InvalidInput("n_symb must be >= 1")

    @property
    def p2(self) -> float:
        return 1.0 - self.p1

    @property
    def effective_profile(self) -> RadioStateProfile:
        if self.sleep_current_ma is None:
            return self.profile
        return self.profile.with_idle_current(self.sleep_current_ma)

    @property
    def battery(self) -> float:
        return self.profile.battery_mah if self.battery_mah is None else self.battery_mah

    @property
    def voltage(self) -> float:
        return self.profile.supply_v if self.supply_v is None else self.supply_v

    @property
    def period_ms(self) -> float:
        return self.period_s * 1e3


def uplink_time(plan: TransmissionPlan) -> TxTimeBreakdown:
    return airtime.tx_breakdown(
        plan.dr_index, plan.frm_payload_bytes, plan.fopts_bytes, plan.variant, plan.profile.duration("hop")
    )


def duty_cycle_minimum(plan: TransmissionPlan) -> float:
    return airtime.min_duty_cycle_period(uplink_time(plan).t_tx_ms, plan.duty)


def check_duty_cycle(plan: TransmissionPlan) -> None:
    minimum = duty_cycle_minimum(plan)
    if plan.period_s < minimum and not plan.allow_duty_violation:
        raise DutyCycleViolation(plan.period_s, minimum)


def _check_window(plan: TransmissionPlan, ack_window: AckWindow) -> AckWindow:
    ack_window = AckWindow(ack_window)
    if (ack_window is AckWindow.NONE) != (plan.mode is Mode.UNCONFIRMED):
        raise InvalidStateRequest(
            f"ack window {ack_window.value!r} is inconsistent with a {plan.mode.value} uplink"
        )
    return ack_window


def _rx1_ms(plan: TransmissionPlan, prof: RadioStateProfile, ack: bool) -> float:
    if not ack and plan.n_symb is not None:
        return airtime.rx1_formula_duration(plan.dr_index, plan.n_symb)
    return prof.duration("rx1", plan.dr_index, ack=ack)


def _fixed_states(plan: TransmissionPlan, ack_window: AckWindow) -> list[Segment]:
    """Every non-sleep state except the transmission itself, in cycle order."""
    prof = plan.effective_profile
    dr = plan.dr_index
    ack_rx1 = ack_window is AckWindow.RX1
    out = [
        Segment("preTx", prof.duration("preTx"), prof.current("preTx")),
        Segment("postTx", prof.duration("postTx", dr), prof.current("postTx")),
        Segment("rx1wait", prof.duration("rx1wait"), prof.current("rx1wait")),
        Segment("preRx1", prof.duration("preRx1"), prof.current("preRx1")),
        Segment("rx1", _rx1_ms(plan, prof, ack_rx1), prof.current("rx1")),
        Segment("postRx1", prof.duration("postRx1"), prof.current("postRx1")),
    ]
    if not ack_rx1:
        out += [
            Segment("rx2wait", prof.duration("rx2wait"), prof.current("rx2wait")),
            Segment("preRx2", prof.duration("preRx2"), prof.current("preRx2")),
            Segment(
                "rx2",
                prof.duration("rx2", ack=ack_window is AckWindow.RX2),
                prof.current("rx2"),
            ),
            Segment("postRx2", prof.duration("postRx2"), prof.current("postRx2")),
        ]
    return out


@dataclass(frozen=True)
class EnergyBreakdown:
    charges: dict
    t_act_ms: float
    t_sleep_ms: float
    period_ms: float
    avg_current_ma: float

    @property
    def active_charge(self) -> float:
        return sum(q for s, q in self.charges.items() if s != "sleep")


def energy_breakdown(
    plan: TransmissionPlan, ack_window: AckWindow = AckWindow.NONE, check_duty: bool = True
) -> EnergyBreakdown:
    """Closed-form charge ledger over one period, per radio state."""
    ack_window = _check_window(plan, ack_window)
    if check_duty:
        check_duty_cycle(plan)
    prof = plan.effective_profile
    tx = uplink_time(plan)
    fixed = _fixed_states(plan, ack_window)

    charges = {
        "tx": tx.t_on_ms * prof.current("tx"),
        "hop": tx.t_freq_hops_ms * prof.current("hop"),
    }
    for seg in fixed:
        charges[seg.state] = seg.duration_ms * seg.current_ma
    t_act = tx.t_tx_ms + sum(seg.duration_ms for seg in fixed)
    t_sleep = plan.period_ms - t_act
    if t_sleep < 0:
        raise InvalidInput(
            f"period {plan.period_s:g} s is shorter than the active cycle ({t_act / 1e3:.4g} s)"
        )
    charges["sleep"] = t_sleep * prof.current("sleep")
    return EnergyBreakdown(
        charges=charges,
        t_act_ms=t_act,
        t_sleep_ms=t_sleep,
        period_ms=plan.period_ms,
        avg_current_ma=math.fsum(charges.values()) / plan.period_ms,
    )


def _tx_segments(plan: TransmissionPlan, tx_current: float, hop: Segment) -> list[Segment]:
    """Uplink as alternating radiate/hop segments, built from fragment arithmetic."""
    if not phy.dr_spec(plan.dr_index).is_lrfhss:
        return [Segment("tx", airtime.lora_tx_time(plan.dr_index, plan.frm_payload_bytes, plan.fopts_bytes), tx_current)]
    coding = phy.cr_params(phy.dr_spec(plan.dr_index).cr)
    m = coding.fragment_bytes
    l_phy = phy.phy_payload_size(plan.frm_payload_bytes, plan.fopts_bytes)
    out = []
    for _ in range(coding.n_header_replicas):
        out += [Segment("tx", airtime.HEADER_REPLICA_MS, tx_current), hop]

    # Coded bytes sent, per variant: CRC + trellis tail, rounded CRC, or whole fragments.
    if plan.variant is PayloadTimeVariant.TRELLIS_EXACT:
        coded = l_phy + 2.75
    elif plan.variant is PayloadTimeVariant.TABLE_CONSISTENT:
        coded = l_phy + 3
    else:
        coded = -(-(l_phy + 3) // m) * m
    full = int((l_phy + 2.75) // m)
    for _ in range(full):
        out += [Segment("tx", airtime.FRAGMENT_MS, tx_current), hop]
    out.append(Segment("tx", (coded - full * m) * (airtime.FRAGMENT_MS / m), tx_current))
    return out


def state_sequence(plan: TransmissionPlan, ack_window: AckWindow = AckWindow.NONE) -> list[Segment]:
    """Ordered (state, duration, current) segments covering exactly one period.

    The transmission is expanded into header replicas and payload fragments
    separated by hop segments; the final fragment has no trailing hop.
    """
    ack_window = _check_window(plan, ack_window)
    prof = plan.effective_profile
    fixed = _fixed_states(plan, ack_window)
    hop = Segment("hop", prof.duration("hop"), prof.current("hop"))
    seq = [fixed[0]] + _tx_segments(plan, prof.current("tx"), hop) + fixed[1:]
    t_act = math.fsum(seg.duration_ms for seg in seq)
    t_sleep = plan.period_ms - t_act
    if t_sleep < 0:
        raise InvalidInput(
            f"period {plan.period_s:g} s is shorter than the active cycle ({t_act / 1e3:.4g} s)"
        )
    seq.append(Segment("sleep", t_sleep, prof.current("sleep")))
    return seq


def charge_per_cycle(sequence) -> float:
    return math.fsum(seg.duration_ms * seg.current_ma for seg in sequence)


def _as_mode(plan: TransmissionPlan, mode: Mode) -> None:
    if plan.mode is not mode:
        raise InvalidStateRequest(f"plan is {plan.mode.value}, expected {mode.value}")


def avg_current_unconfirmed(plan: TransmissionPlan) -> float:
    _as_mode(plan, Mode.UNCONFIRMED)
    return energy_breakdown(plan, AckWindow.NONE, check_duty=True).avg_current_ma


def avg_current_ack_window(plan: TransmissionPlan, ack_window: AckWindow) -> float:
    """Average current when the acknowledgment lands in ``ack_window``."""
    _as_mode(plan, Mode.CONFIRMED)
    return energy_breakdown(plan, ack_window, check_duty=True).avg_current_ma


def avg_current_confirmed(plan: TransmissionPlan) -> float:
    i1 = avg_current_ack_window(plan, AckWindow.RX1)
    i2 = avg_current_ack_window(plan, AckWindow.RX2)
    return plan.p1 * i1 + plan.p2 * i2


def avg_current(plan: TransmissionPlan) -> float:
    if plan.mode is Mode.CONFIRMED:
        return avg_current_confirmed(plan)
    return avg_current_unconfirmed(plan)


def battery_lifetime(avg_current_ma: float, battery_mah: float) -> float:
    """Lifetime in hours."""
    if not avg_current_ma > 0 or not battery_mah > 0:
        raise InvalidInput("average current and battery capacity must be positive")
    return battery_mah / avg_current_ma


def hours_to_years(hours: float) -> float:
    return hours / HOURS_PER_YEAR


def energy_cost_per_bit(
    avg_current_ma: float, supply_v: float, period_s: float, frm_payload_bytes: int
) -> float:
    """Energy per application bit in mJ (mA x V x s = mJ)."""
    if frm_payload_bytes < 1:
        raise UndefinedEnergyCost("energy per bit is undefined without application payload")
    return avg_current_ma * supply_v * period_s / (8 * frm_payload_bytes)


@dataclass(frozen=True)
class PlanReport:
    plan: TransmissionPlan
    t_tx_ms: float
    duty_min_s: float
    avg_current_ma: float
    lifetime_h: float
    energy_cost_mj_per_bit: float

    @property
    def lifetime_y(self) -> float:
        return hours_to_years(self.lifetime_h)


def evaluate(plan: TransmissionPlan) -> PlanReport:
    avg = avg_current(plan)
    return PlanReport(
        plan=plan,
        t_tx_ms=uplink_time(plan).t_tx_ms,
        duty_min_s=duty_cycle_minimum(plan),
        avg_current_ma=avg,
        lifetime_h=battery_lifetime(avg, plan.battery),
        energy_cost_mj_per_bit=energy_cost_per_bit(avg, plan.voltage, plan.period_s, plan.frm_payload_bytes),
    )
