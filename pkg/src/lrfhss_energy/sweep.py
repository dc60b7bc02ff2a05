"""Period sweeps producing the CSV behind lifetime/current/energy-cost plots."""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from . import phy
from .airtime import DEFAULT_VARIANT, PayloadTimeVariant
from .errors import DutyCycleViolation, InvalidInput
from .power import Mode, PlanReport, TransmissionPlan, duty_cycle_minimum, evaluate
from .profile import DEFAULT_PROFILE, RadioStateProfile

SWEEP_COLUMNS = (
    "dr",
    "mode",
    "payload_bytes",
    "sleep_ua",
    "period_s",
    "avg_current_ma",
    "lifetime_h",
    "energy_cost_mj_per_bit",
)

Payload = Union[int, str]


@dataclass(frozen=True)
class SweepSpec:
    drs: Sequence[int]
    period_start_s: float
    period_stop_s: float
    points: int = 50
    spacing: str = "log"
    payloads: Sequence[Payload] = ("max",)
    modes: Sequence[Mode] = (Mode.UNCONFIRMED,)
    sleep_ua: Sequence[Optional[float]] = (None,)
    variant: PayloadTimeVariant = DEFAULT_VARIANT
    n_symb: Optional[int] = None
    allow_duty_violation: bool = False
    profile: RadioStateProfile = field(default=DEFAULT_PROFILE, compare=False, repr=False)

    def periods(self) -> np.ndarray:
        if self.points < 2:
            raise InvalidInput("a sweep needs at least 2 points")
        if not 0 < self.period_start_s < self.period_stop_s:
            raise InvalidInput("period range must satisfy 0 < start < stop")
        if self.spacing == "log":
            return np.geomspace(self.period_start_s, self.period_stop_s, self.points)
        if self.spacing == "linear":
            return np.linspace(self.period_start_s, self.period_stop_s, self.points)
        raise InvalidInput(f"unknown spacing {self.spacing!r}")


def resolve_payload(dr: int, payload: Payload) -> int:
    if payload == "max":
        return phy.max_frm_payload(dr)
    return int(payload)


def make_plan(spec: SweepSpec, dr: int, mode: Mode, payload: int, sleep_ua, period_s: float):
    return TransmissionPlan(
        dr,
        payload,
        float(period_s),
        mode=mode,
        sleep_current_ma=None if sleep_ua is None else sleep_ua / 1e3,
        variant=spec.variant,
        n_symb=spec.n_symb,
        allow_duty_violation=spec.allow_duty_violation,
        profile=spec.profile,
    )


def run_sweep(spec: SweepSpec) -> list[PlanReport]:
    """Evaluate the full grid; rows are ordered by (dr, mode, payload, sleep, period)."""
    periods = spec.periods()
    rows = []
    for dr, mode, payload, sleep in itertools.product(
        spec.drs, [Mode(m) for m in spec.modes], spec.payloads, spec.sleep_ua
    ):
        nbytes = resolve_payload(dr, payload)
        first = make_plan(spec, dr, mode, nbytes, sleep, periods[0])
        if not spec.allow_duty_violation:
            minimum = duty_cycle_minimum(first)
            if periods[0] < minimum:
                raise DutyCycleViolation(float(periods[0]), minimum)
        for period in periods:
            rows.append(evaluate(make_plan(spec, dr, mode, nbytes, sleep, period)))
    return rows


def report_row(report: PlanReport) -> dict:
    plan = report.plan
    sleep_ma = plan.effective_profile.current("sleep")
    return {
        "dr": plan.dr_index,
        "mode": plan.mode.value,
        "payload_bytes": plan.frm_payload_bytes,
        "sleep_ua": repr(sleep_ma * 1e3),
        "period_s": repr(plan.period_s),
        "avg_current_ma": repr(report.avg_current_ma),
        "lifetime_h": repr(report.lifetime_h),
        "energy_cost_mj_per_bit": repr(report.energy_cost_mj_per_bit),
    }


def write_sweep_csv(reports: Sequence[PlanReport], destination) -> int:
    def write(fh):
        writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for report in reports:
            writer.writerow(report_row(report))
        return len(reports)

    if hasattr(destination, "write"):
        return write(destination)
    path = Path(destination)
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            return write(fh)
    except OSError as exc:
        raise OSError(f"cannot write sweep to {path}: {exc.strerror or exc}") from exc
