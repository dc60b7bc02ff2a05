"""Transmission and receive-window durations.

All durations are milliseconds as ``float``; nothing is rounded here.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import phy
from .errors import (
    InvalidDutyCycle,
    InvalidInput,
    InvalidReplicaCount,
    PayloadTooLarge,
    UnsupportedCodingRate,
    UnsupportedDataRate,
    WrongModulation,
)

HEADER_REPLICA_MS = 233.472
FRAGMENT_MS = 102.4
DEFAULT_HOP_MS = 0.225
DEFAULT_DUTY_CYCLE = 0.01

# CRC (2 bytes) plus 6 trellis-termination bits, in quarter bytes.
_TRAILER_QUARTERS = 11


class PayloadTimeVariant(enum.Enum):
    TRELLIS_EXACT = "trellis-exact"
    TABLE_CONSISTENT = "table-consistent"
    LEGACY_SPEC = "legacy-spec"


DEFAULT_VARIANT = PayloadTimeVariant.TABLE_CONSISTENT


class RxMode(enum.Enum):
    EMPTY = "empty"
    ACK_RECEIVED = "ack"


@dataclass(frozen=True)
class TxTimeBreakdown:
    t_header_ms: float
    t_payload_ms: float
    t_freq_hops_ms: float
    n_hops: int
    n_replicas: int = 0
    fragment_bytes: int = 0
    l_phy: int = 0

    @property
    def t_tx_ms(self) -> float:
        return self.t_header_ms + self.t_payload_ms + self.t_freq_hops_ms

    @property
    def t_on_ms(self) -> float:
        """Time spent actually radiating (headers and payload, hops excluded)."""
        return self.t_header_ms + self.t_payload_ms


def _check_fragment(fragment_bytes: int) -> None:
    if fragment_bytes not in (2, 4):
        raise UnsupportedCodingRate(f"fragment size {fragment_bytes} B matches no LR-FHSS coding rate")


def lrfhss_header_time(n_replicas: int) -> float:
    if n_replicas not in (2, 3):
        raise InvalidReplicaCount(f"LR-FHSS sends 2 or 3 header replicas, not {n_replicas}")
    return n_replicas * HEADER_REPLICA_MS


def lrfhss_payload_time(
    l_phy: int, fragment_bytes: int, variant: PayloadTimeVariant = DEFAULT_VARIANT
) -> float:
    _check_fragment(fragment_bytes)
    if l_phy < 12:
        raise InvalidInput(f"PHYPayload of {l_phy} B is shorter than the 12 B MAC minimum")
    variant = PayloadTimeVariant(variant)
    if variant is PayloadTimeVariant.TRELLIS_EXACT:
        fragments = (l_phy + 2.75) / fragment_bytes
    elif variant is PayloadTimeVariant.TABLE_CONSISTENT:
        fragments = (l_phy + 3) / fragment_bytes
    else:
        fragments = -(-(l_phy + 3) // fragment_bytes)
    return fragments * FRAGMENT_MS


def payload_hop_count(l_phy: int, fragment_bytes: int) -> int:
    """Hops inside the payload: one after every full fragment except the last."""
    _check_fragment(fragment_bytes)
    return (4 * l_phy + _TRAILER_QUARTERS) // (4 * fragment_bytes)


def hop_count(l_phy: int, fragment_bytes: int, n_replicas: int) -> int:
    if n_replicas not in (2, 3):
        raise InvalidReplicaCount(f"LR-FHSS sends 2 or 3 header replicas, not {n_replicas}")
    return n_replicas + payload_hop_count(l_phy, fragment_bytes)


def hop_time(n_hops: int, t_hop_ms: float = DEFAULT_HOP_MS) -> float:
    if n_hops < 0 or t_hop_ms < 0:
        raise InvalidInput("hop count and hop duration must be non-negative")
    return n_hops * t_hop_ms


def _check_payload(dr_index: int, frm_payload_bytes: int) -> None:
    cap = phy.max_frm_payload(dr_index)
    if frm_payload_bytes < 0:
        raise InvalidInput("FRM payload size must be >= 0")
    if frm_payload_bytes > cap:
        raise PayloadTooLarge(f"DR{dr_index} carries at most {cap} B of FRM payload, got {frm_payload_bytes}")


def lrfhss_tx_time(
    dr_index: int,
    frm_payload_bytes: int,
    fopts_bytes: int = 0,
    variant: PayloadTimeVariant = DEFAULT_VARIANT,
    t_hop_ms: float = DEFAULT_HOP_MS,
) -> TxTimeBreakdown:
    spec = phy.dr_spec(dr_index)
    if not spec.is_lrfhss:
        raise WrongModulation(f"DR{dr_index} is {spec.modulation.value}, not LR-FHSS")
    _check_payload(dr_index, frm_payload_bytes)
    coding = phy.cr_params(spec.cr)
    l_phy = phy.phy_payload_size(frm_payload_bytes, fopts_bytes)
    n_hops = hop_count(l_phy, coding.fragment_bytes, coding.n_header_replicas)
    return TxTimeBreakdown(
        t_header_ms=lrfhss_header_time(coding.n_header_replicas),
        t_payload_ms=lrfhss_payload_time(l_phy, coding.fragment_bytes, variant),
        t_freq_hops_ms=hop_time(n_hops, t_hop_ms),
        n_hops=n_hops,
        n_replicas=coding.n_header_replicas,
        fragment_bytes=coding.fragment_bytes,
        l_phy=l_phy,
    )


def symbol_time(sf: int, bw_hz: int) -> float:
    if bw_hz <= 0:
        raise InvalidInput("bandwidth must be positive")
    return 2**sf / bw_hz * 1e3


def lora_standard_airtime(
    sf: int,
    bw_hz: int,
    l_phy: int,
    preamble_symbols: int = 8,
    coding_rate: int = 1,
    crc: bool = True,
    explicit_header: bool = True,
) -> float:
    """Semtech SX127x time-on-air for a LoRa frame."""
    low_dr_opt = 1 if symbol_time(sf, bw_hz) > 16.0 else 0
    return symbol_time(sf, bw_hz) * (preamble_symbols + 4.25 + lora_payload_symbols(
        sf, l_phy, coding_rate, crc, explicit_header, low_dr_opt
    ))


def lora_payload_symbols(sf, l_phy, coding_rate=1, crc=True, explicit_header=True, low_dr_opt=0):
    num = 8 * l_phy - 4 * sf + 28 + 16 * int(crc) - 20 * int(not explicit_header)
    den = 4 * (sf - 2 * low_dr_opt)
    return 8 + max(math.ceil(num / den) * (coding_rate + 4), 0)


# Published uplink times at the 1-byte and maximum FRM payloads.
LORA_TX_ANCHORS_MS = {
    0: {1: 1056.7, 51: 2793.5},
    5: {1: 65.50, 242: 399.6},
}


def lora_tx_time(dr_index: int, frm_payload_bytes: int, fopts_bytes: int = 0) -> float:
    """LoRa uplink time for DR0/DR5.

    The two published values are reproduced exactly. In between, the standard
    symbol count is used and the offset from the standard formula is
    interpolated linearly in symbol count, so the result stays monotone in
    payload size. Intermediate values are model extrapolation.
    """
    if dr_index not in LORA_TX_ANCHORS_MS:
        raise UnsupportedDataRate(f"no LoRa state data for DR{dr_index}; use DR0 or DR5")
    _check_payload(dr_index, frm_payload_bytes)
    spec = phy.dr_spec(dr_index)
    anchors = LORA_TX_ANCHORS_MS[dr_index]
    lo, hi = sorted(anchors)
    if fopts_bytes == 0 and frm_payload_bytes in anchors:
        return anchors[frm_payload_bytes]

    def standard(n):
        return lora_standard_airtime(spec.sf, spec.bw_hz, phy.phy_payload_size(n, fopts_bytes))

    def symbols(n):
        return standard(n) / symbol_time(spec.sf, spec.bw_hz)

    off_lo = anchors[lo] - standard(lo)
    off_hi = anchors[hi] - standard(hi)
    s_lo, s_hi = symbols(lo), symbols(hi)
    s = symbols(frm_payload_bytes)
    frac = min(max((s - s_lo) / (s_hi - s_lo), 0.0), 1.0)
    return standard(frm_payload_bytes) + off_lo + frac * (off_hi - off_lo)


def tx_breakdown(
    dr_index: int,
    frm_payload_bytes: int,
    fopts_bytes: int = 0,
    variant: PayloadTimeVariant = DEFAULT_VARIANT,
    t_hop_ms: float = DEFAULT_HOP_MS,
) -> TxTimeBreakdown:
    """Breakdown for any modeled DR; a LoRa frame is one payload term."""
    if phy.dr_spec(dr_index).is_lrfhss:
        return lrfhss_tx_time(dr_index, frm_payload_bytes, fopts_bytes, variant, t_hop_ms)
    t = lora_tx_time(dr_index, frm_payload_bytes, fopts_bytes)
    return TxTimeBreakdown(0.0, t, 0.0, 0, l_phy=phy.phy_payload_size(frm_payload_bytes, fopts_bytes))


def tx_time(
    dr_index: int,
    frm_payload_bytes: int,
    fopts_bytes: int = 0,
    variant: PayloadTimeVariant = DEFAULT_VARIANT,
    t_hop_ms: float = DEFAULT_HOP_MS,
) -> float:
    return tx_breakdown(dr_index, frm_payload_bytes, fopts_bytes, variant, t_hop_ms).t_tx_ms


# Receive windows. Measured values are the defaults; formulas are diagnostics.

RECEIVE_DELAY1_MS = 1000.0
RX1_DR_OFFSET = 0
RX2_DR = 0
DEFAULT_N_SYMB = 6

RX1_EMPTY_MS = {"dr8_10": 99.20, "dr9_11": 49.50, "dr0": 198.40, "dr5": 16.40}
RX1_ACK_MS = {"dr8_10": 576.4, "dr9_11": 286.6, "dr0": 991.8, "dr5": 41.20}
RX2_EMPTY_MS = 198.4
RX2_ACK_MS = 1141.0

_RX1_DOWNLINK_DR = {8: 1, 10: 1, 9: 2, 11: 2, 0: 0, 5: 5}


def rx1_downlink_dr(uplink_dr: int) -> int:
    try:
        return _RX1_DOWNLINK_DR[uplink_dr] - RX1_DR_OFFSET
    except KeyError:
        raise UnsupportedDataRate(f"no receive-window data for uplink DR{uplink_dr}") from None


def rx1_formula_duration(uplink_dr: int, n_symb: int = DEFAULT_N_SYMB) -> float:
    if n_symb < 1:
        raise InvalidInput("n_symb must be >= 1")
    spec = phy.dr_spec(rx1_downlink_dr(uplink_dr))
    return n_symb * symbol_time(spec.sf, spec.bw_hz)


def rx1_duration(uplink_dr: int, mode: RxMode = RxMode.EMPTY) -> float:
    rx1_downlink_dr(uplink_dr)
    table = RX1_ACK_MS if RxMode(mode) is RxMode.ACK_RECEIVED else RX1_EMPTY_MS
    return table[phy.dr_group(uplink_dr)]


def rx2_duration(mode: RxMode = RxMode.EMPTY) -> float:
    return RX2_ACK_MS if RxMode(mode) is RxMode.ACK_RECEIVED else RX2_EMPTY_MS


def rx2_cad_duration(sf: int = 12, bw_hz: int = 125_000) -> float:
    return (2**sf + 32) / bw_hz * 1e3


def min_duty_cycle_period(t_tx_ms: float, duty: float = DEFAULT_DUTY_CYCLE) -> float:
    """Shortest uplink period, in seconds, that keeps airtime within ``duty``."""
    if not 0 < duty <= 1:
        raise InvalidDutyCycle(f"duty cycle must be in (0, 1], got {duty}")
    return t_tx_ms / duty / 1e3
