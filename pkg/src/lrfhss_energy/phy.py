"""EU863-870 data-rate catalog, LR-FHSS coding parameters and MAC frame sizing."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import UndefinedDataRate, UnsupportedCodingRate, InvalidInput


class Modulation(enum.Enum):
    LORA = "LoRa"
    FSK = "FSK"
    LRFHSS = "LR-FHSS"


CR_1_3 = Fraction(1, 3)
CR_2_3 = Fraction(2, 3)

MHDR_BYTES = 1
FHDR_MIN_BYTES = 7
FPORT_BYTES = 1
MIC_BYTES = 4
MAX_FOPTS_BYTES = 15

# MHDR + FHDR without FOpts; the MIC is outside the MAC payload.
MAC_OVERHEAD_BYTES = MHDR_BYTES + FHDR_MIN_BYTES


@dataclass(frozen=True)
class DataRateSpec:
    dr_index: int
    modulation: Modulation
    phy_bit_rate_bps: float
    max_mac_payload_bytes: int
    sf: Optional[int] = None
    bw_hz: Optional[int] = None
    cr: Optional[Fraction] = None
    ocw_khz: Optional[float] = None
    obw_hz: Optional[float] = None
    grid_khz: Optional[float] = None
    usable_channels: Optional[int] = None
    available_channels: Optional[int] = None

    @property
    def max_frm_payload_bytes(self) -> int:
        # FPort is counted inside the MAC payload allowance.
        return self.max_mac_payload_bytes - MAC_OVERHEAD_BYTES

    @property
    def is_lrfhss(self) -> bool:
        return self.modulation is Modulation.LRFHSS

    @property
    def supported_by_model(self) -> bool:
        """No state/current characterization exists for FSK."""
        return self.modulation is not Modulation.FSK


@dataclass(frozen=True)
class CodingParams:
    cr: Fraction
    n_header_replicas: int
    fragment_bytes: int


def _lora(dr, sf, bw_hz, rate, mac_max):
    return DataRateSpec(dr, Modulation.LORA, rate, mac_max, sf=sf, bw_hz=bw_hz)


def _lrfhss(dr, cr, ocw_khz, usable, rate, mac_max):
    return DataRateSpec(
        dr,
        Modulation.LRFHSS,
        rate,
        mac_max,
        cr=cr,
        ocw_khz=ocw_khz,
        obw_hz=488.0,
        grid_khz=3.9,
        usable_channels=usable,
        available_channels=8 * usable,
    )


_CATALOG = {
    0: _lora(0, 12, 125_000, 250, 59),
    1: _lora(1, 11, 125_000, 440, 59),
    2: _lora(2, 10, 125_000, 980, 59),
    3: _lora(3, 9, 125_000, 1760, 123),
    4: _lora(4, 8, 125_000, 3125, 250),
    5: _lora(5, 7, 125_000, 5470, 250),
    6: _lora(6, 7, 250_000, 11000, 250),
    7: DataRateSpec(7, Modulation.FSK, 50_000, 250),
    8: _lrfhss(8, CR_1_3, 137.0, 35, 162, 58),
    9: _lrfhss(9, CR_2_3, 137.0, 35, 325, 123),
    10: _lrfhss(10, CR_1_3, 336.0, 86, 162, 58),
    11: _lrfhss(11, CR_2_3, 336.0, 86, 325, 123),
}

DEFINED_DRS = tuple(sorted(_CATALOG))
LRFHSS_DRS = (8, 9, 10, 11)
# Data rates with measured state data.
MODELED_DRS = (0, 5, 8, 9, 10, 11)

_CODING = {
    CR_1_3: CodingParams(CR_1_3, 3, 2),
    CR_2_3: CodingParams(CR_2_3, 2, 4),
}


def dr_spec(dr_index: int) -> DataRateSpec:
    try:
        return _CATALOG[dr_index]
    except (KeyError, TypeError):
        raise UndefinedDataRate(f"DR{dr_index} is not defined for EU863-870") from None


def max_frm_payload(dr_index: int) -> int:
    return dr_spec(dr_index).max_frm_payload_bytes


def cr_params(cr) -> CodingParams:
    try:
        key = Fraction(cr)
    except (TypeError, ValueError):
        raise UnsupportedCodingRate(f"coding rate {cr!r} is not an LR-FHSS payload rate") from None
    try:
        return _CODING[key]
    except KeyError:
        raise UnsupportedCodingRate(f"coding rate {cr} is not an LR-FHSS payload rate") from None


def coding_for_fragment(fragment_bytes: int) -> CodingParams:
    for params in _CODING.values():
        if params.fragment_bytes == fragment_bytes:
            return params
    raise UnsupportedCodingRate(f"no LR-FHSS coding rate uses {fragment_bytes}-byte fragments")


def phy_payload_size(frm_payload_bytes: int, fopts_bytes: int = 0) -> int:
    """PHYPayload length: MHDR + FHDR(7 + FOpts) + [FPort] + FRMPayload + MIC."""
    if frm_payload_bytes < 0:
        raise InvalidInput("FRM payload size must be >= 0")
    if not 0 <= fopts_bytes <= MAX_FOPTS_BYTES:
        raise InvalidInput(f"FOpts length must be in [0, {MAX_FOPTS_BYTES}]")
    fport = FPORT_BYTES if frm_payload_bytes > 0 else 0
    return MHDR_BYTES + FHDR_MIN_BYTES + fopts_bytes + fport + frm_payload_bytes + MIC_BYTES


def dr_group(dr_index: int) -> str:
    """Evaluation group; DR8/DR10 and DR9/DR11 are indistinguishable in the model."""
    return {8: "dr8_10", 10: "dr8_10", 9: "dr9_11", 11: "dr9_11", 0: "dr0", 5: "dr5"}.get(
        dr_index, f"dr{dr_index}"
    )


DR_GROUPS = ("dr8_10", "dr9_11", "dr0", "dr5")
