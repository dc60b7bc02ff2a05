import math

import pytest
from hypothesis import given, strategies as st

from lrfhss_energy import airtime, phy
from lrfhss_energy.airtime import PayloadTimeVariant as V, RxMode
from lrfhss_energy.errors import (
    InvalidDutyCycle,
    InvalidReplicaCount,
    PayloadTooLarge,
    UnsupportedCodingRate,
    UnsupportedDataRate,
    WrongModulation,
)

VARIANTS = list(V)


def enumerate_payload_hops(l_phy, m):
    """Send l_phy + CRC + 6 tail bits in m-byte fragments; hop after each but the last."""
    remaining = l_phy + 2 + 6 / 8
    hops = 0
    while remaining > m:
        remaining -= m
        hops += 1
    return hops


@pytest.mark.parametrize("n,expected", [(3, 700.416), (2, 466.944)])
def test_header_time(n, expected):
    assert airtime.lrfhss_header_time(n) == pytest.approx(expected, abs=1e-9)


def test_header_rejects_single_replica():
    with pytest.raises(InvalidReplicaCount):
        airtime.lrfhss_header_time(1)


@pytest.mark.parametrize(
    "l_phy,m,variant,expected",
    [
        (14, 2, V.TABLE_CONSISTENT, 870.4),
        (63, 2, V.TABLE_CONSISTENT, 3379.2),
        (14, 4, V.TABLE_CONSISTENT, 435.2),
        (128, 4, V.TABLE_CONSISTENT, 3353.6),
        (14, 2, V.TRELLIS_EXACT, 857.6),
        (14, 2, V.LEGACY_SPEC, 921.6),
    ],
)
def test_payload_time(l_phy, m, variant, expected):
    assert airtime.lrfhss_payload_time(l_phy, m, variant) == pytest.approx(expected, abs=1e-9)


def test_payload_time_rejects_fragment_size():
    with pytest.raises(UnsupportedCodingRate):
        airtime.lrfhss_payload_time(14, 3)


@pytest.mark.parametrize("l_phy,m,n,expected", [(14, 2, 3, 11), (63, 2, 3, 35), (128, 4, 2, 34), (14, 4, 2, 6)])
def test_hop_count(l_phy, m, n, expected):
    assert airtime.hop_count(l_phy, m, n) == expected


@given(st.integers(12, 300), st.sampled_from([2, 4]))
def test_hop_count_matches_fragment_enumeration(l_phy, m):
    assert airtime.payload_hop_count(l_phy, m) == enumerate_payload_hops(l_phy, m)


@pytest.mark.parametrize("n,t,expected", [(11, 0.225, 2.475), (0, 0.225, 0.0), (34, 0.225, 7.650)])
def test_hop_time(n, t, expected):
    assert airtime.hop_time(n, t) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "dr,payload,tx",
    [(8, 1, 1573.3), (8, 50, 4087.5), (9, 1, 903.5), (9, 115, 3828.2), (10, 50, 4087.5), (11, 1, 903.5)],
)
def test_lrfhss_tx_time_published(dr, payload, tx):
    b = airtime.lrfhss_tx_time(dr, payload)
    assert b.t_tx_ms == pytest.approx(tx, abs=0.1)


def test_lrfhss_tx_time_errors():
    with pytest.raises(PayloadTooLarge):
        airtime.lrfhss_tx_time(8, 51)
    with pytest.raises(WrongModulation):
        airtime.lrfhss_tx_time(5, 1)


def test_trellis_variant_delta_dr8_one_byte():
    table = airtime.lrfhss_tx_time(8, 1, variant=V.TABLE_CONSISTENT).t_payload_ms
    exact = airtime.lrfhss_tx_time(8, 1, variant=V.TRELLIS_EXACT).t_payload_ms
    assert table - exact == pytest.approx(12.8, abs=1e-9)


@given(st.sampled_from(phy.LRFHSS_DRS), st.data(), st.sampled_from(VARIANTS))
def test_breakdown_closure(dr, data, variant):
    n = data.draw(st.integers(0, phy.max_frm_payload(dr)))
    b = airtime.lrfhss_tx_time(dr, n, variant=variant)
    assert b.t_tx_ms == b.t_header_ms + b.t_payload_ms + b.t_freq_hops_ms
    assert min(b.t_header_ms, b.t_payload_ms, b.t_freq_hops_ms) >= 0


@pytest.mark.parametrize("dr", [0, 5, 8, 9, 10, 11])
@pytest.mark.parametrize("variant", VARIANTS)
def test_tx_time_monotone_in_payload(dr, variant):
    times = [airtime.tx_time(dr, n, variant=variant) for n in range(1, phy.max_frm_payload(dr) + 1)]
    assert all(b >= a for a, b in zip(times, times[1:]))


@given(st.integers(12, 300), st.sampled_from([2, 4]))
def test_variant_ordering(l_phy, m):
    legacy, table, exact = (airtime.lrfhss_payload_time(l_phy, m, v)
                            for v in (V.LEGACY_SPEC, V.TABLE_CONSISTENT, V.TRELLIS_EXACT))
    assert legacy >= table >= exact


@given(st.integers(12, 300), st.sampled_from([(2, 3), (4, 2)]))
def test_hops_follow_fragments(l_phy, coding):
    m, n = coding
    exact_fragments = airtime.lrfhss_payload_time(l_phy, m, V.TRELLIS_EXACT) / airtime.FRAGMENT_MS
    hops = airtime.hop_count(l_phy, m, n) - n
    assert hops in {math.floor(exact_fragments), math.ceil(exact_fragments) - 1}


def test_hop_share_of_airtime():
    shares = []
    for dr in (8, 9):
        for n in (1, phy.max_frm_payload(dr)):
            b = airtime.lrfhss_tx_time(dr, n)
            shares.append(b.t_freq_hops_ms / b.t_tx_ms)
    assert all(abs(s - 0.002) <= 0.001 for s in shares)
    assert sum(shares) / len(shares) == pytest.approx(0.002, abs=0.0005)


@pytest.mark.parametrize("dr,n,expected", [(0, 1, 1056.7), (0, 51, 2793.5), (5, 1, 65.50), (5, 242, 399.6)])
def test_lora_anchors(dr, n, expected):
    assert airtime.lora_tx_time(dr, n) == pytest.approx(expected, rel=0.02)
    assert airtime.lora_tx_time(dr, n) == expected


def test_lora_standard_formula_symbol_counts():
    # DR0, 63 B PHYPayload: 12.25 + 8 + 13 * 5 symbols of 32.768 ms.
    assert airtime.lora_standard_airtime(12, 125_000, 63) == pytest.approx(85.25 * 32.768)
    # DR5, 255 B PHYPayload: 12.25 + 8 + 74 * 5 symbols of 1.024 ms.
    assert airtime.lora_standard_airtime(7, 125_000, 255) == pytest.approx(390.25 * 1.024)


def test_lora_rejects_other_drs():
    with pytest.raises(UnsupportedDataRate):
        airtime.lora_tx_time(3, 10)


@pytest.mark.parametrize("sf,expected", [(12, 32.768), (11, 16.384), (7, 1.024)])
def test_symbol_time(sf, expected):
    assert airtime.symbol_time(sf, 125_000) == pytest.approx(expected, abs=1e-12)


@pytest.mark.parametrize(
    "dr,mode,expected",
    [(8, RxMode.EMPTY, 99.20), (10, RxMode.EMPTY, 99.20), (9, RxMode.EMPTY, 49.50),
     (0, RxMode.EMPTY, 198.40), (5, RxMode.EMPTY, 16.40),
     (8, RxMode.ACK_RECEIVED, 576.4), (11, RxMode.ACK_RECEIVED, 286.6),
     (0, RxMode.ACK_RECEIVED, 991.8), (5, RxMode.ACK_RECEIVED, 41.20)],
)
def test_rx1_duration(dr, mode, expected):
    assert airtime.rx1_duration(dr, mode) == expected


def test_rx1_downlink_mapping_and_formula():
    assert [airtime.rx1_downlink_dr(d) for d in (8, 10, 9, 11, 0, 5)] == [1, 1, 2, 2, 0, 5]
    assert airtime.rx1_formula_duration(8) == pytest.approx(6 * 16.384)
    assert airtime.rx1_formula_duration(9) == pytest.approx(6 * 8.192)
    with pytest.raises(UnsupportedDataRate):
        airtime.rx1_duration(3)


def test_rx2():
    assert airtime.rx2_duration(RxMode.EMPTY) == 198.4
    assert airtime.rx2_duration(RxMode.ACK_RECEIVED) == 1141
    assert airtime.rx2_cad_duration(12, 125_000) == pytest.approx(33.024, abs=1e-12)


@pytest.mark.parametrize("t,expected", [(1573.3, 157.33), (3828.2, 382.82), (1000, 100.0)])
def test_min_duty_cycle_period(t, expected):
    assert airtime.min_duty_cycle_period(t, 0.01) == pytest.approx(expected)


def test_min_duty_cycle_period_rejects_bad_duty():
    for duty in (0, -0.1, 1.5):
        with pytest.raises(InvalidDutyCycle):
            airtime.min_duty_cycle_period(1000, duty)


@given(st.floats(0.1, 1e5), st.floats(0.1, 100), st.floats(1e-3, 1.0))
def test_duty_scaling(t, k, d):
    assert airtime.min_duty_cycle_period(k * t, d) == pytest.approx(k * airtime.min_duty_cycle_period(t, d), rel=1e-12)
