import math

import pytest
from hypothesis import strategies as st

from lrfhss_energy import phy
from lrfhss_energy.power import AckWindow, Mode, TransmissionPlan, duty_cycle_minimum

CORPUS_DRS = (0, 5, 8, 9, 10, 11)

# Filled by test_acceptance; printed after the run.
ACCEPTANCE_RESULTS = {}


@st.composite
def plans(draw, drs=CORPUS_DRS, modes=tuple(Mode)):
    """Valid plans with period drawn log-uniformly in [duty minimum, 1e6 s]."""
    dr = draw(st.sampled_from(drs))
    payload = draw(st.integers(1, phy.max_frm_payload(dr)))
    mode = draw(st.sampled_from(modes))
    p1 = draw(st.floats(0.0, 1.0))
    probe = TransmissionPlan(dr, payload, 1e6, mode=mode)
    lo = duty_cycle_minimum(probe)
    u = draw(st.floats(0.0, 1.0))
    period = math.exp(math.log(lo) + u * (math.log(1e6) - math.log(lo)))
    period = min(max(period, lo), 1e6)
    plan = TransmissionPlan(dr, payload, period, mode=mode, p1=p1)
    if mode is Mode.UNCONFIRMED:
        window = AckWindow.NONE
    else:
        window = draw(st.sampled_from([AckWindow.RX1, AckWindow.RX2]))
    return plan, window


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record():
    def _record(key, ok, detail=""):
        prev = ACCEPTANCE_RESULTS.get(key)
        if prev is not None:
            ok = ok and prev[0]
            detail = f"{prev[1]}; {detail}" if detail else prev[1]
        ACCEPTANCE_RESULTS[key] = (ok, detail)

    return _record
