import json

import pytest

from lrfhss_energy.errors import ProfileError
from lrfhss_energy.profile import (
    DEFAULT_PROFILE,
    DEFAULTS,
    STATE_ORDER,
    RadioStateProfile,
    get_leaf,
    leaf_paths,
    load_profile,
    nested_override,
)


def write(tmp_path, doc):
    path = tmp_path / "profile.json"
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return path


def test_defaults_cover_every_state():
    assert set(STATE_ORDER) <= set(DEFAULTS)
    for state in STATE_ORDER:
        assert DEFAULT_PROFILE.current(state) >= 0
    assert DEFAULT_PROFILE.supply_v == 3.3
    assert DEFAULT_PROFILE.battery_mah == 230


def test_duration_lookup():
    assert DEFAULT_PROFILE.duration("postTx", 9) == 12.40
    assert DEFAULT_PROFILE.duration("rx1", 10) == 99.20
    assert DEFAULT_PROFILE.duration("rx1", 11, ack=True) == 286.6
    assert DEFAULT_PROFILE.duration("rx2", ack=True) == 1141.0
    with pytest.raises(ValueError):
        DEFAULT_PROFILE.duration("rx1")


def test_empty_file_reproduces_defaults(tmp_path):
    assert load_profile(write(tmp_path, {})).to_dict() == DEFAULT_PROFILE.to_dict()


def test_partial_override(tmp_path):
    prof = load_profile(write(tmp_path, {"sleep": {"current_ma": 0.02}}))
    assert prof.current("sleep") == 0.02
    # Waiting states are untouched by a profile file.
    assert prof.current("rx1wait") == 0.0005
    assert prof.current("tx") == 25.7


def test_nested_group_override(tmp_path):
    prof = load_profile(write(tmp_path, {"rx1": {"duration_ms": {"dr8_10": 98.3}}}))
    assert prof.duration("rx1", 8) == 98.3
    assert prof.duration("rx1", 9) == 49.50


@pytest.mark.parametrize(
    "doc,path",
    [
        ({"tx": {"current_ma": -1}}, "tx.current_ma"),
        ({"tx": {"current": 1}}, "tx.current"),
        ({"txx": {}}, "txx"),
        ({"rx1": {"duration_ms": {"dr7": 1}}}, "rx1.duration_ms.dr7"),
        ({"hop": {"duration_ms": "fast"}}, "hop.duration_ms"),
        ({"supply_v": 0}, "supply_v"),
        ({"battery_mah": True}, "battery_mah"),
        ({"rx1": 5}, "rx1"),
    ],
)
def test_bad_values_report_key_path(tmp_path, doc, path):
    with pytest.raises(ProfileError) as exc:
        load_profile(write(tmp_path, doc))
    assert exc.value.key_path == path
    assert path in str(exc.value)


def test_malformed_json(tmp_path):
    with pytest.raises(ProfileError, match="malformed JSON"):
        load_profile(write(tmp_path, "{not json"))


def test_missing_file_mentions_path(tmp_path):
    with pytest.raises(OSError, match="nope.json"):
        load_profile(tmp_path / "nope.json")


def test_profile_is_immutable():
    with pytest.raises(TypeError):
        DEFAULT_PROFILE.data["tx"]["current_ma"] = 1.0
    copy = DEFAULT_PROFILE.to_dict()
    copy["tx"]["current_ma"] = 1.0
    assert DEFAULT_PROFILE.current("tx") == 25.7


def test_incomplete_document_rejected():
    doc = DEFAULT_PROFILE.to_dict()
    del doc["hop"]
    with pytest.raises(ProfileError, match="hop"):
        RadioStateProfile(doc)


def test_with_idle_current():
    prof = DEFAULT_PROFILE.with_idle_current(0.01)
    assert [prof.current(s) for s in ("rx1wait", "rx2wait", "sleep")] == [0.01] * 3
    assert prof.current("rx1") == 5.8


def test_leaf_helpers_round_trip():
    paths = leaf_paths()
    assert ("rx1", "ack_duration_ms", "dr5") in paths
    assert len(paths) == len(set(paths))
    for path in paths:
        value = get_leaf(DEFAULT_PROFILE, path)
        changed = DEFAULT_PROFILE.overlay(nested_override(path, value * 2 + 1))
        assert get_leaf(changed, path) == value * 2 + 1
