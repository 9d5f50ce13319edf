import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfiqkd import (
    PAIRS,
    AnalysisSettings,
    CheckingPair,
    Mode,
    PhaseInterval,
    ProbabilityTable,
    TableError,
    validate_table,
)


def test_uniform_table_is_valid():
    assert validate_table(ProbabilityTable(np.full((4, 4), 0.25))) == []


def test_negative_entry_reported():
    p = np.full((4, 4), 0.25)
    p[0, 0] = -0.1
    errors = validate_table(ProbabilityTable(p))
    assert len(errors) == 1 and "out of range" in errors[0]


def test_two_by_two_rejected_in_rfi_mode():
    errors = validate_table(ProbabilityTable(np.full((2, 2), 0.25)), Mode.RFI)
    assert any("size must be 4" in e for e in errors)


def test_nonfinite_entry_reported():
    p = np.full((4, 4), 0.25)
    p[1, 2] = np.nan
    assert any("not finite" in e for e in validate_table(ProbabilityTable(p)))


def test_nonrfi_accepts_three_by_three():
    assert validate_table(ProbabilityTable(np.full((3, 3), 0.25)), Mode.NONRFI) == []


def test_table_is_read_only_copy():
    src = np.full((4, 4), 0.25)
    t = ProbabilityTable(src)
    src[0, 0] = 0.9
    assert t[0, 0] == 0.25
    with pytest.raises(ValueError):
        t.p[0, 0] = 0.5


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.0, 1.0, allow_subnormal=True), min_size=16, max_size=16))
def test_serialization_round_trip_is_bit_identical(values):
    t = ProbabilityTable(np.array(values).reshape(4, 4))
    back = ProbabilityTable.loads(t.dumps())
    assert back == t
    assert back.p.tobytes() == t.p.tobytes()


def test_counts_variant_parses_to_fractions():
    t = ProbabilityTable.from_dict({"size": 2, "shots": 4, "counts": [[1, 2], [3, 4]]})
    assert t.p.tolist() == [[0.25, 0.5], [0.75, 1.0]]


@pytest.mark.parametrize(
    "payload",
    [
        "not json",
        "[1, 2]",
        json.dumps({"size": 4}),
        json.dumps({"size": 3, "p": [[0.1] * 4] * 4}),
        json.dumps({"size": 1, "shots": 0, "counts": [[0]]}),
        json.dumps({"size": 1, "shots": 10, "counts": [[11]]}),
        json.dumps({"size": 1, "shots": 10, "counts": [[1.5]]}),
    ],
)
def test_malformed_payloads_raise_table_error(payload):
    with pytest.raises(TableError):
        ProbabilityTable.loads(payload)


def test_pairs_and_labels():
    assert [p.label for p in PAIRS] == ["22", "23", "32", "33"]
    with pytest.raises(ValueError):
        CheckingPair(1, 2)


def test_settings_validation():
    with pytest.raises(ValueError):
        AnalysisSettings(grid_coeff=1)
    with pytest.raises(ValueError):
        AnalysisSettings(r_step=0.0)
    with pytest.raises(ValueError):
        AnalysisSettings(modulus_method="magic")


def test_interval_contains_with_slack():
    iv = PhaseInterval(-0.5, 0.5)
    assert iv.contains(0.5 + 1e-10)
    assert not iv.contains(0.5 + 1e-6)
    assert math.isclose(iv.width, 1.0)
