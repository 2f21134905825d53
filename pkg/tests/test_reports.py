import csv
import io
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sonine.integrate import IntegrationSpec, Method
from sonine.reports import (
    CSV_COLUMNS,
    SCHEMA_VERSION,
    Identity,
    VerificationReport,
    dumps,
    reports_to_csv,
    rows_to_csv,
)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


def _report(lhs, rhs, tol=1e-3):
    spec = IntegrationSpec(Method.GAUSS_JACOBI, nodes=32, jacobi_exponents=(0.5, 1.0))
    return VerificationReport.build(Identity.KADELL, {"n": 2, "lam": [1, 0], "z": 0.5 - 0.25j},
                                    lhs, rhs, tol, spec, runtime_ms=17)


def test_pass_rule_switches_to_absolute_below_one():
    assert _report(0.5, 0.5005).passed
    assert not _report(0.5, 0.502).passed
    assert _report(1000.0, 1000.5).passed
    assert not _report(1000.0, 1002.0).passed


@given(finite, finite, finite, finite)
def test_json_roundtrip(a, b, c, d):
    rep = _report(complex(a, b), complex(c, d))
    text = dumps(rep.to_dict())
    back = VerificationReport.from_dict(json.loads(text))
    assert dumps(back.to_dict()) == text
    assert back.lhs == rep.lhs and back.rhs == rep.rhs


def test_nonfinite_values_serialize():
    rep = _report(0.0, 1.0)
    assert math.isinf(rep.rel_residual)
    text = dumps(rep.to_dict())
    assert '"Infinity"' in text
    assert math.isinf(VerificationReport.from_dict(json.loads(text)).rel_residual)


def test_schema_field_and_version_check():
    d = _report(1.0, 1.0).to_dict()
    assert d["schema"] == SCHEMA_VERSION
    d["schema"] = SCHEMA_VERSION + 1
    with pytest.raises(ValueError):
        VerificationReport.from_dict(d)


def test_float_format_is_seventeen_digits():
    assert dumps(0.1) == "0.10000000000000001"
    assert dumps(1.0) == "1.0"
    assert json.loads(dumps(1 / 3)) == 1 / 3


def test_runtime_is_zeroed_without_timestamp():
    rep = _report(1.0, 1.0)
    assert rep.to_dict(timestamp=False)["runtime_ms"] == 0
    assert rep.csv_row(timestamp=False)["runtime_ms"] == 0


def test_csv_columns_frozen():
    text = reports_to_csv([_report(1.0, 1.0), _report(2.0, 2.5)])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert rows[1]["passed"] in ("False", "false")
    assert rows[0]["method"] == "GaussJacobiTensor"


def test_rows_to_csv_keeps_column_order():
    text = rows_to_csv([{"m": 1, "x": 0.5}, {"m": 2, "x": 0.25}], ["m", "x"])
    assert text.splitlines()[0] == "m,x"
