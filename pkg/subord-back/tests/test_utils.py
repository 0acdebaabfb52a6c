import json
import logging
import math

import numpy as np
import pytest

from utils import Utils


def test_report_format_is_fixed():
    report = {"x": 0.1, "flags": [1.0, True, None], "z": complex(1, 2), "limit": math.inf, "n": np.int64(3)}
    assert Utils().format_report(report) == (
        '{"schema": 1, "x": 0.10000000000000001, "flags": [1, true, null], "z": [1, 2], "limit": "inf", "n": 3}\n'
    )


def test_report_rejects_unknown_types():
    with pytest.raises(TypeError):
        Utils().format_report({"x": object()})


@pytest.mark.parametrize("value, expected", [(None, -1), ("4", 4), ("0", 1), ("many", 1)])
def test_thread_setting(monkeypatch, value, expected):
    if value is None:
        monkeypatch.delenv("SUBORD_THREADS", raising=False)
    else:
        monkeypatch.setenv("SUBORD_THREADS", value)
    assert Utils().threads == expected


@pytest.mark.parametrize("value, expected", [("debug", logging.DEBUG), ("WARNING", logging.WARNING), ("loud", logging.INFO)])
def test_log_level_setting(monkeypatch, value, expected):
    monkeypatch.setenv("SUBORD_LOG_LEVEL", value)
    assert Utils().log_level == expected


def test_format_csv():
    table = Utils().format_csv(("theta", "re"), [(0.5, 1.0), (1.5, -0.25)])
    assert table == "theta,re\n0.5,1\n1.5,-0.25\n"


def test_load_series_variants(tmp_path):
    utils = Utils()
    pairs = tmp_path / "pairs.json"
    pairs.write_text(json.dumps([[0, 0], [1, 0], [0.5, -0.5]]))
    assert utils.load_series(str(pairs)).coefficients.tolist() == [0, 1, 0.5 - 0.5j]

    wrapped = tmp_path / "wrapped.json"
    wrapped.write_text(json.dumps({"coefficients": [1, 0, 0.25]}))
    p = utils.load_series(str(wrapped))
    assert p.leading_order == 2
    assert p.coefficients.tolist() == [1, 0, 0.25]

    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"coefficients": []}))
    with pytest.raises(ValueError):
        utils.load_series(str(empty))
