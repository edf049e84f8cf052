import datetime as dt
import math

import numpy as np
import pytest

from ddfen import (InputError, align_and_clean, load_prices,
                   load_prices_text, log_returns)

BASIC = "date,A,B\n2020-01-01,1,2\n2020-01-02,2,4\n2020-01-03,4,8\n"


def test_load_prices_basic():
    panel = load_prices_text(BASIC)
    assert panel.codes == ["A", "B"]
    assert panel.n_dates == 3
    assert [d.isoformat() for d in panel.dates] == [
        "2020-01-01", "2020-01-02", "2020-01-03"]
    assert panel.prices.tolist() == [[1, 2], [2, 4], [4, 8]]


def test_load_prices_sorts_shuffled_rows():
    shuffled = ("date,A,B\n2020-01-03,4,8\n2020-01-01,1,2\n"
                "2020-01-02,2,4\n")
    assert load_prices_text(shuffled).prices.tolist() == \
        load_prices_text(BASIC).prices.tolist()


def test_load_prices_from_file(tmp_path):
    path = tmp_path / "panel.csv"
    path.write_text(BASIC)
    assert load_prices(path).n_assets == 2


def test_load_prices_missing_file():
    with pytest.raises(InputError, match="no/such/file"):
        load_prices("no/such/file.csv")


def test_load_prices_zero_price_names_cell():
    bad = "date,A,B\n2020-01-01,1,2\n2020-01-02,0,4\n"
    with pytest.raises(InputError, match="row 3.*'A'"):
        load_prices_text(bad)


def test_load_prices_negative_price():
    with pytest.raises(InputError, match="'B'"):
        load_prices_text("date,A,B\n2020-01-01,1,-2\n")


def test_load_prices_non_numeric_cell():
    with pytest.raises(InputError, match="non-numeric"):
        load_prices_text("date,A\n2020-01-01,abc\n")


def test_load_prices_bad_date():
    with pytest.raises(InputError, match="unparseable date"):
        load_prices_text("date,A\n01/02/2020,1\n")


def test_load_prices_duplicate_date():
    bad = "date,A\n2020-01-01,1\n2020-01-01,2\n"
    with pytest.raises(InputError, match="duplicate date"):
        load_prices_text(bad)


def test_load_prices_duplicate_code():
    with pytest.raises(InputError, match="duplicate asset column"):
        load_prices_text("date,A,A\n2020-01-01,1,2\n")


def test_load_prices_ragged_row():
    with pytest.raises(InputError, match="expected 3 cells"):
        load_prices_text("date,A,B\n2020-01-01,1\n")


def test_load_prices_requires_date_column():
    with pytest.raises(InputError, match="'date'"):
        load_prices_text("day,A\n2020-01-01,1\n")


def test_load_prices_no_rows():
    with pytest.raises(InputError, match="no data rows"):
        load_prices_text("date,A\n")


def test_missing_cells_become_nan():
    panel = load_prices_text("date,A,B\n2020-01-01,1,\n2020-01-02,2,4\n")
    assert math.isnan(panel.prices[0, 1])


def test_align_drop_row():
    panel = load_prices_text(
        "date,A,B\n2020-01-01,1,\n2020-01-02,2,4\n2020-01-03,3,6\n")
    cleaned = align_and_clean(panel, "drop-row")
    assert [d.isoformat() for d in cleaned.dates] == [
        "2020-01-02", "2020-01-03"]
    assert not np.isnan(cleaned.prices).any()


def test_align_forward_fill_uses_prior_value():
    panel = load_prices_text(
        "date,A,B\n2020-01-01,1,2\n2020-01-02,,4\n2020-01-03,3,6\n")
    filled = align_and_clean(panel, "forward-fill")
    assert filled.n_dates == 3
    assert filled.prices[1, 0] == 1.0


def test_align_forward_fill_drops_leading_gap():
    panel = load_prices_text(
        "date,A,B\n2020-01-01,,2\n2020-01-02,5,4\n")
    filled = align_and_clean(panel, "forward-fill")
    assert [d.isoformat() for d in filled.dates] == ["2020-01-02"]


def test_align_dense_panel_unchanged():
    panel = load_prices_text(BASIC)
    for policy in ("drop-row", "forward-fill"):
        out = align_and_clean(panel, policy)
        assert out.prices.tolist() == panel.prices.tolist()
        assert out.dates == panel.dates


def test_align_unknown_policy():
    with pytest.raises(InputError, match="unknown alignment policy"):
        align_and_clean(load_prices_text(BASIC), "interpolate")


def test_align_asset_with_zero_observations():
    panel = load_prices_text("date,A,B\n2020-01-01,1,\n2020-01-02,2,\n")
    with pytest.raises(InputError, match="'B'.*zero observations"):
        align_and_clean(panel, "drop-row")


def test_log_returns_ln_ratios():
    e = math.e
    text = f"date,A\n2020-01-01,1\n2020-01-02,{e!r}\n2020-01-03,{e * e!r}\n"
    rets = log_returns(load_prices_text(text))
    assert rets.returns[:, 0] == pytest.approx([1.0, 1.0], abs=1e-12)


def test_log_returns_constant_column():
    rets = log_returns(load_prices_text(
        "date,A\n2020-01-01,5\n2020-01-02,5\n2020-01-03,5\n"))
    assert rets.returns[:, 0].tolist() == [0.0, 0.0]


def test_log_returns_single_pair():
    rets = log_returns(load_prices_text("date,A\n2020-01-01,2\n2020-01-02,4\n"))
    assert rets.returns[0, 0] == pytest.approx(math.log(2), abs=1e-15)


def test_log_returns_row_count():
    rets = log_returns(load_prices_text(BASIC))
    assert rets.n_dates == 2
    assert rets.dates[0].isoformat() == "2020-01-02"


def test_log_returns_rejects_missing_cells():
    panel = load_prices_text("date,A\n2020-01-01,\n2020-01-02,2\n")
    with pytest.raises(InputError, match="align_and_clean"):
        log_returns(panel)


def test_log_returns_needs_two_dates():
    with pytest.raises(InputError, match="two dates"):
        log_returns(load_prices_text("date,A\n2020-01-01,3\n"))


def test_price_roundtrip_property():
    # exponentiating cumulative returns from the first price recovers the
    # panel within 1e-12 relative, across random panels
    rng = np.random.default_rng(20240817)
    for _ in range(20):
        n, k = int(rng.integers(3, 40)), int(rng.integers(1, 5))
        prices = np.exp(rng.normal(0, 0.5, (n, k)))
        lines = ["date," + ",".join(f"C{j}" for j in range(k))]
        start = dt.date(2020, 1, 1)
        for t in range(n):
            cells = ",".join(repr(float(v)) for v in prices[t])
            lines.append(f"{start + dt.timedelta(days=t)},{cells}")
        panel = load_prices_text("\n".join(lines) + "\n")
        rets = log_returns(panel)
        rebuilt = panel.prices[0] * np.exp(np.cumsum(rets.returns, axis=0))
        assert np.allclose(rebuilt, panel.prices[1:], rtol=1e-12, atol=0)


def test_column_lookup():
    rets = log_returns(load_prices_text(BASIC))
    assert rets.column("B").shape == (2,)
    with pytest.raises(InputError, match="unknown asset code"):
        rets.column("Z")
