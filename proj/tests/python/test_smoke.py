import json
from fractions import Fraction

import pytest

vl = pytest.importorskip("vinolab")


def test_mean_value_example():
    assert vl.mean_value([1, 2], 2, 1, 5) == 45
    assert vl.vinogradov_mean_value(2, 2, 5) == 45


def test_big_counts_are_exact_ints():
    j = vl.vinogradov_mean_value(2, 7, 32)
    assert isinstance(j, int)
    assert j > 2**40


def test_spec_count_matches_brute_force():
    spec = {
        "exponent_set": [1, 2],
        "blocks": [
            {"count": 2, "interval": {"start": -2, "length": 6}, "distinct_mod": 1},
            {"count": 2, "interval": {"start": 0, "length": 5}, "sign": -1, "residue": {"modulus": 2, "class": 1}},
        ],
        "target": [1, -3],
    }
    assert vl.constrained_count(spec) == vl.brute_force_count(json.dumps(spec))


def test_dft_oracle():
    for X in range(1, 5):
        assert vl.dft_mean_value([1, 2], 2, X) == vl.mean_value([1, 2], 2, 1, X)


def test_weyl_sum_trivial_phase():
    assert vl.weyl_sum([0.0, 0.0], 9, [1, 2]) == pytest.approx(9)


def test_congruence_bound():
    r = vl.congruence_max(5, 2)
    assert r == {"max_card": 10, "bound": 10, "pass": True}
    assert vl.congruence_max(5, 2, distinct=True)["max_card"] <= 2


def test_singular_constants():
    assert vl.singular_series(7, 2, 1) == 1.0
    assert vl.singular_integral(1, 1, 1000)["value"] == pytest.approx(1, abs=1e-3)


def test_waring():
    assert vl.waring_count(4, 2, 4) == 1
    assert vl.waring_main_term(2, 1, 10, 1) == pytest.approx(10)


def test_multigrade():
    w = vl.multigrade_search(2, 2, 3, 7)
    assert w is not None and len(w["tuples"]) == 2
    assert vl.multigrade_search(2, 2, 2, 10) is None


def test_bounds():
    assert vl.theorem_table(7)["G_tilde"] == 109
    e = vl.permissible_exponent(10, 4)
    assert e["eta"] == Fraction(10, 3)


def test_config_and_errors():
    fmt, text, failures = vl.run_config({"command": "count", "E": [1, 2], "s": 2, "X": 5})
    assert fmt == "csv" and text.splitlines()[-1].endswith(",45") and failures == []
    with pytest.raises(vl.ConfigInvalid):
        vl.run_config({"command": "nope"})
    with pytest.raises(vl.BudgetExceeded):
        vl.vinogradov_mean_value(3, 6, 400, budget_bytes=1024)
    with pytest.raises(vl.Error):
        vl.mean_value([], 1, 1, 1)


def test_quick_verify():
    assert all(e["pass"] for e in vl.verify("quick"))
