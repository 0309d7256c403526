import copy
import json
from fractions import Fraction

import pytest

from balancing_proof.prover import (
    STAGES,
    EquationSolution,
    ProverConfig,
    SearchRange,
    case_n1,
    erratum_audit,
    final_grid,
    grid_value,
    hp_from_record,
    hp_record,
    legendre_stage,
    parse_config,
    prove,
    sequence_sanity,
    small_n_search,
    smooth_scan,
    strip_timing,
    verify_certificate,
)
from balancing_proof.numerics import PrecisionPolicy, constant


@pytest.fixture(scope="module")
def certificate():
    return prove(ProverConfig())


def test_case_n1():
    # 6^2 - 1 = 35 = B_3, and nothing else up to m = 23
    assert case_n1(23) == [(3, 2)]
    assert case_n1(401) == [(3, 2)]
    with pytest.raises(ValueError):
        case_n1(0)


def test_smooth_scan():
    assert smooth_scan(12) == [1, 2]


def test_erratum_offset():
    rec = erratum_audit(60)
    assert rec["offset"] == 1 and rec["discrepancy"] and rec["family_check"]


def test_search_finds_quadratic_family():
    hits = small_n_search(SearchRange(2, 6, 2, 6))
    assert EquationSolution(5, 2, 2) in hits
    assert all(h.x == 2 and h.m == 2 * h.n + 1 for h in hits)
    assert len(hits) == 5
    assert all(h.holds() for h in hits)


def test_search_range():
    rng = SearchRange(2, 4, 3, 10, {2: 5, 3: 50})
    assert rng.x_top(2) == 5 and rng.x_top(3) == 10 and rng.x_top(4) == 10
    assert rng.cells() == 3 + 8 + 8
    with pytest.raises(ValueError):
        SearchRange(5, 4, 3, 10)
    with pytest.raises(ValueError):
        SearchRange(0, 4, 3, 10)


def test_grid_value_oracle():
    # frozen from Python's decimal module at 80 digits
    cases = [
        ((3, 3, "minus"), "0.83755928716462801369498600903202195920374999569"),
        ((60, 58, "minus"), "0.000126953615765398563700157758151"),
    ]
    for args, ref in cases:
        v = grid_value(*args, 100)
        tol = Fraction(1, 10 ** (len(ref) - 3))
        assert v.lower_fraction() - tol <= Fraction(ref) <= v.upper_fraction() + tol


def test_final_grid_small():
    best, all_pass, stats = final_grid(10, PrecisionPolicy(200, 800))
    assert stats["cells"] == 2 * sum(x - max(1, int(0.9 * x - 1.4)) + 1 for x in range(3, 11))
    assert stats["contains_zero"] == 0
    assert best.value.positive()


def test_legendre_stage():
    rec = legendre_stage()
    assert rec["verdict"] == "pass"
    assert rec["k_star"] == 52 and rec["a_max"] == 234
    assert rec["q_kstar"] == "82407653902664835498111652994"
    assert rec["conclusion"] == "x <= 100"


def test_sequence_sanity_records_stated_bound():
    rec = sequence_sanity(200)
    assert rec["verdict"] == "pass"
    assert rec["stated_upper_bound"]["holds"] is False
    assert rec["stated_upper_bound"]["failing_n"] == [[2, 300]]


def test_hp_record_round_trip():
    x = constant("log_alpha", 200)
    lo, hi = hp_from_record(hp_record(x))
    assert lo <= x.lower_fraction() and x.upper_fraction() <= hi
    assert hi - lo < Fraction(1, 10**27)


def test_certificate_passes(certificate):
    assert certificate["verdict"] == "pass"
    assert list(certificate["stages"]) == list(STAGES)
    assert certificate["schema_version"] == "1.0"
    json.dumps(certificate)


def test_certificate_contents(certificate):
    st = certificate["stages"]
    assert st["reduction_table"]["max_x_cap"] == 76
    assert st["small_search"]["hits"] == [] and st["small_search"]["cells"] == 1506
    assert st["final_grid"]["n_bound_from_min"] == 5
    assert st["final_grid"]["argmin"] == {"x": 60, "t": 58, "sign_variant": "minus"}
    assert certificate["solutions"]["quadratic_family"] == "(m, n, x) = (2n+1, n, 2)"


def test_deterministic(certificate):
    again = prove(ProverConfig())
    assert json.dumps(strip_timing(again), sort_keys=True) == json.dumps(
        strip_timing(certificate), sort_keys=True
    )


def test_verify_certificate(certificate):
    result = verify_certificate(json.loads(json.dumps(certificate)))
    assert set(result) == set(STAGES)
    assert all(result.values())


def test_verify_detects_tampering(certificate):
    cert = copy.deepcopy(certificate)
    cert["stages"]["legendre"]["a_max"] = 233
    cert["stages"]["reduction_table"]["rows"][0]["k_bound"] += 1
    cert["stages"]["erratum_audit"]["offset"] = 2
    result = verify_certificate(cert)
    assert not result["legendre"]
    assert not result["reduction_table"]
    assert not result["erratum_audit"]


def test_parse_config():
    cfg = parse_config("# comment\nM = 4e16\nmax_digits: 1600\n\nn_hi = 20  # trailing\n")
    assert cfg.M == 4 * 10**16 and cfg.max_digits == 1600 and cfg.n_hi == 20
    with pytest.raises(ValueError):
        parse_config("bogus = 1")
    with pytest.raises(ValueError):
        parse_config("M = 1.5")
    with pytest.raises(ValueError):
        parse_config("no separator here")


def test_control_config_finds_family():
    cfg = parse_config("n_hi = 6\nx_lo = 2\nx_hi = 2\n")
    cert = prove(cfg)
    ss = cert["stages"]["small_search"]
    assert [2, 2] == [ss["range"]["x_lo"], ss["range"]["x_hi"]]
    assert [5, 2, 2] in ss["hits"]
    assert ss["known_family_hits"] == 5 and ss["unexpected"] == []
    assert ss["verdict"] == "pass"


def test_low_precision_fails_cleanly():
    with pytest.warns(RuntimeWarning):
        cert = prove(ProverConfig(initial_digits=50, max_digits=60))
    assert cert["verdict"] == "fail"
    failed = [k for k, v in cert["stages"].items() if v["verdict"] == "fail"]
    assert failed == ["reduction_table"]
    assert any("error" in row for row in cert["stages"]["reduction_table"]["rows"])
    json.dumps(cert)
