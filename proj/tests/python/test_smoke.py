import json
import math

import pytest

tempres = pytest.importorskip("tempres")


def test_qfi_constant():
    assert tempres.qfi() == pytest.approx(0.25)
    assert tempres.qfi(2.0) == pytest.approx(1 / 16)


def test_channel_fi_sums_to_qfi():
    for gamma in (0.0, 0.25, 0.5):
        fs, fa = tempres.channel_fi(0.3, gamma)
        assert fs + fa == pytest.approx(0.25, rel=1e-6)
    fs, fa = tempres.channel_fi_analytic(2.0)
    assert fs == pytest.approx(0.125)


def test_projection_probs_closed_form():
    s, a = tempres.projection_probs(1.0)
    assert a[1] == pytest.approx(math.exp(-1 / 16) / 16)
    assert s[1] == 0.0


def test_fisher_report_keys():
    r = tempres.fisher_report(0.1, 0.5)
    assert r["fi_int_incoh"] < 0.0025
    assert r["crb_per_event"] == pytest.approx(4.0)


def test_simulate_deterministic():
    cfg = json.dumps({"repetitions": 3, "gammas": [0.0]})
    assert tempres.simulate(cfg) == tempres.simulate(cfg)
    assert len(tempres.simulate(cfg)) == 7 * 3


def test_analyze_nonnegative():
    out = tempres.analyze(json.dumps({"repetitions": 10, "calibration_repetitions": 100, "gammas": [0.0]}))
    assert len(out["stats"]) == 7
    assert all(e[3] >= 0 for e in out["estimates"])


def test_bad_config_raises():
    with pytest.raises(ValueError):
        tempres.analyze('{"bogus": 1}')


def test_cli_exit_codes(tmp_path):
    code, _, _ = tempres.run_cli(["fisher", "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "fisher_report.csv").read_text().startswith("tau,gamma,fi_s")
    code, _, err = tempres.run_cli(["reproduce", "fig7"])
    assert code == 2 and "fig7" in err
