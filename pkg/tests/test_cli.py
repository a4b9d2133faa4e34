import io
import json

import pytest

from qmt_hopper.cli import main


def run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    code, _ = run(["fixtures", "--out-dir", str(d)])
    assert code == 0
    return d


def test_fixture_dump_lists_all(workdir):
    code, out = run(["fixtures"])
    assert code == 0
    payload = json.loads(out)
    assert set(payload["events"]) == {"A", "B", "C", "E"}
    assert payload["schema"] == "qmt-hopper/1"


def test_measure_null_fixture(workdir):
    code, out = run(
        ["measure", "--event", str(workdir / "event_A.json"), "--state", str(workdir / "state_E.json")]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["is_zero"] is True
    assert payload["fixture"] == "A"
    assert payload["mu_numeric"] == 0.0


def test_measure_c_with_its_state(workdir):
    code, out = run(
        ["measure", "--event", str(workdir / "event_C.json"), "--state", str(workdir / "state_C.json")]
    )
    payload = json.loads(out)
    assert code == 0 and payload["is_zero"] is True


def test_null_check_universal(workdir):
    code, out = run(["null-check", "--event", str(workdir / "event_B.json")])
    assert code == 0
    payload = json.loads(out)
    assert payload["null"] is True and payload["universal"] is True


def test_null_check_with_state_reports_measure(workdir, tmp_path):
    st = tmp_path / "uniform5.json"
    st.write_text(json.dumps({"mode": "exact", "z": [1] * 5, "q": [0] * 5}))
    code, out = run(
        ["null-check", "--event", str(workdir / "event_B.json"), "--state", str(st)]
    )
    payload = json.loads(out)
    assert code == 0 and payload["null"] is True
    assert payload["mu_numeric"] == 0.0
    assert payload["mode"] == "exact"
    assert len(payload["per_final_site"]) == 5


def test_exit_code_model_mismatch(workdir):
    code, _ = run(
        ["measure", "--event", str(workdir / "event_B.json"), "--state", str(workdir / "state_E.json")]
    )
    assert code == 3


def test_coevents_cli_quantum(workdir):
    code, out = run(
        ["coevents", "--n", "2", "--t-max", "1", "--state", str(workdir / "state_E.json")]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["minimal_supports"] == [[[0, 0]], [[0, 1]]]


def test_full_event_measures_to_one(workdir, tmp_path):
    ev = {"n": 2, "t": 0, "paths": [[0], [1]]}
    st = {"mode": "float", "re": [0.6, 0.8], "im": [0.0, 0.0]}
    evp, stp = tmp_path / "ev.json", tmp_path / "st.json"
    evp.write_text(json.dumps(ev))
    stp.write_text(json.dumps(st))
    code, out = run(["measure", "--event", str(evp), "--state", str(stp)])
    payload = json.loads(out)
    assert code == 0
    assert abs(payload["mu_numeric"] - 1.0) < 1e-12


def test_stymie_verify_loop(workdir, tmp_path):
    cert_path = tmp_path / "cert.json"
    code, out = run(
        ["stymie", "--event", str(workdir / "event_A.json"), "--out", str(cert_path)]
    )
    assert code == 0
    code, out = run(["verify", "--certificate", str(cert_path)])
    assert code == 0 and json.loads(out)["verified"] is True

    blob = json.loads(cert_path.read_text())
    blob["required"][0][0][0] = str(int(blob["required"][0][0][0]) + 1)
    bad_path = tmp_path / "bad.json"
    bad_path.write_text(json.dumps(blob))
    code, out = run(["verify", "--certificate", str(bad_path)])
    assert code == 1 and json.loads(out)["verified"] is False


def test_stymie_initial_cli(workdir, tmp_path):
    ev = {"n": 3, "t": 1, "paths": [[1, j] for j in range(3)] + [[2, j] for j in range(3)] + [[0, 0]]}
    st = {"mode": "exact", "z": [1, 1, 1], "q": [0, 0, 0]}
    evp, stp = tmp_path / "ev.json", tmp_path / "st.json"
    evp.write_text(json.dumps(ev))
    stp.write_text(json.dumps(st))
    cert_path = tmp_path / "cert.json"
    code, _ = run(
        ["stymie-initial", "--event", str(evp), "--state", str(stp), "--i-check", "0", "--out", str(cert_path)]
    )
    assert code == 0
    code, out = run(["verify", "--certificate", str(cert_path)])
    assert code == 0 and json.loads(out)["verified"] is True


def test_exit_code_parse_error(tmp_path):
    bad = tmp_path / "nope.json"
    code, _ = run(["measure", "--event", str(bad), "--state", str(bad)])
    assert code == 2
    bad.write_text("{not json")
    code, _ = run(["measure", "--event", str(bad), "--state", str(bad)])
    assert code == 2


def test_exit_code_precondition(workdir, tmp_path):
    omega = tmp_path / "omega.json"
    omega.write_text(json.dumps({"n": 2, "t": 0, "paths": [[0], [1]]}))
    code, _ = run(["stymie", "--event", str(omega)])
    assert code == 3


def test_exit_code_limits(tmp_path):
    # the phase imbalance here needs m = 2, so m_max = 1 must bail out
    paths = [[0, a, b, c] for a in range(2) for b in range(2) for c in range(2)]
    paths.remove([0, 0, 0, 0])
    evp = tmp_path / "ev.json"
    evp.write_text(json.dumps({"n": 2, "t": 3, "paths": paths}))
    code, _ = run(["--m-max", "1", "stymie", "--event", str(evp)])
    assert code == 4


def test_coevents_cli_classical(tmp_path):
    wpath = tmp_path / "w.json"
    wpath.write_text(json.dumps([0, 0, 0, 2, 0, 1, 0, 0]))
    code, out = run(["coevents", "--n", "2", "--t-max", "2", "--weights", str(wpath)])
    assert code == 0
    payload = json.loads(out)
    assert payload["minimal_supports"] == [[[0, 1, 1]], [[1, 0, 1]]]


def test_stymied_cli(workdir, tmp_path):
    evp = tmp_path / "c001.json"
    evp.write_text(json.dumps({"n": 2, "t": 2, "paths": [[0, 0, 1]]}))
    code, out = run(
        ["stymied", "--event", str(evp), "--n", "2", "--t-max", "3", "--state", str(workdir / "state_E.json")]
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["stymied"] is True
    assert len(payload["witness_paths"]) >= 2


def test_spectrum_outputs(workdir):
    code, out = run(["spectrum", "--n", "5"])
    payload = json.loads(out)
    assert code == 0
    assert payload["periodicity"]["verified"] is True
    assert abs(payload["eigenvalues"][0]["re"] - 1) < 1e-12
    code, out = run(["--output", "csv", "spectrum", "--n", "2"])
    assert code == 0
    assert len(out.strip().splitlines()) == 2


def test_output_is_deterministic(workdir):
    a = run(["spectrum", "--n", "3"])
    b = run(["spectrum", "--n", "3"])
    assert a == b
    a = run(["--seed", "7", "stymie", "--event", str(workdir / "event_A.json")])
    b = run(["--seed", "7", "stymie", "--event", str(workdir / "event_A.json")])
    assert a == b


def test_event_json_roundtrip_through_cli(workdir, tmp_path):
    raw = {"n": 2, "t": 2, "paths": [[0, 0, 0], [0, 0, 1], [0, 1, 0], [0, 1, 1]]}
    evp = tmp_path / "ev.json"
    evp.write_text(json.dumps(raw))
    code, out = run(["null-check", "--event", str(evp)])
    assert code == 0  # loads canonically as the one-path cylinder of site 0
