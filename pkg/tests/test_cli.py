import json
import os

import numpy as np
import pytest

from stabforge.cli import Config, main

R = 1 / np.sqrt(2)


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def jlines(out):
    return [json.loads(l) for l in out.splitlines() if l.strip()]


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


# -- subgroups -------------------------------------------------------------------


def test_subgroups_z2(capsys):
    code, out, _ = run(capsys, "subgroups", "Z2", "--format", "json")
    rows = jlines(out)
    assert code == 0 and len(rows) == 2
    assert [r["sym"] for r in rows] == [1, 2]
    assert [r["ch2"] for r in rows] == [1, 4]


def test_subgroups_z4_and_flag_forms(capsys):
    code, out, _ = run(capsys, "subgroups", "--group", "Z4", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 4
    code, out, _ = run(capsys, "--format", "json", "subgroups", "Z2x", "Z2")
    assert code == 0 and len(jlines(out)) == 5
    code, out, _ = run(capsys, "subgroups", "Z4")
    assert code == 0 and len(out.strip().splitlines()) == 4  # header + 3


@pytest.mark.parametrize("argv", [["subgroups", "Zx"], ["subgroups"], ["states", "Z2"], ["states", "count", "Q"],
                                  [], ["bogus"], ["wehrl", "min", "--group", "Z2", "--phi", "delta(0)"]])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


# -- states --------------------------------------------------------------------------


@pytest.mark.parametrize("spec,n", [("Z2", 6), ("Z3", 12), ("Z4", 28), ("Z2xZ2", 60)])
def test_states_count(capsys, spec, n):
    code, out, _ = run(capsys, "states", spec, "count")
    assert code == 0 and out.strip() == str(n)


def test_states_enumerate(capsys):
    code, out, _ = run(capsys, "states", "enumerate", "Z2")
    rows = jlines(out)
    assert code == 0 and len(rows) == 6
    keys = {json.dumps(r["moduli"], sort_keys=True) for r in rows}
    assert len(keys) == 6
    assert all(set(r) == {"moduli", "group", "wavefunction"} for r in rows)


def test_states_bound_exit_3(capsys):
    code, _, err = run(capsys, "states", "count", "Z2xZ2xZ2xZ2xZ2xZ2xZ2")
    assert code == 3 and "enumeration bound exceeded" in err
    code, _, _ = run(capsys, "states", "enumerate", "Z16", "--bound", "8")
    assert code == 3


# -- stab ------------------------------------------------------------------------------


def test_stab_to_group_plus(capsys, tmp_path):
    f = write(tmp_path, "plus.json", {"group": "Z2", "amplitudes": [[R, 0], [R, 0]]})
    code, out, _ = run(capsys, "stab", "to-group", f)
    obj = json.loads(out)
    assert code == 0
    assert sorted(map(tuple, obj["K"]["elements"])) == [("(0)", "(0)"), ("(1)", "(0)")]
    assert obj["alpha"] == [0, 0]


def test_stab_to_group_unnormalized_and_y_state(capsys, tmp_path):
    f = write(tmp_path, "y.json", {"group": "Z2", "amplitudes": [[3, 0], [0, -3]]})
    code, out, _ = run(capsys, "stab", "to-group", f)
    obj = json.loads(out)
    table = {tuple(z): a for z, a in zip(obj["K"]["elements"], obj["alpha"])}
    assert code == 0 and table == {("(0)", "(0)"): 0, ("(1)", "(1)"): 1}


def test_stab_to_state_minus_z(capsys, tmp_path):
    f = write(tmp_path, "g.json", {"group": "Z2", "K": {"elements": [["(0)", "(0)"], ["(0)", "(1)"]]}, "alpha": [0, 2]})
    code, out, _ = run(capsys, "stab", "to-state", f)
    obj = json.loads(out)
    assert code == 0
    assert obj["coset"] == {"y": "(1)", "H": ["(0)"]}
    assert obj["amplitudes"] == [[0.0, 0.0], [1.0, 0.0]]


def test_stab_not_a_stabilizer_state_exit_4(capsys, tmp_path):
    w = np.exp(1j * np.pi / 5)
    f = write(tmp_path, "bad.json", {"group": "Z2", "amplitudes": [[R, 0], [R * w.real, R * w.imag]]})
    code, _, err = run(capsys, "stab", "to-group", f)
    assert code == 4 and "not a stabilizer state" in err


@pytest.mark.parametrize("elements,alpha", [
    ([["(0)", "(0)"], ["(0)", "(1)"]], [1, 0]),  # alpha(0) != 1
    ([["(0)", "(0)"], ["(1)", "(0)"]], [0, 1]),  # breaks the cocycle law
    ([["(0)", "(0)"], ["(1)", "(0)"], ["(0)", "(1)"], ["(1)", "(1)"]], [0, 0, 0, 0]),  # not isotropic
    ([["(0)", "(0)"]], [0]),  # not maximal
])
def test_stab_invalid_group_exit_5(capsys, tmp_path, elements, alpha):
    f = write(tmp_path, "g.json", {"group": "Z2", "K": {"elements": elements}, "alpha": alpha})
    code, _, err = run(capsys, "stab", "to-state", f)
    assert code == 5 and err


def test_stab_missing_file_exit_2(capsys, tmp_path):
    code, _, _ = run(capsys, "stab", "to-group", str(tmp_path / "nope.json"))
    assert code == 2
    p = tmp_path / "junk.json"
    p.write_text("{not json")
    code, _, _ = run(capsys, "stab", "to-group", str(p))
    assert code == 2


def test_stab_round_trip_through_files(capsys, tmp_path):
    code, out, _ = run(capsys, "states", "enumerate", "Z2xZ2")
    for i, rec in enumerate(jlines(out)[::7]):
        f = write(tmp_path, f"g{i}.json", rec["group"])
        code, out2, _ = run(capsys, "stab", "to-state", f)
        assert code == 0
        f2 = write(tmp_path, f"s{i}.json", {"group": "Z2xZ2", "amplitudes": json.loads(out2)["amplitudes"]})
        code, out3, _ = run(capsys, "stab", "to-group", f2)
        back = json.loads(out3)
        assert code == 0 and back["alpha"] == rec["group"]["alpha"]
        assert back["K"]["elements"] == rec["group"]["K"]["elements"]


# -- wehrl ------------------------------------------------------------------------------------


def test_wehrl_min_witness(capsys):
    code, out, _ = run(capsys, "wehrl", "min", "--group", "Z2", "--phi", "delta(0)", "--rho", "delta(1)",
                       "-G", "-t*log(t)", "--format", "json")
    r = json.loads(out)
    assert code == 0 and r["equality"] and r["witness"]["z"] == ["(1)", "(0)"]


def test_wehrl_berezin_mixed(capsys):
    code, out, _ = run(capsys, "wehrl", "berezin", "--group", "Z3", "--phi", "uniform", "--rho", "mixed",
                       "--format", "json")
    r = json.loads(out)
    assert code == 0 and r["equality"] and abs(r["gap"]) < 1e-12


def test_wehrl_max_equality(capsys):
    code, out, _ = run(capsys, "wehrl", "max", "--group", "Z2", "--phi", "delta(0)", "--psi", "uniform",
                       "-G", "-t*log(t)", "-G", "t-t^2", "--format", "json")
    rs = jlines(out)
    assert code == 0 and len(rs) == 2
    assert all(r["equality"] and r["support_overlap"] == [["(0)", "(0)"]] for r in rs)


def test_wehrl_with_files(capsys, tmp_path):
    phi = write(tmp_path, "phi.json", {"group": "Z2", "amplitudes": [[1, 0], [0, 0]]})
    rho = write(tmp_path, "rho.json", {"group": "Z2", "matrix": [[[0.3, 0], [0, 0]], [[0, 0], [0.7, 0]]]})
    code, out, _ = run(capsys, "wehrl", "berezin", "--phi", phi, "--rho", rho, "--format", "json")
    r = json.loads(out)
    assert code == 0 and r["equality"] and [s["z"] for s in r["shifts"]] == [["(0)", "(0)"], ["(1)", "(0)"]]
    bad = write(tmp_path, "bad.json", {"group": "Z2", "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})
    code, _, _ = run(capsys, "wehrl", "berezin", "--phi", phi, "--rho", bad)
    assert code == 2


def test_wehrl_fourier(capsys):
    code, out, _ = run(capsys, "wehrl", "fourier", "--group", "Z2xZ2", "--phi", "uniform", "--rho", "delta(1,0)",
                       "--format", "json")
    r = json.loads(out)
    assert code == 0 and r["max_residual"] <= 1e-8 and r["zero_frequency"] == [1.0, 0.0]


def test_wehrl_bad_g_exit_2(capsys):
    code, _, err = run(capsys, "wehrl", "min", "--group", "Z2", "--phi", "uniform", "--rho", "mixed", "-G", "t^2")
    assert code == 2 and "G-spec" in err


def test_wehrl_sweep_csv(capsys):
    code, out, _ = run(capsys, "wehrl", "sweep", "Z2", "--samples", "3", "--format", "csv", "-G", "t-t^2")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "state-id,G-id,entropy,gap"
    assert len(lines) == 1 + 6 + 3
    for l in lines[1:7]:
        assert abs(float(l.split(",")[3])) < 1e-9
    for l in lines[7:]:
        assert float(l.split(",")[3]) > 1e-6


@pytest.mark.parametrize("argv", [
    ["states", "enumerate", "Z2xZ2"],
    ["wehrl", "sweep", "Z3", "--samples", "4", "--seed", "7", "--format", "json"],
    ["subgroups", "Z4xZ2", "--format", "json"],
    ["selftest", "Z2", "--format", "json"],
])
def test_json_output_byte_identical(capsys, argv):
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and a


def test_output_flag_writes_file(capsys, tmp_path):
    p = tmp_path / "out.txt"
    code, out, _ = run(capsys, "states", "count", "Z3", "--output", str(p))
    assert code == 0 and out == "" and p.read_text().strip() == "12"


# -- selftest ---------------------------------------------------------------------------------


def test_selftest_default_passes(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0
    assert out.strip().splitlines()[-1].startswith("PASS")
    assert "counting" in out


def test_selftest_skips_beyond_bound(capsys):
    code, out, _ = run(capsys, "selftest", "Z2xZ2xZ2xZ2xZ2xZ2xZ2", "--format", "json")
    rows = jlines(out)
    assert code == 0
    assert {r["suite"] for r in rows if r["status"] == "SKIP"} >= {"subgroups", "counting", "stabilizer"}


def test_selftest_failure_exit_1(capsys, monkeypatch):
    import stabforge.selftest as st

    def broken(A, rng, tol):
        raise AssertionError("planted")

    monkeypatch.setitem(st.SUITES, "pairing", broken)
    code, out, _ = run(capsys, "selftest", "Z2")
    assert code == 1 and "planted" in out


# -- config -------------------------------------------------------------------------------------


def test_config_validation(monkeypatch):
    with pytest.raises(Exception):
        Config(float_tolerance=0)
    with pytest.raises(Exception):
        Config(enumeration_bound=0)
    monkeypatch.setenv("STABFORGE_THREADS", "3")
    cfg = Config()
    assert cfg.threads == min(3, os.cpu_count() or 1)
    assert cfg.map(lambda x: x * x, range(10)) == [x * x for x in range(10)]
