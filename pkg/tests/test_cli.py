"""Command-line interface, driven through main(argv)."""

import json
import math

import numpy as np
import pytest

from infconv.cli import main
from infconv.extremal import inf_conv
from infconv.grid import FunctionSpec, GridDomain, sample
from infconv.orlicz import YoungFunction, luxemburg_norm


QUAD = '{"kind": "quadratic", "c": 1}'
ABS = '{"kind": "abs"}'
TRI = '{"kind": "triangle"}'


def test_conv_matches_library(capsys):
    rc = main(["conv", "--op", "inf_conv", "--f", QUAD, "--g", ABS,
               "--n", "65"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 65
    dom = GridDomain(1, 4.0, 65)
    ref = inf_conv(sample(FunctionSpec.quadratic(1.0), dom),
                   sample(FunctionSpec.abs_norm(), dom))
    got = np.array([float(s) for s in lines])
    assert np.allclose(got, ref.values, rtol=0, atol=1e-11)


def test_conv_json_format(capsys):
    rc = main(["conv", "--op", "sup_min", "--f", TRI, "--g", TRI,
               "--n", "33", "--format", "json"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n"] == 33 and payload["dim"] == 1
    assert len(payload["values"]) == 33


def test_conv_rejects_unknown_op():
    with pytest.raises(SystemExit):
        main(["conv", "--op", "nope", "--f", TRI, "--g", TRI])


def test_transform_profile_and_values(capsys, tmp_path):
    rc = main(["transform", "--f", TRI, "--n", "129"])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "t,gamma"
    assert len(lines) > 10
    out = tmp_path / "vals.csv"
    rc = main(["transform", "--f", TRI, "--n", "129", "--values",
               "--out", str(out)])
    assert rc == 0
    vals = out.read_text().strip().splitlines()
    assert len(vals) == 129


def test_norm_prints_single_number(capsys):
    rc = main(["norm", "--f", TRI, "--phi", '{"kind": "power", "p": 2}',
               "--n", "257"])
    assert rc == 0
    got = float(capsys.readouterr().out.strip())
    dom = GridDomain(1, 4.0, 257)
    ref = luxemburg_norm(sample(FunctionSpec.triangle(), dom),
                         YoungFunction.power(2.0))
    assert math.isclose(got, ref, rel_tol=1e-10)


def test_hj_solpoints_and_sign_warning(capsys):
    rc = main(["hj", "--solver", "hopf_lax",
               "--hamiltonian", '{"kind": "quadratic_half"}',
               "--g", ABS, "--t", "1.0", "--n", "65"])
    assert rc == 0
    out, err = capsys.readouterr()
    assert len(out.strip().splitlines()) == 65
    assert err == ""
    # negative data floor violates the sign condition but still solves
    rc = main(["hj", "--solver", "hopf_lax",
               "--hamiltonian", '{"kind": "quadratic_half"}',
               "--g", '{"kind": "quadratic", "c": 1, "offset": -0.5}',
               "--t", "1.0", "--n", "65"])
    assert rc == 0
    out, err = capsys.readouterr()
    assert "sign condition violated" in err


def test_sweep_writes_report_files(capsys, tmp_path):
    base = tmp_path / "runq"
    rc = main(["sweep", "--preset", "quadratic",
               "--t-values", "4,8,16,32", "--out", str(base)])
    assert rc == 0
    out = capsys.readouterr().out
    assert out.startswith("slope ")
    assert "[ok]" in out
    csv_lines = (tmp_path / "runq.csv").read_text().strip().splitlines()
    assert csv_lines[0] == "t,half_width,n,norm,sign_value"
    assert len(csv_lines) == 5
    payload = json.loads((tmp_path / "runq.json").read_text())
    assert payload["within_tol"] is True
    assert abs(payload["slope"] - 0.25) < 0.05


def test_verify_small_campaign(capsys, tmp_path):
    out = tmp_path / "summary.json"
    rc = main(["verify", "--ids", "L4_Eq12,T7_Eq19", "--trials", "2",
               "--dim", "1", "--n", "129", "--out", str(out)])
    assert rc == 0
    err = capsys.readouterr().err
    assert "failures 0" in err
    payload = json.loads(out.read_text())
    assert payload["failures"] == 0
    assert payload["exit_code"] == 0
    assert len(payload["rows"]) == 4


def test_verify_unknown_id_exits_2(capsys):
    rc = main(["verify", "--ids", "bogus"])
    assert rc == 2
    assert "unknown inequality id" in capsys.readouterr().err


def test_selftest_command(capsys):
    rc = main(["selftest"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["ok"] is True
    assert payload["sharp"]["lhs"] == 2.0
