"""Command line front end: exit codes, payload shapes, manifest replay."""

import json
import math
import os

import numpy as np
import pytest

from bohrgap.bohr import BohrSpec, enumerate_bohr, restricted_bohr
from bohrgap.cli import _jsonable, main
from bohrgap.counting import totient_average
from fractions import Fraction as Q


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def payload_of(out: str) -> dict:
    i = out.find("{")
    assert i >= 0, out
    return json.loads(out[i:])


# -- documented examples ------------------------------------------------------


def test_t42_example(capsys):
    code, out, _ = run_cli(
        capsys, "sums", "t", "--k", "2", "--alpha", "rat:1/3", "--gamma", "rat:1/2",
        "--N", "9", "--no-restrict",
    )
    assert code == 0
    assert "T(9) = 42" in out
    d = payload_of(out)
    assert d["rows"][0]["T"] == 42.0


def test_gap_inner_example(capsys):
    code, out, _ = run_cli(
        capsys, "gap", "inner", "--k", "2", "--alpha", "sqrt:2",
        "--N", "100000", "--delta", "0.1", "--eps", "0.05",
    )
    assert code == 0
    d = payload_of(out)
    assert d["b"] == 2547
    assert d["moduli"] == [408, 985]
    assert d["checks"]["containment"] is True
    assert "basis" in out  # human-readable trace precedes the payload


def test_inner_delta_validation_exit2(capsys):
    code, out, err = run_cli(
        capsys, "gap", "inner", "--alpha", "sqrt:2", "--N", "100000", "--delta", "1.5",
    )
    assert code == 2
    assert "delta <= 1" in err and "inner window" in err


def test_construction_failure_is_data(capsys):
    code, out, _ = run_cli(
        capsys, "gap", "inner", "--alpha", "rat:1/2", "--N", "100000", "--delta", "0.1",
    )
    assert code == 0
    d = payload_of(out)
    assert d["status"] == "failed"
    assert d["error_path"] == "LengthUnderflow"


def test_budget_exit3(capsys):
    code, _, err = run_cli(
        capsys, "sums", "t", "--alpha", "sqrt:2", "--N", str(3 * 10**7), "--no-restrict",
    )
    assert code == 3
    assert "budget" in err.lower()


# -- payload correctness against the library -------------------------------------


def test_bohr_enumerate_matches_library(capsys):
    code, out, _ = run_cli(
        capsys, "bohr", "enumerate", "--alpha", "sqrt:2", "--N", "1000", "--delta", "0.1",
    )
    assert code == 0
    d = payload_of(out)
    spec = BohrSpec.build(["sqrt:2"], None, 1000, ["0.1"])
    bset = enumerate_bohr(spec, "symmetric")
    assert d["cardinality"] == bset.cardinality
    assert d["members"] == [int(n) for n in bset.members]
    assert not d["members_omitted"]


def test_bohr_lift(capsys):
    code, out, _ = run_cli(
        capsys, "bohr", "lift", "--alpha", "sqrt:2", "--N", "1000", "--delta", "0.1",
        "--n", "169",
    )
    assert code == 0
    d = payload_of(out)
    assert d["member"] is True
    assert d["lifts"] == [[169, 239]]


def test_minima_payload(capsys):
    code, out, _ = run_cli(
        capsys, "minima", "--alpha", "sqrt:2", "--N", "100000", "--delta", "0.1",
    )
    assert code == 0
    d = payload_of(out)
    assert d["vol_s"] == "1/25"
    assert d["minima"]["basis"] == [[408, 577], [985, 1393]]


def test_gap_verify_both_forms(capsys):
    code, out, _ = run_cli(
        capsys, "gap", "verify", "--alpha", "sqrt:2", "--N", "100000", "--delta", "0.1",
        "--form", "inner",
    )
    assert code == 0
    d = payload_of(out)
    assert d["containment"]["violations"] == 0
    assert d["proper"]["proper"] is True
    assert "verify inner: ok" in out

    code, out, _ = run_cli(
        capsys, "gap", "verify", "--alpha", "sqrt:2", "--N", "10000", "--delta", "0.3",
        "--form", "outer", "--limit", "300",
    )
    assert code == 0
    d = payload_of(out)
    assert d["containment"] == {"checked": 300, "violations": 0}
    assert "verify outer: ok" in out


def test_count_davenport_csv(capsys, tmp_path):
    out_dir = tmp_path / "dav"
    code, out, _ = run_cli(
        capsys, "count", "davenport", "--box", "2,2", "--moduli", "1,1", "--p", "2",
        "--out", str(out_dir),
    )
    assert code == 0
    csv = (out_dir / "table.csv").read_text()
    assert csv.splitlines()[0] == "box,count,main_term,discrepancy,bound,realized_ratio"
    assert csv.splitlines()[1].startswith("2x2,13,8,5,")
    d = json.loads((out_dir / "payload.json").read_text())
    assert d["count"] == 13


def test_count_totient_decimal(capsys):
    code, out, _ = run_cli(
        capsys, "count", "totient", "--alpha", "sqrt:2", "--N", "10000", "--delta", "0.5",
    )
    assert code == 0
    d = payload_of(out)
    spec = BohrSpec.build(["sqrt:2"], None, 10**4, ["0.5"], Q(1, 20))
    avg = totient_average([int(n) for n in restricted_bohr(spec).members])
    assert d["cardinality"] == 9993
    assert d["sum_phi_over_n"]["num_mod_m61"] == avg.numerator % ((1 << 61) - 1)
    assert d["sum_phi_over_n"]["den_mod_m61"] == avg.denominator % ((1 << 61) - 1)
    assert abs(d["sum_phi_over_n"]["float"] - float(avg)) < 1e-9
    assert d["sum_phi_over_n"]["decimal"].startswith("6074.72699279532")


def test_count_alphap(capsys):
    code, out, _ = run_cli(
        capsys, "count", "alphap", "--alpha", "sqrt:2", "--N", "100000", "--delta", "0.1",
        "--pmax", "20",
    )
    assert code == 0
    d = payload_of(out)
    ps = [r["p"] for r in d["rows"]]
    assert ps == [2, 3, 5, 7, 11, 13, 17, 19]
    assert all(r["excess"] <= 0 for r in d["rows"])


def test_sums_dyadic_sandwich(capsys):
    code, out, _ = run_cli(
        capsys, "sums", "dyadic", "--alpha", "sqrt:2", "--N", "10000",
    )
    assert code == 0
    d = payload_of(out)
    assert d["sandwich_holds"] is True
    assert d["restricted"] is True
    assert "sandwich:" in out


def test_sums_dscheck(capsys):
    code, out, _ = run_cli(
        capsys, "sums", "dscheck", "--alpha", "sqrt:2", "--alpha", "sqrt:3",
        "--N", "10000", "--checkpoints", "1000,10000",
    )
    assert code == 0
    d = payload_of(out)
    assert d["all_L_le_U"] is True
    assert [r["N"] for r in d["rows"]] == [1000, 10000]


def test_exponents_rational_infinite_witness(capsys):
    code, out, _ = run_cli(
        capsys, "exponents", "--alpha", "rat:1/3", "--n-max", "1000", "--h-max", "50",
        "--x-list", "100,1000",
    )
    assert code == 0
    d = payload_of(out)
    assert d["omega_lower"]["value"] is None  # witnesses, never numbers
    assert d["omega_lower"]["infinite_witness"] == 3
    assert d["omega_star_lower"]["infinite_witness"] == [3]


def test_experiment_gallagher_deterministic(capsys):
    args = (
        "experiment", "gallagher", "--alpha", "sqrt:2", "--N", "2000",
        "--samples", "3", "--seed", "1",
    )
    code, out1, _ = run_cli(capsys, *args)
    assert code == 0
    code, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    d = payload_of(out1)
    assert d["params"]["seed"] == 1
    assert len(d["rows"]) == 3


# -- manifests, configs, replay -----------------------------------------------------


def test_manifest_rerun_byte_identical(capsys, tmp_path):
    d1, d2 = str(tmp_path / "a"), str(tmp_path / "b")
    code, _, _ = run_cli(
        capsys, "sums", "t", "--alpha", "sqrt:2", "--alpha", "sqrt:3",
        "--N", "10000", "--checkpoints", "1000,10000", "--out", d1,
    )
    assert code == 0
    code, _, _ = run_cli(capsys, "rerun", os.path.join(d1, "manifest.json"), "--out", d2)
    assert code == 0
    for name in ("payload.json", "table.csv"):
        a = open(os.path.join(d1, name), "rb").read()
        b = open(os.path.join(d2, name), "rb").read()
        assert a == b, name
    m1 = json.loads(open(os.path.join(d1, "manifest.json")).read())
    m2 = json.loads(open(os.path.join(d2, "manifest.json")).read())
    assert m1["config"] == m2["config"] and m1["version"] == m2["version"]


def test_manifest_rerun_inhomogeneous(capsys, tmp_path):
    d1, d2 = str(tmp_path / "a"), str(tmp_path / "b")
    code, _, _ = run_cli(
        capsys, "bohr", "enumerate", "--alpha", "sqrt:2", "--alpha", "sqrt:3",
        "--gamma", "dec:0.3", "--gamma", "dec:0.7", "--N", "500",
        "--delta", "0.2", "--delta", "0.4", "--out", d1,
    )
    assert code == 0
    code, _, _ = run_cli(capsys, "rerun", os.path.join(d1, "manifest.json"), "--out", d2)
    assert code == 0
    a = open(os.path.join(d1, "payload.json"), "rb").read()
    assert a == open(os.path.join(d2, "payload.json"), "rb").read()
    cfg = json.loads(open(os.path.join(d1, "manifest.json")).read())["config"]
    assert cfg["gamma"] == ["dec:0.3", "dec:0.7"]
    assert cfg["delta"] == ["0.2", "0.4"]


def test_config_file_defaults_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpha = sqrt:2\nN = 1000\ndelta = 0.1\n# comment\nmode = positive\n")
    code, out, _ = run_cli(capsys, "bohr", "enumerate", "--config", str(cfg))
    assert code == 0
    assert "mode positive" in out
    # explicit flag beats the config value
    code, out, _ = run_cli(
        capsys, "bohr", "enumerate", "--config", str(cfg), "--mode", "symmetric",
    )
    assert code == 0
    assert "mode symmetric" in out


def test_k_mismatch_validation(capsys):
    code, _, err = run_cli(
        capsys, "sums", "t", "--k", "3", "--alpha", "sqrt:2", "--N", "100",
    )
    assert code == 2
    assert "k = 3" in err


def test_jsonable_encoding():
    enc = _jsonable(
        {"f": Q(1, 3), "inf": math.inf, "ninf": -math.inf, "nan": math.nan,
         "np": np.int64(7), "t": (1, 2), "ok": 1.5}
    )
    assert enc == {"f": "1/3", "inf": "inf", "ninf": "-inf", "nan": "nan",
                   "np": 7, "t": [1, 2], "ok": 1.5}
