import json
import os
from pathlib import Path

import pytest

from ergolab.cli import main
from ergolab.scenarios import list_kinds, parse_config
from ergolab.errors import ParseError, SchemaError


DEMO = {
    "suite": "demo",
    "scenarios": [
        {
            "id": "conv",
            "kind": "convolution_entropy",
            "parameters": {
                "alphabet": {"family": "cyclic", "n": 2},
                "left": {"kind": "bernoulli", "marginal": ["3/4", "1/4"]},
                "right": {"kind": "bernoulli", "marginal": ["3/4", "1/4"]},
                "L_max": 5,
                "expected": 0.6615632381579821,
            },
            "seed": 7,
            "tolerances": {"value": 1e-9},
        },
        {
            "id": "ext",
            "kind": "natural_extension",
            "parameters": {
                "alphabet": {"family": "cyclic", "n": 2},
                "measure": {
                    "kind": "markov",
                    "transition": [["2/3", "1/3"], ["1/3", "2/3"]],
                },
                "L": 5,
            },
        },
        {
            "id": "addition",
            "kind": "entropy_addition",
            "parameters": {
                "alphabet": {"family": "cyclic", "n": 2},
                "base": {"kind": "bernoulli", "marginal": ["3/4", "1/4"]},
                "fiber": {"family": "cyclic", "n": 2},
                "phi": "first_symbol",
                "L": 3,
            },
        },
        {
            "id": "product",
            "kind": "product_entropy",
            "parameters": {
                "left_alphabet": {"family": "cyclic", "n": 2},
                "left": {"kind": "bernoulli", "marginal": ["3/4", "1/4"]},
                "right_alphabet": {"family": "cyclic", "n": 2},
                "right": "haar",
                "L": 4,
            },
        },
        {
            "id": "circle-atomic",
            "kind": "circle",
            "parameters": {"k": 2, "measure": {"periodic_atomic": "1/3"}, "L": 4},
        },
        {
            "id": "ergo-control",
            "kind": "convolution_ergodicity",
            "parameters": {
                "alphabet": {"family": "cyclic", "n": 2},
                "left": {"kind": "bernoulli", "marginal": ["3/4", "1/4"]},
                "right": {
                    "kind": "mixture",
                    "components": [
                        ["1/2", {"kind": "bernoulli", "marginal": ["3/4", "1/4"]}],
                        ["1/2", {"kind": "bernoulli", "marginal": ["1/4", "3/4"]}],
                    ],
                },
                "certificate": {"kind": "declared", "justification": "control"},
                "steps": 10000,
                "seed_count": 2,
                "expect_rejection": True,
            },
        },
    ],
}


def write_demo(tmp_path: Path, doc=None) -> Path:
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps(doc if doc is not None else DEMO))
    return cfg


def test_run_demo_config_passes(tmp_path):
    cfg = write_demo(tmp_path)
    out = tmp_path / "report.csv"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "scenario_id,quantity,value,lower,upper,tolerance,pass"
    assert all(line.endswith(",true") for line in lines[1:])
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["suite_verdict"] == "pass"
    assert {s["kind"] for s in meta["scenarios"]} == {
        "convolution_entropy",
        "natural_extension",
        "entropy_addition",
        "product_entropy",
        "circle",
        "convolution_ergodicity",
    }
    # every scenario carries a theorem traceability tag
    assert all(s["theorem"] for s in meta["scenarios"])
    # plot data for the h_L curve
    plot = out.with_name("report.conv.h_L.csv")
    assert plot.exists()
    assert plot.read_text().splitlines()[0] == "L,h_L"


def test_reports_byte_identical_for_same_config_and_seed(tmp_path):
    cfg = write_demo(tmp_path)
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["run", str(cfg), "--out", str(out1)]) == 0
    assert main(["run", str(cfg), "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert (
        out1.with_name("a.conv.h_L.csv").read_bytes()
        == out2.with_name("b.conv.h_L.csv").read_bytes()
    )


def test_reports_identical_under_thread_pool(tmp_path):
    cfg = write_demo(tmp_path)
    out1, out2 = tmp_path / "st.csv", tmp_path / "mt.csv"
    assert main(["run", str(cfg), "--out", str(out1)]) == 0
    os.environ["ERGOLAB_THREADS"] = "4"
    try:
        assert main(["run", str(cfg), "--out", str(out2)]) == 0
    finally:
        del os.environ["ERGOLAB_THREADS"]
    assert out1.read_bytes() == out2.read_bytes()


def test_row_failure_gives_exit_1(tmp_path):
    doc = json.loads(json.dumps(DEMO))
    doc["scenarios"] = [doc["scenarios"][0]]
    doc["scenarios"][0]["parameters"]["expected"] = 0.9  # deliberately wrong
    cfg = write_demo(tmp_path, doc)
    out = tmp_path / "report.csv"
    assert main(["run", str(cfg), "--out", str(out)]) == 1
    assert any(line.endswith(",false") for line in out.read_text().splitlines()[1:])


def test_malformed_json_gives_exit_2(tmp_path):
    cfg = tmp_path / "broken.json"
    cfg.write_text('{"scenarios": [')
    assert main(["run", str(cfg), "--out", str(tmp_path / "r.csv")]) == 2


def test_schema_error_names_the_field(tmp_path):
    doc = {"scenarios": [{"id": "x", "kind": "circle", "parameters": {"k": 2, "L": 3}}]}
    with pytest.raises(SchemaError, match=r"scenarios\[x\].parameters"):
        parse_config(json.dumps(doc))
    cfg = write_demo(tmp_path, doc)
    assert main(["run", str(cfg), "--out", str(tmp_path / "r.csv")]) == 2


def test_duplicate_ids_rejected():
    doc = {
        "scenarios": [
            {"id": "same", "kind": "independence",
             "parameters": {"group": {"family": "cyclic", "n": 2}, "measure": "haar",
                            "expect_independent": True}},
            {"id": "same", "kind": "independence",
             "parameters": {"group": {"family": "cyclic", "n": 2}, "measure": "haar",
                            "expect_independent": True}},
        ]
    }
    with pytest.raises(SchemaError, match="duplicate"):
        parse_config(json.dumps(doc))


def test_probabilities_must_be_rational_strings():
    doc = {
        "scenarios": [
            {
                "id": "f",
                "kind": "convolution_entropy",
                "parameters": {
                    "alphabet": {"family": "cyclic", "n": 2},
                    "left": {"kind": "bernoulli", "marginal": [0.75, 0.25]},
                    "right": "haar",
                    "L_max": 3,
                },
            }
        ]
    }
    with pytest.raises(SchemaError, match="rational strings"):
        parse_config(json.dumps(doc))


def test_list_output_stable_and_complete():
    text = list_kinds()
    assert "convolution_ergodicity" in text
    assert "entropy_addition" in text and "parameters:" in text
    assert text == list_kinds()


def test_bogus_verify_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "bogus"])
    assert exc.value.code == 2


def test_seed_override(tmp_path):
    doc = {
        "scenarios": [
            {
                "id": "c",
                "kind": "circle",
                "parameters": {"k": 2, "measure": "lebesgue", "L": 5,
                               "symbols": 200000, "seed_count": 1},
                "seed": 3,
                "tolerances": {"value": 0.05},
            }
        ]
    }
    cfg = write_demo(tmp_path, doc)
    out1, out2, out3 = (tmp_path / n for n in ("s1.csv", "s2.csv", "s3.csv"))
    assert main(["run", str(cfg), "--out", str(out1)]) == 0
    assert main(["run", str(cfg), "--out", str(out2), "--seed", "9"]) == 0
    assert main(["run", str(cfg), "--out", str(out3), "--seed", "9"]) == 0
    assert out2.read_bytes() == out3.read_bytes()
    assert out1.read_bytes() != out2.read_bytes()  # different sample paths
