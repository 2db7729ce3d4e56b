"""Config parsing, suite execution, CSV output, and the command line."""

import csv

import numpy as np
import pytest

import waveslab.experiments as experiments
from waveslab.cli import main
from waveslab.experiments import (
    COLUMNS,
    Config,
    ConfigError,
    ExperimentResult,
    emit_csv,
    parse_config,
    run_from_file,
    run_suite,
)


def test_defaults_fill_in():
    cfg = parse_config({"suite": "tau_refine", "case": "case1", "tau_list": [0.2]})
    assert cfg.suite == "tau_refine" and cfg.case == "case1"
    assert cfg.T == 1.0 and cfg.h == 0.4
    assert cfg.p_x == 2 and cfg.p_t == 2
    assert cfg.theta == 0.5 and cfg.include_osc is False
    assert cfg.alpha == 1.75 and cfg.max_iters == 25
    assert cfg.eta_tol == 0.0 and cfg.initial_n == 5
    assert cfg.out == "results.csv" and cfg.seed is None
    with pytest.raises(AttributeError):
        cfg.not_a_key


def test_all_problems_reported_at_once():
    with pytest.raises(ConfigError) as info:
        parse_config({
            "suite": "bogus",
            "case": "case2",
            "p_t": 1,
            "alpha": 1.2,
            "tau": 0.3,
            "mystery": 17,
        })
    text = str(info.value)
    assert len(info.value.problems) >= 5
    for fragment in ("unknown key 'mystery'", "suite must be", "p_t", "alpha", "tau"):
        assert fragment in text, fragment


def test_step_divisibility_allows_decimal_roundings():
    # 0.0909 is the usual rounding of 1/11 and must pass; 0.07 must not
    ok = parse_config({
        "suite": "tau_refine", "case": "case1", "tau_list": [0.2, 0.0909],
    })
    assert ok.tau_list == [0.2, 0.0909]
    with pytest.raises(ConfigError, match="tau_list entry must divide"):
        parse_config({"suite": "tau_refine", "case": "case1", "tau_list": [0.07]})
    with pytest.raises(ConfigError, match="h must divide"):
        parse_config({
            "suite": "tau_refine", "case": "case1", "tau_list": [0.2], "h": 0.3,
        })


def test_suite_specific_requirements():
    with pytest.raises(ConfigError, match="requires key 'p_t_list'"):
        parse_config({"suite": "p_refine", "case": "case1", "tau": 0.2})
    with pytest.raises(ConfigError, match="meant for case3"):
        parse_config({
            "suite": "spacetime_refine", "case": "case2", "tau_list": [0.2],
        })
    with pytest.raises(ConfigError, match="p_t <="):
        parse_config({
            "suite": "spacetime_refine", "case": "case3", "tau_list": [0.2],
            "p_t": 5,
        })
    with pytest.raises(ConfigError, match="tau 0.5 must divide T=1.2"):
        parse_config({
            "suite": "long_time", "case": "case3", "T_list": [1.0, 1.2], "tau": 0.5,
        })


def test_parse_accepts_mapping_string_and_file(tmp_path):
    text = "suite: tau_refine\ncase: case1\ntau_list: [0.5]\nseed: 7\n"
    path = tmp_path / "study.yaml"
    path.write_text(text)
    from_text = parse_config(text)
    from_file = parse_config(path)
    assert from_text.values == from_file.values
    assert from_file.seed == 7
    with pytest.raises(ConfigError, match="flat mapping"):
        parse_config("- 1\n- 2\n")


def _tiny_tau_config():
    return parse_config({
        "suite": "tau_refine", "case": "case1",
        "h": 1.0, "tau_list": [0.5, 0.25],
    })


def test_tau_refine_rows():
    result = run_suite(_tiny_tau_config())
    assert result.columns == COLUMNS
    assert [row["level"] for row in result.rows] == [0, 1]
    assert [row["N"] for row in result.rows] == [2, 4]
    # 2x2 bi-quadratic grid has 9 interior unknowns
    assert [row["dofs"] for row in result.rows] == [2 * 2 * 9, 4 * 2 * 9]
    for row in result.rows:
        assert set(COLUMNS) <= set(row)
        assert row["eta"] > 0 and row["kappa"] > 0
        assert row["kappa"] == row["eta"] / row["Linf_L2"]
    assert result.rows[1]["Linf_L2"] < result.rows[0]["Linf_L2"]


def test_fixed_config_is_deterministic_up_to_wall_time():
    first = run_suite(_tiny_tau_config())
    second = run_suite(_tiny_tau_config())
    for a, b in zip(first.rows, second.rows):
        for key in COLUMNS:
            if key != "wall_time":
                assert a[key] == b[key], key


def test_remaining_suites_produce_sane_rows():
    prow = run_suite(parse_config({
        "suite": "p_refine", "case": "case1", "h": 1.0,
        "tau": 0.5, "p_t_list": [2, 3],
    })).rows
    assert [r["p_t"] for r in prow] == [2, 3]
    assert prow[1]["Linf_L2"] < prow[0]["Linf_L2"]

    strow = run_suite(parse_config({
        "suite": "spacetime_refine", "case": "case3", "tau_list": [0.5], "p_t": 2,
    })).rows
    assert strow[0]["p_x"] == 3 and strow[0]["h"] == 0.5

    ltrow = run_suite(parse_config({
        "suite": "long_time", "case": "case3", "h": 0.5,
        "T_list": [1.0, 2.0], "tau": 0.5,
    })).rows
    assert [r["N"] for r in ltrow] == [2, 4]
    assert ltrow[1]["jump"] > ltrow[0]["jump"]

    efrow = run_suite(parse_config({
        "suite": "effectivity", "case": "case1", "h": 1.0,
        "tau_list": [0.5, 0.25], "p_t_list": [2, 3],
    })).rows
    assert [r["level"] for r in efrow] == [0, 1, 2, 3]
    assert [(r["p_t"], r["tau"]) for r in efrow] == [
        (2, 0.5), (2, 0.25), (3, 0.5), (3, 0.25),
    ]

    adrow = run_suite(parse_config({
        "suite": "adaptive", "case": "case2", "h": 0.5,
        "initial_n": 3, "max_iters": 3,
    })).rows
    assert len(adrow) == 3
    assert adrow[-1]["N"] > adrow[0]["N"]
    assert adrow[-1]["tau"] < adrow[0]["tau"]


def test_csv_round_trip(tmp_path):
    result = run_suite(_tiny_tau_config())
    path = emit_csv(result, tmp_path / "out.csv")
    with open(path, newline="") as handle:
        reader = list(csv.reader(handle))
    assert reader[0] == list(COLUMNS)
    assert len(reader) == 3
    for row, parsed in zip(result.rows, reader[1:]):
        for key, cell in zip(COLUMNS, parsed):
            if key in ("level", "p_x", "p_t", "N", "dofs"):
                assert int(cell) == row[key]
            else:
                assert abs(float(cell) - row[key]) <= 1e-12 * max(1.0, abs(row[key]))


def test_csv_header_only_for_empty_rows(tmp_path):
    empty = ExperimentResult(columns=COLUMNS, rows=[], config=None)
    path = emit_csv(empty, tmp_path / "empty.csv")
    assert path.read_text().strip() == ",".join(COLUMNS)


def _write_config(tmp_path, text):
    path = tmp_path / "study.yaml"
    path.write_text(text)
    return path


def test_cli_success(tmp_path, capsys):
    cfg = _write_config(
        tmp_path,
        "suite: tau_refine\ncase: case1\nh: 1.0\ntau_list: [0.5]\n",
    )
    out = tmp_path / "rows.csv"
    assert main(["run", str(cfg), "--out", str(out)]) == 0
    assert out.exists()
    assert str(out) in capsys.readouterr().out


def test_cli_honors_config_out_key(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    cfg = _write_config(
        tmp_path,
        "suite: tau_refine\ncase: case1\nh: 1.0\ntau_list: [0.5]\nout: here.csv\n",
    )
    assert main(["run", str(cfg)]) == 0
    assert (tmp_path / "here.csv").exists()


def test_cli_config_problems_exit_1(tmp_path, capsys):
    cfg = _write_config(tmp_path, "suite: tau_refine\ncase: case1\n")
    assert main(["run", str(cfg)]) == 1
    assert "config error" in capsys.readouterr().err
    # suite override introduces the problem; file itself is fine otherwise
    good = _write_config(tmp_path, "suite: tau_refine\ncase: case1\ntau_list: [0.5]\n")
    assert main(["run", str(good), "--suite", "p_refine",
                 "--out", str(tmp_path / "x.csv")]) == 1
    assert main(["run", str(tmp_path / "missing.yaml")]) == 1
    assert main(["frobnicate"]) == 1


def test_cli_runtime_failure_exits_2(tmp_path, capsys, monkeypatch):
    cfg = _write_config(
        tmp_path,
        "suite: tau_refine\ncase: case1\nh: 1.0\ntau_list: [0.5]\n",
    )

    def boom(*args, **kwargs):
        raise RuntimeError("solver blew up")

    monkeypatch.setattr(experiments, "run_from_file", boom)
    assert main(["run", str(cfg)]) == 2
    assert "run failed" in capsys.readouterr().err


def test_run_from_file_overrides(tmp_path):
    cfg = _write_config(
        tmp_path,
        "suite: tau_refine\ncase: case1\nh: 1.0\ntau_list: [0.5]\n",
    )
    out = run_from_file(cfg, out=tmp_path / "a.csv", seed=11)
    assert out == tmp_path / "a.csv" and out.exists()
