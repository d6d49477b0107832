import json

import pytest

from emrcache.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_compare_reports_the_headline_numbers(capsys):
    code, out, _ = _run(capsys, "compare", "--scenario", "paper", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    schemes = payload["schemes"]
    assert schemes["edge_dvs"]["best_minutes"] == pytest.approx(9.872, abs=0.01)
    assert schemes["edge_dvs"]["worst_minutes"] == pytest.approx(26.855, abs=0.02)
    assert schemes["femtocache"]["best_minutes"] == pytest.approx(16.59, abs=0.05)
    assert schemes["femtocache"]["worst_minutes"] == pytest.approx(139.652, abs=0.05)
    assert schemes["baseline"]["best_minutes"] == pytest.approx(145.73, abs=0.05)
    assert schemes["baseline"]["worst_minutes"] == pytest.approx(247.467, abs=0.01)
    pcts = {(r["reference_scheme"], r["case"]): r["pct"] for r in payload["improvements"]}
    assert pcts[("femtocache", "best")] == pytest.approx(40.5, abs=0.1)
    assert pcts[("femtocache", "worst")] == pytest.approx(80.77, abs=0.05)
    assert pcts[("baseline", "best")] == pytest.approx(93.23, abs=0.05)
    assert pcts[("baseline", "worst")] == pytest.approx(89.15, abs=0.05)
    for row in payload["improvements"]:
        recomputed = (row["reference_minutes"] - row["new_minutes"]) / row["reference_minutes"]
        assert row["pct"] == pytest.approx(recomputed * 100.0)


def test_compare_table_contains_improvements(capsys):
    code, out, _ = _run(capsys, "compare", "--scenario", "paper")
    assert code == 0
    assert "93.23" in out
    assert "89.15" in out
    assert "247.467" in out


def test_allocate_paper_mode_prints_fixture_rows(capsys):
    code, out, _ = _run(capsys, "allocate", "--mode", "paper")
    assert code == 0
    assert "EA" in out and "text+image " in out
    assert "106.660" in out
    assert "diverges" not in out


def test_allocate_omission_reports_divergence(capsys):
    code, out, _ = _run(capsys, "allocate", "--mode", "omission")
    assert code == 0
    assert "ED diverges from the published allocation" in out
    assert "text+video" in out


def test_share_totals(capsys):
    code, out, _ = _run(capsys, "share")
    assert code == 0
    assert "total patients: 147" in out
    code, out, _ = _run(capsys, "share", "--count-hosts")
    assert "total counting unshared hosts: 150" in out


def test_sweep_emits_csv_series(capsys):
    code, out, _ = _run(capsys, "sweep", "--min-gb", "499", "--max-gb", "501")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "capacity_gb,patients"
    assert "500,132" in lines


def test_dvs_size_reports_both_volumes(capsys):
    code, out, _ = _run(capsys, "dvs-size")
    assert code == 0
    assert "2764800000" in out
    assert "100000000" in out


def test_calibrate_default_observations(capsys):
    code, out, _ = _run(capsys, "calibrate", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["edge_rate"] == pytest.approx(0.146484, rel=1e-3)
    assert payload["macro_rate"] == pytest.approx(0.01953125, rel=1e-3)
    assert payload["reproduced"]["edge_dvs"]["best_minutes"] == pytest.approx(9.872, abs=0.01)


def test_delay_monte_carlo_is_seeded(capsys):
    args = ("delay", "--scheme", "edge", "--monte-carlo", "--samples", "50000",
            "--seed", "11", "--case", "best", "--format", "json")
    code, first, _ = _run(capsys, *args)
    assert code == 0
    code, second, _ = _run(capsys, *args)
    assert first == second
    payload = json.loads(first)
    mc = payload["monte_carlo"]["best"]
    assert abs(mc["minutes"] - payload["report"]["best_minutes"]) <= 3 * mc["std_error"]
    assert payload["poisson_partial_sums"]["home"] == pytest.approx(1.0)


def test_monte_carlo_rejected_for_baseline(capsys):
    code, _, err = _run(capsys, "delay", "--scheme", "baseline", "--monte-carlo")
    assert code == 2
    assert "plan-based" in err


def test_identical_invocations_are_byte_identical(capsys):
    code, first, _ = _run(capsys, "report", "--format", "json")
    assert code == 0
    code, second, _ = _run(capsys, "report", "--format", "json")
    assert first == second


def test_out_writes_json_and_csv(tmp_path, capsys):
    out_dir = tmp_path / "artifacts"
    code, _, err = _run(capsys, "compare", "--out", str(out_dir), "--format", "json")
    assert code == 0
    assert (out_dir / "compare.json").exists()
    assert (out_dir / "compare.csv").exists()
    assert (out_dir / "improvements.csv").exists()
    rows = (out_dir / "compare.csv").read_text().strip().splitlines()
    assert rows[0] == "scheme,case,minutes"
    assert len(rows) == 7


def test_exit_code_2_for_invalid_scenario(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"locations": [{"name": "a", "dwell_hours": 5}],
                                "devices": [{"id": "d", "capacity_gb": 1, "location": "a"}]}))
    code, _, err = _run(capsys, "compare", "--scenario", str(path))
    assert code == 2
    assert "dwell_hours sum" in err


def test_exit_code_3_for_missing_scenario(capsys):
    code, _, err = _run(capsys, "compare", "--scenario", "/does/not/exist.json")
    assert code == 3


def test_unknown_flags_exit_2():
    with pytest.raises(SystemExit) as err:
        main(["compare", "--nope"])
    assert err.value.code == 2


def test_report_to_directory(tmp_path, capsys):
    out_dir = tmp_path / "report"
    code, out, err = _run(capsys, "report", "--out", str(out_dir))
    assert code == 0
    for name in ("report.json", "allocation.csv", "compare.csv",
                 "improvements.csv", "sharing.csv"):
        assert (out_dir / name).exists()
    payload = json.loads((out_dir / "report.json").read_text())
    assert payload["sharing"]["total"] == 147
    assert len(payload["digest"]) == 64
