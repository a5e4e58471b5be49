import json
import math

import pytest

from cylcasimir import cli
from cylcasimir.cli import OutputRecord, main, records_from_csv, records_to_csv

FAST = ["--m-max", "40", "--tail-threshold", "1e9"]  # cheap and always "converged"


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_compute_both_gives_two_records(capsys):
    code, out = run(capsys, ["compute", "--material", "gold"] + FAST)
    assert code == 0
    recs = json.loads(out)
    assert [r["bc"] for r in recs] == ["dirichlet", "neumann"]
    for r in recs:
        assert set(r) == set(cli.RECORD_FIELDS)
        assert r["force_coeff"] == pytest.approx(
            -r["sigma"] / (2 * math.pi if r["bc"] == "dirichlet" else math.pi), rel=1e-14)
    assert recs[0]["force_coeff"] > 0 > recs[1]["force_coeff"]


def test_compute_single_bc_object(capsys):
    code, out = run(capsys, ["compute", "--omega-p", "1e15", "--bc", "neumann"] + FAST)
    assert code == 0
    rec = json.loads(out)
    assert rec["bc"] == "neumann" and rec["material"] == "custom"


def test_tiny_plasma_frequency_gives_negligible_force(capsys):
    code, out = run(capsys, ["compute", "--omega-p", "1e3", "--m-max", "20"])
    assert code in (0, 3)
    for r in json.loads(out):
        assert r["x_cutoff"] < 1e-9
        assert abs(r["force_coeff"]) < 1e-6


@pytest.mark.parametrize("argv", [
    ["compute", "--material", "unobtainium"],
    ["compute"],
    ["compute", "--material", "gold", "--omega-p", "1e15"],
    ["compute", "--material", "gold", "--radius", "-1"],
    ["compute", "--material", "gold", "--bc", "sum"],
    ["sweep", "--material", "gold", "--radius-range", "1:2"],
])
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_nonconvergence_exits_3(capsys):
    code, out = run(capsys, ["compute", "--material", "gold", "--bc", "dirichlet",
                             "--m-max", "5", "--tail-threshold", "1e-12"])
    assert code == 3
    assert json.loads(out)["converged"] is False


def test_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        main(["compute", "--help"])
    text = capsys.readouterr().out
    for token in ("1e-7", "1000", "1e-9", "1e-6", "codata"):
        assert token in text


def test_sweep_radius_monotone_and_includes_endpoint(capsys):
    code, out = run(capsys, ["sweep", "--material", "gold", "--bc", "neumann",
                             "--radius-range", "1e-8:1e-7:4"] + FAST)
    assert code == 0
    recs = [json.loads(line) for line in out.splitlines()]
    xs = [r["x_cutoff"] for r in recs]
    assert len(recs) == 4 and xs == sorted(xs)
    assert recs[-1]["a_meters"] == pytest.approx(1e-7, rel=1e-12)
    assert all(r["force_coeff"] < 0 for r in recs)


def test_single_point_sweep_matches_compute(capsys):
    _, out_c = run(capsys, ["compute", "--material", "silver", "--bc", "dirichlet"] + FAST)
    _, out_s = run(capsys, ["sweep", "--material", "silver", "--bc", "dirichlet",
                            "--radius-range", "1e-7:1e-7:1"] + FAST)
    assert json.loads(out_s.strip()) == json.loads(out_c)


def test_sweep_omega_p_range(capsys):
    code, out = run(capsys, ["sweep", "--omega-p-range", "1e14:1e16:3", "--bc", "dirichlet"]
                    + FAST)
    recs = [json.loads(line) for line in out.splitlines()]
    assert [r["omega_p"] for r in recs] == pytest.approx([1e14, 1e15, 1e16])


def test_sweep_workers_match_serial(capsys):
    base = ["sweep", "--material", "gold", "--bc", "dirichlet",
            "--radius-range", "2e-8:5e-8:2"] + FAST
    _, serial = run(capsys, base)
    _, parallel = run(capsys, base + ["--workers", "2"])
    assert serial == parallel


def test_convergence_columns_and_running_total(capsys):
    code, out = run(capsys, ["convergence", "--material", "gold", "--bc", "neumann",
                             "--format", "csv", "--m-max", "30", "--tail-threshold", "0"])
    assert code == 3  # threshold 0 never reports convergence
    lines = out.splitlines()
    assert lines[0] == ",".join(cli.CONVERGENCE_FIELDS)
    rows = [dict(zip(cli.CONVERGENCE_FIELDS, ln.split(","))) for ln in lines[1:]]
    fam_a = [r for r in rows if r["family"] == "neumann_a"]
    assert len(fam_a) == 31
    b0 = next(r for r in rows if r["family"] == "neumann_b" and r["m"] == "0")
    assert float(b0["running_total"]) == float(b0["contribution"])
    last = fam_a[-1]
    assert float(last["running_total"]) == pytest.approx(
        float(fam_a[0]["contribution"]) + 2 * float(last["order_sum"]), rel=1e-15)


def test_csv_round_trip(capsys):
    _, out = run(capsys, ["compute", "--material", "gold", "--format", "csv"] + FAST)
    recs = records_from_csv(out)
    assert len(recs) == 2 and all(isinstance(r, OutputRecord) for r in recs)
    assert records_to_csv(recs) == out


def test_human_format(capsys):
    code, out = run(capsys, ["compute", "--material", "gold", "--format", "human"] + FAST)
    assert out.splitlines()[0].split()[:3] == ["bc", "material", "a_meters"]


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nmaterial = silver\nbc = neumann\nm-max = 10\n"
                   "tail_threshold = 1e9\nradius = 2e-7\n")
    _, out = run(capsys, ["compute", "--config", str(cfg)])
    rec = json.loads(out)
    assert (rec["material"], rec["bc"], rec["a_meters"]) == ("silver", "neumann", 2e-7)
    _, out = run(capsys, ["compute", "--config", str(cfg), "--radius", "1e-7",
                          "--material", "gold"])
    rec = json.loads(out)
    assert (rec["material"], rec["a_meters"]) == ("gold", 1e-7)


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--config", str(cfg)])
    assert exc.value.code == 2


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path))
    code = main(["compute", "--material", "gold", "--bc", "dirichlet", "--output", "r.json"]
                + FAST)
    assert code == 0
    assert capsys.readouterr().out == ""
    assert json.loads((tmp_path / "r.json").read_text())["bc"] == "dirichlet"


def test_materials_command(capsys):
    code, out = run(capsys, ["materials"])
    assert code == 0
    assert {m["name"]: m["omega_p"] for m in json.loads(out)} == {
        "gold": 1.37e16, "silver": 9.65e14}
    _, out = run(capsys, ["materials", "--format", "csv"])
    assert out.splitlines()[0] == "name,omega_p"


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "cylcasimir", "materials", "--format", "human"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "gold" in proc.stdout
