import json
from pathlib import Path

import pytest

from rigidmc.cli import main
from rigidmc.serialize import dump_json, load_json, tuple_to_json
from rigidmc.convolution import middle_convolution, rank_one_tuple, twist

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "rigidmc" / "fixtures"


def _write_seed_tuple(path):
    t = twist(
        middle_convolution(rank_one_tuple(("0", "1"), {"0": "-1", "1": "-1"}), "-1"),
        {"0": "-1"},
    )
    dump_json(tuple_to_json(t), path)
    return t


def test_jordan_pipeline(tmp_path, capsys):
    seed = tmp_path / "g.json"
    _write_seed_tuple(seed)
    assert main(["jordan", "--in", str(seed), "--order", "2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["rank"] == 2
    assert out["punctures"] == ["inf", "0", "1"]


def test_pipe_composition(tmp_path):
    seed = tmp_path / "g.json"
    _write_seed_tuple(seed)
    sym = tmp_path / "sym.json"
    assert main(["sym2", "--in", str(seed), "--out", str(sym)]) == 0
    mc = tmp_path / "mc.json"
    assert main(["mc", "--lambda", "-1", "--in", str(sym), "--out", str(mc)]) == 0
    data = load_json(mc)
    assert data["rank"] == 4
    tw = tmp_path / "tw.json"
    assert main(["twist", "--scalars", '{"0": "-1"}', "--in", str(mc),
                 "--out", str(tw)]) == 0
    proj = tmp_path / "so5.json"
    assert main(["project", "--map", "sp4_so5", "--in", str(tw),
                 "--out", str(proj)]) == 0
    assert load_json(proj)["rank"] == 5


def test_rigidity_subcommand(capsys):
    code = main(["rigidity", "--in", str(FIXTURES / "profile_dwork_sl4.json"),
                 "--group", "GL4", "--assume-irreducible"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"group": "GL4", "chi": 2, "threshold": 2,
                   "rigid": True, "conditional": False}


def test_rigidity_so8(capsys):
    code = main(["rigidity", "--in", str(FIXTURES / "profile_so7_spin8.json"),
                 "--group", "SO8"])
    assert code == 0
    out = json.loads(capsys.readouterr().out)
    assert out["chi"] == -4 and out["rigid"] is False


def test_trivial_character_exit_code(tmp_path, capsys):
    seed = tmp_path / "g.json"
    _write_seed_tuple(seed)
    assert main(["mc", "--lambda", "1", "--in", str(seed)]) == 3


def test_schema_error_exit_code(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rank": 1}')
    assert main(["jordan", "--in", str(bad), "--order", "2"]) == 2


def test_missing_file_exit_code(tmp_path):
    assert main(["jordan", "--in", str(tmp_path / "nope.json"), "--order", "2"]) == 2


def test_realize_reduce_replay_cycle(tmp_path, capsys):
    plan_path = tmp_path / "plan.json"
    out_path = tmp_path / "tuple.json"
    assert main(["reduce", "--in", str(FIXTURES / "profile_g.json"),
                 "--plan", str(plan_path), "--out", str(tmp_path / "r.json")]) == 0
    assert main(["replay", "--plan", str(plan_path), "--out", str(out_path)]) == 0
    assert main(["jordan", "--in", str(out_path), "--order", "2",
                 "--out", str(tmp_path / "prof.json")]) == 0
    prof = load_json(tmp_path / "prof.json")
    assert prof == load_json(FIXTURES / "profile_g.json")


def test_realize_subcommand(tmp_path):
    out_path = tmp_path / "tuple.json"
    assert main(["realize", "--in", str(FIXTURES / "profile_g.json"),
                 "--out", str(out_path)]) == 0
    assert load_json(out_path)["rank"] == 2


def test_conjugate_subcommand(tmp_path, capsys):
    a = tmp_path / "a.json"
    t = _write_seed_tuple(a)
    b = tmp_path / "b.json"
    dump_json(tuple_to_json(twist(t, {"0": "zeta(3)"})), b)
    assert main(["conjugate", "--a", str(a), "--b", str(a)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["conjugate"] is True
    assert main(["conjugate", "--a", str(a), "--b", str(b)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out == {"conjugate": False, "witness": None}


def test_spin_subcommand(tmp_path, capsys):
    path = tmp_path / "class.json"
    dump_json({"group": "SO5", "class": [{"eigenvalue": "1", "size": 5}]}, path)
    assert main(["spin", "--group", "SO5", "--in", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["candidates"][0] == [{"eigenvalue": "1", "size": 4}]
    assert out["candidates"][1] == [{"eigenvalue": "-1", "size": 4}]


def test_spin_group_conflict(tmp_path):
    path = tmp_path / "class.json"
    dump_json({"group": "SO5", "class": [{"eigenvalue": "1", "size": 5}]}, path)
    assert main(["spin", "--group", "SO7", "--in", str(path)]) == 2


def test_verify_paper_so7(capsys):
    assert main(["verify-paper", "--case", "so7"]) == 0
    out = capsys.readouterr().out
    assert "case so7: PASS" in out


def test_verify_paper_json_output(capsys):
    assert main(["verify-paper", "--case", "so7", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["ok"] is True


def test_verify_paper_fixtures_override(tmp_path):
    assert main(["verify-paper", "--case", "so7",
                 "--fixtures-dir", str(FIXTURES)]) == 0
    assert main(["verify-paper", "--case", "so7",
                 "--fixtures-dir", str(tmp_path / "missing")]) == 2
