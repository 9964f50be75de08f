import json

from rigidmc.corpus import render_report, run_all, run_case, run_dwork, run_so7, run_so7bis


def test_so7_report():
    report = run_so7()
    assert report["ok"]
    by_id = {c["id"]: c for c in report["checks"]}
    assert by_id["b-so8-centralizers"]["actual"] == {"inf": 4, "0": 4, "1": 16}
    assert by_id["c-not-so8-rigid"]["actual"]["chi"] == -4


def test_so7_deterministic():
    a = json.dumps(run_so7(), sort_keys=True)
    b = json.dumps(run_so7(), sort_keys=True)
    assert a == b


def test_dwork_report():
    report = run_dwork()
    assert report["ok"], render_report(report)
    by_id = {c["id"]: c for c in report["checks"]}
    assert by_id["b4-not-gl4-rigid"]["actual"]["sum"] == 16
    assert by_id["d4-rigid"]["actual"]["sum"] == 18
    assert by_id["g1-back-to-sp4"]["actual"]["pairing"] == "symplectic"


def test_so7bis_report():
    report = run_so7bis()
    assert report["ok"], render_report(report)
    by_id = {c["id"]: c for c in report["checks"]}
    assert by_id["e-so7-centralizers"]["actual"] == {"inf": 3, "0": 9, "1": 9}
    assert by_id["b-rank-trace"]["actual"] == [3, 4, 4, 5, 5, 6, 6, 7, 7]


def test_run_all_aggregates():
    report = run_all()
    assert report["ok"]
    assert [c["case"] for c in report["cases"]] == ["dwork", "so7", "so7bis"]
    text = render_report(report)
    assert "case dwork: PASS" in text
    assert "case so7bis: PASS" in text


def test_run_case_dispatch():
    assert run_case("so7")["case"] == "so7"
