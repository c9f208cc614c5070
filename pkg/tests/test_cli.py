import json

import pytest

from thrlog.cli import main
from thrlog.suite import Config, report_json, run


@pytest.fixture
def monoid_file(tmp_path):
    def write(text):
        p = tmp_path / "m.json"
        p.write_text(text)
        return str(p)
    return write


def test_monoid_info_json(monoid_file, capsys):
    path = monoid_file(json.dumps({"ambient_rank": 2, "generators": [[1, 0], [0, 1]], "involution": [[0, 1], [1, 0]]}))
    assert main(["monoid-info", path]) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["sharp"] and info["saturated"] and info["involution_valid"]


def test_invalid_involution_is_reported(monoid_file, capsys):
    path = monoid_file(json.dumps({"ambient_rank": 1, "generators": [[1]], "involution": [[2]]}))
    assert main(["monoid-info", path]) == 0
    assert json.loads(capsys.readouterr().out)["involution_valid"] is False


def test_rank_cap_is_not_a_crash(monoid_file, capsys):
    gens = [[int(i == j) for j in range(5)] for i in range(5)]
    path = monoid_file(json.dumps({"ambient_rank": 5, "generators": gens}))
    assert main(["monoid-info", path, "--rank-cap", "4"]) == 0
    assert json.loads(capsys.readouterr().out)["saturated"] is None


def test_malformed_json_exits_2(monoid_file):
    assert main(["monoid-info", monoid_file("{nope")]) == 2


def test_replete_needs_window(monoid_file):
    path = monoid_file(json.dumps({"ambient_rank": 1, "generators": [[1]]}))
    assert main(["nerve-homology", path, "--kind", "replete"]) == 2


def test_nerve_homology_circle(monoid_file, capsys):
    path = monoid_file(json.dumps({"ambient_rank": 1, "generators": [[1]]}))
    assert main(["nerve-homology", path, "--weight", "2", "--max-degree", "3"]) == 0
    table = json.loads(capsys.readouterr().out)
    assert [table[str(q)]["betti"] for q in range(4)] == [1, 1, 0, 0]


def test_unknown_check_and_bad_flag():
    assert main(["verify", "no.such"]) == 2
    assert main(["verify", "--threads", "0"]) == 2


def test_verify_exit_zero(capsys):
    assert main(["verify", "thrlog.10", "descent.3", "--format", "table"]) == 0
    assert "pass: 2" in capsys.readouterr().out


def test_threads_do_not_change_report():
    ids = ["thrlog.10", "descent.3", "drep.1-sd"]
    one = report_json(run(ids, Config(threads=1)), Config())
    two = report_json(run(ids, Config(threads=2)), Config())
    assert one == two
