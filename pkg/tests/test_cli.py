import json

import pytest

from bolloops.cli import main
from bolloops.loop import parse_loop, read_loop


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_construct_round_trips(capsys, tmp_path):
    code, out, _ = run(capsys, "construct", "B7", "--emit-dir", str(tmp_path))
    assert code == 0
    q = parse_loop(out)
    assert q.n == 27 and q.is_right_bol()
    assert read_loop(tmp_path / "B7.txt") == q


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["table1", "--bogus"])
    assert exc.value.code == 2


def test_validate(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("2\n0 1\n1 1\n")
    assert run(capsys, "validate", str(bad))[0] == 1
    code, out, _ = run(capsys, "validate", "B9", "--json")
    info = json.loads(out)
    assert code == 0 and info["right_bol"] and info["center_order"] == 1


def test_profile_json_is_flat(capsys):
    code, out, _ = run(capsys, "profile", "B6", "--json")
    data = json.loads(out)
    assert code == 0 and data["aut_order"] == 36 and data["associated_bruck"] == "B6"
    assert all(not isinstance(v, (dict, list)) for v in data.values())


def test_profile_table(capsys):
    code, out, _ = run(capsys, "profile", "B1", "B5", "--table")
    assert code == 0 and out.splitlines()[0].split() == ["Q", "B1", "B5"]


def test_classify_and_isotopy(capsys):
    code, out, _ = run(capsys, "classify", "B1", "B5", "B1", "--json")
    data = json.loads(out)
    assert data["representatives"] == ["B1", "B5"]
    code, out, _ = run(capsys, "isotopy", "B9", "B10", "--json")
    assert json.loads(out)["isotopic"]
    code, out, _ = run(capsys, "isotopy", "B1", "B2")
    assert out == "not isotopic\n"


def test_table2_json_and_files(capsys, tmp_path):
    code, out, _ = run(capsys, "table2", "--json", "--emit-dir", str(tmp_path))
    data = json.loads(out)
    assert code == 0
    assert data["rows"]["rmlt_exponent"] == [9] * 8 + [3] * 2
    assert sorted(map(sorted, data["rmlt_isomorphism_classes"])) == sorted(
        [["B1", "B5"], ["B2", "B6"], ["B3", "B7"], ["B4", "B8"], ["B10", "B9"]])
    for name in ("table2.txt", "table2.tsv", "table2.json", "table2.png"):
        assert (tmp_path / name).stat().st_size > 0
    assert json.loads((tmp_path / "table2.json").read_text()) == data


def test_table2_output_is_deterministic(capsys):
    first = run(capsys, "table2")[1]
    assert run(capsys, "table2")[1] == first


def test_search_central_ext_emits_loops(capsys, tmp_path):
    code, out, _ = run(capsys, "search", "central-ext", "--p", "3", "--json",
                       "--emit-dir", str(tmp_path))
    data = json.loads(out)
    assert code == 0 and data["classes"] == 12 and data["centrally_nilpotent_census"] == 13
    files = sorted(tmp_path.glob("central-ext-p3-*.txt"))
    assert len(files) == 12 and all(read_loop(f).is_right_bol() for f in files)


def test_search_flag_validation(capsys):
    with pytest.raises(SystemExit):
        main(["search", "central-ext", "--p", "4"])
    with pytest.raises(SystemExit):
        main(["search", "trivial-center", "--case", "ea", "--p", "3"])


def test_trivial_center_timeout_keeps_resume_file(capsys, tmp_path):
    code, _, err = run(capsys, "search", "trivial-center", "--case", "cyc",
                       "--timeout-secs", "0", "--emit-dir", str(tmp_path))
    assert code == 3 and "resume" in err
    saved = json.loads((tmp_path / "trivial-center-cyc.resume.json").read_text())
    assert len(saved["subtrees"]) == 1
