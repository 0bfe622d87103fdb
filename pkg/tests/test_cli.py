import json

import pytest

from quantcat.cli import main


def write(path, data):
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def pair_file(tmp_path):
    return write(tmp_path / "pair.json", {
        "base": "2",
        "objects": [{"name": "a", "extent": "*"}, {"name": "b", "extent": "*"}],
        "hom": {"a,a": "1", "a,b": "0", "b,a": "0", "b,b": "1"},
    })


@pytest.fixture
def chain_file(tmp_path):
    objs = ["a", "b", "c"]
    return write(tmp_path / "chain.json", {
        "base": "2",
        "objects": [{"name": x, "extent": "*"} for x in objs],
        "hom": {f"{x},{y}": "1" if x <= y else "0" for x in objs for y in objs},
    })


def test_validate_category(pair_file, capsys):
    assert main(["validate", pair_file]) == 0
    assert "pass" in capsys.readouterr().out.lower()


def test_validate_rejects_broken_category(tmp_path):
    bad = write(tmp_path / "bad.json", {
        "base": "2", "objects": [{"name": "a", "extent": "*"}], "hom": {"a,a": "0"}})
    assert main(["validate", bad]) == 1


def test_missing_file_is_an_input_error(tmp_path):
    assert main(["validate", str(tmp_path / "nope.json")]) == 2


def test_bad_arguments_are_input_errors():
    assert main(["check", "nonsense"]) == 2


def test_presheaves_lists_down_sets(chain_file, capsys):
    assert main(["presheaves", chain_file, "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert len(out["presheaves"]) == 4


def test_complete_writes_outputs(pair_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["complete", pair_file, "--out", str(out)]) == 0
    cat = json.loads((out / "category.json").read_text())
    assert len(cat["objects"]) == 4
    assert main(["validate", str(out / "category.json")]) == 0
    assert json.loads((out / "report.json").read_text())["report"]["verdict"] == "pass"


def test_complete_under_limits(chain_file):
    assert main(["complete", chain_file, "--limits"]) == 0


def test_cauchy(chain_file, capsys):
    assert main(["cauchy", chain_file, "--json"]) == 0


@pytest.mark.parametrize("prop", ["dense", "fully-faithful", "well-behaved", "presheaf-object", "cocompletion"])
def test_checks_on_yoneda(chain_file, prop):
    assert main(["check", prop, chain_file, "--functor", "yoneda"]) == 0


def test_check_with_functor_file(pair_file, tmp_path):
    point = write(tmp_path / "point.json", {
        "base": "2", "objects": [{"name": "p", "extent": "*"}], "hom": {"p,p": "1"}})
    fun = write(tmp_path / "f.json", {"dom": "point.json", "cod": "pair.json", "map": {"p": "a"}})
    assert main(["check", "fully-faithful", pair_file, "--functor", fun]) == 0
    assert main(["check", "dense", pair_file, "--functor", fun]) == 1


def test_lemmas_scoreboard(capsys):
    assert main(["lemmas", "--cases", "3", "--only", "L1,L2", "--json"]) == 0
    board = json.loads(capsys.readouterr().out)
    assert board["verdict"] == "pass"


def test_lemmas_reports_counterexamples():
    assert main(["lemmas", "--only", "L17"]) == 1


def test_unknown_lemma_is_input_error():
    assert main(["lemmas", "--only", "L42"]) == 2


def test_sheafify(tmp_path, capsys):
    site = write(tmp_path / "site.json", {
        "objects": ["0", "a", "b"],
        "arrows": [{"name": "ia", "src": "a", "dst": "0"}, {"name": "ib", "src": "b", "dst": "0"}],
        "coverage": {"0": [["ia", "ib"]]}})
    psh = write(tmp_path / "psh.json", {"sections": {"0": [], "a": ["p"], "b": ["q"]}})
    out = tmp_path / "out"
    assert main(["sheafify", site, psh, "--out", str(out)]) == 0
    sheaf = json.loads((out / "sheaf.json").read_text())
    assert len(sheaf["sections"]["0"]) == 1


def test_dualize_twice_is_identity(pair_file, tmp_path):
    once, twice = tmp_path / "once.json", tmp_path / "twice.json"
    assert main(["dualize", pair_file, "--out", str(once)]) == 0
    assert json.loads(once.read_text())["base"] == "op:2"
    assert main(["dualize", str(once), "--out", str(twice)]) == 0
    assert json.loads(twice.read_text()) == json.loads(open(pair_file).read())
