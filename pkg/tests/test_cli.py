import json

import pytest

from oddkh.cli import main
from oddkh.corpus import corpus_root


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_unknot_records(capsys):
    code, out, _ = run(capsys, "homology", "unknot", "--json")
    assert code == 0
    assert json.loads(out) == [{"h": 0, "q": -1, "rank": 1, "torsion": []},
                               {"h": 0, "q": 1, "rank": 1, "torsion": []}]


def test_homology_accepts_a_path(capsys, tmp_path):
    p = tmp_path / "u.pd"
    p.write_text("circles=2\n")
    code, out, _ = run(capsys, "homology", str(p))
    assert code == 0
    assert "q= -2" in out and "q=  2" in out


def test_homology_mod2(capsys):
    code, out, _ = run(capsys, "homology", "figure_eight", "--reduced", "--mod2")
    assert code == 0 and "F2^1" in out and "Z^" not in out


def test_jones(capsys):
    code, out, _ = run(capsys, "jones", "knot_6_2", "--json")
    assert code == 0 and json.loads(out)["match"] is True
    code, out, _ = run(capsys, "jones", "trefoil", "--reduced")
    assert code == 0 and "match: yes" in out


def test_movie(capsys):
    code, out, _ = run(capsys, "movie", "torus_closed", "--json")
    rec = json.loads(out)
    assert code == 0 and rec["degree"] == [0, 0]
    assert rec["blocks"] == [{"h": 0, "q": 0, "matrix": [[0]], "torsion": []}]


def test_movie_without_moves(capsys, tmp_path):
    p = tmp_path / "still.movie"
    p.write_text("start circles=1\n")
    code, _, err = run(capsys, "movie", str(p))
    assert code == 2 and "no moves" in err


def test_n_invariant_sphere(capsys):
    code, out, _ = run(capsys, "n-invariant", "sphere", "--json")
    assert code == 0 and json.loads(out)["n"] == 1


def test_n_invariant_spun_trefoil(capsys):
    code, out, _ = run(capsys, "n-invariant", str(corpus_root() / "movies" / "spun_trefoil.movie"), "--json")
    assert code == 0
    assert json.loads(out) == {"movie": "spun_trefoil", "n": 3, "oracle": 3, "match": True}


def test_n_invariant_mismatch_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.movie"
    p.write_text("# expected: 7\nstart\nbirth\n")
    code, out, _ = run(capsys, "n-invariant", str(p))
    assert code == 1 and "MISMATCH" in out


def test_missing_input(capsys):
    code, _, err = run(capsys, "homology", "no_such_knot")
    assert code == 2 and "no such file" in err


def test_structured_error_with_json(capsys, tmp_path):
    p = tmp_path / "broken.movie"
    p.write_text("start\nbirth\nwiggle\n")
    code, _, err = run(capsys, "movie", str(p), "--json")
    assert code == 2
    payload = json.loads(err)
    assert payload["error"] == "MovieError" and payload["message"].startswith("line 3")


def test_bad_pd(capsys, tmp_path):
    p = tmp_path / "bad.pd"
    p.write_text("X(1,2,3)")
    code, _, err = run(capsys, "homology", str(p))
    assert code == 2 and "DiagramError" in err


def test_bad_truncation():
    with pytest.raises(SystemExit):
        main(["verify", "--truncation", "-3"])


def test_usage_without_verb():
    with pytest.raises(SystemExit):
        main([])
