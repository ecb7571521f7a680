import pytest

from oddkh.corpus import load_movie, load_pairs
from oddkh.diagram import DiagramError, parse_pd
from oddkh.movie import MovieError, birth, inverse_move, parse_movie, r1_add, r3


def test_frames_follow_moves():
    m = parse_movie("start\nbirth\nsaddle 1 1 +\nsaddle 1 2 +\ndeath c1", "torus")
    assert [len(f.loops) for f in m.frames] == [0, 1, 2, 1, 0]
    assert [mv.kind for mv in m.moves] == ["birth", "saddle", "saddle", "death"]
    assert m.euler_characteristic == 0
    assert m.name == "torus"


def test_start_frame_spans_lines():
    m = parse_movie("# comment\nstart\nX(1,4,2,5)\nX(3,6,4,1) X(5,2,6,3)\nr1+ 1 +")
    assert m.frames[0] == parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    assert m.frames[1].n == 4
    assert m.max_crossings() == 4


@pytest.mark.parametrize("text, line, fragment", [
    ("birth", 1, "start"),
    ("", 1, "start"),
    ("start\nbirth\nwiggle 1", 3, "unknown move"),
    ("start\nbirth\nsaddle 1 +", 3, "saddle expects"),
    ("start\nbirth\nr1+ 1 x", 3, "expected \\+ or -"),
    ("start circles=1\n\n# gap\nr1- 4", 4, "crossing 4"),
    ("start circles=1\nr2+ 1 q", 2, "non-integer"),
    ("start circles=1\ndeath 1", 2, "cK"),
    ("start circles=1\nrelabel 1-2", 2, "relabel pair"),
    ("start X(1,2,3)", 1, "start frame"),
    ("start circles=1\nbirth @x", 2, "placement"),
])
def test_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(MovieError, match=fragment) as err:
        parse_movie(text)
    assert err.value.line == line
    assert str(err.value).startswith(f"line {line}:")


def test_diagram_errors_become_movie_errors():
    with pytest.raises(MovieError) as err:
        parse_movie("start circles=1\nbirth\ndeath c9")
    assert err.value.line == 3


def test_placement_index_selects_other_solution():
    a = parse_movie("start circles=1\nr1+ 1 +").frames[-1]
    b = parse_movie("start circles=1\nr1+ 1 + @1").frames[-1]
    assert a.n == b.n == 1
    assert a != b


def test_relabel_move():
    m = parse_movie("start circles=2\nrelabel 1:7")
    assert sorted(m.frames[-1].loops) == [2, 7]


def test_inverse_moves_restore_frames():
    for name, pair in load_pairs().items():
        mv = pair.moves[0]
        assert inverse_move(mv).after == mv.before, name


def test_inverse_of_morse_move_is_refused():
    with pytest.raises(DiagramError):
        inverse_move(birth(parse_pd("circles=1")))


def test_r1_then_inverse():
    d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    for sign in (1, -1):
        mv = r1_add(d, 2, sign)
        assert mv.after.crossing_sign(mv.local[0]) in (1, -1)
        assert inverse_move(mv).after == d


def test_r3_needs_a_triangle():
    d = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)")
    # the central triangle is alternating, so no strand passes over both others
    with pytest.raises(DiagramError, match="Reidemeister III"):
        r3(d, [0, 1, 2])


def test_corpus_movies_parse():
    for name in ("sphere", "sphere_r1_padded", "sphere_closed", "torus_closed",
                 "spun_trefoil", "spun_figure_eight"):
        m = load_movie(name)
        assert m.frames[0].n == 0 and not m.frames[0].loops
