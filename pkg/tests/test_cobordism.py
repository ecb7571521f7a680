import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oddkh.cobordism import (CobordismError, ComplexCache, compose, induced_homology_map,
                             mapping_cone, move_map, movie_maps)
from oddkh.corpus import load_pairs
from oddkh.diagram import DiagramError, parse_pd
from oddkh.khcomplex import build_complex, homology
from oddkh.movie import birth, death, inverse_move, parse_movie, r1_add, r2_add, saddle

from conftest import braids


def images(f):
    return {k: f.image(k) for k in f.source.index}


def one_move(frame_pd, move):
    m = parse_movie(f"start {frame_pd}\n{move}")
    return move_map(m.moves[0])


def test_birth_from_empty():
    f = one_move("", "birth")
    assert f.degree == (0, 1)
    assert images(f) == {(0, 0): {(0, 0): 1}}


def test_birth_keeps_old_generator():
    f = one_move("circles=1", "birth")
    # a on the old circle goes to a_1 in the two-circle frame
    assert f.image((0, 0b1)) in ({(0, 0b01): 1}, {(0, 0b01): -1})
    assert len(f.image((0, 0))) == 1


def test_death_to_empty():
    f = one_move("circles=1", "death c1")
    assert f.degree == (0, 1)
    assert images(f) == {(0, 0): {}, (0, 1): {(0, 0): 1}}


def test_death_koszul_sign():
    f = one_move("circles=2", "death c2")
    top = f.image((0, 0b11))
    assert list(top) == [(0, 0b1)] and abs(top[(0, 0b1)]) == 1
    assert f.image((0, 0b01)) == {}


def test_split_and_merge():
    split = one_move("circles=1", "saddle 1 1 +")
    assert split.degree == (0, -1)
    one = split.image((0, 0))
    assert sorted(one.values()) == [-1, 1] and set(one) == {(0, 0b01), (0, 0b10)}
    merge = one_move("circles=2", "saddle 1 2 +")
    diff = {(0, 0b01): 1, (0, 0b10): -1}
    assert merge(diff) == {}
    assert merge({(0, 0): 1}) == {(0, 0): 1}


def test_arrow_flips_split_sign():
    plus = one_move("circles=1", "saddle 1 1 +").image((0, 0))
    minus = one_move("circles=1", "saddle 1 1 -").image((0, 0))
    assert minus == {k: -v for k, v in plus.items()}


def test_incoherent_band_rejected(trefoil):
    with pytest.raises(DiagramError, match="coherent"):
        saddle(trefoil, 1, 4)
    assert saddle(trefoil, 1, 3).after.n == 3


def test_empty_composite_is_identity(trefoil):
    c = build_complex(trefoil)
    with pytest.raises(ValueError):
        compose([])
    ind = induced_homology_map(compose([], c))
    assert ind.is_identity_up_to_sign() == 1


def test_sphere_and_torus_vanish():
    for text in ("start\nbirth\ndeath c1",
                 "start\nbirth\nsaddle 1 1 +\nsaddle 1 2 +\ndeath c1"):
        m = parse_movie(text)
        f = compose(movie_maps(m.moves))
        assert f.image((0, 0)) == {}


def test_degrees_track_euler_characteristic():
    m = parse_movie("start\nbirth\nsaddle 1 1 +\nsaddle 1 2 +\ndeath c1")
    f = compose(movie_maps(m.moves))
    assert f.degree == (0, m.euler_characteristic) == (0, 0)
    s = parse_movie("start\nbirth\ndeath c1")
    assert compose(movie_maps(s.moves)).degree == (0, 2)


def test_r1_on_unknot_is_an_isomorphism():
    f = move_map(r1_add(parse_pd("circles=1"), 1, 1))
    assert f.degree == (0, 0)
    assert homology(f.source) == homology(f.target)
    ind = induced_homology_map(f)
    assert all(abs(m[0, 0]) == 1 and m.rows == m.cols == 1 for m in ind.free.values())


@pytest.mark.parametrize("name", sorted(load_pairs()))
def test_reidemeister_pairs(name):
    move = load_pairs()[name].moves[0]
    cache = ComplexCache()
    f = move_map(move, cache)
    assert not homology(mapping_cone(f)).entries
    back = move_map(inverse_move(move), cache)
    assert induced_homology_map(compose([f, back])).is_identity_up_to_sign() != 0
    assert induced_homology_map(compose([back, f])).is_identity_up_to_sign() != 0


def test_disjoint_saddles_commute_up_to_sign():
    a = parse_movie("start circles=2\nsaddle 1 1 +\nsaddle 2 2 +")
    # the new arcs come out in the other order, so swap their labels back
    b = parse_movie("start circles=2\nsaddle 2 2 +\nsaddle 1 1 +\nrelabel 3:4 4:3")
    cache = ComplexCache()
    fa = induced_homology_map(compose(movie_maps(a.moves, cache))).free
    fb = induced_homology_map(compose(movie_maps(b.moves, cache))).free
    signs = {1 if fa[k] == fb[k] else -1 if fa[k] == fb[k].scale(-1) else 0 for k in fa}
    assert len(signs) == 1 and 0 not in signs and fa.keys() == fb.keys()


def test_compose_checks_complexes():
    f = one_move("circles=1", "birth")
    with pytest.raises(CobordismError):
        compose([f, f])


def _round_trip_ok(move):
    cache = ComplexCache()
    f = move_map(move, cache)
    g = move_map(inverse_move(move), cache)
    return induced_homology_map(compose([f, g])).is_identity_up_to_sign() != 0


@settings(max_examples=15)
@given(braids(max_strands=3, max_len=3), st.data())
def test_r1_round_trip_on_random_braids(d, data):
    arc = data.draw(st.sampled_from(d.arcs))
    sign = data.draw(st.sampled_from((1, -1)))
    move = r1_add(d, arc, sign)
    assert move.after.n == d.n + 1
    assert _round_trip_ok(move)


@settings(max_examples=15)
@given(braids(max_strands=3, max_len=3), st.data())
def test_r2_round_trip_on_random_braids(d, data):
    faces = [f for f in d.faces if len(set(d.face_arcs(f))) >= 2]
    face = data.draw(st.sampled_from(faces))
    over, under = data.draw(st.permutations(sorted(set(d.face_arcs(face)))))[:2]
    move = r2_add(d, over, under)
    assert move.after.n == d.n + 2
    assert _round_trip_ok(move)


@settings(max_examples=10)
@given(braids(max_strands=3, max_len=3), st.data())
def test_saddle_degree_on_random_braids(d, data):
    faces = [f for f in d.faces if len(set(d.face_arcs(f))) >= 2]
    face = data.draw(st.sampled_from(faces))
    a, b = data.draw(st.permutations(sorted(set(d.face_arcs(face)))))[:2]
    try:
        move = saddle(d, a, b)
    except DiagramError as e:
        assume("coherent" not in str(e))
        raise
    f = move_map(move)
    assert f.degree == (0, -1)
    assert move.after.n == d.n


def test_birth_death_functions_agree_with_text():
    u = parse_pd("circles=1")
    assert birth(u).after.loops == (1, 2)
    assert death(birth(u).after, 2).after == u
