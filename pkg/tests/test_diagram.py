import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddkh.diagram import DiagramError, braid_closure, parse_pd, writhe_data

from conftest import HOPF, TREFOIL, braids


def test_crossingless_unknot():
    d = parse_pd("circles=1")
    assert d.n == 0
    assert len(d.loops) == 1
    assert d.resolve(()).circle_count() == 1
    assert writhe_data(d) == (0, 0)


def test_trefoil_shape(trefoil):
    assert trefoil.n == 3
    assert len(trefoil.arcs) == 6
    assert trefoil.loops == ()
    assert trefoil.component_count() == 1
    assert writhe_data(trefoil) == (0, 3)


def test_hopf_shape(hopf):
    assert hopf.n == 2
    assert len(hopf.arcs) == 4
    assert hopf.component_count() == 2
    assert writhe_data(hopf) == (2, 0)


def test_trefoil_extreme_resolutions(trefoil):
    # the all-0 smoothing of this diagram has three circles and the all-1 two
    assert trefoil.resolve((0, 0, 0)).circle_count() == 3
    assert trefoil.resolve((1, 1, 1)).circle_count() == 2


def test_resolution_order_is_canonical(trefoil):
    for v in itertools.product((0, 1), repeat=3):
        circles = trefoil.resolve(v).circles
        mins = [min(c) for c in circles]
        assert mins == sorted(mins)


def test_resolve_length_mismatch(trefoil):
    with pytest.raises(DiagramError):
        trefoil.resolve((0, 1))


def test_comments_and_whitespace():
    d = parse_pd("# trefoil\nX( 1, 4,2,5)\n  X(3,6,4,1)   # middle\nX(5,2,6,3)")
    assert d == parse_pd(TREFOIL)


@pytest.mark.parametrize("text, fragment", [
    ("X(1,2,3)", "malformed"),
    ("Y(1,2,3,4)", "malformed"),
    ("X(1,1,2,3)", "used"),
    ("X(1,2,3,4)", "used"),
    ("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3) arrow c4=-", "missing crossing"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(DiagramError, match=fragment):
        parse_pd(text)


def test_non_planar_slots():
    # a valid set of arc pairings whose cyclic slot order cannot be drawn in the plane
    with pytest.raises(DiagramError, match="planar"):
        parse_pd("X(1,2,3,4) X(1,2,3,4)")


def test_arrow_override(trefoil):
    d = parse_pd(TREFOIL + " arrow c2=-")
    assert [x.arrow for x in d.crossings] == [1, -1, 1]
    assert [x.arrow for x in trefoil.crossings] == [1, 1, 1]


def test_braid_signs():
    assert writhe_data(braid_closure([1, 1, 1], 2)) == (3, 0)
    assert writhe_data(braid_closure([-1, 2, -1, 2], 3)) == (2, 2)


def test_unused_braid_strand_is_a_loop():
    d = braid_closure([1, 1], 3)
    assert len(d.loops) == 1
    assert d.component_count() == 3


@given(braids())
def test_pd_round_trip(d):
    assert parse_pd(d.to_pd()) == d


@given(braids())
def test_every_arc_appears_twice(d):
    for a, ends in d.ends.items():
        assert len(ends) == 2
    assert sum(writhe_data(d)) == d.n


@given(braids(), st.data())
def test_one_smoothing_change_moves_circle_count_by_one(d, data):
    v = data.draw(st.tuples(*[st.integers(0, 1)] * d.n))
    c = data.draw(st.integers(0, d.n - 1))
    w = list(v)
    w[c] ^= 1
    a = d.resolve(v).circle_count()
    b = d.resolve(tuple(w)).circle_count()
    assert abs(a - b) == 1


@given(braids(), st.data())
def test_circles_partition_the_arc_fragments(d, data):
    v = data.draw(st.tuples(*[st.integers(0, 1)] * d.n))
    res = d.resolve(v)
    covered = [a for c in res.circles for a in c]
    assert sorted(covered) == sorted(d.arcs)
    assert d.resolve(v) == res


@given(braids(), st.integers(1, 50))
def test_relabelling_keeps_circle_counts(d, shift):
    relabelled = parse_pd(" ".join(
        "X({},{},{},{})".format(*(a + shift for a in x.slots)) for x in d.crossings)
        + (f" loops={','.join(str(a + shift) for a in d.loops)}" if d.loops else ""))
    for v in itertools.product((0, 1), repeat=d.n):
        assert d.resolve(v).circle_count() == relabelled.resolve(v).circle_count()
