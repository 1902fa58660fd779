from pathlib import Path

import pytest

from condsat import cospan as cs
from condsat import dsl
from condsat import graphs as gr
from condsat import tableau as tb
from condsat import witness as wt
from condsat.condition import exists, forall, true
from condsat.category import InjGraphs
from condsat.errors import NotUniversal

from helpers import G

PROBLEMS = Path(__file__).resolve().parent.parent / "demos" / "problems"


@pytest.fixture(scope="module")
def ray():
    P = dsl.parse_problem((PROBLEMS / "ray.cond").read_text())
    res = tb.run(P.condition, P.make_category(), tb.Config(witness=True))
    assert isinstance(res, tb.Witness)
    return res


def _center(seq):
    c = seq[0]
    for a in seq[1:]:
        c = cs.compose(c, a)
    return c.center


def test_ray_witness_found(ray):
    w = ray.candidate
    T = ray.tableau
    assert w.r == 2
    assert wt.verify_witness(T, w)
    assert wt.segment_is_fair(T, w.start, w.end)
    # m forgets one node and iota renames the survivor back
    assert len(w.m.cod.nodes) == len(T.nodes[w.end].condition.root.nodes) - 1
    assert gr.compose(w.iota.left, gr.invert(w.iota.right)).node_map == {"2": "1"}


def test_unroll(ray):
    w = ray.candidate
    assert wt.unroll_witness(w, 0) == []
    assert len(wt.unroll_witness(w, 2)) == 2 * len(w.period)
    one = _center(wt.unroll_witness(w, 1))
    two = _center(wt.unroll_witness(w, 2))
    assert gr.find_iso(one, G("12", "12")) is not None
    assert gr.find_iso(two, G("123", "12", "23")) is not None


def test_segment_is_fair_examples(ray):
    T = ray.tableau
    w = ray.candidate
    start = T.nodes[w.start]
    # a segment of length 0 with iso children pulls nothing
    assert any(T.cat.is_iso(f) for f, _ in start.condition.children)
    assert not wt.segment_is_fair(T, w.start, w.start)
    with pytest.raises(NotUniversal):
        wt.segment_is_fair(T, w.start, w.start + 1)


def test_segment_without_iso_children_is_fair():
    E = G()
    T = tb.Tableau(forall(E, (gr.inclusion(E, G("1")), true(G("1")))), InjGraphs())
    assert wt.segment_is_fair(T, 0, 0)


def test_no_witness_without_repetition():
    E = G()
    A = forall(E, (gr.identity(E), exists(E, (gr.inclusion(E, G("1")), true(G("1"))))))
    T = tb.Tableau(A, InjGraphs(), tb.Config(witness=True))
    e = T.expand_universal(T.root)
    (c,) = T.expand_existential(e)
    assert wt.detect_witness(T, c.id, T.cfg) is None


def test_ray_without_witness_check_is_unknown():
    P = dsl.parse_problem((PROBLEMS / "ray.cond").read_text())
    res = tb.run(P.condition, P.make_category(), max_steps=40)
    assert isinstance(res, tb.Unknown)
