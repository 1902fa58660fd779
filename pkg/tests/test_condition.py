import random

import pytest

from condsat import condition as cd
from condsat import graphs as gr
from condsat.category import AllGraphs, InjGraphs
from condsat.condition import exists, false, forall, true
from condsat.errors import DomainMismatch, IllFormed, NotAlternating, NotIso, NotRightInverse

from helpers import G, models_from, random_condition, small_graphs

E = G()
ONE = G("1")
INJ = InjGraphs()
ALL = AllGraphs()


def inc(a, b):
    return gr.inclusion(a, b)


def every_node_has_out_edge():
    """forall {} -> {1} . exists {1} -> {1,2;1->2} . true"""
    E12 = G("12", "12")
    return forall(E, (inc(E, ONE), exists(ONE, (inc(ONE, E12), true(E12)))))


def equivalent(A, B, cat, max_nodes=3, max_edges=3):
    for m in models_from(A.root, cat, max_nodes, max_edges):
        if cd.satisfies([m], A, cat) != cd.satisfies([m], B, cat):
            return False
    return True


# --- structure ------------------------------------------------------------------------------

def test_true_false():
    assert true(E).is_true() and false(E).is_false()
    assert not true(E).is_false()
    with pytest.raises(ValueError):
        cd.Condition("maybe", E)


def test_validate():
    cd.validate(true(ONE), INJ)
    cd.validate(every_node_has_out_edge(), INJ)
    bad = forall(E, (inc(ONE, G("12")), true(G("12"))))
    with pytest.raises(IllFormed) as exc:
        cd.validate(bad, INJ)
    assert exc.value.path == (0,)
    worse = forall(E, (inc(E, ONE), exists(ONE, (inc(ONE, G("12")), true(ONE)))))
    with pytest.raises(IllFormed) as exc:
        cd.validate(worse, INJ)
    assert exc.value.path == (0, 0)


def test_weight_examples():
    assert cd.weight(true(E)) == 1
    assert cd.weight(forall(E, (inc(E, ONE), true(ONE)))) == 2
    A = forall(E, (inc(E, ONE), true(ONE)),
               (inc(E, G("12")), exists(G("12"), (gr.identity(G("12")), true(G("12"))))))
    # 1 for the root, 1 for true, 2 for exists h.true
    assert cd.weight(A) == 4


def test_make_alternating():
    A = every_node_has_out_edge()
    assert cd.make_alternating(A, INJ) == A
    f, g = inc(E, ONE), inc(ONE, G("12"))
    nested = forall(E, (f, forall(ONE, (g, true(G("12"))))))
    alt = cd.make_alternating(nested, INJ)
    (f2, mid), = alt.children
    assert mid.kind == cd.EXISTS and mid.children[0][0] == gr.identity(ONE)
    assert cd.is_alternating(alt)
    assert cd.make_alternating(alt, INJ) == alt
    assert equivalent(nested, alt, INJ)


def test_make_alternating_equivalence_random():
    rng = random.Random(31)
    for _ in range(60):
        A = random_condition(rng, E, 3, max_nodes=3)
        # break alternation by wrapping children in same-kind levels
        kids = tuple((f, cd.Condition(A.kind, sub.root, ((gr.identity(sub.root), sub),)))
                     for f, sub in A.children)
        B = cd.Condition(A.kind, A.root, kids)
        alt = cd.make_alternating(B, INJ)
        assert cd.is_alternating(alt)
        assert equivalent(B, alt, INJ)


# --- shift ---------------------------------------------------------------------------------

def test_shift_examples():
    A = every_node_has_out_edge()
    assert cd.shift(A, gr.identity(E), INJ) == A
    assert cd.shift(true(E), inc(E, ONE), INJ) == true(ONE)
    with pytest.raises(DomainMismatch):
        cd.shift(A, gr.identity(ONE), INJ)


def test_shift_displayed_example():
    """Shifting 'every node has an outgoing edge' along 'a node exists'."""
    D = G("0")
    got = cd.shift(every_node_has_out_edge(), inc(E, D), INJ)
    D1 = G("01")
    want = forall(
        D,
        (gr.identity(D), exists(D, (inc(D, G("01", "01")), true(G("01", "01"))))),
        (inc(D, D1), exists(D1,
                            (inc(D1, G("012", "12")), true(G("012", "12"))),
                            (inc(D1, G("01", "10")), true(G("01", "10"))))),
    )
    assert cd.condition_iso(got, want, INJ) is not None
    assert len(got.children) == 2


def test_shift_adjunction_sequence_form():
    rng = random.Random(41)
    graphs = small_graphs(3, 2)
    n = 0
    while n < 150:
        A = random_condition(rng, E, 3, max_nodes=3)
        X = rng.choice(graphs)
        c = gr.enumerate_morphisms(E, X)[0]
        Y = rng.choice(graphs)
        ds = gr.enumerate_morphisms(X, Y, mono_only=True)
        if not ds:
            continue
        d = rng.choice(ds)
        S = cd.shift(A, c, INJ)
        assert cd.satisfies([c, d], A, INJ) == cd.satisfies([d], S, INJ)
        n += 1


def test_shift_over_iso_preserves_weight():
    rng = random.Random(43)
    for _ in range(80):
        R = rng.choice(small_graphs(2, 1))
        A = random_condition(rng, R, 3, max_nodes=3)
        for h in gr.isos(R, R):
            assert cd.weight(cd.shift(A, h, INJ)) == cd.weight(A)


# --- satisfaction --------------------------------------------------------------------------

def test_satisfies_base_cases():
    m = inc(E, ONE)
    assert cd.satisfies([m], true(E), INJ)
    assert not cd.satisfies([m], false(E), INJ)
    assert cd.satisfies([], true(E), INJ)
    with pytest.raises(DomainMismatch):
        cd.satisfies([gr.identity(ONE)], true(E), INJ)


def test_cycle_is_a_model():
    A = forall(E, (gr.identity(E), exists(E, (inc(E, ONE), true(ONE)))),
               (inc(E, ONE), exists(ONE, (inc(ONE, G("12", "12")), true(G("12", "12"))))))
    assert cd.satisfies([inc(E, G("12", "12", "21"))], A, INJ)
    assert not cd.satisfies([inc(E, G("12", "12"))], A, INJ)
    assert not cd.satisfies([inc(E, G("1", "11"))], A, INJ)


def test_loop_satisfies_edge_to_every_node_in_all_graphs():
    R = ONE
    A = forall(R, (inc(R, G("12")), exists(G("12"), (inc(G("12"), G("12", "12")), true(G("12", "12"))))))
    assert cd.satisfies([inc(R, G("1", "11"))], A, ALL)
    assert not cd.satisfies([gr.identity(R)], A, ALL)
    # with injective matches alone the lone node is a model already
    assert cd.satisfies([gr.identity(R)], A, INJ)


def test_recomposition_invariance():
    rng = random.Random(47)
    graphs = small_graphs(3, 2)
    for _ in range(120):
        A = random_condition(rng, E, 3, max_nodes=3)
        X, Y = rng.choice(graphs), rng.choice(graphs)
        ds = gr.enumerate_morphisms(X, Y, mono_only=True)
        if not ds:
            continue
        a1 = gr.enumerate_morphisms(E, X)[0]
        a2 = rng.choice(ds)
        assert cd.satisfies([a1, a2], A, INJ) == cd.satisfies([gr.compose(a1, a2)], A, INJ)


def test_forall_iso_equals_exists_iso():
    rng = random.Random(53)
    for _ in range(60):
        R = rng.choice(small_graphs(2, 1))
        sub = random_condition(rng, R, 2, max_nodes=3)
        for h in gr.isos(R, R):
            X = gr.Graph({f"r{n}": R.labels[n] for n in R.nodes},
                         {e: (f"r{R.src[e]}", f"r{R.tgt[e]}") for e in R.edges})
            ren = gr.compose(h, gr.from_node_map(R, X, {n: f"r{n}" for n in R.nodes}))
            body = cd.shift(sub, ren, INJ)
            assert equivalent(forall(R, (ren, body)), exists(R, (ren, body)), INJ)


# --- isomorphism -----------------------------------------------------------------------------

def test_condition_iso_examples():
    A = every_node_has_out_edge()
    assert cd.condition_iso(A, A, INJ) == gr.identity(E)
    assert cd.condition_iso(true(E), false(E), INJ) is None
    B = forall(E, (inc(E, G("a")), exists(G("a"), (inc(G("a"), G("ab", "ab")), true(G("ab", "ab"))))))
    assert cd.condition_iso(A, B, INJ) is not None
    C = forall(E, (inc(E, G("a")), exists(G("a"), (inc(G("a"), G("ab", "ba")), true(G("ab", "ba"))))))
    assert cd.condition_iso(A, C, INJ) is None


def test_condition_iso_transports_satisfaction():
    rng = random.Random(59)
    R = G("12")
    for _ in range(40):
        A = random_condition(rng, R, 2, max_nodes=3)
        swap = gr.from_node_map(R, R, {"1": "2", "2": "1"})
        B = cd.shift(A, swap, INJ)
        h = cd.condition_iso(A, B, INJ)
        if h is None:
            continue
        for m in models_from(R, INJ, 3, 2):
            assert cd.satisfies([m], A, INJ) == cd.satisfies([gr.compose(h, m)], B, INJ)


# --- pull forward -----------------------------------------------------------------------------

def test_pull_forward_iso_examples():
    f = inc(E, ONE)
    A = forall(E, (gr.identity(E), exists(E, (f, true(ONE)))))
    fp, D = cd.pull_forward_iso(A, 0, INJ)
    assert fp == gr.identity(E)
    assert D == exists(E, (f, true(ONE)))
    fp, D = cd.pull_forward_iso(forall(E, (gr.identity(E), false(E))), 0, INJ)
    assert D.is_false()
    with pytest.raises(NotIso):
        cd.pull_forward_iso(forall(E, (f, exists(ONE))), 0, INJ)
    with pytest.raises(NotAlternating):
        cd.pull_forward_iso(forall(E, (gr.identity(E), true(E))), 0, INJ)


def test_pull_forward_iso_first_unsat_step():
    A = forall(E, (gr.identity(E), exists(E, (inc(E, ONE), true(ONE)))),
               (inc(E, G("x")), false(G("x"))))
    fp, D = cd.pull_forward_iso(A, 0, INJ)
    (g, body), = D.children
    assert g == inc(E, ONE)
    assert body.kind == cd.FORALL
    # the node-free universal shifted along 'a node exists': merge or keep apart
    assert len(body.children) == 2
    assert all(sub.is_false() for _, sub in body.children)


def test_pull_forward_section_examples():
    A = forall(E, (gr.identity(E), exists(E, (gr.identity(E), true(E)))))
    D = cd.pull_forward_section(A, 0, gr.identity(E), ALL)
    (h, H), = D.children
    assert h == gr.identity(E)
    s = inc(ONE, G("12"))
    with pytest.raises(NotRightInverse):
        cd.pull_forward_section(forall(ONE, (s, exists(G("12")))), 0, gr.identity(G("12")), ALL)


def test_pull_forward_section_on_iso_implies_iso_rule():
    rng = random.Random(61)
    for _ in range(40):
        A = random_condition(rng, E, 3, cd.FORALL, max_nodes=3, iso_bias=0.6)
        for p, (f, sub) in enumerate(A.children):
            if not INJ.is_iso(f) or sub.kind != cd.EXISTS:
                continue
            fp, D = cd.pull_forward_iso(A, p, INJ)
            S = cd.pull_forward_section(A, p, INJ.invert(f), INJ)
            for m in models_from(E, INJ, 3, 2):
                if cd.satisfies([m], S, INJ):
                    assert cd.satisfies([m], exists(E, (fp, D)), INJ)
