"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations_with_replacement

from condsat import condition as cd
from condsat import graphs as gr
from condsat.graphs import Graph


def G(nodes=(), *edges) -> Graph:
    """Shorthand: G("12", "12", "21") is the 2-cycle on nodes 1, 2."""
    em = {}
    for s, t in edges:
        em[gr.edge_name(s, t, em)] = (s, t)
    return Graph(list(nodes), em)


@lru_cache(maxsize=None)
def small_graphs(max_nodes: int, max_edges: int) -> tuple:
    """All graphs on nodes 1..n (n <= max_nodes) with at most max_edges edges, one per iso class."""
    out = []
    seen = set()
    for n in range(max_nodes + 1):
        nodes = [str(i) for i in range(1, n + 1)]
        pairs = [(s, t) for s in nodes for t in nodes]
        for k in range(max_edges + 1):
            for combo in combinations_with_replacement(pairs, k):
                g = G(nodes, *combo)
                key = gr.canonical_key(g)
                if key not in seen:
                    seen.add(key)
                    out.append(g)
    return tuple(out)


def models_from(root: Graph, cat, max_nodes: int, max_edges: int) -> list:
    """Every single-arrow model root -> X with X among the small graphs."""
    mono = cat.name == "inj-graphs"
    out = []
    for X in small_graphs(max_nodes, max_edges):
        for f in gr.enumerate_morphisms(root, X, mono_only=mono):
            out.append(f)
    return out


def extend(rng: random.Random, R: Graph, max_nodes: int = 3, tag: str = "n") -> Graph:
    """A random supergraph of R: maybe a fresh node, maybe a fresh edge."""
    labels = dict(R.labels)
    edges = {e: (R.src[e], R.tgt[e]) for e in R.edges}
    if len(labels) < max_nodes and (not labels or rng.random() < 0.6):
        labels[gr.fresh_name(tag, labels)] = gr.DEFAULT_LABEL
    if labels and rng.random() < 0.5:
        ns = sorted(labels, key=gr.id_key)
        s, t = rng.choice(ns), rng.choice(ns)
        edges[gr.edge_name(s, t, edges)] = (s, t)
    return Graph(labels, edges)


def random_condition(rng: random.Random, R: Graph, depth: int, kind=None, max_nodes: int = 3,
                     max_children: int = 2, iso_bias: float = 0.3) -> cd.Condition:
    """A random condition over R whose arrows are inclusions into small supergraphs."""
    kind = kind or rng.choice((cd.FORALL, cd.EXISTS))
    if depth <= 0:
        return cd.Condition(kind, R, ())
    other = cd.EXISTS if kind == cd.FORALL else cd.FORALL
    kids = []
    for _ in range(rng.randint(0, max_children)):
        X = R if rng.random() < iso_bias else extend(rng, R, max_nodes, tag=f"v{depth}")
        sub = random_condition(rng, X, depth - 1, other, max_nodes, max_children, iso_bias)
        kids.append((gr.inclusion(R, X), sub))
    return cd.Condition(kind, R, tuple(kids))


def oracle_has_model(A: cd.Condition, cat, max_nodes: int, max_edges: int):
    """Some single-arrow model of A among the small graphs, or None."""
    for f in models_from(A.root, cat, max_nodes, max_edges):
        if cd.satisfies([f], A, cat):
            return f
    return None
