"""Finite labeled directed multigraphs, graph morphisms and the combinatorial
constructions the graph-based backends need."""

from __future__ import annotations

import re
from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .errors import CodomainMismatch, DomainMismatch, LabelClash, NotIso, NotMono

DEFAULT_LABEL = ""

_DIGITS = re.compile(r"(\d+)")
_SUFFIX = re.compile(r"(.+)_(\d+)")


@lru_cache(maxsize=65536)
def id_key(ident: str):
    """Natural sort key for identifiers, so that "p2" sorts before "p10"."""
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in _DIGITS.split(ident))


def _sorted_ids(ids) -> tuple:
    return tuple(sorted(ids, key=id_key))


def fresh_name(base: str, taken) -> str:
    """``base`` if free, else ``base_k`` for the least free k (an existing _k suffix is bumped)."""
    if base not in taken:
        return base
    m = _SUFFIX.fullmatch(base)
    stem, k = (m.group(1), int(m.group(2)) + 1) if m else (base, 1)
    while f"{stem}_{k}" in taken:
        k += 1
    return f"{stem}_{k}"


def edge_name(s: str, t: str, taken) -> str:
    """Edge identifiers are derived from their endpoints: "1->2", "1->2#1", ..."""
    base = f"{s}->{t}"
    if base not in taken:
        return base
    k = 1
    while f"{base}#{k}" in taken:
        k += 1
    return f"{base}#{k}"


class Graph:
    """An immutable finite graph.

    ``nodes`` is either an iterable of node ids (all carrying the default label)
    or a mapping id -> label; ``edges`` maps edge ids to (source, target) pairs.
    """

    __slots__ = ("nodes", "labels", "edges", "src", "tgt", "_hash", "_between", "_key", "_sigval")

    def __init__(self, nodes=(), edges: Optional[Mapping] = None):
        if isinstance(nodes, Mapping):
            labels = {str(n): str(l) for n, l in nodes.items()}
        else:
            labels = {str(n): DEFAULT_LABEL for n in nodes}
        edges = dict(edges or {})
        src, tgt = {}, {}
        for e, (s, t) in edges.items():
            if s not in labels or t not in labels:
                raise ValueError(f"edge {e!r} has an endpoint outside the node set")
            src[e], tgt[e] = s, t
        self.nodes = _sorted_ids(labels)
        self.labels = labels
        self.edges = _sorted_ids(edges)
        self.src = src
        self.tgt = tgt
        self._hash = None
        self._between = None
        self._key = None
        self._sigval = None

    @property
    def between(self) -> dict:
        """Map (source, target) -> tuple of parallel edge ids in canonical order."""
        if self._between is None:
            b: dict = {}
            for e in self.edges:
                b.setdefault((self.src[e], self.tgt[e]), []).append(e)
            self._between = {k: tuple(v) for k, v in b.items()}
        return self._between

    def size(self) -> int:
        return len(self.nodes) + len(self.edges)

    def is_empty(self) -> bool:
        return not self.nodes

    def _sig(self):
        if self._sigval is None:
            self._sigval = (
                self.nodes,
                tuple(self.labels[n] for n in self.nodes),
                self.edges,
                tuple((self.src[e], self.tgt[e]) for e in self.edges),
            )
        return self._sigval

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Graph):
            return NotImplemented
        return hash(self) == hash(other) and self._sig() == other._sig()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._sig())
        return self._hash

    def __repr__(self):
        return f"Graph({self})"

    def __str__(self):
        parts = [n if self.labels[n] == DEFAULT_LABEL else f"{n}:{self.labels[n]}" for n in self.nodes]
        arcs = [f"{self.src[e]}->{self.tgt[e]}" for e in self.edges]
        if arcs:
            return "{" + ", ".join(parts) + " ; " + ", ".join(arcs) + "}"
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class MorphismClass:
    mono: bool
    epi: bool
    iso: bool
    section: bool


class GraphMorphism:
    """A structure- and label-preserving map ``dom -> cod``."""

    __slots__ = ("dom", "cod", "node_map", "edge_map", "_hash", "_sigval")

    def __init__(self, dom: Graph, cod: Graph, node_map: Mapping, edge_map: Optional[Mapping] = None,
                 check: bool = True):
        self.dom = dom
        self.cod = cod
        self.node_map = dict(node_map)
        self.edge_map = dict(edge_map or {})
        self._hash = None
        self._sigval = None
        if check:
            self._check()

    def _check(self):
        d, c = self.dom, self.cod
        if set(self.node_map) != set(d.nodes) or set(self.edge_map) != set(d.edges):
            raise ValueError("morphism maps must be total on the domain")
        for n, m in self.node_map.items():
            if m not in c.labels:
                raise ValueError(f"node {n!r} mapped outside the codomain")
            if d.labels[n] != c.labels[m]:
                raise ValueError(f"node {n!r} mapped to a node with a different label")
        for e, f in self.edge_map.items():
            if f not in c.src:
                raise ValueError(f"edge {e!r} mapped outside the codomain")
            if self.node_map[d.src[e]] != c.src[f] or self.node_map[d.tgt[e]] != c.tgt[f]:
                raise ValueError(f"edge {e!r} is not mapped compatibly with its endpoints")

    def _sig(self):
        if self._sigval is None:
            self._sigval = (
                tuple(self.node_map[n] for n in self.dom.nodes),
                tuple(self.edge_map[e] for e in self.dom.edges),
            )
        return self._sigval

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, GraphMorphism):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self._sig() == other._sig()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, self._sig()))
        return self._hash

    def __repr__(self):
        return f"GraphMorphism({self.dom} -> {self.cod}, {self.node_map})"

    def is_inclusion(self) -> bool:
        """True when nodes and edges keep their identifiers."""
        return all(k == v for k, v in self.node_map.items()) and all(
            k == v for k, v in self.edge_map.items())

    def is_name_inclusion(self) -> bool:
        """True when the map is what name-based inclusion would infer."""
        return all(k == v for k, v in self.node_map.items()) and self == from_node_map(
            self.dom, self.cod, self.node_map)

    def image_nodes(self) -> set:
        return set(self.node_map.values())

    def image_edges(self) -> set:
        return set(self.edge_map.values())


def identity(G: Graph) -> GraphMorphism:
    return GraphMorphism(G, G, {n: n for n in G.nodes}, {e: e for e in G.edges}, check=False)


def from_node_map(A: Graph, B: Graph, node_map: Mapping) -> GraphMorphism:
    """Build a morphism from a node map, matching edges by endpoints in order.

    Edges with the same identifier in both graphs are matched first; the rest
    take the first unused parallel edge (reusing one only when none is left).
    """
    nm = dict(node_map)
    used: set = set()
    em = {}
    for e in A.edges:
        key = (nm[A.src[e]], nm[A.tgt[e]])
        if e in B.src and (B.src[e], B.tgt[e]) == key and e not in used:
            em[e] = e
            used.add(e)
    for e in A.edges:
        if e in em:
            continue
        cands = B.between.get((nm[A.src[e]], nm[A.tgt[e]]), ())
        if not cands:
            raise ValueError(f"no edge in the codomain for {A.src[e]}->{A.tgt[e]}")
        free = [f for f in cands if f not in used]
        f = free[0] if free else cands[0]
        em[e] = f
        used.add(f)
    return GraphMorphism(A, B, nm, em)


def inclusion(A: Graph, B: Graph) -> GraphMorphism:
    return from_node_map(A, B, {n: n for n in A.nodes})


def compose(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """Diagrammatic composition f;g."""
    if f.cod != g.dom:
        raise DomainMismatch("codomain of the first morphism differs from domain of the second")
    gn, ge = g.node_map, g.edge_map
    return GraphMorphism(
        f.dom, g.cod,
        {n: gn[m] for n, m in f.node_map.items()},
        {e: ge[d] for e, d in f.edge_map.items()},
        check=False,
    )


def is_mono(f: GraphMorphism) -> bool:
    return (len(set(f.node_map.values())) == len(f.node_map)
            and len(set(f.edge_map.values())) == len(f.edge_map))


def is_epi(f: GraphMorphism) -> bool:
    return (len(set(f.node_map.values())) == len(f.cod.nodes)
            and len(set(f.edge_map.values())) == len(f.cod.edges))


def is_iso(f: GraphMorphism) -> bool:
    return (len(f.dom.nodes) == len(f.cod.nodes) and len(f.dom.edges) == len(f.cod.edges)
            and is_mono(f))


def classify(f: GraphMorphism) -> MorphismClass:
    iso = is_iso(f)
    section = iso or (is_mono(f) and bool(right_inverses(f)))
    return MorphismClass(mono=is_mono(f), epi=is_epi(f), iso=iso, section=section)


def invert(f: GraphMorphism) -> GraphMorphism:
    if not is_iso(f):
        raise NotIso("morphism is not an isomorphism")
    return GraphMorphism(
        f.cod, f.dom,
        {m: n for n, m in f.node_map.items()},
        {d: e for e, d in f.edge_map.items()},
        check=False,
    )


# --- enumeration --------------------------------------------------------------

def _incident_pairs(A: Graph) -> dict:
    inc: dict = {n: [] for n in A.nodes}
    for (s, t) in A.between:
        inc[s].append((s, t))
        if t != s:
            inc[t].append((s, t))
    return inc


def extensions(A: Graph, B: Graph, mono: bool = False, node_fix: Optional[Mapping] = None,
               edge_fix: Optional[Mapping] = None, node_cands: Optional[Mapping] = None
               ) -> Iterator[GraphMorphism]:
    """Enumerate morphisms A->B extending the given partial node/edge maps.

    Order is lexicographic on the node map (A's nodes in canonical order, B's
    candidates in canonical order) and then on the edge map.
    """
    nfix = dict(node_fix or {})
    efix = dict(edge_fix or {})
    for a, b in nfix.items():
        if A.labels[a] != B.labels.get(b, None):
            return
    if mono and len(set(nfix.values())) < len(nfix):
        return
    if mono and (len(A.nodes) > len(B.nodes) or len(A.edges) > len(B.edges)):
        return
    groups = A.between
    bbetween = B.between
    incident = _incident_pairs(A)
    by_label: dict = {}
    for b in B.nodes:
        by_label.setdefault(B.labels[b], []).append(b)
    free = [a for a in A.nodes if a not in nfix]
    cands = {}
    for a in free:
        cs = by_label.get(A.labels[a], [])
        if node_cands is not None:
            allowed = set(node_cands[a])
            cs = [b for b in cs if b in allowed]
        cands[a] = cs
    nm = dict(nfix)
    used = set(nm.values())

    def pair_ok(s, t):
        have = len(bbetween.get((nm[s], nm[t]), ()))
        return have >= (len(groups[(s, t)]) if mono else 1)

    for (s, t) in groups:
        if s in nm and t in nm and not pair_ok(s, t):
            return

    edges = A.edges

    def edge_maps(k, em, eused):
        if k == len(edges):
            yield dict(em)
            return
        e = edges[k]
        options = bbetween.get((nm[A.src[e]], nm[A.tgt[e]]), ())
        if e in efix:
            options = [efix[e]] if efix[e] in options else []
        for f in options:
            if mono and f in eused:
                continue
            em[e] = f
            eused.add(f)
            yield from edge_maps(k + 1, em, eused)
            eused.discard(f)
            del em[e]

    def nodes_rec(k):
        if k == len(free):
            for em in edge_maps(0, {}, set()):
                yield GraphMorphism(A, B, dict(nm), em, check=False)
            return
        a = free[k]
        for b in cands[a]:
            if mono and b in used:
                continue
            nm[a] = b
            if all(pair_ok(s, t) for (s, t) in incident[a] if s in nm and t in nm):
                used.add(b)
                yield from nodes_rec(k + 1)
                used.discard(b)
            del nm[a]

    if mono and len(set(efix.values())) < len(efix):
        return
    yield from nodes_rec(0)


def enumerate_morphisms(A: Graph, B: Graph, mono_only: bool = False) -> list[GraphMorphism]:
    return list(extensions(A, B, mono=mono_only))


def _fix_through(total: GraphMorphism, prefix: GraphMorphism):
    """Partial maps forced on h by prefix;h = total, or None if contradictory."""
    nfix, efix = {}, {}
    for a, b in prefix.node_map.items():
        c = total.node_map[a]
        if nfix.setdefault(b, c) != c:
            return None
    for a, b in prefix.edge_map.items():
        c = total.edge_map[a]
        if efix.setdefault(b, c) != c:
            return None
    return nfix, efix


def factorizations(total: GraphMorphism, prefix: GraphMorphism, mono_only: bool = False
                   ) -> list[GraphMorphism]:
    """All h with prefix;h = total."""
    if total.dom != prefix.dom:
        raise DomainMismatch("factorization needs a shared domain")
    fixed = _fix_through(total, prefix)
    if fixed is None:
        return []
    nfix, efix = fixed
    return list(extensions(prefix.cod, total.cod, mono=mono_only, node_fix=nfix, edge_fix=efix))


def iso_factorizations(total: GraphMorphism, prefix: GraphMorphism) -> list[GraphMorphism]:
    B, C = prefix.cod, total.cod
    if len(B.nodes) != len(C.nodes) or len(B.edges) != len(C.edges):
        return []
    return factorizations(total, prefix, mono_only=True)


def right_inverses(s: GraphMorphism) -> list[GraphMorphism]:
    return factorizations(identity(s.dom), s)


def _invariant(G: Graph, n):
    out = sum(len(v) for (s, _), v in G.between.items() if s == n)
    inn = sum(len(v) for (_, t), v in G.between.items() if t == n)
    loops = len(G.between.get((n, n), ()))
    return (G.labels[n], out, inn, loops)


def isos(A: Graph, B: Graph, node_fix: Optional[Mapping] = None,
         edge_fix: Optional[Mapping] = None) -> Iterator[GraphMorphism]:
    if len(A.nodes) != len(B.nodes) or len(A.edges) != len(B.edges):
        return iter(())
    binv: dict = {}
    for b in B.nodes:
        binv.setdefault(_invariant(B, b), []).append(b)
    cands = {a: binv.get(_invariant(A, a), []) for a in A.nodes}
    return extensions(A, B, mono=True, node_fix=node_fix, edge_fix=edge_fix, node_cands=cands)


def find_iso(A: Graph, B: Graph) -> Optional[GraphMorphism]:
    if A == B:
        return identity(A)
    if canonical_key(A) != canonical_key(B):
        return None
    return next(iter(isos(A, B)), None)


# --- colimits and limits --------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _class_names(classes, b_ids, c_ids):
    """Name quotient classes: a class keeps its smallest B-side id, otherwise its
    smallest C-side id unless that collides with a B-side name."""
    names = {}
    taken = set()
    c_only = []
    for root, members in classes.items():
        bs = [m for side, m in members if side == 0]
        if bs:
            names[root] = min(bs, key=id_key)
            taken.add(names[root])
        else:
            c_only.append(root)
    for root in sorted(c_only, key=lambda r: id_key(min((m for _, m in classes[r]), key=id_key))):
        cand = min((m for _, m in classes[root]), key=id_key)
        name = fresh_name(cand, taken)
        names[root] = name
        taken.add(name)
    return names


def pushout(f: GraphMorphism, g: GraphMorphism) -> tuple[GraphMorphism, GraphMorphism]:
    """Pushout of the span B <-f- A -g-> C, returning the legs B->D, C->D."""
    if f.dom != g.dom:
        raise DomainMismatch("pushout needs a span with a shared domain")
    B, C = f.cod, g.cod
    nu, eu = _UnionFind(), _UnionFind()
    for n in B.nodes:
        nu.find((0, n))
    for n in C.nodes:
        nu.find((1, n))
    for e in B.edges:
        eu.find((0, e))
    for e in C.edges:
        eu.find((1, e))
    for a in f.dom.nodes:
        nu.union((0, f.node_map[a]), (1, g.node_map[a]))
    for a in f.dom.edges:
        eu.union((0, f.edge_map[a]), (1, g.edge_map[a]))
    nclasses: dict = {}
    for x in list(nu.parent):
        nclasses.setdefault(nu.find(x), []).append(x)
    eclasses: dict = {}
    for x in list(eu.parent):
        eclasses.setdefault(eu.find(x), []).append(x)
    nname = _class_names(nclasses, B.nodes, C.nodes)
    ename = _class_names(eclasses, B.edges, C.edges)
    labels = {}
    for root, members in nclasses.items():
        ls = {(B if side == 0 else C).labels[m] for side, m in members}
        if len(ls) > 1:
            raise LabelClash(f"pushout merges nodes labeled {sorted(ls)}")
        labels[nname[root]] = ls.pop()

    def node_of(side, n):
        return nname[nu.find((side, n))]

    edges = {}
    for root, members in eclasses.items():
        side, e = members[0]
        G = B if side == 0 else C
        edges[ename[root]] = (node_of(side, G.src[e]), node_of(side, G.tgt[e]))
    D = Graph(labels, edges)
    bleg = GraphMorphism(B, D, {n: node_of(0, n) for n in B.nodes},
                         {e: ename[eu.find((0, e))] for e in B.edges}, check=False)
    cleg = GraphMorphism(C, D, {n: node_of(1, n) for n in C.nodes},
                         {e: ename[eu.find((1, e))] for e in C.edges}, check=False)
    return bleg, cleg


def pushout_complement(a: GraphMorphism, b: GraphMorphism
                       ) -> Optional[tuple[GraphMorphism, GraphMorphism]]:
    """Complete A -a-> B -b-> C to a pushout square A -> X -> C, if possible."""
    if not is_mono(a):
        raise NotMono("pushout complement needs a mono first leg")
    if a.cod != b.dom:
        raise DomainMismatch("pushout complement needs composable morphisms")
    B, C = a.cod, b.cod
    kept_n = set(a.node_map.values())
    kept_e = set(a.edge_map.values())
    del_n = {b.node_map[n] for n in B.nodes if n not in kept_n}
    del_e = {b.edge_map[e] for e in B.edges if e not in kept_e}
    # identification condition: deleted items must not be merged with anything
    for n in B.nodes:
        if n not in kept_n and sum(1 for m in B.nodes if b.node_map[m] == b.node_map[n]) > 1:
            return None
    for e in B.edges:
        if e not in kept_e and sum(1 for d in B.edges if b.edge_map[d] == b.edge_map[e]) > 1:
            return None
    xn = {n: C.labels[n] for n in C.nodes if n not in del_n}
    xe = {}
    for e in C.edges:
        if e in del_e:
            continue
        if C.src[e] in del_n or C.tgt[e] in del_n:
            return None  # dangling edge
        xe[e] = (C.src[e], C.tgt[e])
    X = Graph(xn, xe)
    ab = compose(a, b)
    to_x = GraphMorphism(a.dom, X, ab.node_map, ab.edge_map, check=False)
    return to_x, GraphMorphism(X, C, {n: n for n in X.nodes}, {e: e for e in X.edges}, check=False)


def pullback(f: GraphMorphism, g: GraphMorphism) -> tuple[GraphMorphism, GraphMorphism]:
    """Pullback of the cospan B -f-> D <-g- C, returning the projections P->B, P->C."""
    if f.cod != g.cod:
        raise CodomainMismatch("pullback needs a cospan with a shared codomain")
    B, C = f.dom, g.dom
    npairs = [(x, y) for x in B.nodes for y in C.nodes if f.node_map[x] == g.node_map[y]]
    epairs = [(x, y) for x in B.edges for y in C.edges if f.edge_map[x] == g.edge_map[y]]

    def namer(pairs):
        if is_mono(g):
            return {p: p[0] for p in pairs}
        if is_mono(f):
            return {p: p[1] for p in pairs}
        return {p: f"p{i}" for i, p in enumerate(pairs)}

    nn = namer(npairs)
    en = namer(epairs)
    if not is_mono(g) and not is_mono(f):
        nn = {p: f"p{i}" for i, p in enumerate(npairs)}
        en = {p: f"q{i}" for i, p in enumerate(epairs)}
    P = Graph(
        {nn[p]: B.labels[p[0]] for p in npairs},
        {en[(x, y)]: (nn[(B.src[x], C.src[y])], nn[(B.tgt[x], C.tgt[y])]) for (x, y) in epairs},
    )
    pb = GraphMorphism(P, B, {nn[p]: p[0] for p in npairs}, {en[p]: p[0] for p in epairs}, check=False)
    pc = GraphMorphism(P, C, {nn[p]: p[1] for p in npairs}, {en[p]: p[1] for p in epairs}, check=False)
    return pb, pc


def _partial_injections(xs, ys, compatible):
    """All partial injections xs -> ys (as dicts) allowed by ``compatible``."""
    out = []

    def rec(i, cur, used):
        if i == len(xs):
            out.append(dict(cur))
            return
        x = xs[i]
        rec(i + 1, cur, used)
        for y in ys:
            if y not in used and compatible(x, y):
                cur[x] = y
                used.add(y)
                rec(i + 1, cur, used)
                used.discard(y)
                del cur[x]

    rec(0, {}, set())
    return out


def jointly_epi_mono_squares(f: GraphMorphism, g: GraphMorphism
                             ) -> list[tuple[GraphMorphism, GraphMorphism]]:
    """All jointly surjective mono squares closing the mono span B <-f- A -g-> C.

    E keeps B's identifiers; the C-only part that is not glued onto B keeps
    C's identifiers when they are free.  Squares with more identifications
    come first.  Each distinct identification pattern
    gives one isomorphism class, so no further deduplication is needed.
    """
    if f.dom != g.dom:
        raise DomainMismatch("squares need a span with a shared domain")
    if not (is_mono(f) and is_mono(g)):
        raise NotMono("jointly epi squares are only enumerated for mono spans")
    A, B, C = f.dom, f.cod, g.cod
    ginv_n = {g.node_map[a]: f.node_map[a] for a in A.nodes}
    ginv_e = {g.edge_map[a]: f.edge_map[a] for a in A.edges}
    b_new_n = [n for n in B.nodes if n not in set(f.node_map.values())]
    c_new_n = [n for n in C.nodes if n not in ginv_n]
    b_new_e = [e for e in B.edges if e not in set(f.edge_map.values())]
    c_new_e = [e for e in C.edges if e not in ginv_e]
    results = []
    node_matchings = _partial_injections(
        c_new_n, b_new_n, lambda c, b: C.labels[c] == B.labels[b])
    for nmatch in node_matchings:
        taken = set(B.nodes)
        cmap = dict(ginv_n)
        cmap.update(nmatch)
        new_nodes = {}
        for c in c_new_n:
            if c not in nmatch:
                name = fresh_name(c, taken)
                taken.add(name)
                cmap[c] = name
                new_nodes[name] = C.labels[c]

        def ecompat(ce, be):
            return cmap[C.src[ce]] == B.src[be] and cmap[C.tgt[ce]] == B.tgt[be]

        for ematch in _partial_injections(c_new_e, b_new_e, ecompat):
            labels = dict(B.labels)
            labels.update(new_nodes)
            edges = {e: (B.src[e], B.tgt[e]) for e in B.edges}
            emap = dict(ginv_e)
            emap.update(ematch)
            for ce in c_new_e:
                if ce not in ematch:
                    s, t = cmap[C.src[ce]], cmap[C.tgt[ce]]
                    name = edge_name(s, t, edges)
                    edges[name] = (s, t)
                    emap[ce] = name
            E = Graph(labels, edges)
            b1 = GraphMorphism(B, E, {n: n for n in B.nodes}, {e: e for e in B.edges}, check=False)
            b2 = GraphMorphism(C, E, {n: cmap[n] for n in C.nodes}, emap, check=False)
            results.append((len(nmatch) + len(ematch), len(results), (b1, b2)))
    results.sort(key=lambda r: (-r[0], r[1]))
    return [r[2] for r in results]


# --- canonical labeling ------------------------------------------------------------

def canonical_key(G: Graph, node_colors: Optional[Mapping] = None,
                  edge_colors: Optional[Mapping] = None) -> bytes:
    """A complete isomorphism invariant of G (optionally of G with colored items).

    Colour refinement plus individualisation, pruning interchangeable twins.
    """
    if node_colors is None and edge_colors is None and G._key is not None:
        return G._key
    nodes = G.nodes
    n = len(nodes)
    idx = {v: i for i, v in enumerate(nodes)}
    base = [repr((G.labels[v], node_colors.get(v) if node_colors else None)) for v in nodes]
    out = [[] for _ in range(n)]
    inn = [[] for _ in range(n)]
    adj: dict = {}
    edge_list = []
    for e in G.edges:
        s, t = idx[G.src[e]], idx[G.tgt[e]]
        c = repr(edge_colors.get(e)) if edge_colors else ""
        out[s].append((t, c))
        inn[t].append((s, c))
        adj.setdefault((s, t), []).append(c)
        edge_list.append((s, t, c))
    adj = {k: tuple(sorted(v)) for k, v in adj.items()}
    ranks = {b: i for i, b in enumerate(sorted(set(base)))}
    start = [ranks[b] for b in base]

    def refine(col):
        while True:
            sigs = [
                (col[v], tuple(sorted((col[w], c) for w, c in out[v])),
                 tuple(sorted((col[w], c) for w, c in inn[v])))
                for v in range(n)
            ]
            uniq = sorted(set(sigs))
            m = {s: i for i, s in enumerate(uniq)}
            new = [m[s] for s in sigs]
            if len(uniq) == len(set(col)):
                return new
            col = new

    def twins(u, v):
        if base[u] != base[v]:
            return False
        if adj.get((u, u), ()) != adj.get((v, v), ()) or adj.get((u, v), ()) != adj.get((v, u), ()):
            return False
        for w in range(n):
            if w in (u, v):
                continue
            if adj.get((u, w), ()) != adj.get((v, w), ()) or adj.get((w, u), ()) != adj.get((w, v), ()):
                return False
        return True

    best = [None]

    def search(col):
        col = refine(col)
        counts: dict = {}
        for c in col:
            counts[c] = counts.get(c, 0) + 1
        multi = [c for c, k in counts.items() if k > 1]
        if not multi:
            labels = [None] * n
            for v in range(n):
                labels[col[v]] = base[v]
            enc = (tuple(labels), tuple(sorted((col[s], col[t], c) for s, t, c in edge_list)))
            if best[0] is None or enc < best[0]:
                best[0] = enc
            return
        target = min(multi)
        cell = [v for v in range(n) if col[v] == target]
        reps = []
        for v in cell:
            if not any(twins(v, r) for r in reps):
                reps.append(v)
        for v in reps:
            new = [2 * c + 1 for c in col]
            new[v] = 2 * target
            search(new)

    search(start)
    key = repr((n, len(edge_list), best[0])).encode()
    if node_colors is None and edge_colors is None:
        G._key = key
    return key


def marked_key(G: Graph, legs) -> bytes:
    """Canonical key of G with every item coloured by its preimages under ``legs``.

    Two such keys agree iff there is an iso of the codomains commuting with
    all the legs (the legs must have the same domains on both sides).
    """
    ncol: dict = {n: [] for n in G.nodes}
    ecol: dict = {e: [] for e in G.edges}
    for i, leg in enumerate(legs):
        for a, b in leg.node_map.items():
            ncol[b].append((i, a))
        for a, b in leg.edge_map.items():
            ecol[b].append((i, a))
    ncol = {k: tuple(sorted(v)) for k, v in ncol.items()}
    ecol = {k: tuple(sorted(v)) for k, v in ecol.items()}
    return canonical_key(G, ncol, ecol)


def subgraphs(G: Graph, max_removed: Optional[int] = None) -> list[Graph]:
    """All subgraphs of G, ordered by the number of removed items, then canonically."""
    from itertools import combinations

    found = []
    nodes = G.nodes
    for k in range(len(nodes) + 1):
        for drop in combinations(nodes, k):
            dropped = set(drop)
            forced = [e for e in G.edges if G.src[e] in dropped or G.tgt[e] in dropped]
            optional = [e for e in G.edges if e not in set(forced)]
            for j in range(len(optional) + 1):
                for extra in combinations(optional, j):
                    removed = k + len(forced) + j
                    if max_removed is not None and removed > max_removed:
                        continue
                    gone = set(forced) | set(extra)
                    sub = Graph({n: G.labels[n] for n in nodes if n not in dropped},
                                {e: (G.src[e], G.tgt[e]) for e in G.edges if e not in gone})
                    found.append((removed, len(found), sub))
    found.sort(key=lambda x: (x[0], x[1]))
    return [s for _, _, s in found]
