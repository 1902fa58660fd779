"""Cospans of finite graphs, composed by pushout and compared up to center iso.

The category backend built on top of this module is ILC over injective graph
morphisms: both legs of every cospan are mono.  Its representative squares
are borrowed-context diagrams.
"""

from __future__ import annotations

from typing import Optional

from . import graphs as gr
from .errors import InterfaceMismatch, NotLeftLinear, NotMono
from .graphs import Graph, GraphMorphism


class Cospan:
    """A cospan dom -left-> center <-right- cod, identified up to center iso."""

    __slots__ = ("left", "right", "_key", "_hash")

    def __init__(self, left: GraphMorphism, right: GraphMorphism):
        if left.cod != right.cod:
            raise InterfaceMismatch("cospan legs must share their codomain")
        self.left = left
        self.right = right
        self._key = None
        self._hash = None

    @property
    def dom(self) -> Graph:
        return self.left.dom

    @property
    def cod(self) -> Graph:
        return self.right.dom

    @property
    def center(self) -> Graph:
        return self.left.cod

    @property
    def left_linear(self) -> bool:
        return gr.is_mono(self.left)

    def key(self) -> bytes:
        if self._key is None:
            self._key = gr.marked_key(self.center, (self.left, self.right))
        return self._key

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Cospan):
            return NotImplemented
        return self.dom == other.dom and self.cod == other.cod and self.key() == other.key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dom, self.cod, self.key()))
        return self._hash

    def __repr__(self):
        return f"Cospan({self.dom} -> {self.center} <- {self.cod})"


def identity(A: Graph) -> Cospan:
    i = gr.identity(A)
    return Cospan(i, i)


def embed(phi: GraphMorphism) -> Cospan:
    if not gr.is_mono(phi):
        raise NotMono("only injective morphisms embed into the left-linear backend")
    return Cospan(phi, gr.identity(phi.cod))


def compose(f: Cospan, g: Cospan) -> Cospan:
    if f.cod != g.dom:
        raise InterfaceMismatch("right interface of the first cospan differs from the left of the second")
    p1, p2 = gr.pushout(f.right, g.left)
    return Cospan(gr.compose(f.left, p1), gr.compose(g.right, p2))


def equal(f: Cospan, g: Cospan) -> bool:
    return f == g


def is_iso(f: Cospan) -> bool:
    return gr.is_iso(f.left) and gr.is_iso(f.right)


def invert(f: Cospan) -> Cospan:
    return Cospan(f.right, f.left)


def is_identity(f: Cospan) -> bool:
    return f.dom == f.cod and is_iso(f) and gr.compose(f.left, gr.invert(f.right)) == gr.identity(f.dom)


def _check_inj(f: Cospan):
    if not (gr.is_mono(f.left) and gr.is_mono(f.right)):
        raise NotLeftLinear("borrowed contexts are computed for cospans with mono legs only")


def borrowed_context_squares(ell: Cospan, a: Cospan) -> list[tuple[Cospan, Cospan]]:
    """Borrowed-context diagrams for ell: D -> I and a: D -> J.

    Returns pairs (c: I -> K, f: J -> K) with ell;c = a;f.
    """
    _check_inj(ell)
    _check_inj(a)
    if ell.dom != a.dom:
        raise InterfaceMismatch("borrowed contexts need cospans with a shared domain")
    out = []
    seen = set()
    for to_plus_l, to_plus_g in gr.jointly_epi_mono_squares(ell.left, a.left):
        c_side = gr.pushout_complement(ell.right, to_plus_l)
        if c_side is None:
            continue
        f_side = gr.pushout_complement(a.right, to_plus_g)
        if f_side is None:
            continue
        i_to_c, c_in = c_side
        j_to_f, f_in = f_side
        k_to_c, k_to_f = gr.pullback(c_in, f_in)
        c = Cospan(i_to_c, k_to_c)
        f = Cospan(j_to_f, k_to_f)
        sig = (c.key(), f.key(), k_to_c.dom)
        if sig in seen:
            continue
        seen.add(sig)
        out.append((c, f))
    return out


def factorizations(total: Cospan, prefix: Cospan) -> list[Cospan]:
    """All g with prefix;g = total, for cospans whose legs are all mono.

    The center of prefix;g is a union of the prefix center Y and g's center W
    glued along B, so once Y's embedding theta into the total center is fixed,
    W is forced to be everything outside theta(Y) plus theta(B).
    """
    _check_inj(total)
    _check_inj(prefix)
    if total.dom != prefix.dom:
        raise InterfaceMismatch("factorization needs a shared domain")
    X = total.center
    out = []
    seen = set()
    for theta in gr.factorizations(total.left, prefix.left, mono_only=True):
        img_n = theta.image_nodes()
        img_e = theta.image_edges()
        b_in_x = gr.compose(prefix.right, theta)
        keep_n = (set(X.nodes) - img_n) | b_in_x.image_nodes()
        keep_e = (set(X.edges) - img_e) | b_in_x.image_edges()
        if any(X.src[e] not in keep_n or X.tgt[e] not in keep_n for e in keep_e):
            continue
        if not (total.right.image_nodes() <= keep_n and total.right.image_edges() <= keep_e):
            continue
        W = Graph({n: X.labels[n] for n in keep_n}, {e: (X.src[e], X.tgt[e]) for e in keep_e})
        g = Cospan(GraphMorphism(prefix.cod, W, b_in_x.node_map, b_in_x.edge_map, check=False),
                   GraphMorphism(total.cod, W, total.right.node_map, total.right.edge_map, check=False))
        if g not in seen:
            seen.add(g)
            out.append(g)
    return out


def iso_factorizations(total: Cospan, prefix: Cospan) -> list[Cospan]:
    """All iso h with prefix;h = total, each in the normal form (id, chi)."""
    _check_inj(total)
    _check_inj(prefix)
    B, C = prefix.cod, total.cod
    if len(B.nodes) != len(C.nodes) or len(B.edges) != len(C.edges):
        return []
    Y, X = prefix.center, total.center
    if len(Y.nodes) != len(X.nodes) or len(Y.edges) != len(X.edges):
        return []
    out = []
    seen = set()
    for theta in gr.iso_factorizations(total.left, prefix.left):
        b_in_x = gr.compose(prefix.right, theta)
        back_n = {v: k for k, v in b_in_x.node_map.items()}
        back_e = {v: k for k, v in b_in_x.edge_map.items()}
        if set(back_n) != total.right.image_nodes() or set(back_e) != total.right.image_edges():
            continue
        chi = GraphMorphism(C, B, {c: back_n[x] for c, x in total.right.node_map.items()},
                            {c: back_e[x] for c, x in total.right.edge_map.items()}, check=False)
        if chi in seen:
            continue
        seen.add(chi)
        out.append(Cospan(gr.identity(B), chi))
    return out


def forgetting(R: Graph, S: Graph) -> Cospan:
    """The cospan R -id-> R <-incl- S that forgets the part of R outside S."""
    return Cospan(gr.identity(R), GraphMorphism(S, R, {n: n for n in S.nodes},
                                                 {e: e for e in S.edges}, check=False))


def forgetting_cospans(R: Graph, max_forget: Optional[int] = None) -> list[Cospan]:
    """Forgetting cospans over all subobjects of R, smallest forgotten part first."""
    return [forgetting(R, S) for S in gr.subgraphs(R, max_forget)]


def center_of_composite(arrows: list[Cospan]) -> Optional[Graph]:
    if not arrows:
        return None
    acc = arrows[0]
    for f in arrows[1:]:
        acc = compose(acc, f)
    return acc.center
