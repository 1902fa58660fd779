"""The category interface the tableau engine is written against, and its four backends."""

from __future__ import annotations

from itertools import permutations
from typing import Iterable, Optional

from . import cospan as cs
from . import graphs as gr
from . import lawvere as lw
from .errors import BackendMismatch, ConfigError, DomainMismatch, NotIso
from .graphs import GraphMorphism, MorphismClass

BACKENDS = ("inj-graphs", "all-graphs", "cospan-ilc", "lawvere")


class Category:
    """Base class for backends.  Subclasses provide the primitive operations;
    the iso shortcut for representative squares is applied here, uniformly."""

    name = "abstract"
    sections_are_isos = True

    def __init__(self):
        self._square_cache: dict = {}

    # primitive operations -------------------------------------------------
    def check(self, f) -> None:
        raise NotImplementedError

    def dom(self, f):
        raise NotImplementedError

    def cod(self, f):
        raise NotImplementedError

    def compose(self, f, g):
        raise NotImplementedError

    def identity(self, X):
        raise NotImplementedError

    def classify(self, f) -> MorphismClass:
        raise NotImplementedError

    def is_iso(self, f) -> bool:
        return self.classify(f).iso

    def invert(self, f):
        raise NotImplementedError

    def sections_with_inverses(self, f) -> list:
        raise NotImplementedError

    def arrows_equal(self, f, g) -> bool:
        self.check(f)
        self.check(g)
        return f == g

    def object_iso(self, X, Y):
        raise NotImplementedError

    def _squares(self, a1, a2) -> list:
        raise NotImplementedError

    # oracle support -----------------------------------------------------------
    def factorizations(self, total, prefix) -> list:
        """All h with prefix;h = total."""
        raise NotImplementedError

    def iso_factorizations(self, total, prefix) -> list:
        """All isos h with prefix;h = total."""
        raise NotImplementedError

    def isos(self, X, Y) -> Iterable:
        raise NotImplementedError

    # derived operations ---------------------------------------------------------
    def right_inverses(self, f) -> list:
        return self.sections_with_inverses(f)

    def is_section(self, f) -> bool:
        return self.is_iso(f) or bool(self.sections_with_inverses(f))

    def is_identity(self, f) -> bool:
        return self.dom(f) == self.cod(f) and self.arrows_equal(f, self.identity(self.dom(f)))

    def representative_squares(self, a1, a2) -> list:
        """The finite set kappa(a1, a2) of pairs (b1, b2) with a1;b1 = a2;b2."""
        self.check(a1)
        self.check(a2)
        if self.dom(a1) != self.dom(a2):
            raise DomainMismatch("representative squares need a span with a shared domain")
        key = (a1, a2)
        hit = self._square_cache.get(key)
        if hit is not None:
            return hit
        if self.is_iso(a1):
            res = [(self.compose(self.invert(a1), a2), self.identity(self.cod(a2)))]
        elif self.is_iso(a2):
            res = [(self.identity(self.cod(a1)), self.compose(self.invert(a2), a1))]
        else:
            res = self._squares(a1, a2)
        if len(self._square_cache) > 200_000:
            self._square_cache.clear()
        self._square_cache[key] = res
        return res

    def __repr__(self):
        return f"<category {self.name}>"


class _GraphCategory(Category):
    def check(self, f):
        if not isinstance(f, GraphMorphism):
            raise BackendMismatch(f"{self.name} expects graph morphisms, got {type(f).__name__}")

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def compose(self, f, g):
        return gr.compose(f, g)

    def identity(self, X):
        return gr.identity(X)

    def is_iso(self, f):
        return gr.is_iso(f)

    def invert(self, f):
        return gr.invert(f)

    def object_iso(self, X, Y):
        return gr.find_iso(X, Y)

    def iso_factorizations(self, total, prefix):
        return gr.iso_factorizations(total, prefix)

    def isos(self, X, Y):
        return gr.isos(X, Y)


class InjGraphs(_GraphCategory):
    """Finite graphs with injective morphisms; sections are exactly the isos."""

    name = "inj-graphs"
    sections_are_isos = True

    def check(self, f):
        super().check(f)
        if not gr.is_mono(f):
            raise BackendMismatch("inj-graphs only admits injective morphisms")

    def classify(self, f):
        iso = gr.is_iso(f)
        return MorphismClass(mono=True, epi=gr.is_epi(f), iso=iso, section=iso)

    def sections_with_inverses(self, f):
        self.check(f)
        return [gr.invert(f)] if gr.is_iso(f) else []

    def _squares(self, a1, a2):
        # built from a2's side so that E keeps the names of cod(a2)
        return [(x, y) for y, x in gr.jointly_epi_mono_squares(a2, a1)]

    def factorizations(self, total, prefix):
        return gr.factorizations(total, prefix, mono_only=True)


class AllGraphs(_GraphCategory):
    """Finite graphs with all morphisms; representative squares are pushouts."""

    name = "all-graphs"
    sections_are_isos = False

    def classify(self, f):
        return gr.classify(f)

    def sections_with_inverses(self, f):
        self.check(f)
        return gr.right_inverses(f)

    def _squares(self, a1, a2):
        y, x = gr.pushout(a2, a1)
        return [(x, y)]

    def factorizations(self, total, prefix):
        return gr.factorizations(total, prefix)


class CospanILC(Category):
    """Cospans of injective graph morphisms; representative squares are borrowed contexts.

    MorphismClass for cospans only reports iso-ness: mono, epi and section are
    set equal to iso (sections are isos in this category).
    """

    name = "cospan-ilc"
    sections_are_isos = True

    def check(self, f):
        if not isinstance(f, cs.Cospan):
            raise BackendMismatch(f"cospan-ilc expects cospans, got {type(f).__name__}")
        if not (gr.is_mono(f.left) and gr.is_mono(f.right)):
            raise BackendMismatch("cospan-ilc only admits cospans with mono legs")

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def compose(self, f, g):
        return cs.compose(f, g)

    def identity(self, X):
        return cs.identity(X)

    def is_iso(self, f):
        return cs.is_iso(f)

    def is_identity(self, f):
        return cs.is_identity(f)

    def classify(self, f):
        iso = cs.is_iso(f)
        return MorphismClass(mono=iso, epi=iso, iso=iso, section=iso)

    def invert(self, f):
        if not cs.is_iso(f):
            raise NotIso("cospan is not an isomorphism")
        return cs.invert(f)

    def sections_with_inverses(self, f):
        self.check(f)
        return [cs.invert(f)] if cs.is_iso(f) else []

    def object_iso(self, X, Y):
        phi = gr.find_iso(X, Y)
        return None if phi is None else cs.embed(phi)

    def _squares(self, a1, a2):
        return cs.borrowed_context_squares(a1, a2)

    def factorizations(self, total, prefix):
        return cs.factorizations(total, prefix)

    def iso_factorizations(self, total, prefix):
        return cs.iso_factorizations(total, prefix)

    def isos(self, X, Y):
        return (cs.embed(phi) for phi in gr.isos(X, Y))


class Lawvere(Category):
    """The Lawvere theory of a signature: objects are naturals, arrows term tuples."""

    name = "lawvere"
    sections_are_isos = False

    def __init__(self, signature: Optional[lw.Signature] = None):
        super().__init__()
        self.signature = signature or lw.Signature({})

    def check(self, f):
        if not isinstance(f, lw.TermTuple):
            raise BackendMismatch(f"lawvere expects term tuples, got {type(f).__name__}")

    def dom(self, f):
        return f.dom

    def cod(self, f):
        return f.cod

    def compose(self, f, g):
        return lw.compose_tuples(f, g)

    def identity(self, X):
        return lw.identity_tuple(X)

    def is_iso(self, f):
        return lw.is_iso_tuple(f)

    def classify(self, f):
        return lw.classify_tuple(f)

    def invert(self, f):
        if not lw.is_iso_tuple(f):
            raise NotIso("term tuple is not a permutation of variables")
        return lw.invert_tuple(f)

    def sections_with_inverses(self, f):
        self.check(f)
        return lw.right_inverses_tuple(f)

    def object_iso(self, X, Y):
        return lw.identity_tuple(X) if X == Y else None

    def _squares(self, a1, a2):
        return [lw.weak_pushout(a1, a2)]

    def factorizations(self, total, prefix):
        return lw.term_factorizations(total, prefix)

    def iso_factorizations(self, total, prefix):
        return [h for h in lw.term_factorizations(total, prefix) if lw.is_iso_tuple(h)]

    def isos(self, X, Y):
        if X != Y:
            return iter(())
        return (lw.TermTuple(X, tuple(lw.Var(i) for i in p)) for p in permutations(range(1, X + 1)))


def make_category(name: str, signature: Optional[lw.Signature] = None) -> Category:
    if name == "inj-graphs":
        return InjGraphs()
    if name == "all-graphs":
        return AllGraphs()
    if name == "cospan-ilc":
        return CospanILC()
    if name == "lawvere":
        return Lawvere(signature)
    raise ConfigError(f"unknown category {name!r}; expected one of {', '.join(BACKENDS)}")


def sections_with_inverses(b: Category, f) -> list:
    return b.sections_with_inverses(f)


def representative_squares(b: Category, a1, a2) -> list:
    return b.representative_squares(a1, a2)


def arrows_equal(b: Category, f, g) -> bool:
    return b.arrows_equal(f, g)
