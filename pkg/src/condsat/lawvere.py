"""Lawvere theories of a one-sorted, non-equational signature.

Objects are naturals, an arrow n -> m is an m-tuple of terms over the
variables x1..xn, and composition is substitution.  Composition is written
diagrammatically: ``compose_tuples(s, t)`` substitutes s into t.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Mapping, Union

from .errors import ArityMismatch, NoMatchingProjection
from .graphs import MorphismClass


@dataclass(frozen=True)
class Var:
    i: int

    def __str__(self):
        return f"x{self.i}"


@dataclass(frozen=True)
class App:
    sym: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.sym
        return f"{self.sym}({', '.join(map(str, self.args))})"


Term = Union[Var, App]


def term_key(t: Term):
    """Term-lexicographic order: variables first (by index), then by symbol and arguments."""
    if isinstance(t, Var):
        return (0, t.i)
    return (1, t.sym, tuple(term_key(a) for a in t.args))


def variables(t: Term) -> set:
    if isinstance(t, Var):
        return {t.i}
    out: set = set()
    for a in t.args:
        out |= variables(a)
    return out


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def substitute(t: Term, sub: tuple) -> Term:
    """Replace x_i by sub[i-1]."""
    if isinstance(t, Var):
        return sub[t.i - 1]
    if not t.args:
        return t
    return App(t.sym, tuple(substitute(a, sub) for a in t.args))


@dataclass(frozen=True)
class Signature:
    arities: Mapping[str, int] = field(default_factory=dict)

    def __hash__(self):
        return hash(tuple(sorted(self.arities.items())))

    def check(self, t: Term, n: int):
        if isinstance(t, Var):
            if not 1 <= t.i <= n:
                raise ArityMismatch(f"variable x{t.i} outside x1..x{n}")
            return
        if t.sym in self.arities and self.arities[t.sym] != len(t.args):
            raise ArityMismatch(f"{t.sym} expects {self.arities[t.sym]} arguments")
        for a in t.args:
            self.check(a, n)

    def __str__(self):
        return "sig { " + ", ".join(f"{s}/{a}" for s, a in sorted(self.arities.items())) + " }"


@dataclass(frozen=True)
class TermTuple:
    """An arrow dom -> len(terms) of the Lawvere theory."""

    dom: int
    terms: tuple

    def __post_init__(self):
        for t in self.terms:
            if not variables(t) <= set(range(1, self.dom + 1)):
                raise ArityMismatch(f"term {t} uses variables outside x1..x{self.dom}")

    @property
    def cod(self) -> int:
        return len(self.terms)

    def __str__(self):
        return f"<{', '.join(map(str, self.terms))}> : {self.dom} -> {self.cod}"


def identity_tuple(n: int) -> TermTuple:
    return TermTuple(n, tuple(Var(i) for i in range(1, n + 1)))


def compose_tuples(s: TermTuple, t: TermTuple) -> TermTuple:
    """s;t for s: n -> k and t: k -> m, i.e. the substitution x_i := s_i applied to t."""
    if s.cod != t.dom:
        raise ArityMismatch(f"cannot compose {s} with {t}")
    return TermTuple(s.dom, tuple(substitute(u, s.terms) for u in t.terms))


@lru_cache(maxsize=200_000)
def factor_term(u: Term, s: TermTuple) -> tuple:
    """All terms e over x1..x_{cod s} with e[s] = u, in term order."""
    found = [Var(j) for j, sj in enumerate(s.terms, 1) if sj == u]
    if isinstance(u, App):
        options = [factor_term(a, s) for a in u.args]
        for combo in product(*options):
            found.append(App(u.sym, tuple(combo)))
    return tuple(sorted(set(found), key=term_key))


def term_factorizations(t: TermTuple, s: TermTuple) -> list[TermTuple]:
    """All f: cod(s) -> cod(t) with s;f = t (that is f o s = t)."""
    if t.dom != s.dom:
        raise ArityMismatch("factorization needs a shared domain arity")
    per_position = [factor_term(u, s) for u in t.terms]
    return [TermTuple(s.cod, tuple(combo)) for combo in product(*per_position)]


def weak_pushout(t: TermTuple, s: TermTuple) -> tuple[TermTuple, TermTuple]:
    """Weak pushout of n <-t- k -s-> m; returns (fbar: n -> z, gbar: m -> z)."""
    if t.dom != s.dom:
        raise ArityMismatch("weak pushout needs a shared domain arity")
    G = [factor_term(u, s) for u in t.terms]
    F = [factor_term(u, t) for u in s.terms]
    fbar = [Var(i) for i, gi in enumerate(G, 1) for _ in gi]
    fbar += [e for fj in F for e in fj]
    gbar = [e for gi in G for e in gi]
    gbar += [Var(j) for j, fj in enumerate(F, 1) for _ in fj]
    return TermTuple(t.cod, tuple(fbar)), TermTuple(s.cod, tuple(gbar))


def anti_unifier(c: Term, d: Term, fbar: TermTuple, gbar: TermTuple) -> Term:
    """A term e over the weak-pushout variables with e[fbar] = c and e[gbar] = d."""
    if isinstance(c, App) and isinstance(d, App) and c.sym == d.sym and len(c.args) == len(d.args):
        try:
            return App(c.sym, tuple(anti_unifier(a, b, fbar, gbar) for a, b in zip(c.args, d.args)))
        except NoMatchingProjection:
            pass
    for j, (fj, gj) in enumerate(zip(fbar.terms, gbar.terms), 1):
        if fj == c and gj == d:
            return Var(j)
    raise NoMatchingProjection(f"no weak-pushout position projects to ({c}, {d})")


def mediate(c: TermTuple, d: TermTuple, fbar: TermTuple, gbar: TermTuple) -> TermTuple:
    """The mediating arrow e: z -> p with fbar;e = c and gbar;e = d."""
    return TermTuple(fbar.cod, tuple(anti_unifier(u, v, fbar, gbar) for u, v in zip(c.terms, d.terms)))


def is_iso_tuple(t: TermTuple) -> bool:
    return (t.dom == t.cod and all(isinstance(u, Var) for u in t.terms)
            and len(set(t.terms)) == t.cod)


def invert_tuple(t: TermTuple) -> TermTuple:
    inv: list = [None] * t.cod
    for j, u in enumerate(t.terms, 1):
        inv[u.i - 1] = Var(j)
    return TermTuple(t.cod, tuple(inv))


def right_inverses_tuple(t: TermTuple) -> list[TermTuple]:
    """All r with t;r = id.  The structural recursion is exact, so no depth bound is needed."""
    return term_factorizations(identity_tuple(t.dom), t)


def classify_tuple(t: TermTuple) -> MorphismClass:
    iso = is_iso_tuple(t)
    used: set = set()
    for u in t.terms:
        used |= variables(u)
    mono = used == set(range(1, t.dom + 1))
    epi = all(factor_term(u, t) == (Var(j),) for j, u in enumerate(t.terms, 1))
    section = iso or bool(right_inverses_tuple(t))
    return MorphismClass(mono=mono, epi=epi, iso=iso, section=section)


def all_terms(n: int, sig: Signature, max_depth: int) -> list[Term]:
    """Every term over x1..xn of depth at most max_depth (for brute-force checks)."""
    layers = [Var(i) for i in range(1, n + 1)]
    layers += [App(s) for s, a in sorted(sig.arities.items()) if a == 0]
    terms = set(layers)
    for _ in range(max_depth):
        new = set(terms)
        for s, a in sorted(sig.arities.items()):
            if a == 0:
                continue
            for args in product(sorted(terms, key=term_key), repeat=a):
                new.add(App(s, args))
        terms = new
    return sorted(terms, key=term_key)

