"""Nested conditions: shift, the finite-model satisfaction oracle, condition
isomorphism, weight and the two pull-forward transformations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import (DomainMismatch, IllFormed, NotAlternating, NotIso, NotRightInverse,
                     NotUniversal)

FORALL = "forall"
EXISTS = "exists"


@dataclass(frozen=True)
class Condition:
    """A universal (conjunction of ``forall f.A``) or existential (disjunction of
    ``exists f.A``) node.  ``children`` is a tuple of (arrow, sub) pairs."""

    kind: str
    root: object
    children: tuple = ()

    def __post_init__(self):
        if self.kind not in (FORALL, EXISTS):
            raise ValueError(f"unknown condition kind {self.kind!r}")

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((self.kind, self.root, self.children))
            object.__setattr__(self, "_h", h)
        return h

    @property
    def is_universal(self) -> bool:
        return self.kind == FORALL

    @property
    def is_existential(self) -> bool:
        return self.kind == EXISTS

    def is_true(self) -> bool:
        return self.kind == FORALL and not self.children

    def is_false(self) -> bool:
        return self.kind == EXISTS and not self.children


def true(root) -> Condition:
    return Condition(FORALL, root, ())


def false(root) -> Condition:
    return Condition(EXISTS, root, ())


def forall(root, *children) -> Condition:
    return Condition(FORALL, root, tuple(children))


def exists(root, *children) -> Condition:
    return Condition(EXISTS, root, tuple(children))


def conjoin(root, *conds: Condition) -> Condition:
    """Merge universal conditions over the same root into one conjunction."""
    kids = []
    for c in conds:
        if c.kind != FORALL:
            raise NotUniversal("only universal conditions can be merged into a conjunction")
        kids.extend(c.children)
    return Condition(FORALL, root, tuple(kids))


def validate(A: Condition, cat, path=()) -> None:
    for i, (f, sub) in enumerate(A.children):
        here = path + (i,)
        try:
            cat.check(f)
        except Exception as exc:
            raise IllFormed(here, str(exc)) from None
        if cat.dom(f) != A.root:
            raise IllFormed(here, "child arrow's domain differs from the parent root")
        if cat.cod(f) != sub.root:
            raise IllFormed(here, "sub-condition root differs from the arrow's codomain")
        validate(sub, cat, here)


def is_alternating(A: Condition) -> bool:
    return all(sub.kind != A.kind and is_alternating(sub) for _, sub in A.children)


def make_alternating(A: Condition, cat) -> Condition:
    """Insert id-quantifiers only where two levels of the same kind meet."""
    kids = []
    for f, sub in A.children:
        sub = make_alternating(sub, cat)
        if sub.kind == A.kind:
            other = EXISTS if A.kind == FORALL else FORALL
            sub = Condition(other, sub.root, ((cat.identity(sub.root), sub),))
        kids.append((f, sub))
    return Condition(A.kind, A.root, tuple(kids))


def weight(A: Condition) -> int:
    return 1 + sum(weight(sub) for _, sub in A.children)


def depth(A: Condition) -> int:
    return 1 + max((depth(sub) for _, sub in A.children), default=0)


# --- shift ----------------------------------------------------------------------

_CACHES: dict = {}


def _cache_for(cat) -> dict:
    c = _CACHES.get(id(cat))
    if c is None or c[0] is not cat:
        c = (cat, {})
        _CACHES[id(cat)] = c
    return c[1]


def shift_child(f, sub: Condition, c, cat) -> list:
    """Shift a single child (f, sub) along c: a list of (alpha, beta, sub shifted along alpha)."""
    return [(alpha, beta, shift(sub, alpha, cat)) for alpha, beta in cat.representative_squares(f, c)]


def shift(A: Condition, c, cat) -> Condition:
    """The condition A shifted along c, rooted at cod(c)."""
    if cat.dom(c) != A.root:
        raise DomainMismatch("shift arrow must start at the condition's root")
    if not A.children:
        return Condition(A.kind, cat.cod(c), ())
    cache = _cache_for(cat)
    key = (A, c)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if cat.is_identity(c):
        res = A
    else:
        kids = []
        for f, sub in A.children:
            for alpha, beta in cat.representative_squares(f, c):
                kids.append((beta, shift(sub, alpha, cat)))
        res = Condition(A.kind, cat.cod(c), tuple(kids))
    if len(cache) > 100_000:
        cache.clear()
    cache[key] = res
    return res


# --- satisfaction oracle ---------------------------------------------------------------

def compose_all(arrows: Sequence, cat, root=None):
    if not arrows:
        return cat.identity(root)
    acc = arrows[0]
    for a in arrows[1:]:
        acc = cat.compose(acc, a)
    return acc


def satisfies(model: Sequence, A: Condition, cat) -> bool:
    """Does the finite sequence ``model`` (read as [a1,...,ak,id,id,...]) satisfy A?"""
    model = list(model)
    if model and cat.dom(model[0]) != A.root:
        raise DomainMismatch("model must start at the condition's root")
    return _sat(tuple(model), A, cat)


def _sat(model: tuple, A: Condition, cat) -> bool:
    prefixes = [cat.identity(A.root)]
    for a in model:
        prefixes.append(cat.compose(prefixes[-1], a) if len(prefixes) > 1 else a)
    for f, sub in A.children:
        for n, prefix in enumerate(prefixes):
            rest = model[n:]
            for g in cat.factorizations(prefix, f):
                ok = _sat((g,) + rest, sub, cat)
                if A.kind == FORALL and not ok:
                    return False
                if A.kind == EXISTS and ok:
                    return True
    return A.kind == FORALL


# --- isomorphism ---------------------------------------------------------------------

def condition_iso(A: Condition, B: Condition, cat):
    """An iso h: RO(B) -> RO(A) witnessing A ~ B, or None."""
    if A.kind != B.kind:
        return None
    memo: dict = {}
    for h in cat.isos(B.root, A.root):
        if _iso_wrt(A, B, h, cat, memo):
            return h
    return None


def iso_wrt(A: Condition, B: Condition, h, cat) -> bool:
    """Is A isomorphic to B via the given iso h: RO(B) -> RO(A)?"""
    return _iso_wrt(A, B, h, cat, {})


def _iso_wrt(A, B, h, cat, memo) -> bool:
    if A.kind != B.kind or len(A.children) != len(B.children) and not (A.children and B.children):
        return False
    key = (id(A), id(B), h)
    if key in memo:
        return memo[key]
    memo[key] = False
    ok = _covers(A, B, h, cat, memo, flip=False) and _covers(B, A, cat.invert(h), cat, memo, flip=True)
    memo[key] = ok
    return ok


def _covers(A, B, h, cat, memo, flip) -> bool:
    """Every child of A is matched by some child of B.  h: RO(B) -> RO(A)."""
    for f, asub in A.children:
        total = cat.compose(h, f)
        matched = False
        for g, bsub in B.children:
            if asub.kind != bsub.kind:
                continue
            if bool(asub.children) != bool(bsub.children):
                continue
            for hji in cat.iso_factorizations(total, g):
                if flip:
                    ok = _iso_wrt(bsub, asub, cat.invert(hji), cat, memo)
                else:
                    ok = _iso_wrt(asub, bsub, hji, cat, memo)
                if ok:
                    matched = True
                    break
            if matched:
                break
        if not matched:
            return False
    return True


# --- pull forward ---------------------------------------------------------------------

def pull_forward_iso(A: Condition, p: int, cat):
    """Pull the iso child p of the universal condition A forward.

    Returns (f_p, D) with D = OR_j exists g_j.(B_j AND (rest shifted along f_p;g_j)).
    """
    D, _ = pull_forward_iso_traced(A, p, cat)
    return A.children[p][0], D


def pull_forward_iso_traced(A: Condition, p: int, cat):
    """As pull_forward_iso, also returning per disjunct the lineage of its children.

    The lineage of disjunct j is a list of (origin, alpha) aligned with the
    children of its universal condition: origin is None for children of B_j and
    the index in A otherwise; alpha is the first leg of the square used.
    The returned D carries the edge arrows f_p;g_j in the third slot.
    """
    if A.kind != FORALL:
        raise NotUniversal("pull forward needs a universal condition")
    fp, Ap = A.children[p]
    if not cat.is_iso(fp):
        raise NotIso("the pulled child's arrow is not an isomorphism")
    if Ap.kind != EXISTS:
        raise NotAlternating("the pulled child's sub-condition is not existential")
    disjuncts = []
    lineage = []
    for gj, Bj in Ap.children:
        if Bj.kind != FORALL:
            raise NotAlternating("existential child is not followed by a universal")
        h = cat.compose(fp, gj)
        kids = list(Bj.children)
        lin = [(None, None)] * len(kids)
        for m, (fm, Am) in enumerate(A.children):
            if m == p:
                continue
            for alpha, beta, shifted in shift_child(fm, Am, h, cat):
                kids.append((beta, shifted))
                lin.append((m, alpha))
        disjuncts.append((gj, Condition(FORALL, cat.cod(gj), tuple(kids))))
        lineage.append((h, lin))
    return Condition(EXISTS, cat.cod(fp), tuple(disjuncts)), lineage


def pull_forward_section(A: Condition, p: int, r, cat) -> Condition:
    """Pull the section child p forward using its right-inverse r."""
    return pull_forward_section_traced(A, p, r, cat)[0]


def pull_forward_section_traced(A: Condition, p: int, r, cat):
    if A.kind != FORALL:
        raise NotUniversal("pull forward needs a universal condition")
    fp, Ap = A.children[p]
    if not cat.arrows_equal(cat.compose(fp, r), cat.identity(A.root)):
        raise NotRightInverse("f_p;r_p is not the identity")
    if Ap.kind != EXISTS:
        raise NotAlternating("the pulled child's sub-condition is not existential")
    S = shift(Ap, r, cat)
    disjuncts = []
    lineage = []
    for hj, Hj in S.children:
        if Hj.kind != FORALL:
            raise NotAlternating("existential child is not followed by a universal")
        kids = list(Hj.children)
        lin = [(None, None)] * len(kids)
        for m, (fm, Am) in enumerate(A.children):
            for alpha, beta, shifted in shift_child(fm, Am, hj, cat):
                kids.append((beta, shifted))
                lin.append((m, alpha))
        disjuncts.append((hj, Condition(FORALL, cat.cod(hj), tuple(kids))))
        lineage.append((hj, lin))
    return Condition(EXISTS, A.root, tuple(disjuncts)), lineage


def condition_key(A: Condition, cat) -> tuple:
    """A structural key used to spot repeated conditions in traces."""
    try:
        from .graphs import Graph, canonical_key
        root = canonical_key(A.root) if isinstance(A.root, Graph) else repr(A.root)
    except Exception:
        root = repr(A.root)
    return (A.kind, root, tuple(sorted(repr(condition_key(sub, cat)) for _, sub in A.children)))
