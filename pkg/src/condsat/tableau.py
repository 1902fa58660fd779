"""Tableau construction, fairness bookkeeping and the satisfiability run loop.

Restricted mode pulls isomorphisms forward and is meant for categories where
every section is an iso.  General mode pulls sections forward together with
a chosen right-inverse, and still uses the iso rule where an iso is available.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from . import condition as cd
from .condition import EXISTS, FORALL, Condition
from .errors import BranchNotTerminal, ConfigError, EmptyExistential, NotUniversal

RESTRICTED = "restricted"
GENERAL = "general"


@dataclass
class Config:
    mode: str = RESTRICTED
    max_steps: int = 10_000
    witness: bool = False
    max_forget: int = 4
    max_witness_pairs: int = 256
    # general mode prefers isos, but a waiting section pair is served after this many iso pulls
    iso_streak: int = 8


@dataclass
class TableauNode:
    id: int
    condition: Condition
    incoming: object = None
    parent: Optional[int] = None
    depth: int = 0
    queue: Optional[list] = None
    origins: Optional[tuple] = None
    pulled: Optional[int] = None
    rule: Optional[str] = None
    inverse: object = None
    pulled_entry: object = None
    streak: int = 0
    children: list = field(default_factory=list)
    status: str = "open"
    stash: Optional[list] = None


@dataclass
class Unsat:
    steps: int
    tableau: "Tableau"
    closed_branches: int
    verdict: str = "unsat"


@dataclass
class Model:
    steps: int
    tableau: "Tableau"
    model: list
    leaf: int
    verdict: str = "sat"

    @property
    def condition(self) -> Condition:
        return self.tableau.nodes[self.leaf].condition


@dataclass
class Witness:
    steps: int
    tableau: "Tableau"
    candidate: object
    verdict: str = "witness"


@dataclass
class Unknown:
    steps: int
    tableau: "Tableau"
    frontier: list
    reason: str = "max_steps"
    verdict: str = "unknown"


class Tableau:
    def __init__(self, A: Condition, cat, cfg: Optional[Config] = None):
        self.cfg = cfg or Config()
        if self.cfg.mode not in (RESTRICTED, GENERAL):
            raise ConfigError(f"unknown mode {self.cfg.mode!r}")
        if self.cfg.mode == RESTRICTED and not cat.sections_are_isos:
            raise ConfigError(
                f"restricted mode needs a category whose sections are isos; {cat.name} has "
                "non-iso sections, use general mode")
        self.cat = cat
        cd.validate(A, cat)
        self.source = A
        A = cd.make_alternating(A, cat)
        self.nodes: dict[int, TableauNode] = {}
        self.root = self._new(A, None, None)
        if A.kind == FORALL:
            self.root.queue = self._fresh_queue(A)
        self.witness_truncated = False

    # bookkeeping ---------------------------------------------------------------
    def _new(self, cond, incoming, parent) -> TableauNode:
        nid = len(self.nodes)
        depth = 0 if parent is None else parent.depth + 1
        node = TableauNode(nid, cond, incoming, None if parent is None else parent.id, depth)
        self.nodes[nid] = node
        if parent is not None:
            parent.children.append(nid)
        return node

    def branch(self, node_id: int) -> list[TableauNode]:
        out = []
        node = self.nodes[node_id]
        while True:
            out.append(node)
            if node.parent is None:
                break
            node = self.nodes[node.parent]
        return out[::-1]

    def leaves(self) -> list[TableauNode]:
        return [n for n in self.nodes.values() if not n.children]

    def _fresh_queue(self, A: Condition) -> list:
        cat = self.cat
        if self.cfg.mode == RESTRICTED:
            return [k for k, (f, _) in enumerate(A.children) if cat.is_iso(f)]
        return [(k, r) for k, (f, _) in enumerate(A.children) for r in self._inverses(f)]

    def _inverses(self, f) -> list:
        if self.cat.is_iso(f):
            return [self.cat.invert(f)]
        return self.cat.sections_with_inverses(f)

    def is_extendable(self, node: TableauNode) -> bool:
        A = node.condition
        if A.kind == EXISTS:
            return bool(A.children)
        if self.cfg.mode == RESTRICTED:
            return any(self.cat.is_iso(f) for f, _ in A.children)
        return any(self.cat.is_section(f) for f, _ in A.children)

    # expansion -------------------------------------------------------------------
    def expand_existential(self, node: TableauNode) -> list[TableauNode]:
        A = node.condition
        if A.kind != EXISTS:
            raise NotUniversal("expand_existential needs an existential node")
        if not A.children:
            raise EmptyExistential("false cannot be expanded; the branch is closed")
        out = []
        for j, (g, sub) in enumerate(A.children):
            child = self._new(sub, g, node)
            if sub.kind == FORALL:
                if node.stash is None:
                    child.queue = self._fresh_queue(sub)
                else:
                    self._inherit_queue(child, node.stash[j], node)
            out.append(child)
        node.status = "expanded"
        return out

    def _inherit_queue(self, child: TableauNode, stash, enode: TableauNode) -> None:
        h, lin = stash
        parent = self.nodes[enode.parent]
        child.origins = tuple(o for o, _ in lin)
        child.streak = parent.streak
        cat = self.cat
        kids = child.condition.children
        if self.cfg.mode == RESTRICTED:
            queue = []
            for q in parent.queue:
                if q == parent.pulled:
                    continue
                for k, o in enumerate(child.origins):
                    if o == q and cat.is_iso(kids[k][0]) and k not in queue:
                        queue.append(k)
            for k, (f, _) in enumerate(kids):
                if k not in queue and cat.is_iso(f):
                    queue.append(k)
            child.queue = queue
            return
        pulled = parent.pulled_entry
        order = [e for e in parent.queue if e != pulled and not (parent.rule == "iso" and e[0] == pulled[0])]
        if parent.rule == "section":
            order.append(pulled)
        queue: list = []
        seen: set = set()
        invs = [None] * len(kids)

        def inverses(k):
            if invs[k] is None:
                invs[k] = self._inverses(kids[k][0])
            return invs[k]

        def push(k):
            for r in inverses(k):
                if (k, r) not in seen:
                    seen.add((k, r))
                    queue.append((k, r))

        for (i, ri) in order:
            target = cat.compose(ri, h)
            for k, (o, alpha) in enumerate(lin):
                if o == i and any(cat.arrows_equal(cat.compose(alpha, r), target) for r in inverses(k)):
                    push(k)
        for k in range(len(kids)):
            push(k)
        child.queue = queue

    def _choose_general(self, node: TableauNode):
        q = node.queue
        if not q:
            return None
        isos = [e for e in q if self.cat.is_iso(node.condition.children[e[0]][0])]
        if isos and not (node.streak >= self.cfg.iso_streak and not self.cat.is_iso(
                node.condition.children[q[0][0]][0])):
            return isos[0]
        return q[0]

    def expand_universal(self, node: TableauNode) -> Optional[TableauNode]:
        A = node.condition
        if A.kind != FORALL:
            raise NotUniversal("expand_universal needs a universal node")
        cat = self.cat
        if self.cfg.mode == RESTRICTED:
            queue = node.queue if node.queue is not None else self._fresh_queue(A)
            node.queue = queue
            if not queue:
                return None
            p = queue[0]
            D, lineage = cd.pull_forward_iso_traced(A, p, cat)
            node.pulled, node.rule = p, "iso"
            enode = self._new(D, A.children[p][0], node)
            enode.stash = lineage
            node.status = "expanded"
            return enode
        if node.queue is None:
            node.queue = self._fresh_queue(A)
        entry = self._choose_general(node)
        if entry is None:
            return None
        p, r = entry
        node.pulled, node.inverse = p, r
        node.pulled_entry = entry
        fp = A.children[p][0]
        if cat.is_iso(fp) and A.children[p][1].kind == EXISTS:
            D, lineage = cd.pull_forward_iso_traced(A, p, cat)
            node.rule = "iso"
            enode = self._new(D, fp, node)
            streak = node.streak + 1
        else:
            D, lineage = cd.pull_forward_section_traced(A, p, r, cat)
            node.rule = "section"
            enode = self._new(D, cat.identity(A.root), node)
            streak = 0
        node.streak = streak
        enode.stash = lineage
        node.status = "expanded"
        return enode

    # verdicts ------------------------------------------------------------------------
    def extract_model(self, node_id: int) -> list:
        node = self.nodes[node_id]
        if node.condition.kind != FORALL or self.is_extendable(node):
            raise BranchNotTerminal("model extraction needs an open, unextendable universal leaf")
        return [n.incoming for n in self.branch(node_id)[1:]]

    def run(self):
        from .witness import detect_witness

        cfg = self.cfg
        frontier = deque([self.root])
        steps = 0
        closed = 0
        while frontier:
            node = frontier.popleft()
            A = node.condition
            if A.kind == EXISTS:
                if not A.children:
                    node.status = "closed"
                    closed += 1
                    continue
                if steps >= cfg.max_steps:
                    frontier.appendleft(node)
                    return Unknown(steps, self, [n.id for n in frontier])
                frontier.extend(self.expand_existential(node))
                steps += 1
                continue
            if not self.is_extendable(node):
                node.status = "model"
                return Model(steps, self, self.extract_model(node.id), node.id)
            if cfg.witness:
                w = detect_witness(self, node.id, cfg)
                if w is not None:
                    node.status = "witness"
                    return Witness(steps, self, w)
            if steps >= cfg.max_steps:
                frontier.appendleft(node)
                return Unknown(steps, self, [n.id for n in frontier])
            child = self.expand_universal(node)
            steps += 1
            if child is None:
                node.status = "model"
                return Model(steps, self, self.extract_model(node.id), node.id)
            frontier.append(child)
        return Unsat(steps, self, closed)


def run(A: Condition, cat, cfg: Optional[Config] = None, **overrides):
    cfg = cfg or Config()
    for k, v in overrides.items():
        setattr(cfg, k, v)
    return Tableau(A, cat, cfg).run()


def extract_model(tableau: Tableau, node_id: int) -> list:
    return tableau.extract_model(node_id)
