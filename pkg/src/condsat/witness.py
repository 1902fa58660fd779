"""Witnesses for eventually periodic infinite models.

A witness is a fair segment C_i -> ... -> C_j of universal nodes on one
branch, an arrow m out of RO(C_j) and an iso iota with C_i ~ (C_j shifted
along m) via iota.  The sequence [b_1, ..., b_r, m;iota] repeated forever is
then a model of C_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import condition as cd
from .condition import FORALL
from .errors import NotUniversal


@dataclass
class WitnessCandidate:
    start: int
    end: int
    m: object
    iota: object
    period: list

    @property
    def r(self) -> int:
        return len(self.period) - 1


def segment_is_fair(tableau, i: int, j: int) -> bool:
    """Fairness of the segment between universal nodes i and j (j a descendant of i)."""
    path = tableau.branch(j)
    ids = [n.id for n in path]
    if i not in ids:
        raise ValueError("node i is not an ancestor of node j")
    seg = path[ids.index(i):]
    for n in (seg[0], seg[-1]):
        if n.condition.kind != FORALL:
            raise NotUniversal(f"node {n.id} is not universal")
    cat = tableau.cat
    start = seg[0]
    pending = [k for k, (f, _) in enumerate(start.condition.children) if cat.is_iso(f)]
    for k in pending:
        tracked = {k}
        t = 0
        ok = False
        while t <= len(seg) - 3:
            node = seg[t]
            if node.pulled in tracked:
                ok = True
                break
            nxt = seg[t + 2]
            if nxt.origins is None:
                break
            tracked = {k2 for k2, o in enumerate(nxt.origins) if o in tracked}
            if not tracked:
                break
            t += 2
        if not ok:
            return False
    return True


def candidate_arrows(tableau, root, cfg) -> list:
    """Arrows m out of ``root`` to try: forgetting cospans, or just the identity elsewhere."""
    cat = tableau.cat
    if cat.name == "cospan-ilc":
        from .cospan import forgetting_cospans
        return forgetting_cospans(root, cfg.max_forget)
    return [cat.identity(root)]


def _roots_match(cat, X, Y) -> bool:
    return cat.object_iso(X, Y) is not None


def detect_witness(tableau, node_id: int, cfg) -> Optional[WitnessCandidate]:
    """Check the universal node ``node_id`` against its universal ancestors."""
    cat = tableau.cat
    path = tableau.branch(node_id)
    end = path[-1]
    if end.condition.kind != FORALL:
        return None
    ancestors = [n for n in path[:-1] if n.condition.kind == FORALL][::-1]
    if len(ancestors) > cfg.max_witness_pairs:
        ancestors = ancestors[:cfg.max_witness_pairs]
        tableau.witness_truncated = True
    arrows = None
    shifted: dict = {}
    for start in ancestors:
        if (end.depth - start.depth) % 2:
            continue
        if not segment_is_fair(tableau, start.id, end.id):
            continue
        if arrows is None:
            arrows = candidate_arrows(tableau, end.condition.root, cfg)
        for k, m in enumerate(arrows):
            if not _roots_match(cat, cat.cod(m), start.condition.root):
                continue
            if k not in shifted:
                shifted[k] = cd.shift(end.condition, m, cat)
            iota = cd.condition_iso(start.condition, shifted[k], cat)
            if iota is not None:
                seg = path[[n.id for n in path].index(start.id):]
                period = [n.incoming for n in seg[1:]] + [cat.compose(m, iota)]
                return WitnessCandidate(start.id, end.id, m, iota, period)
    return None


def verify_witness(tableau, w: WitnessCandidate) -> bool:
    """Re-check the preconditions of the witness theorem for ``w``."""
    cat = tableau.cat
    start = tableau.nodes[w.start]
    end = tableau.nodes[w.end]
    if end.depth - start.depth <= 0 or (end.depth - start.depth) % 2:
        return False
    if not segment_is_fair(tableau, w.start, w.end):
        return False
    S = cd.shift(end.condition, w.m, cat)
    return cd.iso_wrt(start.condition, S, w.iota, cat)


def unroll_witness(w: WitnessCandidate, k: int) -> list:
    """The first k periods of the periodic sequence (not itself claimed to be a model)."""
    return list(w.period) * k
