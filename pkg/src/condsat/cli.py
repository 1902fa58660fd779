"""Command-line front end: ``condsat <check|model|trace|witness> FILE``.

Exit status 0 means the run decided (sat, unsat or witness), 10 means the
step budget ran out, 2 means the input could not be used.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import condition as cd
from . import cospan as cs
from . import dsl
from .category import BACKENDS
from .errors import CondsatError
from .tableau import Config, Model, Tableau, Unknown, Unsat, Witness
from .witness import unroll_witness

EXIT_DECIDED = 0
EXIT_INPUT = 2
EXIT_UNKNOWN = 10

LABEL_LIMIT = 120


def composed_object(arrows, cat, root):
    """The object a finite model builds: the composite's codomain, or the
    center of the composite for cospans."""
    if not arrows:
        return root
    if cat.name == "cospan-ilc":
        return cs.center_of_composite(list(arrows))
    return cat.cod(cd.compose_all(arrows, cat, root))


def _object_text(X) -> str:
    return str(X)


def _arrow_text(f) -> str:
    return dsl.format_arrow(f)


def result_json(res, cat, root) -> dict:
    out = {"schema": 1, "verdict": res.verdict, "steps": res.steps}
    if isinstance(res, Unsat):
        out["closed_branches"] = res.closed_branches
    elif isinstance(res, Model):
        out["model"] = {
            "arrows": [_arrow_text(a) for a in res.model],
            "object": _object_text(composed_object(res.model, cat, root)),
            "leaf": res.leaf,
        }
    elif isinstance(res, Witness):
        w = res.candidate
        preview = unroll_witness(w, 3)
        start_root = res.tableau.nodes[w.start].condition.root
        out["witness"] = {
            "start": w.start,
            "end": w.end,
            "period": [_arrow_text(a) for a in w.period],
            "m": _arrow_text(w.m),
            "iota": _arrow_text(w.iota),
            "unroll_preview": _object_text(composed_object(preview, cat, start_root)),
        }
    elif isinstance(res, Unknown):
        out["reason"] = res.reason
        out["frontier"] = len(res.frontier)
    if getattr(res.tableau, "witness_truncated", False):
        out["witness_scan_truncated"] = True
    return out


# --- DOT rendering ------------------------------------------------------------------------

def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


def _short(s: str) -> str:
    return s if len(s) <= LABEL_LIMIT else s[:LABEL_LIMIT - 3] + "..."


def render_dot(tableau: Tableau) -> str:
    """A Graphviz digraph of the tableau, nodes in creation order.

    Closed leaves are marked with a cross, model leaves with a check mark and
    nodes whose condition repeats an earlier one with a note.
    """
    lines = ["digraph tableau {", '  node [shape=box, fontname="monospace"];']
    seen: dict = {}
    for nid in sorted(tableau.nodes):
        node = tableau.nodes[nid]
        text = dsl.format_condition(node.condition, top=False)
        label = f"{nid}: {_short(text)}"
        if node.status == "closed":
            label += "\n✕"
        elif node.status == "model":
            label += "\n✓ model"
        elif node.status == "witness":
            label += "\n↺ witness"
        key = node.condition
        if key in seen:
            label += f"\n(same condition as {seen[key]})"
        else:
            seen[key] = nid
        lines.append(f'  n{nid} [label="{_dot_escape(label)}", tooltip="{_dot_escape(text)}"];')
    for nid in sorted(tableau.nodes):
        node = tableau.nodes[nid]
        if node.parent is None:
            continue
        lab = _short(_arrow_text(node.incoming))
        lines.append(f'  n{node.parent} -> n{nid} [label="{_dot_escape(lab)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- argument handling -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="condsat", description="Satisfiability of nested conditions.")
    ap.add_argument("command", choices=("check", "model", "trace", "witness"))
    ap.add_argument("file", help="problem file, or - for standard input")
    ap.add_argument("--category", choices=BACKENDS, help="override the category in the file header")
    ap.add_argument("--mode", choices=("restricted", "general"), help="override the tableau mode")
    ap.add_argument("--max-steps", type=int, help="step budget (default: $CONDSAT_MAX_STEPS or 10000)")
    ap.add_argument("--trace", metavar="OUT.dot", help="write the tableau as DOT to this file")
    ap.add_argument("--json", action="store_true", help="print the verdict as JSON")
    ap.add_argument("--witness", action="store_true", help="enable witness detection for any command")
    return ap


def _max_steps(arg: Optional[int]) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("CONDSAT_MAX_STEPS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise CondsatError(f"CONDSAT_MAX_STEPS is not an integer: {env!r}") from None
    return Config().max_steps


def _human(res, payload: dict) -> str:
    v = payload["verdict"]
    if v == "unsat":
        return f"unsat after {res.steps} steps ({payload['closed_branches']} closed branches)"
    if v == "sat":
        m = payload["model"]
        return f"sat after {res.steps} steps\nmodel: {m['object']}"
    if v == "witness":
        w = payload["witness"]
        return (f"witness after {res.steps} steps: node {w['start']} repeats at node {w['end']}\n"
                f"m = {w['m']}\niota = {w['iota']}")
    return f"unknown: step budget of {res.steps} exhausted"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.file == "-":
            text = sys.stdin.read()
        else:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        prob = dsl.parse_problem(text, args.category)
        cat = prob.make_category()
        mode = args.mode or prob.mode or ("restricted" if cat.sections_are_isos else "general")
        cfg = Config(mode=mode, max_steps=_max_steps(args.max_steps),
                     witness=args.witness or args.command == "witness")
        tab = Tableau(prob.condition, cat, cfg)
    except (OSError, CondsatError) as exc:
        print(f"condsat: {exc}", file=sys.stderr)
        return EXIT_INPUT
    res = tab.run()
    payload = result_json(res, cat, prob.root)
    dot = render_dot(tab)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(dot)
    if args.command == "trace" and not args.trace:
        sys.stdout.write(dot)
    elif args.command in ("check", "witness") or args.json:
        print(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        print(_human(res, payload))
    return EXIT_UNKNOWN if isinstance(res, Unknown) else EXIT_DECIDED


if __name__ == "__main__":
    sys.exit(main())
