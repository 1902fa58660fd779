"""The problem-file language: a tokenizer, a recursive-descent parser with
type checking of arrow chains, and a pretty printer that parses back to the
same tree.

    category inj-graphs
    mode restricted
    root {}
    forall [{} => {}] . exists [{} => {1}] . true
      && forall [{} => {X}] . false

A quantifier body is a full condition, so ``forall a . forall b . B && C``
conjoins C under ``a``.  Bodies that are ``true``, ``false``, a parenthesized
condition or an alternating quantifier end where the opposite connective
begins, which keeps the usual alternating layout unambiguous.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import condition as cd
from . import cospan as cs
from . import graphs as gr
from . import lawvere as lw
from .category import BACKENDS, Category, make_category
from .errors import CondsatError, ConfigError, ParseError, TypeCheckError

_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<sym>\[\[|\]\]|=>|<=|->|&&|\|\||[{}\[\](),;:.@<>/])
  | (?P<id>[A-Za-z0-9_]+(?:-[A-Za-z0-9_]+)*)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "sym", "id" or "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(line, col, {"a token"}, text[pos])
        chunk = m.group(0)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


@dataclass
class ProblemFile:
    category: str
    root: object
    condition: cd.Condition
    mode: Optional[str] = None
    signature: Optional[lw.Signature] = None
    options: dict = field(default_factory=dict)

    def make_category(self) -> Category:
        return make_category(self.category, self.signature)


class _Parser:
    def __init__(self, text: str, category: Optional[str] = None):
        self.override = category
        self.toks = tokenize(text)
        self.i = 0
        self.cat: Optional[Category] = None

    # token helpers -------------------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *texts) -> bool:
        return self.tok.kind != "eof" and self.tok.text in texts

    def fail(self, expected):
        t = self.tok
        raise ParseError(t.line, t.col, set(expected), t.text or "end of input")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail({repr(text)})
        t = self.tok
        self.i += 1
        return t

    def ident(self, what="identifier") -> str:
        if self.tok.kind != "id":
            self.fail({what})
        t = self.tok
        self.i += 1
        return t.text

    def nat(self) -> int:
        t = self.tok
        if t.kind != "id" or not t.text.isdigit():
            self.fail({"natural number"})
        self.i += 1
        return int(t.text)

    # problem -----------------------------------------------------------------------
    def problem(self) -> ProblemFile:
        self.expect("category")
        name = self.ident("category name")
        if name not in BACKENDS:
            t = self.toks[self.i - 1]
            raise ParseError(t.line, t.col, set(BACKENDS), name)
        if self.override is not None:
            if self.override not in BACKENDS:
                raise ConfigError(f"unknown category {self.override!r}; expected one of "
                                  f"{', '.join(BACKENDS)}")
            name = self.override
        mode = None
        if self.at("mode"):
            self.i += 1
            if not self.at("restricted", "general"):
                self.fail({"'restricted'", "'general'"})
            mode = self.ident()
        sig = None
        if self.at("sig"):
            self.i += 1
            sig = self.signature()
        self.cat = make_category(name, sig)
        self.expect("root")
        root = self.nat() if name == "lawvere" else self.graph()
        A = self.cond(root, ())
        if self.tok.kind != "eof":
            self.fail({"end of input"})
        return ProblemFile(name, root, A, mode, sig)

    def signature(self) -> lw.Signature:
        self.expect("{")
        arities = {}
        while not self.at("}"):
            sym = self.ident("function symbol")
            self.expect("/")
            arities[sym] = self.nat()
            if not self.at("}"):
                self.expect(",")
        self.expect("}")
        return lw.Signature(arities)

    # conditions ------------------------------------------------------------------------
    def cond(self, root, path) -> cd.Condition:
        if self.at("true"):
            self.i += 1
            return cd.true(root)
        if self.at("false"):
            self.i += 1
            return cd.false(root)
        if self.at("("):
            self.i += 1
            A = self.cond(root, path)
            self.expect(")")
            return A
        if self.at("forall"):
            return self.quantified(root, path, "forall", "&&", cd.FORALL)
        if self.at("exists"):
            return self.quantified(root, path, "exists", "||", cd.EXISTS)
        self.fail({"'true'", "'false'", "'('", "'forall'", "'exists'"})

    def quantified(self, root, path, word, joiner, kind) -> cd.Condition:
        kids = []
        while True:
            self.expect(word)
            here = path + (len(kids),)
            f = self.arrow(root, here)
            self.expect(".")
            kids.append((f, self.cond(self.cat.cod(f), here)))
            if not self.at(joiner):
                break
            self.i += 1
        return cd.Condition(kind, root, tuple(kids))

    # arrows ---------------------------------------------------------------------------
    def arrow(self, root, path):
        t = self.tok
        try:
            if self.at("["):
                f = self.graph_arrow()
            elif self.at("[["):
                f = self.cospan_arrow()
            elif self.at("<"):
                f = self.tuple_arrow(root)
            else:
                self.fail({"'['", "'[['", "'<'"})
            f = self.coerce(f, path)
        except (ParseError, TypeCheckError):
            raise
        except (CondsatError, ValueError) as exc:
            raise TypeCheckError(path, f"line {t.line}, column {t.col}: {exc}") from None
        if self.cat.dom(f) != root:
            raise TypeCheckError(
                path, f"line {t.line}, column {t.col}: arrow domain {self.cat.dom(f)} "
                f"differs from the enclosing root {root}")
        return f

    def coerce(self, f, path):
        name = self.cat.name
        if isinstance(f, gr.GraphMorphism):
            if name == "cospan-ilc":
                f = cs.embed(f)
            elif name == "lawvere":
                raise TypeCheckError(path, "graph morphism in a lawvere problem")
        elif isinstance(f, cs.Cospan) and name != "cospan-ilc":
            raise TypeCheckError(path, f"cospan in a {name} problem")
        elif isinstance(f, lw.TermTuple):
            if name != "lawvere":
                raise TypeCheckError(path, f"term tuple in a {name} problem")
            sig = self.cat.signature
            for term in f.terms:
                sig.check(term, f.dom)
                if sig.arities:
                    unknown = _symbols(term) - set(sig.arities)
                    if unknown:
                        raise TypeCheckError(path, f"symbol {min(unknown)!r} is not in the signature")
        self.cat.check(f)
        return f

    def node_map(self) -> dict:
        m = {}
        while True:
            a = self.ident("node")
            self.expect("->")
            m[a] = self.ident("node")
            if not self.at(","):
                return m
            self.i += 1

    def morphism(self, A: gr.Graph, B: gr.Graph, given: dict) -> gr.GraphMorphism:
        for n in given:
            if n not in A.labels:
                raise ValueError(f"mapped node {n!r} is not in {A}")
        nm = {n: given.get(n, n) for n in A.nodes}
        for n, m in nm.items():
            if m not in B.labels:
                raise ValueError(f"node {n!r} has no counterpart in {B}; give an explicit @ map")
        return gr.from_node_map(A, B, nm)

    def graph_arrow(self) -> gr.GraphMorphism:
        self.expect("[")
        A = self.graph()
        self.expect("=>")
        B = self.graph()
        given = {}
        if self.at("@"):
            self.i += 1
            given = self.node_map()
        self.expect("]")
        return self.morphism(A, B, given)

    def cospan_arrow(self) -> cs.Cospan:
        self.expect("[[")
        A = self.graph()
        lmap = {}
        if self.at("@"):
            self.i += 1
            lmap = self.node_map()
        self.expect("=>")
        X = self.graph()
        self.expect("<=")
        B = self.graph()
        rmap = {}
        if self.at("@"):
            self.i += 1
            rmap = self.node_map()
        self.expect("]]")
        return cs.Cospan(self.morphism(A, X, lmap), self.morphism(B, X, rmap))

    def tuple_arrow(self, root) -> lw.TermTuple:
        self.expect("<")
        terms = []
        while not self.at(">"):
            terms.append(self.term())
            if not self.at(">"):
                self.expect(",")
        self.expect(">")
        n = root if isinstance(root, int) else 0
        if self.at(":"):
            self.i += 1
            n = self.nat()
            self.expect("->")
            t = self.tok
            m = self.nat()
            if m != len(terms):
                raise ParseError(t.line, t.col, {str(len(terms))}, str(m))
        for term in terms:
            bad = [v for v in lw.variables(term) if v > n]
            if bad:
                raise ValueError(f"variable x{bad[0]} out of range for domain {n}")
        return lw.TermTuple(n, tuple(terms))

    def term(self):
        name = self.ident("term")
        if re.fullmatch(r"x[1-9][0-9]*", name) and not self.at("("):
            return lw.Var(int(name[1:]))
        args = []
        if self.at("("):
            self.i += 1
            while not self.at(")"):
                args.append(self.term())
                if not self.at(")"):
                    self.expect(",")
            self.expect(")")
        return lw.App(name, tuple(args))

    # graphs ----------------------------------------------------------------------------
    def graph(self) -> gr.Graph:
        self.expect("{")
        labels: dict = {}
        edges: dict = {}
        while not self.at(";", "}"):
            t = self.tok
            n = self.ident("node")
            if n in labels:
                raise ParseError(t.line, t.col, {"a new node identifier"}, n)
            labels[n] = gr.DEFAULT_LABEL
            if self.at(":"):
                self.i += 1
                labels[n] = self.ident("label")
            if not self.at(";", "}"):
                self.expect(",")
        if self.at(";"):
            self.i += 1
            while not self.at("}"):
                t = self.tok
                s = self.ident("node")
                self.expect("->")
                u = self.ident("node")
                for x in (s, u):
                    if x not in labels:
                        raise ParseError(t.line, t.col, {"a declared node"}, x)
                edges[gr.edge_name(s, u, edges)] = (s, u)
                if not self.at("}"):
                    self.expect(",")
        self.expect("}")
        return gr.Graph(labels, edges)


def _symbols(t) -> set:
    if isinstance(t, lw.Var):
        return set()
    return {t.sym}.union(*(_symbols(a) for a in t.args))


def parse_problem(text: str, category: Optional[str] = None) -> ProblemFile:
    """Parse a problem file; ``category`` overrides the one named in its header."""
    return _Parser(text, category).problem()


def parse_graph(text: str) -> gr.Graph:
    p = _Parser(text)
    G = p.graph()
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return G


def parse_condition(text: str, root, cat: Category) -> cd.Condition:
    """Parse a bare condition over ``root`` in the given category."""
    p = _Parser(text)
    p.cat = cat
    A = p.cond(root, ())
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return A


def parse_arrow(text: str, root, cat: Category):
    p = _Parser(text)
    p.cat = cat
    f = p.arrow(root, ())
    if p.tok.kind != "eof":
        p.fail({"end of input"})
    return f


# --- pretty printing ---------------------------------------------------------------------

def _map_suffix(f: gr.GraphMorphism) -> str:
    moved = [(n, f.node_map[n]) for n in f.dom.nodes if f.node_map[n] != n]
    if not moved:
        return ""
    return " @ " + ", ".join(f"{a}->{b}" for a, b in moved)


def _term(t) -> str:
    if isinstance(t, lw.Var):
        return f"x{t.i}"
    if not t.args:
        return t.sym
    return f"{t.sym}(" + ", ".join(_term(a) for a in t.args) + ")"


def format_arrow(f) -> str:
    if isinstance(f, gr.GraphMorphism):
        return f"[{f.dom} => {f.cod}{_map_suffix(f)}]"
    if isinstance(f, cs.Cospan):
        if f.right.dom == f.center and gr.is_iso(f.right) and f.right.is_inclusion():
            return format_arrow(f.left)
        return (f"[[{f.left.dom}{_map_suffix(f.left)} => {f.center} <= "
                f"{f.right.dom}{_map_suffix(f.right)}]]")
    if isinstance(f, lw.TermTuple):
        return "<" + ", ".join(_term(t) for t in f.terms) + f"> : {f.dom} -> {f.cod}"
    raise TypeError(f"cannot format {type(f).__name__}")


def format_condition(A: cd.Condition, top: bool = True) -> str:
    """Surface syntax for A.  Top-level conjuncts go on their own lines."""
    if not A.children:
        return "true" if A.kind == cd.FORALL else "false"
    word, joiner = ("forall", "&&") if A.kind == cd.FORALL else ("exists", "||")
    joiner = f"\n  {joiner} " if top else f" {joiner} "
    parts = []
    for f, sub in A.children:
        body = format_condition(sub, top=False)
        if sub.children:
            body = f"({body})"
        parts.append(f"{word} {format_arrow(f)} . {body}")
    return joiner.join(parts)


def format_problem(P: ProblemFile) -> str:
    lines = [f"category {P.category}"]
    if P.mode:
        lines.append(f"mode {P.mode}")
    if P.signature is not None:
        syms = ", ".join(f"{s}/{a}" for s, a in sorted(P.signature.arities.items()))
        lines.append(f"sig {{{syms}}}")
    lines.append(f"root {P.root}")
    lines.append(format_condition(P.condition))
    return "\n".join(lines) + "\n"
