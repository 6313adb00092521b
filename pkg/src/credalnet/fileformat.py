"""Text format for credal networks.

Example::

    # two-node chain
    variable A { values = [a, na] }
    variable B { values = [b, nb] }
    edge A -> B
    cpt A {
      a in [0.2, 0.3]
    }
    cpt B | A {
      a: b in [1/10, 1/5]
      na: b in [4/5, 9/10]
    }

A binary node may give a single value; the other value receives the
complementary interval.  A configuration may instead list explicit local
extreme points with ``<config>: vertex [p1, p2, ...]`` lines.
"""

from __future__ import annotations

import re
from typing import NamedTuple

from .core import Interval, Variable, format_rat, parse_rat
from .errors import CycleError, InfeasibleLocal, MissingCpt, NetworkSyntaxError
from .graph import Dag
from .network import CredalNetwork, IntervalLocal, LocalCredalSet, VertexLocal


class _Tok(NamedTuple):
    kind: str
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<num>-?\d+(?:\.\d+)?(?:/\d+)?(?![A-Za-z_]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_'.]*)
  | (?P<punct>[{}\[\],:=|])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    toks, line, start, pos = [], 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise NetworkSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
            toks.append(_Tok("nl", "\n", line - 1, 0))
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, skip_nl=True):
        j = self.i
        while skip_nl and self.toks[j].kind == "nl":
            j += 1
        return self.toks[j]

    def next(self, skip_nl=True):
        while skip_nl and self.toks[self.i].kind == "nl":
            self.i += 1
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok):
        raise NetworkSyntaxError(msg, tok.line, tok.col)

    def expect(self, text=None, kind=None, skip_nl=True):
        tok = self.next(skip_nl)
        if (text is not None and tok.text != text) or (kind is not None and tok.kind != kind):
            want = repr(text) if text is not None else kind
            self.error(f"expected {want}, found {tok.text or 'end of file'!r}", tok)
        return tok

    def number(self):
        tok = self.expect(kind="num")
        return parse_rat(tok.text), tok

    def ident_list(self, close):
        items = [self.expect(kind="ident")]
        while self.peek().text == ",":
            self.next()
            items.append(self.expect(kind="ident"))
        self.expect(close)
        return items


def parse_network(text: str) -> CredalNetwork:
    """Parse network text; errors carry 1-based line and column."""
    p = _Parser(text)
    variables, edges, cpts = {}, [], {}
    order = []
    while True:
        tok = p.next()
        if tok.kind == "eof":
            break
        if tok.text == "variable":
            name = p.expect(kind="ident")
            if name.text in variables:
                p.error(f"variable {name.text} declared twice", name)
            p.expect("{")
            key = p.expect(kind="ident")
            if key.text != "values":
                p.error(f"unknown key {key.text!r}", key)
            p.expect("=")
            p.expect("[")
            vals = p.ident_list("]")
            p.expect("}")
            try:
                variables[name.text] = Variable(name.text, tuple(v.text for v in vals))
            except ValueError as exc:
                p.error(str(exc), name)
            order.append(name.text)
        elif tok.text == "edge":
            a = p.expect(kind="ident")
            p.expect(kind="arrow")
            b = p.expect(kind="ident")
            for t in (a, b):
                if t.text not in variables:
                    p.error(f"unknown variable {t.text}", t)
            if a.text == b.text:
                raise CycleError(f"line {a.line}: self loop {a.text} -> {b.text}")
            if (a.text, b.text) in edges:
                p.error(f"duplicate edge {a.text} -> {b.text}", a)
            edges.append((a.text, b.text))
        elif tok.text == "cpt":
            name = p.expect(kind="ident")
            if name.text not in variables:
                p.error(f"unknown variable {name.text}", name)
            if name.text in cpts:
                p.error(f"second cpt for {name.text}", name)
            parents = []
            if p.peek().text == "|":
                p.next()
                parents = [p.expect(kind="ident")]
                while p.peek().text == ",":
                    p.next()
                    parents.append(p.expect(kind="ident"))
                for t in parents:
                    if t.text not in variables:
                        p.error(f"unknown variable {t.text}", t)
            p.expect("{")
            cpts[name.text] = (name, [t.text for t in parents], _parse_entries(p, variables, name.text,
                                                                               [t.text for t in parents]))
        else:
            p.error(f"unexpected {tok.text!r}", tok)
    for n in order:
        if n not in cpts:
            raise MissingCpt(f"no cpt block for {n}")
    dag = Dag(order, edges)
    locals_ = {}
    for n, (tok, parents, entries) in cpts.items():
        want = list(dag.parents(n))
        if sorted(parents) != sorted(want):
            raise MissingCpt(f"line {tok.line}: cpt of {n} conditions on {parents}, graph parents are {want}")
        # reorder configuration labels to graph parent order
        perm = [parents.index(w) for w in want]
        reordered = {tuple(cfg[k] for k in perm): e for cfg, e in entries.items()}
        try:
            locals_[n] = LocalCredalSet(variables[n], [variables[w] for w in want], reordered)
        except MissingCpt as exc:
            raise MissingCpt(f"line {tok.line}: {exc}") from None
        except InfeasibleLocal as exc:
            raise InfeasibleLocal(f"line {tok.line}: {exc}") from None
    net = CredalNetwork([variables[n] for n in order], edges, locals_)
    for n, c in net.local_sets():
        net.local_vertices(n, c)  # surfaces InfeasibleLocal at parse time
    return net


def _parse_entries(p, variables, node, parents):
    var = variables[node]
    pvars = [variables[q] for q in parents]
    raw = {}
    while True:
        tok = p.peek()
        if tok.text == "}":
            p.next()
            break
        if tok.kind == "eof":
            p.error("unterminated cpt block", tok)
        start = p.next()
        if parents:
            labels = [start]
            while p.peek(skip_nl=False).text == ",":
                p.next(skip_nl=False)
                labels.append(p.expect(kind="ident", skip_nl=False))
            p.expect(":", skip_nl=False)
            if len(labels) != len(pvars):
                p.error(f"configuration needs {len(pvars)} labels, got {len(labels)}", start)
            for lab, pv in zip(labels, pvars):
                if lab.text not in pv.values:
                    p.error(f"{lab.text!r} is not a value of {pv.name}", lab)
            cfg = tuple(t.text for t in labels)
            head = p.next(skip_nl=False)
        else:
            cfg = ()
            head = start
        if head.kind != "ident":
            p.error(f"expected a value label or 'vertex', found {head.text!r}", head)
        slot = raw.setdefault(cfg, {"intervals": {}, "vertices": [], "tok": head})
        if head.text == "vertex":
            p.expect("[", skip_nl=False)
            nums = [p.number()[0]]
            while p.peek(skip_nl=False).text == ",":
                p.next(skip_nl=False)
                nums.append(p.number()[0])
            p.expect("]", skip_nl=False)
            if len(nums) != var.size:
                p.error(f"vertex needs {var.size} entries", head)
            slot["vertices"].append(tuple(nums))
        else:
            if head.text not in var.values:
                p.error(f"{head.text!r} is not a value of {node}", head)
            if head.text in slot["intervals"]:
                p.error(f"second interval for {head.text}", head)
            kw = p.expect(kind="ident", skip_nl=False)
            if kw.text != "in":
                p.error(f"expected 'in', found {kw.text!r}", kw)
            p.expect("[", skip_nl=False)
            lo, lo_tok = p.number()
            p.expect(",", skip_nl=False)
            hi, _ = p.number()
            p.expect("]", skip_nl=False)
            try:
                slot["intervals"][head.text] = Interval(lo, hi)
            except ValueError as exc:
                raise InfeasibleLocal(f"line {lo_tok.line}, column {lo_tok.col}: {exc}") from None
        if slot["intervals"] and slot["vertices"]:
            p.error("a configuration cannot mix intervals and vertices", head)
        nxt = p.peek(skip_nl=False)
        if nxt.kind not in ("nl", "eof") and nxt.text != "}":
            p.error(f"unexpected {nxt.text!r} after entry", nxt)
    entries = {}
    for cfg, slot in raw.items():
        if slot["vertices"]:
            entries[cfg] = VertexLocal(tuple(slot["vertices"]))
        else:
            ivs = slot["intervals"]
            if len(ivs) < var.size and not (var.size == 2 and len(ivs) == 1):
                tok = slot["tok"]
                raise MissingCpt(f"line {tok.line}: {node} at {cfg} needs an interval for every value")
            entries[cfg] = IntervalLocal(tuple((v, ivs[v]) for v in var.values if v in ivs))
    return entries


def serialize_network(net: CredalNetwork) -> str:
    """Canonical text: every interval written out, rationals as a/b."""
    out = []
    for v in net.variables:
        out.append(f"variable {v.name} {{ values = [{', '.join(v.values)}] }}")
    for a, b in net.dag.edges:
        out.append(f"edge {a} -> {b}")
    for v in net.variables:
        loc = net.locals[v.name]
        head = f"cpt {v.name}"
        if loc.parents:
            head += " | " + ", ".join(p.name for p in loc.parents)
        out.append(head + " {")
        for cfg, entry in loc.entries.items():
            prefix = f"  {', '.join(cfg)}: " if cfg else "  "
            if isinstance(entry, IntervalLocal):
                for val, iv in entry.intervals:
                    out.append(f"{prefix}{val} in [{format_rat(iv.lo)}, {format_rat(iv.hi)}]")
            else:
                for vert in entry.vertices:
                    out.append(f"{prefix}vertex [{', '.join(format_rat(x) for x in vert)}]")
        out.append("}")
    return "\n".join(out) + "\n"
