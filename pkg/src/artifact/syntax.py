"""Concrete syntax.

Grammar (application is left-associative, a lambda body extends as far
right as possible, a postfix jump binds tightest)::

    term    := app
    app     := postfix+ [lam] | lam
    lam     := ("\\" | "λ") name+ "." term
    postfix := atom ("[" binder "/" term "]")*
    atom    := name | "(" term ")"
    binder  := name | "_"          ("_" only in void mode)
    name    := [a-zA-Z][a-zA-Z0-9']*
"""

from __future__ import annotations

import re

from .term import App, Jump, Lam, Term, Var, VoidJump

_TOKEN = re.compile(r"\s*(?:([a-zA-Z][a-zA-Z0-9']*)|(\\|λ)|(.))")


class ParseError(ValueError):
    def __init__(self, msg: str, text: str, offset: int):
        line = text.count("\n", 0, offset) + 1
        col = offset - (text.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.column = col


def _tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        start = m.start(m.lastindex) if m.lastindex else m.end()
        if m.group(1):
            toks.append(("name", m.group(1), start))
        elif m.group(2):
            toks.append(("lam", "\\", start))
        elif m.group(3):
            ch = m.group(3)
            if ch.isspace():
                pos = m.end()
                continue
            toks.append(("sym", ch, start))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, void: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.void = void

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise ParseError(f"expected {want!r}, got {got!r}", self.text, tok[2])
        self.i += 1
        return tok

    def term(self) -> Term:
        if self.peek()[0] == "lam":
            return self.lam()
        t = self.postfix()
        while True:
            kind, val, _ = self.peek()
            if kind == "name" or (kind == "sym" and val == "("):
                t = App(t, self.postfix())
            elif kind == "lam":
                return App(t, self.lam())
            else:
                return t

    def lam(self) -> Term:
        self.take("lam")
        names = [self.take("name")[1]]
        while self.peek()[0] == "name":
            names.append(self.take("name")[1])
        self.take("sym", ".")
        body = self.term()
        for n in reversed(names):
            body = Lam(n, body)
        return body

    def postfix(self) -> Term:
        t = self.atom()
        while self.peek()[:2] == ("sym", "["):
            self.take()
            kind, val, off = self.peek()
            if kind == "sym" and val == "_":
                if not self.void:
                    raise ParseError("'_' binder is only allowed in void mode", self.text, off)
                self.take()
                binder = None
            else:
                binder = self.take("name")[1]
            self.take("sym", "/")
            content = self.term()
            self.take("sym", "]")
            t = VoidJump(t, content) if binder is None else Jump(t, binder, content)
        return t

    def atom(self) -> Term:
        kind, val, off = self.peek()
        if kind == "name":
            self.take()
            return Var(val)
        if kind == "sym" and val == "(":
            self.take()
            t = self.term()
            self.take("sym", ")")
            return t
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, off)


def parse(text: str, void: bool = False) -> Term:
    """Parse a term; ``void=True`` enables ``_`` binders."""
    p = _Parser(text, void)
    t = p.term()
    kind, val, off = p.peek()
    if kind != "eof":
        raise ParseError(f"trailing input {val!r}", text, off)
    return t


def show(t: Term, lam: str = "\\") -> str:
    """Print ``t`` so that ``parse(show(t))`` gives ``t`` back."""
    c = t.__class__
    if c is Var:
        return t.name
    if c is Lam:
        return f"{lam}{t.binder}.{show(t.body, lam)}"
    if c is App:
        f = show(t.fun, lam)
        if t.fun.__class__ is Lam:
            f = f"({f})"
        a = show(t.arg, lam)
        if t.arg.__class__ in (App, Lam):
            a = f"({a})"
        return f"{f} {a}"
    body = show(t.body, lam)
    if t.body.__class__ in (App, Lam):
        body = f"({body})"
    b = "_" if c is VoidJump else t.binder
    return f"{body}[{b}/{show(t.content, lam)}]"
