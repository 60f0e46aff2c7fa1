"""Terms with jumps, and the syntactic operations on them.

A term is one of ``Var``, ``Lam``, ``App``, ``Jump`` (a named explicit
substitution ``t[x/u]``) or ``VoidJump`` (an anonymous one, ``t[_/u]``).
Nodes are immutable and carry a precomputed hash and size, so they are cheap
to use as dictionary keys.

Alpha-equivalence is handled by canonicalisation: ``alpha_canonical``
renames every binder according to its binding depth, choosing names that
avoid the free variables of the whole term.  Two terms are alpha-equivalent
iff their canonical forms are structurally equal.  In a canonical term no
binder shadows another one on the same path and no binder reuses a free
name, which keeps the rewrite rules simple.

Positions are tuples of child indices: ``Lam`` body is 1, ``App`` function is
1 and argument is 2, jump body is 1 and content is 2.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Iterator

Position = tuple


class Term:
    """Base class.  Subclasses must not be mutated after construction."""

    __slots__ = ("size", "_hash", "_fv", "_key", "_canon")

    def free_vars(self) -> frozenset:
        fv = self._fv
        if fv is None:
            fv = self._fv = self._compute_fv()
        return fv

    def sort_key(self):
        """Key of the fixed total order on terms (size first)."""
        return (self.size, self.key())

    def key(self) -> str:
        k = self._key
        if k is None:
            k = self._key = self._compute_key()
        return k

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        from .syntax import show

        return show(self)

    def __repr__(self):
        return f"<{self}>"


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.size = 1
        self._hash = hash(name)
        self._fv = None
        self._key = None
        self._canon = False

    def _compute_fv(self):
        return frozenset((self.name,))

    def _compute_key(self):
        return self.name

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (other.__class__ is Var and other.name == self.name)


class Lam(Term):
    __slots__ = ("binder", "body")

    def __init__(self, binder: str, body: Term):
        self.binder = binder
        self.body = body
        self.size = body.size + 1
        self._hash = hash((1, binder, body._hash))
        self._fv = None
        self._key = None
        self._canon = False

    def _compute_fv(self):
        fv = self.body.free_vars()
        return fv - {self.binder} if self.binder in fv else fv

    def _compute_key(self):
        return "L" + self.binder + "." + self.body.key()

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            other.__class__ is Lam
            and self._hash == other._hash
            and self.binder == other.binder
            and self.body == other.body
        )


class App(Term):
    __slots__ = ("fun", "arg")

    def __init__(self, fun: Term, arg: Term):
        self.fun = fun
        self.arg = arg
        self.size = fun.size + arg.size + 1
        self._hash = hash((2, fun._hash, arg._hash))
        self._fv = None
        self._key = None
        self._canon = False

    def _compute_fv(self):
        return self.fun.free_vars() | self.arg.free_vars()

    def _compute_key(self):
        return "A(" + self.fun.key() + "," + self.arg.key() + ")"

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            other.__class__ is App
            and self._hash == other._hash
            and self.fun == other.fun
            and self.arg == other.arg
        )


class Jump(Term):
    """``t[x/u]``: ``x`` is bound in ``body`` only."""

    __slots__ = ("body", "binder", "content")

    def __init__(self, body: Term, binder: str, content: Term):
        self.body = body
        self.binder = binder
        self.content = content
        self.size = body.size + content.size + 1
        self._hash = hash((3, binder, body._hash, content._hash))
        self._fv = None
        self._key = None
        self._canon = False

    def _compute_fv(self):
        fv = self.body.free_vars()
        if self.binder in fv:
            fv = fv - {self.binder}
        return fv | self.content.free_vars()

    def _compute_key(self):
        return "J(" + self.body.key() + "," + self.binder + "," + self.content.key() + ")"

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            other.__class__ is Jump
            and self._hash == other._hash
            and self.binder == other.binder
            and self.body == other.body
            and self.content == other.content
        )


class VoidJump(Term):
    """``t[_/u]``: an anonymous jump, binding nothing."""

    __slots__ = ("body", "content")

    binder = None

    def __init__(self, body: Term, content: Term):
        self.body = body
        self.content = content
        self.size = body.size + content.size + 1
        self._hash = hash((4, body._hash, content._hash))
        self._fv = None
        self._key = None
        self._canon = False

    def _compute_fv(self):
        return self.body.free_vars() | self.content.free_vars()

    def _compute_key(self):
        return "V(" + self.body.key() + "," + self.content.key() + ")"

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (
            other.__class__ is VoidJump
            and self._hash == other._hash
            and self.body == other.body
            and self.content == other.content
        )


JUMPS = (Jump, VoidJump)


def is_jump(t: Term) -> bool:
    return t.__class__ is Jump or t.__class__ is VoidJump


def make_jump(body: Term, binder, content: Term) -> Term:
    """Build a named jump, or a void one when ``binder`` is None."""
    if binder is None:
        return VoidJump(body, content)
    return Jump(body, binder, content)


def children(t: Term) -> tuple:
    c = t.__class__
    if c is Var:
        return ()
    if c is Lam:
        return (t.body,)
    if c is App:
        return (t.fun, t.arg)
    return (t.body, t.content)


def with_children(t: Term, kids) -> Term:
    c = t.__class__
    if c is Lam:
        return Lam(t.binder, kids[0])
    if c is App:
        return App(kids[0], kids[1])
    if c is Jump:
        return Jump(kids[0], t.binder, kids[1])
    if c is VoidJump:
        return VoidJump(kids[0], kids[1])
    return t


def binder_at_edge(t: Term, i: int):
    """Name bound by ``t`` for its ``i``-th child, or None."""
    c = t.__class__
    if i == 1 and (c is Lam or c is Jump):
        return t.binder
    return None


def is_boxed_edge(t: Term, i: int) -> bool:
    """App argument and jump content edges lead into a box."""
    return i == 2


# ---------------------------------------------------------------- universes

def is_lambda_term(t: Term) -> bool:
    return not any(is_jump(s) for s in subterms(t))


def is_j_term(t: Term) -> bool:
    return not any(s.__class__ is VoidJump for s in subterms(t))


def is_void_term(t: Term) -> bool:
    return not any(s.__class__ is Jump for s in subterms(t))


def universe_of(t: Term) -> str:
    """'lambda', 'j' or 'void'; mixed terms raise ValueError."""
    named = void = False
    for s in subterms(t):
        if s.__class__ is Jump:
            named = True
        elif s.__class__ is VoidJump:
            void = True
    if named and void:
        raise ValueError("term mixes named and void jumps")
    return "j" if named else "void" if void else "lambda"


# ---------------------------------------------------------------- variables

def free_vars(t: Term) -> frozenset:
    return t.free_vars()


def bound_vars(t: Term) -> frozenset:
    out = set()
    for s in subterms(t):
        if s.__class__ is Lam or s.__class__ is Jump:
            out.add(s.binder)
    return frozenset(out)


def all_names(t: Term) -> frozenset:
    return t.free_vars() | bound_vars(t)


def multiplicity(t: Term, x) -> int:
    """Number of free occurrences of ``x`` (a name, or a set of names)."""
    if not isinstance(x, str):
        return sum(multiplicity(t, y) for y in x)
    return _mult(t, x)


def _mult(t: Term, x: str) -> int:
    if x not in t.free_vars():
        return 0
    c = t.__class__
    if c is Var:
        return 1
    if c is Lam:
        return _mult(t.body, x)
    if c is App:
        return _mult(t.fun, x) + _mult(t.arg, x)
    n = _mult(t.content, x)
    if t.binder != x:
        n += _mult(t.body, x)
    return n


class NamePool:
    """Deterministic fresh names: ``base``, ``base1``, ``base2``, ...

    A generated name never belongs to the reserved set, and is added to it.
    """

    def __init__(self, reserved: Iterable[str] = (), base: str = "x"):
        self.reserved = set(reserved)
        self.base = base

    def fresh(self, base: str | None = None) -> str:
        base = base or self.base
        name = base
        i = 0
        while name in self.reserved:
            i += 1
            name = f"{base}{i}"
        self.reserved.add(name)
        return name


def fresh_name(avoid: Iterable[str], base: str = "x") -> str:
    return NamePool(avoid, base).fresh()


# ---------------------------------------------------------------- canonical form

_CANDIDATES = list(string.ascii_lowercase) + [
    f"{c}{i}" for i in range(1, 40) for c in string.ascii_lowercase
]
_names_cache: dict = {}


def _binder_names(fv: frozenset) -> list:
    names = _names_cache.get(fv)
    if names is None:
        names = [n for n in _CANDIDATES if n not in fv]
        if len(_names_cache) > 4096:
            _names_cache.clear()
        _names_cache[fv] = names
    return names


def alpha_canonical(t: Term) -> Term:
    """The canonical representative of the alpha-class of ``t``.

    The binder at binding depth ``d`` gets the ``d``-th name of a fixed
    sequence from which the free names of ``t`` are removed.
    """
    if t._canon:
        return t
    r = _canon(t, {}, 0, _binder_names(t.free_vars()))
    r._canon = True
    return r


def _canon(t, env, d, names):
    c = t.__class__
    if c is Var:
        n = env.get(t.name)
        if n is None or n == t.name:
            return t
        return Var(n)
    if c is App:
        f = _canon(t.fun, env, d, names)
        a = _canon(t.arg, env, d, names)
        if f is t.fun and a is t.arg:
            return t
        return App(f, a)
    if c is VoidJump:
        b = _canon(t.body, env, d, names)
        a = _canon(t.content, env, d, names)
        if b is t.body and a is t.content:
            return t
        return VoidJump(b, a)
    # Lam or Jump: the binder scopes over the body only
    old = t.binder
    new = names[d]
    prev = env.get(old)
    env[old] = new
    b = _canon(t.body, env, d + 1, names)
    if prev is None:
        del env[old]
    else:
        env[old] = prev
    if c is Lam:
        if new == old and b is t.body:
            return t
        return Lam(new, b)
    a = _canon(t.content, env, d, names)
    if new == old and b is t.body and a is t.content:
        return t
    return Jump(b, new, a)


def alpha_eq(t: Term, u: Term) -> bool:
    return alpha_canonical(t) == alpha_canonical(u)


# ---------------------------------------------------------------- substitution

def substitute(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding meta-substitution ``t{x/u}``, alpha-canonical."""
    return alpha_canonical(subst(t, x, u))


def subst(t: Term, x: str, u: Term) -> Term:
    """Capture-avoiding ``t{x/u}`` without canonicalising the result."""
    return _subst(t, x, u, u.free_vars())


def _subst(t, x, u, fvu):
    if x not in t.free_vars():
        return t
    c = t.__class__
    if c is Var:
        return u
    if c is App:
        return App(_subst(t.fun, x, u, fvu), _subst(t.arg, x, u, fvu))
    if c is VoidJump:
        return VoidJump(_subst(t.body, x, u, fvu), _subst(t.content, x, u, fvu))
    if c is Jump:
        content = _subst(t.content, x, u, fvu)
        if t.binder == x:
            return Jump(t.body, x, content)
        y, body = _avoid_capture(t.binder, t.body, x, fvu)
        return Jump(_subst(body, x, u, fvu), y, content)
    # Lam; x is free in t so the binder differs from x
    y, body = _avoid_capture(t.binder, t.body, x, fvu)
    return Lam(y, _subst(body, x, u, fvu))


def _avoid_capture(y, body, x, fvu):
    if y not in fvu or x not in body.free_vars():
        return y, body
    z = fresh_name(fvu | all_names(body) | {x}, y)
    return z, _subst(body, y, Var(z), frozenset((z,)))


def rename_free(t: Term, x: str, y: str) -> Term:
    """Rename every free ``x`` to ``y`` (capture-avoiding, not canonical)."""
    return _subst(t, x, Var(y), frozenset((y,)))


# ---------------------------------------------------------------- positions

def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        s = stack.pop()
        yield s
        stack.extend(children(s))


def positions(t: Term) -> list:
    """All positions of ``t`` in pre-order (left to right)."""
    out = []

    def walk(s, p):
        out.append(p)
        for i, k in enumerate(children(s), 1):
            walk(k, p + (i,))

    walk(t, ())
    return out


def subterm_at(t: Term, p: Position) -> Term:
    for i in p:
        kids = children(t)
        if not 1 <= i <= len(kids):
            raise IndexError(f"invalid position {p}")
        t = kids[i - 1]
    return t


def replace_at(t: Term, p: Position, s: Term) -> Term:
    """Plug ``s`` at ``p`` (no renaming: the caller handles capture)."""
    if not p:
        return s
    kids = list(children(t))
    i = p[0]
    if not 1 <= i <= len(kids):
        raise IndexError(f"invalid position {p}")
    kids[i - 1] = replace_at(kids[i - 1], p[1:], s)
    return with_children(t, kids)


def binders_on_path(t: Term, p: Position) -> list:
    """Names bound by the nodes crossed when walking from the root to ``p``."""
    out = []
    for i in p:
        b = binder_at_edge(t, i)
        if b is not None:
            out.append(b)
        t = subterm_at(t, (i,))
    return out


def path_is_boxed(t: Term, p: Position) -> bool:
    """True iff the path to ``p`` crosses an App-argument or jump-content edge."""
    return any(i == 2 for i in p)


@dataclass(frozen=True)
class Context:
    """A term with a hole at ``position``."""

    term: Term
    position: Position
    binders: frozenset
    shape: str  # 'spine' or 'boxed'

    def plug(self, s: Term) -> Term:
        return replace_at(self.term, self.position, s)


def context_at(t: Term, p: Position) -> tuple:
    """``(subterm, context)`` where ``context.plug(subterm) == t``."""
    sub = subterm_at(t, p)
    shape = "boxed" if path_is_boxed(t, p) else "spine"
    return sub, Context(t, tuple(p), frozenset(binders_on_path(t, p)), shape)


def positions_of(t: Term, x: str) -> list:
    """Positions of the free occurrences of ``x``, left to right."""
    out = []

    def walk(s, p):
        if x not in s.free_vars():
            return
        c = s.__class__
        if c is Var:
            out.append(p)
        elif c is Lam:
            walk(s.body, p + (1,))
        elif c is App:
            walk(s.fun, p + (1,))
            walk(s.arg, p + (2,))
        else:
            if s.binder != x:
                walk(s.body, p + (1,))
            walk(s.content, p + (2,))

    walk(t, ())
    return out


def rename_at(t: Term, S: Iterable[Position], x: str, y: str) -> Term:
    """Replace the free occurrences of ``x`` at positions ``S`` by ``y``."""
    return alpha_canonical(rename_at_raw(t, S, x, y))


def rename_at_raw(t: Term, S: Iterable[Position], x: str, y: str) -> Term:
    S = set(map(tuple, S))
    if not S:
        return t
    occ = set(positions_of(t, x))
    bad = S - occ
    if bad:
        raise ValueError(f"not free occurrences of {x}: {sorted(bad)}")
    for p in S:
        if y in binders_on_path(t, p):
            raise ValueError(f"{y} would be captured at {p}")
    for p in S:
        t = replace_at(t, p, Var(y))
    return t


def split_choices(n: int) -> Iterator[tuple]:
    """Index subsets S of range(n) with 1 <= |S| <= n-1, in a fixed order."""
    for mask in range(1, (1 << n) - 1):
        yield tuple(i for i in range(n) if mask >> i & 1)


def enumerate_splits(t: Term, x: str, y: str) -> list:
    """All ``t_[y]_x``: some but not all free ``x`` renamed to a fresh ``y``."""
    occ = positions_of(t, x)
    if len(occ) < 2:
        raise ValueError(f"{x} must occur at least twice, found {len(occ)}")
    if y in all_names(t):
        raise ValueError(f"{y} is not fresh")
    return [rename_at(t, [occ[i] for i in S], x, y) for S in split_choices(len(occ))]


def max_depth(t: Term) -> int:
    return 1 + max((max_depth(k) for k in children(t)), default=0)
