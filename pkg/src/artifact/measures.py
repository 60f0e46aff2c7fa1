"""Termination measures: potential multiplicities, the j-measure, the
propagation measures of the inner/outer calculi and maximal reduction
lengths."""

from __future__ import annotations

from collections import Counter

from .rewrite import (
    RewriteSystem,
    Term,
    modulo_steps,
    quotient_for,
)
from .term import App, Jump, Lam, Var, VoidJump, alpha_canonical


class DivergenceError(RuntimeError):
    """Raised when a measure that needs strong normalisation meets a cycle."""


class StateCapExceeded(RuntimeError):
    """Raised when an exhaustive computation visits too many states."""


# ---------------------------------------------------------------- multisets

class NatMultiset:
    """A finite multiset of naturals (or of any totally ordered values)."""

    __slots__ = ("_c",)

    def __init__(self, items=()):
        self._c = Counter(items)
        for k in [k for k, v in self._c.items() if v <= 0]:
            del self._c[k]

    @classmethod
    def of(cls, *items):
        return cls(items)

    def __or__(self, other: "NatMultiset") -> "NatMultiset":
        """Multiset union ⊔ (multiplicities add up)."""
        out = NatMultiset()
        out._c = self._c + other._c
        return out

    def scale(self, n: int) -> "NatMultiset":
        """``n·M``: multiply every element by ``n``."""
        return NatMultiset(Counter({n * k: v for k, v in self._c.items()}) if self._c else ())

    def elements(self) -> list:
        return sorted(self._c.elements(), reverse=True)

    def __len__(self):
        return sum(self._c.values())

    def __eq__(self, other):
        return isinstance(other, NatMultiset) and self._c == other._c

    def __hash__(self):
        return hash(tuple(self.elements()))

    def __gt__(self, other: "NatMultiset") -> bool:
        """Strict multiset order: compare descending sequences lexicographically."""
        a, b = self.elements(), other.elements()
        for x, y in zip(a, b):
            if x != y:
                return x > y
        return len(a) > len(b)

    def __ge__(self, other):
        return self == other or self > other

    def __lt__(self, other):
        return other > self

    def __le__(self, other):
        return other >= self

    def __repr__(self):
        return "{" + ", ".join(map(str, sorted(self._c.elements()))) + "}"


def multiset_greater_bruteforce(m: NatMultiset, n: NatMultiset) -> bool:
    """Dershowitz-Manna order from its definition (slow; used as an oracle).

    ``m > n`` iff ``m != n`` and every element that ``n`` has in excess is
    dominated by some element that ``m`` has in excess.
    """
    if m == n:
        return False
    cm, cn = m._c, n._c
    x = cm - cn  # removed from m
    y = cn - cm  # added to reach n
    return all(any(a > b for a in x) for b in y)


# ---------------------------------------------------------------- multiplicities

def potential_multiplicity(t: Term, x: str) -> int:
    """``M_x(t)``: a bound on the occurrences of ``x`` that j-reduction can create."""
    if x not in t.free_vars():
        return 0
    c = t.__class__
    if c is Var:
        return 1
    if c is Lam:
        return potential_multiplicity(t.body, x)
    if c is App:
        return potential_multiplicity(t.fun, x) + potential_multiplicity(t.arg, x)
    if c is Jump:
        own = 0 if t.binder == x else potential_multiplicity(t.body, x)
        return own + max(1, potential_multiplicity(t.body, t.binder)) * potential_multiplicity(t.content, x)
    if c is VoidJump:
        return potential_multiplicity(t.body, x) + potential_multiplicity(t.content, x)
    raise TypeError(t)


def j_measure(t: Term) -> NatMultiset:
    """``dm(t)``: the multiset that strictly decreases along j-steps."""
    c = t.__class__
    if c is Var:
        return NatMultiset()
    if c is Lam:
        return j_measure(t.body)
    if c is App:
        return j_measure(t.fun) | j_measure(t.arg)
    if c is Jump:
        m = potential_multiplicity(t.body, t.binder)
        return NatMultiset.of(m) | j_measure(t.body) | j_measure(t.content).scale(max(1, m))
    raise TypeError("the j-measure is defined on terms with named jumps")


# ---------------------------------------------------------------- propagation measures

def _weight(t: Term) -> int:
    """Polynomial interpretation in which a jump multiplies its body's weight."""
    c = t.__class__
    if c is Var:
        return 2
    if c is Lam:
        return _weight(t.body) + 1
    if c is App:
        return _weight(t.fun) + _weight(t.arg) + 1
    return _weight(t.body) * (_weight(t.content) + 1)


def _flat_weight(t: Term) -> int:
    """The same interpretation with jumps read additively (2 per variable, 1 per other node)."""
    c = t.__class__
    if c is Var:
        return 2
    if c is Lam:
        return _flat_weight(t.body) + 1
    a, b = _pair(t)
    return _flat_weight(a) + _flat_weight(b) + 1


def _pair(t):
    if t.__class__ is App:
        return t.fun, t.arg
    return t.body, t.content


def inner_measure(t: Term) -> int:
    """Decreases strictly on every in1..in4 step, is 0 on jump-free terms
    and is invariant under ≡CS.

    It is the gap between a multiplicative interpretation (a jump
    multiplies the weight of its body by one plus the weight of its
    content) and the additive reading of the same constructors.  In-steps
    push jumps inwards without changing the constructors, so only the
    multiplicative part moves.
    """
    return _weight(t) - _flat_weight(t)


def jump_body_size_sum(t: Term) -> int:
    """Sum of ``size(u)`` over every jump ``u[x/v]`` in ``t``.

    Decreases on in-steps but is not invariant under ≡CS; kept for
    comparison with :func:`inner_measure`.
    """
    total = 0
    stack = [t]
    while stack:
        s = stack.pop()
        if s.__class__ in (Jump, VoidJump):
            total += s.body.size
        if s.__class__ is Lam:
            stack.append(s.body)
        elif s.__class__ is not Var:
            stack.extend(_pair(s))
    return total


def outer_measure(t: Term) -> int:
    """Sum, over the jumps of ``t``, of the non-jump-body edges above them.

    Out-steps move a jump outwards past a λ, an application or a jump
    content, so the jump (and everything in its content) loses one such
    edge; jump-body edges are not counted, which makes the measure
    invariant under ≡CS.
    """
    total = 0
    stack = [(t, 0)]
    while stack:
        s, depth = stack.pop()
        c = s.__class__
        if c is Var:
            continue
        if c is Lam:
            stack.append((s.body, depth + 1))
        elif c is App:
            stack.append((s.fun, depth + 1))
            stack.append((s.arg, depth + 1))
        else:
            total += depth
            stack.append((s.body, depth))
            stack.append((s.content, depth + 1))
    return total


# ---------------------------------------------------------------- maximal reduction length

def eta(sys: RewriteSystem, t: Term, max_states: int = 50_000) -> int:
    """Length of the longest reduction from ``t`` (modulo the system's axioms).

    Raises :class:`DivergenceError` on a cycle and :class:`StateCapExceeded`
    when more than ``max_states`` classes are reachable.
    """
    q = quotient_for(sys.axioms)
    start = q.rep(alpha_canonical(t))
    memo: dict = {}
    on_stack: set = set()
    succ_cache: dict = {}

    def succs(s):
        got = succ_cache.get(s)
        if got is None:
            got = succ_cache[s] = [r for _, r in modulo_steps(sys, s, q)]
            if len(succ_cache) > max_states:
                raise StateCapExceeded(f"more than {max_states} states from {t}")
        return got

    stack = [(start, iter(succs(start)))]
    on_stack.add(start)
    while stack:
        s, it = stack[-1]
        nxt = next(it, None)
        if nxt is None:
            stack.pop()
            on_stack.discard(s)
            memo[s] = max((memo[r] + 1 for r in succs(s)), default=0)
            continue
        if nxt in memo:
            continue
        if nxt in on_stack:
            raise DivergenceError(f"cycle through {nxt} from {t}")
        on_stack.add(nxt)
        stack.append((nxt, iter(succs(nxt))))
    return memo[start]


def eta_list(sys: RewriteSystem, terms) -> int:
    return sum(eta(sys, u) for u in terms)
