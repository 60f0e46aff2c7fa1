"""Hypothesis strategies for terms."""

from hypothesis import strategies as st

from artifact.term import App, Jump, Lam, Var, VoidJump

NAMES = ("x", "y", "z")


def terms(universe="j", max_leaves=8, names=NAMES):
    """Random terms over a small name pool (binders reuse the pool)."""
    var = st.sampled_from(names).map(Var)

    def extend(sub):
        opts = [
            st.builds(Lam, st.sampled_from(names), sub),
            st.builds(App, sub, sub),
        ]
        if universe == "j":
            opts.append(st.builds(Jump, sub, st.sampled_from(names), sub))
        if universe == "void":
            opts.append(st.builds(VoidJump, sub, sub))
        return st.one_of(*opts)

    return st.recursive(var, extend, max_leaves=max_leaves)
