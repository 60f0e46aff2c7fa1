"""Structural lambda-calculus with jumps: rewriting, equivalences and checks."""

from . import equivalences, lambdaj, lambdavoid, measures, projection, zoo  # noqa: F401  (register rules and axioms)
from .syntax import parse, show
from .term import App, Jump, Lam, Term, Var, VoidJump, alpha_canonical, alpha_eq

__all__ = ["App", "Jump", "Lam", "Term", "Var", "VoidJump", "alpha_canonical", "alpha_eq", "parse", "show"]
