"""Monomial orderings: Lex, GrLex, GrevLex and weighted orders.

A monomial is an exponent tuple. Every order exposes ``key(m)``: a tuple
that compares (as Python tuples do) exactly like the order itself.  Keys
are componentwise additive in the exponents, which is what makes every
order here compatible with multiplication.
"""

from __future__ import annotations

LESS, EQUAL, GREATER = -1, 0, 1

Monomial = tuple


def total_degree(m: Monomial) -> int:
    return sum(m)


class MonomialOrder:
    """Base class; subclasses define ``key`` and a ``spec()`` string."""

    def key(self, m: Monomial):
        raise NotImplementedError

    def compare(self, a: Monomial, b: Monomial) -> int:
        if len(a) != len(b):
            raise ValueError(f"monomial length mismatch: {len(a)} vs {len(b)}")
        ka, kb = self.key(a), self.key(b)
        if ka < kb:
            return LESS
        if ka > kb:
            return GREATER
        return EQUAL

    def spec(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.spec()!r})"

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and self.spec() == other.spec()

    def __hash__(self):
        return hash(self.spec())


class Lex(MonomialOrder):
    """Pure lexicographic, first variable dominant."""

    def key(self, m):
        return m

    def spec(self):
        return "lex"


class GrLex(MonomialOrder):
    """Total degree, ties broken lexicographically."""

    def key(self, m):
        return (sum(m), m)

    def spec(self):
        return "grlex"


class GrevLex(MonomialOrder):
    """Total degree, ties broken reverse-lexicographically: among equal
    degrees the monomial with the smaller exponent in the last differing
    variable is the larger one."""

    def key(self, m):
        return (sum(m), tuple(-e for e in reversed(m)))

    def spec(self):
        return "grevlex"


class WeightedOrder(MonomialOrder):
    """Weighted degree dot(w, m) first, ties broken by a classical order.

    Weights must be strictly positive integers so the constant monomial is
    the unique minimum (well-ordering).
    """

    def __init__(self, weights, tiebreak: str = "grevlex"):
        weights = tuple(int(w) for w in weights)
        if not weights or any(w < 1 for w in weights):
            raise ValueError(f"weights must be >= 1, got {weights}")
        if tiebreak not in ("grevlex", "lex"):
            raise ValueError(f"unknown tiebreak {tiebreak!r}")
        self.weights = weights
        self.tiebreak = tiebreak

    def key(self, m):
        w = self.weights
        wd = sum(w[i] * e for i, e in enumerate(m))
        if self.tiebreak == "grevlex":
            return (wd, sum(m), tuple(-e for e in reversed(m)))
        return (wd, m)

    def spec(self):
        return "weights:" + ",".join(map(str, self.weights)) + ":" + self.tiebreak


LEX = Lex()
GRLEX = GrLex()
GREVLEX = GrevLex()

_BUILTIN = {"lex": LEX, "grlex": GRLEX, "grevlex": GREVLEX}


def parse_order(text: str) -> MonomialOrder:
    """Parse an order spec: ``lex`` | ``grlex`` | ``grevlex`` |
    ``weights:W1,...,Wn[:tiebreak]``."""
    text = text.strip().lower()
    if text in _BUILTIN:
        return _BUILTIN[text]
    if text.startswith("weights:"):
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad order spec {text!r}")
        try:
            weights = [int(w) for w in parts[1].split(",")]
        except ValueError:
            raise ValueError(f"bad weight list in order spec {text!r}") from None
        tiebreak = parts[2] if len(parts) == 3 else "grevlex"
        return WeightedOrder(weights, tiebreak)
    raise ValueError(f"unknown order spec {text!r}")


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    """True iff a | b, i.e. b/a has nonnegative exponents."""
    return all(x <= y for x, y in zip(a, b))


def monomial_div(a: Monomial, b: Monomial) -> Monomial:
    """a / b; caller guarantees divisibility."""
    return tuple(x - y for x, y in zip(a, b))
