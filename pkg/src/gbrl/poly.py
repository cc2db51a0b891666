"""Multivariate polynomials over F_p with explicit monomial orders.

Terms live in a dict keyed by exponent tuple.  Order-aware operations
(normal form, S-polynomials, the F4 engine) return polynomials whose term
dicts are insertion-ordered descending under the order they were built
with; nothing ever re-sorts implicitly on an order change.
"""

from __future__ import annotations

import json

from .field import DEFAULT_MODULUS, ff_inv, validate_modulus
from .orders import MonomialOrder, monomial_div, monomial_divides, monomial_lcm, monomial_mul


class Polynomial:
    __slots__ = ("nvars", "p", "terms")

    def __init__(self, terms, nvars: int, p: int = DEFAULT_MODULUS):
        clean = {}
        for mono, coeff in (terms.items() if isinstance(terms, dict) else terms):
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars or any(e < 0 for e in mono):
                raise ValueError(f"bad exponent vector {mono} for nvars={nvars}")
            c = int(coeff) % p
            if c:
                clean[mono] = (clean.get(mono, 0) + c) % p
                if not clean[mono]:
                    del clean[mono]
        self.terms = clean
        self.nvars = nvars
        self.p = p

    # construction helpers -------------------------------------------------
    @classmethod
    def zero(cls, nvars, p=DEFAULT_MODULUS):
        return cls({}, nvars, p)

    @classmethod
    def from_json(cls, obj, nvars, p=DEFAULT_MODULUS):
        return cls({tuple(e): c for e, c in obj}, nvars, p)

    def to_json(self, order: MonomialOrder | None = None):
        items = self.sorted_terms(order) if order else sorted(self.terms.items())
        return [[list(m), c] for m, c in items]

    # queries ---------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def lm(self, order: MonomialOrder):
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=order.key)

    def lc(self, order: MonomialOrder) -> int:
        return self.terms[self.lm(order)]

    def lt(self, order: MonomialOrder):
        m = self.lm(order)
        return m, self.terms[m]

    def sorted_terms(self, order: MonomialOrder):
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    # arithmetic ------------------------------------------------------------
    def _like(self, terms: dict) -> "Polynomial":
        f = Polynomial.__new__(Polynomial)
        f.terms = terms
        f.nvars = self.nvars
        f.p = self.p
        return f

    def scale(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return self._like({})
        return self._like({m: (v * c) % self.p for m, v in self.terms.items()})

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(ff_inv(self.lc(order), self.p))

    def mul_term(self, mono, coeff: int) -> "Polynomial":
        coeff %= self.p
        if coeff == 0:
            return self._like({})
        return self._like(
            {monomial_mul(m, mono): (v * coeff) % self.p for m, v in self.terms.items()}
        )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        out = dict(self.terms)
        p = self.p
        for m, c in other.terms.items():
            s = (out.get(m, 0) + c) % p
            if s:
                out[m] = s
            elif m in out:
                del out[m]
        return self._like(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(self.p - 1)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_compatible(other)
        out = {}
        p = self.p
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = monomial_mul(m1, m2)
                s = (out.get(m, 0) + c1 * c2) % p
                if s:
                    out[m] = s
                elif m in out:
                    del out[m]
        return self._like(out)

    def _check_compatible(self, other):
        if self.nvars != other.nvars or self.p != other.p:
            raise ValueError("polynomials live in different rings")

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, self.p, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for m, c in sorted(self.terms.items(), reverse=True):
            vars_ = "*".join(
                f"x{i + 1}^{e}" if e > 1 else f"x{i + 1}" for i, e in enumerate(m) if e
            )
            bits.append(f"{c}*{vars_}" if vars_ else str(c))
        return "Poly(" + " + ".join(bits) + ")"


class Ideal:
    """A nonempty list of nonzero generators sharing nvars and modulus."""

    __slots__ = ("generators", "nvars", "p")

    def __init__(self, generators, nvars: int, p: int = DEFAULT_MODULUS):
        generators = list(generators)
        if not generators:
            raise ValueError("ideal needs at least one generator")
        for g in generators:
            if g.nvars != nvars or g.p != p:
                raise ValueError("generator ring mismatch")
            if g.is_zero():
                raise ValueError("zero generator")
        self.generators = generators
        self.nvars = nvars
        self.p = p

    @classmethod
    def from_json(cls, obj, p=None):
        nvars = int(obj["nvars"])
        p = validate_modulus(int(obj.get("modulus", p or DEFAULT_MODULUS)))
        gens = [Polynomial.from_json(poly, nvars, p) for poly in obj["polys"]]
        return cls(gens, nvars, p)

    @classmethod
    def load(cls, path, p=None):
        with open(path) as fh:
            return cls.from_json(json.load(fh), p=p)

    def to_json(self, order: MonomialOrder | None = None):
        return {
            "nvars": self.nvars,
            "modulus": self.p,
            "polys": [g.to_json(order) for g in self.generators],
        }


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    """S(f, g): the monic-leading combination cancelling both leading terms."""
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    lf, lg = f.lm(order), g.lm(order)
    lcm = monomial_lcm(lf, lg)
    uf = f.mul_term(monomial_div(lcm, lf), ff_inv(f.terms[lf], f.p))
    ug = g.mul_term(monomial_div(lcm, lg), ff_inv(g.terms[lg], g.p))
    return uf - ug


def normal_form(f: Polynomial, G, order: MonomialOrder) -> Polynomial:
    """Remainder of f on division by G: no monomial of the result is
    divisible by any leading monomial of G."""
    reducers = []
    for g in G:
        if g.is_zero():
            raise ValueError("zero divisor polynomial")
        lmg = g.lm(order)
        inv = ff_inv(g.terms[lmg], g.p)
        tail = [(m, c) for m, c in g.terms.items() if m != lmg]
        reducers.append((lmg, inv, tail))

    p = f.p
    key = order.key
    work = dict(f.terms)
    out = []
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        for lmg, inv, tail in reducers:
            if monomial_divides(lmg, m):
                mult = monomial_div(m, lmg)
                factor = c * inv % p
                for mono, gc in tail:
                    mm = monomial_mul(mono, mult)
                    s = (work.get(mm, 0) - factor * gc) % p
                    if s:
                        work[mm] = s
                    elif mm in work:
                        del work[mm]
                break
        else:
            out.append((m, c))
    return f._like(dict(out))
