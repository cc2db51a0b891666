"""Instrumented F4-style Groebner basis engine.

Each round batches every critical pair of minimal lcm total degree,
assembles the pair rows plus reducer closure into a Macaulay-type matrix
(rows = polynomials, columns = monomials sorted descending), eliminates it
over F_p, and adjoins rows whose leading monomial is new.  Per-round trace
statistics (column count, pair count, selection degree) feed the reward
side of the package.  A plain Buchberger implementation and an
S-polynomial checker serve as independent cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import ff_inv
from .orders import (
    MonomialOrder,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)
from .poly import Ideal, Polynomial, normal_form, s_polynomial


@dataclass(frozen=True)
class TraceStats:
    """Per-round F4 statistics: matrix columns, selected pairs, pair degree."""

    n_m: tuple
    n_p: tuple
    d_p: tuple

    def __post_init__(self):
        if not (len(self.n_m) == len(self.n_p) == len(self.d_p)):
            raise ValueError("trace record lengths differ")
        if any(v < 1 for rec in (self.n_m, self.n_p, self.d_p) for v in rec):
            raise ValueError("trace entries must be >= 1")

    @property
    def t(self) -> int:
        return len(self.n_m)

    def to_json(self):
        return {"n_m": list(self.n_m), "n_p": list(self.n_p), "d_p": list(self.d_p)}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple(obj["n_m"]), tuple(obj["n_p"]), tuple(obj["d_p"]))


@dataclass
class GroebnerResult:
    basis: list
    trace: TraceStats


class MacaulayMatrix:
    """Sparse rows over a dense, order-sorted column index.

    ``cols`` holds the column monomials descending under the order, so the
    leftmost nonzero entry of a row is its leading monomial.  ``input_lm_cols``
    are the columns that were leading monomials of input rows; rows of the
    eliminated matrix whose pivot falls outside that set are new information.
    """

    def __init__(self, cols, rows, input_lm_cols, p):
        self.cols = cols
        self.col_index = {m: j for j, m in enumerate(cols)}
        self.rows = rows  # list of dict mono -> coeff
        self.input_lm_cols = input_lm_cols
        self.p = p

    @property
    def n_cols(self) -> int:
        return len(self.cols)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def to_dense(self) -> np.ndarray:
        A = np.zeros((len(self.rows), len(self.cols)), dtype=np.int64)
        for i, row in enumerate(self.rows):
            for m, c in row.items():
                A[i, self.col_index[m]] = c
        return A


def select_pairs(pending, order: MonomialOrder, lms):
    """Normal strategy: all pairs whose lcm has minimal total degree.

    Returns (selected, d) with ``selected`` in deterministic index order.
    """
    if not pending:
        raise ValueError("no pending pairs")
    degs = [sum(monomial_lcm(lms[i], lms[j])) for i, j in pending]
    d = min(degs)
    selected = sorted(pr for pr, dg in zip(pending, degs) if dg == d)
    return selected, d


def symbolic_preprocessing(selected_rows, active, polys, lms, order: MonomialOrder, p) -> MacaulayMatrix:
    """Close the monomial column set of the selected rows under reduction.

    ``selected_rows`` is a list of (multiplier, poly index).  For every
    column monomial not already a row's leading monomial that is divisible
    by some active leading monomial, one reducer row (the shifted basis
    element of smallest index) is adjoined; its tail can introduce further
    columns, hence the loop.
    """
    if not selected_rows:
        raise ValueError("no rows selected")
    key = order.key
    rows = []
    done = set()
    monos = set()
    todo = set()

    def add_row(mult, idx):
        shifted = {monomial_mul(m, mult): c for m, c in polys[idx].terms.items()}
        rows.append(shifted)
        done.add(monomial_mul(lms[idx], mult))
        for m in shifted:
            if m not in monos:
                monos.add(m)
                todo.add(m)

    for mult, idx in selected_rows:
        add_row(mult, idx)
    todo -= done

    while todo:
        m = max(todo, key=key)
        todo.discard(m)
        done.add(m)
        for idx in active:
            if monomial_divides(lms[idx], m):
                add_row(monomial_div(m, lms[idx]), idx)
                todo -= done
                break

    cols = sorted(monos, key=key, reverse=True)
    col_index = {m: j for j, m in enumerate(cols)}
    # leftmost pivot first; stable on construction order
    order_of = [min(col_index[m] for m in row) for row in rows]
    rows = [row for _, row in sorted(zip(order_of, rows), key=lambda t: t[0])]
    input_lm_cols = {min(col_index[m] for m in row) for row in rows}
    return MacaulayMatrix(cols, rows, input_lm_cols, p)


def _rref_mod(A: np.ndarray, p: int):
    """In-place reduced row echelon form over F_p; returns pivot columns."""
    n_rows, n_cols = A.shape
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        sub = A[r:, c]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = ff_inv(int(A[r, c]), p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return pivots


def reduce_matrix(mat: MacaulayMatrix, nvars: int):
    """Eliminate the matrix and return the genuinely new rows as polynomials.

    The reduced row echelon form depends only on the row space and the
    column order, so the result is deterministic by construction.  Rows
    whose pivot column was already the leading monomial of some input row
    carry no new leading term and are dropped.
    """
    p = mat.p
    A = mat.to_dense()
    pivots = _rref_mod(A, p)
    out = []
    for r, c in enumerate(pivots):
        if c in mat.input_lm_cols:
            continue
        row = A[r]
        nz = np.nonzero(row)[0]
        terms = {mat.cols[j]: int(row[j]) for j in nz}
        f = Polynomial.__new__(Polynomial)
        f.terms = terms
        f.nvars = nvars
        f.p = p
        out.append(f)
    return out


def _update(active, pairs, ih, lms):
    """Gebauer-Moeller pair update (Becker-Weispfenning p. 230).

    Installs polynomial ``ih`` into the active set, pruning new and old
    pairs with the product and chain criteria.  Everything iterates in
    sorted index order so results are deterministic.
    """
    mh = lms[ih]
    lcm_h = {ig: monomial_lcm(lms[ig], mh) for ig in active}

    D = []
    rest = sorted(active)
    while rest:
        ig = rest.pop(0)
        L = lcm_h[ig]
        disjoint = monomial_mul(lms[ig], mh) == L
        if disjoint or (
            not any(monomial_divides(lcm_h[jg], L) for jg in rest)
            and not any(monomial_divides(lcm_h[jg], L) for jg in D)
        ):
            D.append(ig)
    # product criterion: drop pairs with disjoint leading monomials
    E = [ig for ig in D if monomial_mul(lms[ig], mh) != lcm_h[ig]]

    new_pairs = []
    for i, j in pairs:
        Lij = monomial_lcm(lms[i], lms[j])
        if (
            not monomial_divides(mh, Lij)
            or monomial_lcm(lms[i], mh) == Lij
            or monomial_lcm(lms[j], mh) == Lij
        ):
            new_pairs.append((i, j))
    new_pairs.extend((ig, ih) for ig in sorted(E))

    new_active = [ig for ig in active if not monomial_divides(mh, lms[ig])]
    new_active.append(ih)
    return new_active, new_pairs


def autoreduce(polys, order: MonomialOrder):
    """Inter-reduce a Groebner basis to the unique reduced, monic form."""
    polys = [g for g in polys if not g.is_zero()]
    polys.sort(key=lambda g: order.key(g.lm(order)))
    minimal = []
    for g in polys:
        # ascending leading monomials: only already-kept ones can divide
        lmg = g.lm(order)
        if not any(monomial_divides(h.lm(order), lmg) for h in minimal):
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1 :]
        h = normal_form(g, others, order) if others else g
        if not h.is_zero():
            out.append(h.monic(order))
    out.sort(key=lambda g: order.key(g.lm(order)), reverse=True)
    return out


def f4_groebner(ideal: Ideal, order: MonomialOrder) -> GroebnerResult:
    """Reduced Groebner basis of the ideal plus per-round trace statistics."""
    polys = []
    lms = []
    active = []
    pairs = []
    for g in ideal.generators:
        g = g.monic(order)
        idx = len(polys)
        polys.append(g)
        lms.append(g.lm(order))
        active, pairs = _update(active, pairs, idx, lms)

    n_m, n_p, d_p = [], [], []
    while pairs:
        selected, d = select_pairs(pairs, order, lms)
        sel_set = set(selected)
        pairs = [pr for pr in pairs if pr not in sel_set]
        rows = []
        seen = set()
        for i, j in selected:
            L = monomial_lcm(lms[i], lms[j])
            for idx in (i, j):
                entry = (monomial_div(L, lms[idx]), idx)
                if entry not in seen:
                    seen.add(entry)
                    rows.append(entry)
        mat = symbolic_preprocessing(rows, active, polys, lms, order, ideal.p)
        new = reduce_matrix(mat, ideal.nvars)
        n_m.append(mat.n_cols)
        n_p.append(len(selected))
        d_p.append(d)
        for h in new:
            idx = len(polys)
            polys.append(h.monic(order))
            lms.append(h.lm(order))
            active, pairs = _update(active, pairs, idx, lms)

    basis = autoreduce([polys[i] for i in active], order)
    return GroebnerResult(basis, TraceStats(tuple(n_m), tuple(n_p), tuple(d_p)))


def buchberger_reference(ideal: Ideal, order: MonomialOrder):
    """Textbook pair-by-pair Buchberger with only the product criterion.

    Deliberately shares no pair management with the F4 path; used as the
    correctness oracle for it.
    """
    G = [g.monic(order) for g in ideal.generators]
    lms = [g.lm(order) for g in G]
    pending = [(i, j) for j in range(len(G)) for i in range(j)]
    while pending:
        pending.sort(
            key=lambda pr: (order.key(monomial_lcm(lms[pr[0]], lms[pr[1]])), pr)
        )
        i, j = pending.pop(0)
        lcm = monomial_lcm(lms[i], lms[j])
        if lcm == monomial_mul(lms[i], lms[j]):
            continue
        h = normal_form(s_polynomial(G[i], G[j], order), G, order)
        if h.is_zero():
            continue
        h = h.monic(order)
        G.append(h)
        lms.append(h.lm(order))
        pending.extend((k, len(G) - 1) for k in range(len(G) - 1))
    return autoreduce(G, order)


def is_groebner_basis(G, order: MonomialOrder) -> bool:
    """Definitional check: every S-polynomial reduces to zero modulo G."""
    G = list(G)
    if any(g.is_zero() for g in G):
        raise ValueError("zero polynomial in basis")
    for j in range(len(G)):
        for i in range(j):
            s = s_polynomial(G[i], G[j], order)
            if s.is_zero():
                continue
            if not normal_form(s, G, order).is_zero():
                return False
    return True
