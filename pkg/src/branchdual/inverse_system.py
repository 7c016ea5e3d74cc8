"""The duality engine for finite-codimension subalgebras of k[[t]].

Under the pairing ``perp(g, f) = (g(d/dt) f)(0)`` a subalgebra B with
delta invariant d corresponds to a d-dimensional space of polynomial
differential operators annihilating B: its inverse system.  This module
computes that space, decides when an operator space cuts out a
subalgebra (algebra-forming certificates), intersects annihilators with
B, builds standard filtrations with their cutting derivations,
transports inverse systems along reparametrizations, and produces the
Laurent (residue) representatives of inverse-system elements.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import InternalError, NotAlgebraForming, PrecisionExhausted
from .linalg import QMatrix, _rref_rows, nullspace, solve
from .series import DiffOp, Series, mul, order, perp, truncate
from .subalgebra import (
    AlgebraInput,
    Echelon,
    Staircase,
    _positive_gens,
    closure,
    membership,
)


@dataclass(frozen=True)
class InverseSystem:
    """Reduced basis of an annihilating operator space.

    ``basis`` is in reduced echelon form by leading degree, each element
    monic in its leading coefficient, listed by increasing degree.
    """

    basis: tuple
    dim: int
    conductor_bound: int


@dataclass(frozen=True)
class AFCertificate:
    """Outcome of the algebra-forming test.

    On failure ``witness`` is a series f with perp(g, f) = 0 for every g
    in the tested space but perp(g, f^2) != 0 for some g.
    """

    verdict: bool
    witness: Series | None = None


@dataclass(frozen=True)
class FiltrationStep:
    gap_exponent: int
    new_algebra: Staircase
    cutting_element: Series


@dataclass(frozen=True)
class Filtration:
    """Chain B = B_0 < B_1 < ... < B_delta = k[[t]], one dimension a step.

    Step i adjoins the monomial t^gap_exponent and records a cutting
    element l with Ker(d_l) = B_(i-1) inside B_i.
    """

    steps: tuple


@dataclass(frozen=True)
class CuttingDerivation:
    """Element l of the bigger algebra whose functional cuts out the smaller.

    ``operator`` is the matching differential operator: sum c_i u^i for
    l = sum c_i t^i.
    """

    l: Series
    operator: DiffOp


def _reduce_ops(ops, width: int):
    """Canonical reduced basis of an operator list.

    Echelon by leading (highest) degree, fully reduced, each row then
    rescaled monic in its lowest-degree coefficient, returned by
    increasing degree.  ``width`` bounds degrees: all input degrees must
    be < width.
    """
    rows = []
    for g in ops:
        if g.degree >= width:
            raise ValueError(f"operator degree {g.degree} exceeds bound {width - 1}")
        if not g.is_zero():
            rows.append([g.coeff(width - 1 - k) for k in range(width)])
    _rref_rows(rows)
    out = []
    for r in rows:
        if any(x != 0 for x in r):
            g = DiffOp.make([r[width - 1 - i] for i in range(width)])
            out.append(g.scale(Fraction(1) / g.coeffs[min(g.support())]))
    out.sort(key=lambda g: g.degree)
    return out


def _op_span_contains(basis, g: DiffOp, width: int) -> bool:
    """Whether g lies in the span of an already-reduced operator basis."""
    rows = [[b.coeff(width - 1 - k) for k in range(width)] for b in basis]
    before = len(_rref_rows([list(r) for r in rows])) if rows else 0
    rows.append([g.coeff(width - 1 - k) for k in range(width)])
    after = len(_rref_rows(rows))
    return after == before


def natural_set(A: AlgebraInput, d: int):
    """Truncated generator products of order at most d, deduplicated.

    Breadth-first products of the generators mod t^(d+1); a product is
    kept when it contributes a new pivot order, so the returned list
    spans the non-constant part of the algebra mod t^(d+1).  Products
    whose order exceeds d truncate to zero and are pruned.
    """
    gens = _positive_gens(A)
    base = [truncate(g, d) for g in gens]
    base = [g for g in base if order(g) is not None]
    ech = Echelon(d)
    out = []
    queue = deque()
    for g in base:
        if ech.insert(g) is not None:
            out.append(g)
            queue.append(g)
    while queue:
        f = queue.popleft()
        of = order(f)
        for g0 in base:
            if of + order(g0) > d:
                continue
            p = mul(f, g0)
            if ech.insert(p) is not None:
                out.append(p)
                queue.append(p)
    out.sort(key=order)
    return out


def inverse_system(A: AlgebraInput, S: Staircase) -> InverseSystem:
    """The space of operators g with perp(g, f) = 0 for all f in the algebra.

    Solved as an exact linear system over the natural spanning set in
    degrees up to c-1; the dimension must equal the delta invariant.
    """
    c = S.conductor
    if c == 0:
        return InverseSystem((), 0, 0)
    nat = natural_set(A, c - 1)
    rows = [[math.factorial(i) * h.coeff(i) for i in range(1, c)] for h in nat]
    if rows:
        vecs = nullspace(QMatrix.from_rows(rows))
    else:
        vecs = [[Fraction(int(i == k)) for i in range(c - 1)] for k in range(c - 1)]
    basis = _reduce_ops([DiffOp.make([0] + list(v)) for v in vecs], c)
    if len(basis) != S.delta:
        raise InternalError(
            f"inverse system dimension {len(basis)} differs from delta {S.delta}"
        )
    for g in basis:
        if g.coeff(0) != 0:
            raise InternalError("inverse system element with constant term")
    if basis and max(g.degree for g in basis) != c - 1:
        raise InternalError("inverse system misses the top degree c-1")
    for i in range(1, S.e0):
        if not _op_span_contains(basis, DiffOp.monomial(i), c):
            raise InternalError(f"u^{i} missing from the inverse system")
    return InverseSystem(tuple(basis), len(basis), c)


def is_algebra_forming(V, S: Staircase, A: AlgebraInput | None = None) -> AFCertificate:
    """Certificate that Ann(V) meets the algebra in a subalgebra.

    The solution space L of the linear conditions (all perp(g, h_j)
    combinations vanishing) must lie inside the quadrics given by the
    forms perp(g, h_j h_l); containment is certified exactly by values
    and polar forms on a nullspace basis.  On failure the witness
    f = sum lambda_j h_j is verified against the defining condition.
    """
    ops = [g for g in V if not g.is_zero()]
    for g in ops:
        if g.coeff(0) != 0:
            raise ValueError("operators must have zero constant term")
    if not ops:
        return AFCertificate(True, None)
    if A is None:
        A = AlgebraInput(S.algebra_generators())
    d = max(S.conductor - 1, 1 + max(g.degree for g in ops), 1)
    hs = natural_set(A, d)
    m = len(hs)
    if m == 0:
        return AFCertificate(True, None)
    lin = QMatrix.from_rows([[perp(g, h) for h in hs] for g in ops])
    L = nullspace(lin)
    if not L:
        return AFCertificate(True, None)
    prods = {}
    for j in range(m):
        for l in range(j, m):
            prods[(j, l)] = mul(hs[j], hs[l])
    for g in ops:
        Q = [
            [perp(g, prods[(min(j, l), max(j, l))]) for l in range(m)]
            for j in range(m)
        ]
        bad = None
        for a in range(len(L)):
            val = _bilinear(L[a], Q, L[a])
            if val != 0:
                bad = list(L[a])
                break
        if bad is None:
            for a in range(len(L)):
                for b in range(a + 1, len(L)):
                    if _bilinear(L[a], Q, L[b]) != 0:
                        bad = [x + y for x, y in zip(L[a], L[b])]
                        break
                if bad is not None:
                    break
        if bad is not None:
            f = Series.zero(d)
            for lam, h in zip(bad, hs):
                if lam != 0:
                    f = f + h.scale(lam)
            for g2 in ops:
                if perp(g2, f) != 0:
                    raise InternalError("algebra-forming witness fails linear part")
            if perp(g, mul(f, f)) == 0:
                raise InternalError("algebra-forming witness fails quadratic part")
            return AFCertificate(False, f)
    return AFCertificate(True, None)


def _bilinear(x, Q, y) -> Fraction:
    s = Fraction(0)
    for j, xj in enumerate(x):
        if xj == 0:
            continue
        row = Q[j]
        for l, yl in enumerate(y):
            if yl != 0:
                s += xj * row[l] * yl
    return s


def annihilator(V, S: Staircase) -> Staircase:
    """Staircase of {f in the algebra : perp(g, f) = 0 for all g in V}.

    Requires V to be algebra-forming (raises NotAlgebraForming with the
    failure certificate otherwise).  Solved inside a window wide enough
    to certify the result's conductor, with the window doubled on
    demand, then re-closed and verified.
    """
    ops = [g for g in V if not g.is_zero()]
    if not ops:
        return S
    cert = is_algebra_forming(ops, S)
    if not cert.verdict:
        raise NotAlgebraForming(cert)
    dmax = max(g.degree for g in ops)
    dim_v = len(_reduce_ops(ops, dmax + 1))
    W = max(S.conductor, dmax + 1, 4 * (S.delta + dim_v) + 4)
    while True:
        sols = _annihilator_solutions(ops, S, W)
        try:
            C = closure(AlgebraInput(tuple(sols), label=S.label), ceiling=W)
            break
        except PrecisionExhausted as ex:
            W = max(2 * W, ex.required + 4)
    for b in C.basis:
        if not membership(b, S):
            raise InternalError("annihilator left the ambient algebra")
        for g in ops:
            if perp(g, b) != 0:
                raise InternalError("annihilator basis element not annihilated")
    for j in range(C.conductor, dmax + 1):
        if any(perp(g, Series.monomial(j)) != 0 for g in ops):
            raise InternalError("annihilator conductor window not annihilated")
    return C


def _annihilator_solutions(ops, S: Staircase, W: int):
    span = list(S.basis) + [
        Series.monomial(j) for j in range(max(S.conductor, 1), W + 1)
    ]
    rows = [[perp(g, b) for b in span] for g in ops]
    vecs = nullspace(QMatrix.from_rows(rows))
    sols = []
    for v in vecs:
        coeffs = [Fraction(0)] * (W + 1)
        for x, b in zip(v, span):
            if x != 0:
                for i, bc in enumerate(b.coeffs[: W + 1]):
                    coeffs[i] += x * bc
        s = Series.make(coeffs, W)
        o = order(s)
        if o is not None and o > 0:
            sols.append(s)
    return sols


def standard_filtration(A: AlgebraInput) -> Filtration:
    """Adjoin the gap monomials t^(c-1), ..., t one at a time.

    Each step raises the dimension by exactly one and ends at k[[t]];
    every step records the cutting element whose kernel recovers the
    previous algebra.
    """
    S0 = closure(A)
    base = S0.algebra_generators()
    steps = []
    prev = S0
    adjoined = []
    for g_exp in sorted(S0.gaps, reverse=True):
        adjoined.append(Series.monomial(g_exp))
        Si = closure(AlgebraInput(base + tuple(adjoined), label=A.label))
        if Si.delta != prev.delta - 1:
            raise InternalError("filtration step did not raise dimension by one")
        cd = cutting_derivation(prev, Si)
        steps.append(FiltrationStep(g_exp, Si, cd.l))
        prev = Si
    if steps and not steps[-1].new_algebra.is_whole_ring():
        raise InternalError("filtration did not reach k[[t]]")
    return Filtration(tuple(steps))


def cutting_derivation(C: Staircase, B: Staircase) -> CuttingDerivation:
    """Element l of B whose functional kills the smaller algebra C.

    Requires C inside B with dim(B/C) = 1.  The operator g (with l its
    series counterpart) pairs to zero with the maximal ideal of C and is
    nonzero somewhere on the maximal ideal of B, so its kernel inside B
    is exactly C.  Normalized monic in the lowest-degree coefficient.
    """
    if C.delta != B.delta + 1:
        raise ValueError("codimension of the smaller algebra is not one")
    for b in C.basis:
        if not membership(b, B):
            raise ValueError("first algebra is not contained in the second")
    cc = C.conductor
    cond = [
        [math.factorial(i) * b.coeff(i) for i in range(1, cc)]
        for b in C.positive_basis()
    ]
    if cond:
        vecs = nullspace(QMatrix.from_rows(cond))
    else:
        vecs = [[Fraction(int(i == k)) for i in range(cc - 1)] for k in range(cc - 1)]
    span_b = B.maximal_ideal_spanning(cc - 1)
    chosen = None
    for require_derivation in (True, False):
        for v in vecs:
            g = DiffOp.make([0] + list(v))
            if all(perp(g, f) == 0 for f in span_b):
                continue
            if require_derivation and not _kills_products(g, B):
                continue
            chosen = g
            break
        if chosen is not None:
            break
    if chosen is None:
        raise InternalError("no cutting functional separates the two algebras")
    lead = chosen.coeffs[min(chosen.support())]
    chosen = chosen.scale(Fraction(1) / lead)
    l = Series.make(list(chosen.coeffs), None)
    return CuttingDerivation(l, chosen)


def _kills_products(g: DiffOp, S: Staircase) -> bool:
    """Whether g pairs to zero with every product of two maximal-ideal elements."""
    d = g.degree
    span = [f for f in S.maximal_ideal_spanning(d)]
    for i, f1 in enumerate(span):
        for f2 in span[i:]:
            if order(f1) + order(f2) > d:
                continue
            if perp(g, mul(f1, f2)) != 0:
                return False
    return True


def is_derivation(g: DiffOp, A: AlgebraInput, S: Staircase) -> bool:
    """Whether g induces a derivation: zero on the square of the maximal ideal."""
    if g.is_zero():
        return True
    return _kills_products(g, S)


def transport_dual(h: Series, c: int, V2: InverseSystem):
    """Inverse system after the reparametrization t -> h(t).

    M is the c x c matrix whose column j holds the coefficients of h^j;
    the dual map acts by the inverse transpose in the divided-power
    bases (1/i!) u^i.  Returns (M, transported system re-reduced).
    """
    if order(h) != 1:
        raise ValueError("reparametrization series is not a uniformizer")
    if h.eff_trunc < c - 1:
        raise PrecisionExhausted(c - 1)
    hc = truncate(h, c - 1)
    cols = []
    p = Series.one(c - 1)
    for _ in range(c):
        cols.append([p.coeff(i) for i in range(c)])
        p = mul(p, hc)
    M = QMatrix.from_rows([[cols[j][i] for j in range(c)] for i in range(c)])
    Mt = M.transpose()
    new_ops = []
    for g in V2.basis:
        d = [g.coeff(i) * math.factorial(i) for i in range(c)]
        res = solve(Mt, d)
        if res is None:
            raise InternalError("transport matrix is singular")
        x = res[0]
        new_ops.append(DiffOp.make([x[i] / math.factorial(i) for i in range(c)]))
    basis = _reduce_ops(new_ops, c) if c > 0 else []
    return M, InverseSystem(tuple(basis), len(basis), c)


def verify_duality(A: AlgebraInput) -> bool:
    """Round trip: the annihilator of the inverse system is the algebra again.

    Solves the dual linear system mod t^c and compares spans with the
    staircase; also re-checks the dimension and top-degree facts.
    """
    S = closure(A)
    V = inverse_system(A, S)
    c = S.conductor
    if c == 0:
        return V.dim == 0
    if V.dim != S.delta:
        return False
    if V.basis and max(g.degree for g in V.basis) != c - 1:
        return False
    rows = [[math.factorial(i) * g.coeff(i) for i in range(c)] for g in V.basis]
    if rows:
        sols = nullspace(QMatrix.from_rows(rows))
    else:
        sols = [[Fraction(int(i == k)) for i in range(c)] for k in range(c)]
    ech = Echelon(c - 1)
    for v in sols:
        ech.insert_coeffs(v)
    if len(ech.table) != len(S.values):
        return False
    for b in S.basis:
        if ech.insert(truncate(b, c - 1)) is not None:
            return False
    return True


def rosenlicht(g: DiffOp, c: int):
    """Laurent representative of an inverse-system element.

    Maps exponent -(i+1) to i! times the u^i coefficient of g, for
    exponents in [-c, -1].
    """
    if g.degree > c - 1:
        raise ValueError(f"operator degree {g.degree} exceeds bound {c - 1}")
    return {
        -i - 1: math.factorial(i) * gi
        for i, gi in enumerate(g.coeffs)
        if gi != 0
    }


def residue(f: Series, alpha) -> Fraction:
    """Coefficient of 1/t in f times the Laurent representative."""
    return sum((coef * f.coeff(-e - 1) for e, coef in alpha.items()), Fraction(0))
