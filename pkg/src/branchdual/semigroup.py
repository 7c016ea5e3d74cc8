"""Numerical-semigroup computations.

Gap sets, conductors, symmetry, the three equivalent Gorenstein
predicates for monomial algebras, inverse systems of monomial algebras,
and saturation generators derived from characteristic exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InternalError, NonCoprime
from .inverse_system import InverseSystem
from .series import DiffOp


@dataclass(frozen=True)
class NumericalSemigroup:
    """Cofinite additive sub-semigroup of the natural numbers.

    ``generators`` is the minimal generating system; ``genus`` counts
    the gaps.
    """

    generators: tuple
    conductor: int
    gaps: tuple
    e0: int
    genus: int

    def contains(self, n: int) -> bool:
        if n < 0:
            return False
        return n >= self.conductor or (n not in self.gaps)

    @property
    def frobenius(self) -> int:
        return self.conductor - 1


def from_generators(gens) -> NumericalSemigroup:
    """Semigroup generated by positive integers; sieves the full gap set."""
    gens = sorted(set(int(g) for g in gens))
    if not gens or gens[0] <= 0:
        raise ValueError("generators must be positive integers")
    g = 0
    for a in gens:
        g = math.gcd(g, a)
    if g > 1:
        raise NonCoprime(f"generators have gcd {g}")
    e0 = gens[0]
    # Schur bound: the Frobenius number is below (e0-1)(max-1).
    bound = (e0 - 1) * (gens[-1] - 1) + e0 + 1
    member = [False] * (bound + 1)
    member[0] = True
    for n in range(1, bound + 1):
        member[n] = any(n >= a and member[n - a] for a in gens)
    gaps = tuple(n for n in range(1, bound + 1) if not member[n])
    conductor = (gaps[-1] + 1) if gaps else 0
    minimal = _minimal_generators(member, e0, conductor)
    return NumericalSemigroup(minimal, conductor, gaps, e0, len(gaps))


def _minimal_generators(member, e0: int, conductor: int):
    """Elements not expressible as a sum of two smaller nonzero elements."""
    out = []
    for n in range(1, conductor + e0 + 1):
        if not member[n]:
            continue
        if any(member[m] and member[n - m] for m in range(1, n)):
            continue
        out.append(n)
    return tuple(out)


def from_staircase(values, conductor: int) -> NumericalSemigroup:
    """Semigroup from a value window: members below c plus everything from c on."""
    if conductor == 0:
        return from_generators([1])
    positive = [v for v in values if v > 0]
    e0 = min(positive) if positive else conductor
    member = [False] * (conductor + e0 + 2)
    for v in values:
        member[v] = True
    for n in range(conductor, conductor + e0 + 2):
        member[n] = True
    gaps = tuple(n for n in range(1, conductor) if not member[n])
    minimal = _minimal_generators(member, e0, conductor)
    return NumericalSemigroup(minimal, conductor, gaps, e0, len(gaps))


def is_symmetric(D: NumericalSemigroup) -> bool:
    """Whether membership of t is equivalent to non-membership of c-1-t."""
    c = D.conductor
    return all(D.contains(t) != D.contains(c - 1 - t) for t in range(c))


def monomial_inverse_system(D: NumericalSemigroup) -> InverseSystem:
    """Inverse system of the monomial algebra: one u^i per gap i."""
    basis = tuple(DiffOp.monomial(i) for i in D.gaps)
    return InverseSystem(basis, D.genus, D.conductor)


@dataclass(frozen=True)
class GorensteinCheck:
    symmetric: bool
    c_equals_2delta: bool
    palindromic_inverse: bool


def gorenstein_check(D: NumericalSemigroup) -> GorensteinCheck:
    """The three Gorenstein predicates, computed independently.

    Symmetry by definition, conductor = 2 * genus, and the palindromic
    condition that reversing the gap polynomial lands inside the
    semigroup algebra (for each gap i, c-1-i is a member).  Their mutual
    equivalence is asserted.
    """
    sym = is_symmetric(D)
    c2d = D.conductor == 2 * D.genus
    palin = all(D.contains(D.conductor - 1 - i) for i in D.gaps)
    if not (sym == c2d == palin):
        raise InternalError("Gorenstein predicates disagree")
    return GorensteinCheck(sym, c2d, palin)


@dataclass(frozen=True)
class Characteristic:
    """Multiplicity with characteristic exponents and their normalization.

    The derived pairs satisfy beta_v / e0 = m_v / (n_1 ... n_v) with
    gcd(m_v, n_v) = 1.
    """

    e0: int
    betas: tuple
    m: tuple = field(default=())
    n: tuple = field(default=())

    @staticmethod
    def make(e0: int, betas) -> "Characteristic":
        e0 = int(e0)
        betas = tuple(int(b) for b in betas)
        if e0 < 1:
            raise ValueError("invalid characteristic: multiplicity must be positive")
        if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
            raise ValueError("invalid characteristic: exponents must increase strictly")
        if betas and betas[0] <= e0:
            raise ValueError("invalid characteristic: exponents must exceed the multiplicity")
        ms, ns = [], []
        e_prev = e0
        for b in betas:
            e_cur = math.gcd(e_prev, b)
            ns.append(e_prev // e_cur)
            ms.append(b // e_cur)
            e_prev = e_cur
        if e_prev != 1:
            raise ValueError("invalid characteristic: exponents do not reach gcd 1")
        return Characteristic(e0, betas, tuple(ms), tuple(ns))


def saturation_from_characteristic(ch: Characteristic) -> NumericalSemigroup:
    """Semigroup of the saturation, from the characteristic exponents.

    Emits the multiplicity, the middle families s * n_(v+1) ... n_g for
    m_v <= s <= floor(m_(v+1) / n_(v+1)), and the top window m_g + i for
    0 <= i < e0, then minimalizes.
    """
    if not ch.m and ch.betas:
        ch = Characteristic.make(ch.e0, ch.betas)
    g = len(ch.betas)
    exps = {ch.e0}
    for v in range(g - 1):
        tail = 1
        for n in ch.n[v + 2 :]:
            tail *= n
        n_next = ch.n[v + 1]
        hi = ch.m[v + 1] // n_next
        for s in range(ch.m[v], hi + 1):
            exps.add(s * n_next * tail)
    if g > 0:
        for i in range(ch.e0):
            exps.add(ch.m[g - 1] + i)
    return from_generators(sorted(exps))
