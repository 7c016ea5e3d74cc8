"""Truncated power series in t and exact differential operators in u.

A :class:`Series` is known modulo ``t^(trunc+1)``; ``trunc=None`` marks an
exact polynomial (all higher coefficients are genuinely zero), which is
what the expression parser produces and what adaptive-precision closure
relies on.  A :class:`DiffOp` is an exact polynomial in u acting on series
by differentiation; the pairing ``perp(g, f) = (g(d/dt) f)(0)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import PrecisionExhausted

_BIG = 10**9  # effective truncation of an exact polynomial


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Series:
    """Power series sum(coeffs[i] t^i), known modulo t^(trunc+1)."""

    coeffs: tuple
    trunc: int | None = None  # None: exact polynomial

    @staticmethod
    def make(coeffs, trunc=None) -> "Series":
        coeffs = [_q(c) for c in coeffs]
        if trunc is None:
            while coeffs and coeffs[-1] == 0:
                coeffs.pop()
        else:
            if len(coeffs) > trunc + 1:
                coeffs = coeffs[: trunc + 1]
            else:
                coeffs += [Fraction(0)] * (trunc + 1 - len(coeffs))
        return Series(tuple(coeffs), trunc)

    @staticmethod
    def monomial(exp: int, coeff=1, trunc=None) -> "Series":
        c = [Fraction(0)] * exp + [_q(coeff)]
        return Series.make(c, trunc)

    @staticmethod
    def zero(trunc=None) -> "Series":
        return Series.make([], trunc)

    @staticmethod
    def one(trunc=None) -> "Series":
        return Series.make([1], trunc)

    @property
    def exact(self) -> bool:
        return self.trunc is None

    @property
    def eff_trunc(self) -> int:
        return _BIG if self.trunc is None else self.trunc

    def coeff(self, i: int) -> Fraction:
        if i < len(self.coeffs):
            return self.coeffs[i]
        if self.exact:
            return Fraction(0)
        raise PrecisionExhausted(i, f"coefficient of t^{i} is beyond truncation {self.trunc}")

    def extended(self, trunc: int) -> "Series":
        """Same series at truncation >= trunc; exact series pad with zeros."""
        if self.exact:
            return Series.make(list(self.coeffs), trunc)
        if self.trunc >= trunc:
            return self
        raise PrecisionExhausted(trunc)

    def to_exact(self) -> "Series":
        """Reinterpret the known coefficients as an exact polynomial."""
        return Series.make(list(self.coeffs), None)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other: "Series") -> "Series":
        t = min(self.eff_trunc, other.eff_trunc)
        t = None if t >= _BIG else t
        n = max(len(self.coeffs), len(other.coeffs)) if t is None else t + 1
        out = [self.coeff(i) + other.coeff(i) for i in range(n)]
        return Series.make(out, t)

    def __sub__(self, other: "Series") -> "Series":
        return self + other.scale(-1)

    def scale(self, a) -> "Series":
        a = _q(a)
        return Series(tuple(c * a for c in self.coeffs), self.trunc)


def order(f: Series):
    """Least exponent with nonzero coefficient, or None if f = 0 mod t^(trunc+1)."""
    for i, c in enumerate(f.coeffs):
        if c != 0:
            return i
    return None


def mul(f: Series, g: Series) -> Series:
    t = min(f.eff_trunc, g.eff_trunc)
    if t >= _BIG:
        t_out = None
        n = len(f.coeffs) + len(g.coeffs)
    else:
        t_out = t
        n = t + 1
    out = [Fraction(0)] * max(n, 1)
    for i, a in enumerate(f.coeffs):
        if a == 0 or i >= n:
            continue
        for j, b in enumerate(g.coeffs):
            if i + j >= n:
                break
            if b != 0:
                out[i + j] += a * b
    return Series.make(out, t_out)


def power(f: Series, n: int) -> Series:
    r = Series.one(f.trunc)
    for _ in range(n):
        r = mul(r, f)
    return r


def compose(f: Series, h: Series) -> Series:
    """Substitution f(h(t)); h must have zero constant term."""
    if h.coeffs and h.coeffs[0] != 0:
        raise ValueError("substitution series must have zero constant term")
    t = min(f.eff_trunc, h.eff_trunc)
    t_out = None if t >= _BIG else t
    r = Series.zero(t_out)
    for c in reversed(f.coeffs):
        r = mul(r, h) + Series.make([c], t_out)
    return r


def divide_by_unit(f: Series, v: Series, prec: int | None = None) -> Series:
    """Quotient q with q*v = f; v must have nonzero constant term.

    The quotient is an infinite series in general, so when both operands
    are exact a target precision ``prec`` is required.
    """
    if not v.coeffs or v.coeffs[0] == 0:
        raise ValueError("divisor is not a unit")
    t = min(f.eff_trunc, v.eff_trunc)
    if prec is not None:
        t = min(t, prec)
    if t >= _BIG:
        raise ValueError("exact operands need an explicit quotient precision")
    v0 = v.coeffs[0]
    q = [Fraction(0)] * (t + 1)
    for n in range(t + 1):
        s = f.coeff(n)
        for k in range(1, n + 1):
            vk = v.coeff(k) if k <= v.eff_trunc else Fraction(0)
            if vk != 0:
                s -= vk * q[n - k]
        q[n] = s / v0
    return Series.make(q, t)


def truncate(f: Series, s: int) -> Series:
    """The truncated polynomial: coefficients above s dropped, trunc = s."""
    if s > f.eff_trunc:
        raise PrecisionExhausted(s)
    return Series.make(list(f.coeffs[: s + 1]), s)


@dataclass(frozen=True)
class DiffOp:
    """Polynomial sum(coeffs[i] u^i) acting on series by differentiation."""

    coeffs: tuple

    @staticmethod
    def make(coeffs) -> "DiffOp":
        coeffs = [_q(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return DiffOp(tuple(coeffs))

    @staticmethod
    def monomial(exp: int, coeff=1) -> "DiffOp":
        return DiffOp.make([0] * exp + [coeff])

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero operator."""
        return len(self.coeffs) - 1

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if i < len(self.coeffs) else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def support(self):
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        n = max(len(self.coeffs), len(other.coeffs))
        return DiffOp.make([self.coeff(i) + other.coeff(i) for i in range(n)])

    def scale(self, a) -> "DiffOp":
        a = _q(a)
        return DiffOp.make([c * a for c in self.coeffs])


def apply(g: DiffOp, f: Series) -> Series:
    """g(d/dt) applied to f; loses deg(g) orders of precision."""
    d = max(g.degree, 0)
    if f.eff_trunc < d:
        raise PrecisionExhausted(d)
    t = f.eff_trunc - d
    t_out = None if f.exact else t
    n = len(f.coeffs)
    out = [Fraction(0)] * max(n, 1)
    for i, gi in enumerate(g.coeffs):
        if gi == 0:
            continue
        # i-th derivative: coefficient of t^m picks up (m+i)!/m! f_{m+i}
        for m in range(n - i):
            fm = f.coeffs[m + i]
            if fm != 0:
                out[m] += gi * fm * (math.factorial(m + i) // math.factorial(m))
    return Series.make(out, t_out)


def perp(g: DiffOp, f: Series) -> Fraction:
    """The pairing (g(d/dt) f)(0) = sum_i g_i * i! * f_i."""
    d = g.degree
    if f.eff_trunc < d:
        raise PrecisionExhausted(d)
    s = Fraction(0)
    for i, gi in enumerate(g.coeffs):
        if gi != 0:
            s += gi * math.factorial(i) * f.coeff(i)
    return s
