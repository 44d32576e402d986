"""Sparse multivariate polynomials with exact rational coefficients.

A :class:`PolyRing` fixes the ordered variable list and, optionally, a power
ideal ``(x_1^t_1, ..., x_m^t_m)`` to divide out.  Polynomials keep a reference
to their ring, and products in a truncated ring are reduced on the fly, so
every stored polynomial is the canonical representative of its class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Union

from ._expr import ExprParser, ParseError

Scalar = Union[int, Fraction]
Exponent = tuple[int, ...]


@dataclass(frozen=True)
class PolyRing:
    """Coefficient algebra ``Q[x_1..x_m]`` or ``Q[x]/(x_i^t_i)``.

    ``truncation`` is None for the full polynomial ring, otherwise the tuple of
    per-variable bounds ``t_i >= 1``.
    """

    variables: tuple[str, ...]
    truncation: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variable names in {self.variables}")
        if self.truncation is not None:
            t = tuple(int(b) for b in self.truncation)
            if len(t) != len(self.variables):
                raise ValueError("truncation needs one bound per variable")
            if any(b < 1 for b in t):
                raise ValueError("truncation bounds must be >= 1")
            object.__setattr__(self, "truncation", t)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    @property
    def zero(self) -> Polynomial:
        return Polynomial(self, {})

    @property
    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: Scalar) -> Polynomial:
        return Polynomial(self, {(0,) * self.nvars: Fraction(c)})

    def var(self, name_or_index: str | int) -> Polynomial:
        i = self.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        exp = [0] * self.nvars
        exp[i] = 1
        return Polynomial(self, {tuple(exp): Fraction(1)})

    def monomial(self, exp: Exponent, coeff: Scalar = 1) -> Polynomial:
        return Polynomial(self, {tuple(exp): Fraction(coeff)})

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def in_ideal(self, exp: Exponent) -> bool:
        t = self.truncation
        return t is not None and any(e >= b for e, b in zip(exp, t))

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self)

    def coerce(self, value: Polynomial | Scalar | str) -> Polynomial:
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise ValueError("polynomial belongs to a different ring")
            return value
        if isinstance(value, str):
            return self.parse(value)
        return self.const(value)


def grlex_key(exp: Exponent) -> tuple:
    """Sort key putting higher total degree first, then lex by variable order."""
    return (-sum(exp), tuple(-e for e in exp))


class Polynomial:
    """Immutable sparse polynomial: a map from exponent tuples to nonzero Fractions."""

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, Scalar]):
        clean = {}
        n = ring.nvars
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has wrong length for {ring.variables}")
            if c and not ring.in_ideal(exp):
                clean[exp] = Fraction(c)
        self.ring = ring
        self.terms = clean

    @classmethod
    def _raw(cls, ring: PolyRing, terms: dict) -> Polynomial:
        # terms already canonical: no zeros, reduced, Fraction values
        p = object.__new__(cls)
        p.ring = ring
        p.terms = terms
        return p

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def weighted_degrees(self, weights: Iterable[int]) -> set[int]:
        w = tuple(weights)
        return {sum(a * b for a, b in zip(e, w)) for e in self.terms}

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: Polynomial):
        if other.ring != self.ring:
            raise ValueError(
                f"ring mismatch: {self.ring.variables} vs {other.ring.variables}"
            )

    def _lift(self, other) -> Polynomial | None:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not other.terms:
            return self
        res = dict(self.terms)
        for e, c in other.terms.items():
            s = res.get(e, 0) + c
            if s:
                res[e] = s
            else:
                res.pop(e, None)
        return Polynomial._raw(self.ring, res)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c: Scalar) -> Polynomial:
        if not c:
            return self.ring.zero
        c = Fraction(c)
        return Polynomial._raw(self.ring, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return self.ring.zero
        t = self.ring.truncation
        res: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if t is not None and any(a >= b for a, b in zip(e, t)):
                    continue
                s = res.get(e, 0) + c1 * c2
                if s:
                    res[e] = s
                else:
                    del res[e]
        return Polynomial._raw(self.ring, res)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = self.ring.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, i: int) -> Polynomial:
        """Formal partial derivative in variable ``i`` (0-based)."""
        if not 0 <= i < self.ring.nvars:
            raise IndexError(f"variable index {i} out of range for {self.ring.variables}")
        res = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = e[:i] + (k - 1,) + e[i + 1:]
                res[ne] = c * k
        return Polynomial._raw(self.ring, res)

    # -- equality / printing -------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.ring.nvars: Fraction(other)}
        return NotImplemented

    @cached_property
    def _hash(self) -> int:
        return hash((self.ring, frozenset(self.terms.items())))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, {list(self.ring.variables)})"


def _format_monomial(exp: Exponent, names: tuple[str, ...]) -> str:
    parts = []
    for name, k in zip(names, exp):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def format_poly(p: Polynomial) -> str:
    """Canonical text form in graded-lex order, e.g. ``3/2*x^2*y - y``."""
    if not p.terms:
        return "0"
    out = []
    for exp, c in p.sorted_terms():
        mono = _format_monomial(exp, p.ring.variables)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# -- module-level helpers -------------------------------------------------


def parse_poly(text: str, ring: PolyRing | Iterable[str]) -> Polynomial:
    """Parse ``text`` over ``ring`` (or over a plain variable list).

    Raises :class:`ParseError` with the offending position on syntax errors
    and on unknown variable names.
    """
    if not isinstance(ring, PolyRing):
        ring = PolyRing(tuple(ring))

    def var(name, pos):
        if name not in ring.variables:
            raise ParseError(f"unknown variable {name!r}", pos, text)
        return ring.var(name)

    return ExprParser(text, ring.const, var).parse()


def poly_arith(op: str, p: Polynomial, q: Polynomial | Scalar) -> Polynomial:
    if op == "add":
        return p + _same_ring(p, q)
    if op == "sub":
        return p - _same_ring(p, q)
    if op == "mul":
        return p * _same_ring(p, q)
    if op == "scale":
        if isinstance(q, Polynomial):
            raise TypeError("scale expects a rational scalar")
        return p.scale(q)
    raise ValueError(f"unknown operation {op!r}")


def _same_ring(p: Polynomial, q) -> Polynomial:
    if isinstance(q, Polynomial):
        p._check(q)
        return q
    return p.ring.const(q)


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.diff(i)


def reduce_truncation(p: Polynomial, exponents: Iterable[int]) -> Polynomial:
    """Image of ``p`` in ``Q[x]/(x_i^t_i)``; the result lives in the truncated ring."""
    target = PolyRing(p.ring.variables, tuple(exponents))
    return Polynomial(target, p.terms)


def monomials_of_degree(nvars: int, d: int, weights: tuple[int, ...] | None = None):
    """Exponent tuples of (weighted) degree exactly ``d``, in grlex-descending order."""
    w = weights or (1,) * nvars
    out: list[Exponent] = []

    def rec(i, remaining, prefix):
        if i == nvars:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        if w[i] <= 0:
            raise ValueError("variable weights must be positive")
        k = remaining // w[i]
        while k >= 0:
            prefix.append(k)
            rec(i + 1, remaining - k * w[i], prefix)
            prefix.pop()
            k -= 1

    if d >= 0:
        rec(0, d, [])
    return out


def monomials_up_to(nvars: int, d: int) -> list[Exponent]:
    return [e for k in range(d + 1) for e in monomials_of_degree(nvars, k)]


def truncated_monomials(bounds: tuple[int, ...]) -> list[Exponent]:
    """All standard monomials of ``Q[x]/(x_i^t_i)`` in grlex-descending order."""
    from itertools import product

    exps = list(product(*(range(b) for b in bounds)))
    return sorted(exps, key=grlex_key)
