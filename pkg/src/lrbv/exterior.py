"""The exterior algebra of L over A: sparse multivectors, wedge, Gerstenhaber bracket.

A multivector is a map from strictly increasing index tuples (0-based) to
nonzero polynomial coefficients; the empty tuple holds the degree-0 part.
The text form uses 1-based indices, e.g. ``x*e[1,2] - y*e[3] + 2``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping

from ._expr import ExprParser, ParseError
from .lralg import LElement, LRPresentation, anchor_apply, bracket_L
from .ring import PolyRing, Polynomial

Index = tuple[int, ...]
Terms = dict  # Index -> Polynomial


def merge_sign(I: Index, J: Index) -> int:
    """Sign of ``e_I ^ e_J`` relative to ``e_{I u J}``; 0 if they overlap."""
    inversions = 0
    jpos = 0
    for i in I:
        # count elements of J smaller than i; they have to pass i
        while jpos < len(J) and J[jpos] < i:
            jpos += 1
        if jpos < len(J) and J[jpos] == i:
            return 0
        inversions += jpos
    return -1 if inversions & 1 else 1


def sort_sign(idx: Iterable[int]) -> tuple[int, Index]:
    """Sort a sequence of indices, returning (sign of the permutation, sorted tuple)."""
    seq = list(idx)
    if len(set(seq)) != len(seq):
        return 0, ()
    sign = 1
    # insertion sort counting swaps; index lists are short
    for a in range(1, len(seq)):
        b = a
        while b > 0 and seq[b - 1] > seq[b]:
            seq[b - 1], seq[b] = seq[b], seq[b - 1]
            sign = -sign
            b -= 1
    return sign, tuple(seq)


def _acc(terms: Terms, I: Index, c: Polynomial):
    if not c:
        return
    old = terms.get(I)
    if old is None:
        terms[I] = c
    else:
        s = old + c
        if s:
            terms[I] = s
        else:
            del terms[I]


class Multivector:
    """Immutable element of the exterior A-algebra on ``rank`` generators."""

    def __init__(self, ring: PolyRing, rank: int, terms: Mapping[Index, Polynomial] | None = None):
        self.ring = ring
        self.rank = rank
        clean: Terms = {}
        for I, c in (terms or {}).items():
            sign, J = sort_sign(I)
            if not sign or not c:
                continue
            if J and (J[0] < 0 or J[-1] >= rank):
                raise ValueError(f"index set {tuple(i + 1 for i in J)} out of range for rank {rank}")
            c = ring.coerce(c)
            _acc(clean, J, c if sign > 0 else -c)
        self.terms = clean

    @classmethod
    def _raw(cls, ring, rank, terms: Terms) -> Multivector:
        mv = object.__new__(cls)
        mv.ring = ring
        mv.rank = rank
        mv.terms = terms
        return mv

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, P: LRPresentation) -> Multivector:
        return cls._raw(P.ring, P.rank, {})

    @classmethod
    def scalar(cls, P: LRPresentation, a) -> Multivector:
        a = P.ring.coerce(a)
        return cls._raw(P.ring, P.rank, {(): a} if a else {})

    @classmethod
    def basis(cls, P: LRPresentation, I: Iterable[int], coeff=1) -> Multivector:
        """``coeff * e_I`` for 0-based indices in any order."""
        return cls(P.ring, P.rank, {tuple(I): P.ring.coerce(coeff)})

    @classmethod
    def from_element(cls, P: LRPresentation, alpha: LElement) -> Multivector:
        return cls._raw(P.ring, P.rank, {(i,): c for i, c in enumerate(alpha) if c})

    @classmethod
    def wedge_of(cls, P: LRPresentation, alphas: Iterable[LElement]) -> Multivector:
        """``<alpha_1, ..., alpha_k>`` as a multivector."""
        out = cls.scalar(P, 1)
        for alpha in alphas:
            out = wedge(out, cls.from_element(P, alpha))
        return out

    # -- inspection -----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {len(I) for I in self.terms}

    def degree(self) -> int:
        """Exterior degree of a homogeneous multivector (0 for the zero element)."""
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("multivector is not homogeneous")
        return ds.pop() if ds else 0

    def component(self, k: int) -> Multivector:
        return Multivector._raw(self.ring, self.rank, {I: c for I, c in self.terms.items() if len(I) == k})

    def coefficient(self, I: Iterable[int]) -> Polynomial:
        return self.terms.get(tuple(I), self.ring.zero)

    def max_coeff_degree(self) -> int:
        return max((c.degree() for c in self.terms.values()), default=-1)

    # -- arithmetic -----------------------------------------------------

    def _check(self, other: Multivector):
        if other.rank != self.rank or other.ring != self.ring:
            raise ValueError("multivectors live in different algebras")

    def _lift(self, other):
        if isinstance(other, Multivector):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            c = self.ring.coerce(other)
            return Multivector._raw(self.ring, self.rank, {(): c} if c else {})
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        res = dict(self.terms)
        for I, c in other.terms.items():
            _acc(res, I, c)
        return Multivector._raw(self.ring, self.rank, res)

    __radd__ = __add__

    def __neg__(self):
        return Multivector._raw(self.ring, self.rank, {I: -c for I, c in self.terms.items()})

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

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.scale(other)
        if isinstance(other, Multivector):
            return wedge(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = Multivector._raw(self.ring, self.rank, {(): self.ring.one})
        for _ in range(k):
            out = wedge(out, self)
        return out

    def scale(self, a) -> Multivector:
        a = self.ring.coerce(a)
        res: Terms = {}
        for I, c in self.terms.items():
            _acc(res, I, a * c)
        return Multivector._raw(self.ring, self.rank, res)

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self.rank == other.rank and self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction)) and other == 0:
            return not self.terms
        return NotImplemented

    @cached_property
    def _hash(self):
        return hash((self.rank, frozenset(self.terms.items())))

    def __hash__(self):
        return self._hash

    def __str__(self):
        return format_multivector(self)

    def __repr__(self):
        return f"Multivector({format_multivector(self)!r})"


def _basis_order(I: Index):
    return (len(I), I)


def format_multivector(u: Multivector) -> str:
    if not u.terms:
        return "0"
    parts = []
    for I in sorted(u.terms, key=_basis_order):
        c = u.terms[I]
        if not I:
            parts.append(str(c))
            continue
        e = "e[" + ",".join(str(i + 1) for i in I) + "]"
        if c == 1:
            parts.append(e)
        elif c == -1:
            parts.append("-" + e)
        elif len(c.terms) == 1:
            parts.append(f"{c}*{e}")
        else:
            parts.append(f"({c})*{e}")
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
    return out


def parse_multivector(text: str, P: LRPresentation) -> Multivector:
    """Parse the text form (1-based ``e[i,j]`` atoms, ``*`` is the wedge product)."""
    ring = P.ring

    def const(c):
        return Multivector.scalar(P, ring.const(c))

    def var(name, pos):
        if name not in ring.variables:
            raise ParseError(f"unknown variable {name!r}", pos, text)
        return Multivector.scalar(P, ring.var(name))

    def basis(indices, pos):
        if any(not 1 <= i <= P.rank for i in indices):
            raise ParseError(f"basis index out of range 1..{P.rank}", pos, text)
        return Multivector.basis(P, [i - 1 for i in indices])

    return ExprParser(text, const, var, basis).parse()


# -- products ---------------------------------------------------------------


def wedge(u: Multivector, v: Multivector) -> Multivector:
    u._check(v)
    res: Terms = {}
    for I, a in u.terms.items():
        for J, b in v.terms.items():
            s = merge_sign(I, J)
            if s:
                K = tuple(sorted(I + J))
                ab = a * b
                _acc(res, K, ab if s > 0 else -ab)
    return Multivector._raw(u.ring, u.rank, res)


def _replace(I: Index, p: int, k: int) -> tuple[int, Index]:
    """Sign and index set of ``e_I`` with the factor in slot ``p`` replaced by ``e_k``."""
    return sort_sign(I[:p] + (k,) + I[p + 1:])


def _lie_terms(P: LRPresentation, beta: LElement, a: Polynomial, I: Index, out: Terms, sign: int = 1):
    """Accumulate ``sign * [beta, a e_I]`` into ``out``."""
    ba = anchor_apply(P, beta, a)
    if ba:
        _acc(out, I, ba if sign > 0 else -ba)
    for p, i in enumerate(I):
        gamma = bracket_L(P, beta, P.basis_element(i))
        for k, g in enumerate(gamma):
            if not g:
                continue
            s, K = _replace(I, p, k)
            if s:
                c = a * g
                _acc(out, K, c if s * sign > 0 else -c)


def lie_derivative(P: LRPresentation, alpha: LElement, u: Multivector) -> Multivector:
    """``[alpha, u]`` for a degree-one ``alpha``; preserves exterior degree."""
    if len(alpha) != u.rank or u.rank != P.rank:
        raise ValueError("rank mismatch")
    out: Terms = {}
    for I, a in u.terms.items():
        _lie_terms(P, alpha, a, I, out)
    return Multivector._raw(P.ring, P.rank, out)


def _wedge_into(out: Terms, left: Index, mid: Terms, right: Index, coeff: Polynomial, sign: int):
    """Accumulate ``sign * coeff * e_left ^ mid ^ e_right`` into ``out``."""
    for K, c in mid.items():
        s1 = merge_sign(left, K)
        if not s1:
            continue
        LK = tuple(sorted(left + K))
        s2 = merge_sign(LK, right)
        if not s2:
            continue
        v = coeff * c
        _acc(out, tuple(sorted(LK + right)), v if s1 * s2 * sign > 0 else -v)


def _bracket_terms(P: LRPresentation, a: Polynomial, I: Index, b: Polynomial, J: Index, out: Terms, sign: int = 1):
    """Accumulate ``sign * [a e_I, b e_J]``.

    This unrolls the biderivation recursion: graded Leibniz in the second slot
    splits ``b e_J`` into its degree-one factors ``(b e_j1), e_j2, ...``, and
    ``[u, x] = -[x, u]`` for degree-one ``x`` reduces each piece to a Lie
    derivative.  Degree-0 arguments use ``[a, beta] = -beta(a)`` and graded
    antisymmetry.
    """
    p, q = len(I), len(J)
    if p == 0 and q == 0:
        return
    if q == 0:
        # [u, b] = (-1)^|u| [b, u]
        _bracket_terms(P, b, J, a, I, out, sign if p % 2 == 0 else -sign)
        return
    if p == 0:
        # [a, b e_J] = -b sum_t (-1)^t e_{j_t}(a) e_{J minus j_t}
        for t, j in enumerate(J):
            d = P.act(j, a)
            if d:
                c = b * d
                s = -sign if t % 2 == 0 else sign
                _acc(out, J[:t] + J[t + 1:], c if s > 0 else -c)
        return
    zero = P.zero_element()
    for t, j in enumerate(J):
        s = sign if ((p - 1) * t) % 2 == 0 else -sign
        if t == 0:
            beta = zero[:j] + (b,) + zero[j + 1:]
            left, coeff = (), P.ring.one
        else:
            beta = P.basis_element(j)
            left, coeff = J[:t], b
        mid: Terms = {}
        _lie_terms(P, beta, a, I, mid, -1)
        _wedge_into(out, left, mid, J[t + 1:], coeff, s)


def gbracket(P: LRPresentation, u: Multivector, v: Multivector) -> Multivector:
    """The Gerstenhaber (Schouten-type) bracket on the exterior algebra of L."""
    u._check(v)
    if u.rank != P.rank:
        raise ValueError("rank mismatch")
    out: Terms = {}
    for I, a in u.terms.items():
        for J, b in v.terms.items():
            _bracket_terms(P, a, I, b, J, out)
    return Multivector._raw(P.ring, P.rank, out)


class GradedOperator:
    """An additive operator on multivectors shifting exterior degree by ``degree``.

    ``term_fn(a, I)`` returns the image of ``a * e_I`` as a term dict; the
    operator is its additive extension.
    """

    def __init__(self, degree: int, term_fn: Callable[[Polynomial, Index], Terms], P: LRPresentation, name: str = ""):
        self.degree = degree
        self.term_fn = term_fn
        self.P = P
        self.name = name

    def on_term(self, a: Polynomial, I: Index) -> Multivector:
        return Multivector._raw(self.P.ring, self.P.rank, self.term_fn(a, I))

    def __call__(self, u: Multivector) -> Multivector:
        out: Terms = {}
        for I, a in u.terms.items():
            for K, c in self.term_fn(a, I).items():
                _acc(out, K, c)
        return Multivector._raw(u.ring, u.rank, out)

    def __add__(self, other: GradedOperator) -> GradedOperator:
        if other.degree != self.degree:
            raise ValueError("cannot add operators of different degree")

        def fn(a, I):
            out = dict(self.term_fn(a, I))
            for K, c in other.term_fn(a, I).items():
                _acc(out, K, c)
            return out

        return GradedOperator(self.degree, fn, self.P, f"({self.name} + {other.name})")

    def __rmul__(self, c):
        c = Fraction(c)

        def fn(a, I):
            return {K: v * c for K, v in self.term_fn(a, I).items() if c}

        return GradedOperator(self.degree, fn, self.P, f"{c}*{self.name}")


def contraction(P: LRPresentation, xi: Iterable) -> GradedOperator:
    """Interior product by the 1-form ``xi`` (``xi_i = xi(e_i)``): an A-linear derivation of degree -1."""
    xi = tuple(P.ring.coerce(c) for c in xi)

    def fn(a, I):
        out: Terms = {}
        for t, i in enumerate(I):
            if xi[i]:
                c = a * xi[i]
                _acc(out, I[:t] + I[t + 1:], c if t % 2 == 0 else -c)
        return out

    return GradedOperator(-1, fn, P, "contraction")


def basis_index_sets(n: int, k: int | None = None) -> list[Index]:
    from itertools import combinations

    ks = range(n + 1) if k is None else [k]
    return [I for kk in ks for I in combinations(range(n), kk)]
