"""Finite presentations of Lie-Rinehart algebras ``(A, L)`` with ``L`` free of rank n.

Basis elements ``e_1..e_n`` are 0-based internally (``e_i`` is index ``i-1``);
every user-facing witness is reported 1-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .ring import PolyRing, Polynomial

# An element sum_i a_i e_i of L, stored as its coefficient vector.
LElement = tuple[Polynomial, ...]


@dataclass(frozen=True, eq=True)
class LRPresentation:
    """A Lie-Rinehart algebra given by anchor and bracket structure functions.

    ``anchor[i][j] = e_i(x_j)`` and ``bracket[(i, j)]`` (for ``i < j`` only) is the
    coefficient vector of ``[e_i, e_j]``.  Missing pairs mean a zero bracket.
    """

    ring: PolyRing
    rank: int
    anchor: tuple[tuple[Polynomial, ...], ...]
    bracket: tuple[tuple[tuple[int, int], LElement], ...] = field(default=())

    def __post_init__(self):
        n, m = self.rank, self.ring.nvars
        if n < 0:
            raise ValueError("rank must be non-negative")
        anchor = tuple(tuple(self.ring.coerce(a) for a in row) for row in self.anchor)
        if len(anchor) != n or any(len(row) != m for row in anchor):
            raise ValueError(f"anchor must be a {n}x{m} matrix")
        object.__setattr__(self, "anchor", anchor)
        table = dict(self.bracket) if not isinstance(self.bracket, dict) else self.bracket
        clean = []
        for (i, j), vec in sorted(table.items()):
            if not (0 <= i < j < n):
                raise ValueError(f"bracket key {(i + 1, j + 1)} must satisfy 1 <= i < j <= {n}")
            vec = tuple(self.ring.coerce(c) for c in vec)
            if len(vec) != n:
                raise ValueError(f"bracket value for {(i + 1, j + 1)} must have length {n}")
            if any(vec):
                clean.append(((i, j), vec))
        object.__setattr__(self, "bracket", tuple(clean))

    @cached_property
    def _table(self) -> dict:
        return dict(self.bracket)

    @cached_property
    def _hash(self):
        return hash((self.ring, self.rank, self.anchor, self.bracket))

    def __hash__(self):
        return self._hash

    def basis_bracket(self, i: int, j: int) -> LElement:
        """Coefficient vector of ``[e_i, e_j]`` for any ``i, j``."""
        if i == j:
            return self.zero_element()
        if i < j:
            return self._table.get((i, j)) or self.zero_element()
        vec = self._table.get((j, i))
        return tuple(-c for c in vec) if vec else self.zero_element()

    def zero_element(self) -> LElement:
        return (self.ring.zero,) * self.rank

    def basis_element(self, i: int) -> LElement:
        z = self.ring.zero
        return tuple(self.ring.one if k == i else z for k in range(self.rank))

    def act(self, i: int, a: Polynomial) -> Polynomial:
        """``e_i(a) = sum_j anchor[i][j] * da/dx_j``."""
        out = self.ring.zero
        for j, rho in enumerate(self.anchor[i]):
            if rho:
                d = a.diff(j)
                if d:
                    out = out + rho * d
        return out

    def element(self, coeffs: Sequence) -> LElement:
        vec = tuple(self.ring.coerce(c) for c in coeffs)
        if len(vec) != self.rank:
            raise ValueError(f"L-element needs {self.rank} coefficients")
        return vec


def _check_element(P: LRPresentation, alpha: LElement):
    if len(alpha) != P.rank:
        raise ValueError(f"L-element has length {len(alpha)}, rank is {P.rank}")


def anchor_apply(P: LRPresentation, alpha: LElement, a: Polynomial) -> Polynomial:
    """``alpha(a)`` for ``alpha = sum_i a_i e_i``."""
    _check_element(P, alpha)
    P.ring.coerce(a)
    out = P.ring.zero
    for i, ai in enumerate(alpha):
        if ai:
            out = out + ai * P.act(i, a)
    return out


def add_elements(alpha: LElement, beta: LElement) -> LElement:
    return tuple(a + b for a, b in zip(alpha, beta))


def scale_element(a: Polynomial, alpha: LElement) -> LElement:
    return tuple(a * c for c in alpha)


def bracket_L(P: LRPresentation, alpha: LElement, beta: LElement) -> LElement:
    """Lie bracket on L extended from the basis table by the Leibniz rule."""
    _check_element(P, alpha)
    _check_element(P, beta)
    n = P.rank
    out = list(P.zero_element())
    for i, ai in enumerate(alpha):
        if not ai:
            continue
        for j, bj in enumerate(beta):
            if not bj or i == j:
                continue
            ab = ai * bj
            for k, c in enumerate(P.basis_bracket(i, j)):
                if c:
                    out[k] = out[k] + ab * c
    for j, bj in enumerate(beta):
        if bj:
            out[j] = out[j] + anchor_apply(P, alpha, bj)
    for i, ai in enumerate(alpha):
        if ai:
            out[i] = out[i] - anchor_apply(P, beta, ai)
    assert len(out) == n
    return tuple(out)


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: tuple[int, ...] | None = None
    detail: str = ""


@dataclass
class AxiomReport:
    """Outcome of :func:`check_axioms`.

    Only basis elements and variables are tested.  That suffices because the
    Jacobiator is A-trilinear once the anchor is a bracket homomorphism, the
    anchor condition compares two derivations of A, and a derivation maps an
    ideal into itself iff it does so on generators.
    """

    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "scope": "generators only (basis triples, variables, ideal generators)",
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "witness": list(c.witness) if c.witness else None,
                    "detail": c.detail,
                }
                for c in self.checks
            ],
        }


def _jacobiator(P: LRPresentation, i: int, j: int, k: int) -> LElement:
    e = P.basis_element
    total = P.zero_element()
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        inner = P.basis_bracket(b, c)
        total = add_elements(total, bracket_L(P, e(a), inner))
    return total


def check_axioms(P: LRPresentation) -> AxiomReport:
    n, m = P.rank, P.ring.nvars
    checks = []

    witness = None
    for i, j, k in combinations(range(n), 3):
        if any(_jacobiator(P, i, j, k)):
            witness = (i + 1, j + 1, k + 1)
            break
    checks.append(AxiomCheck("jacobi", witness is None, witness))

    witness = None
    detail = ""
    for i, j in combinations(range(n), 2):
        c = P.basis_bracket(i, j)
        for l in range(m):
            x = P.ring.var(l)
            lhs = anchor_apply(P, c, x)
            rhs = P.act(i, P.act(j, x)) - P.act(j, P.act(i, x))
            if lhs != rhs:
                witness = (i + 1, j + 1)
                detail = f"variable {P.ring.variables[l]}: {lhs - rhs}"
                break
        if witness:
            break
    checks.append(AxiomCheck("anchor_homomorphism", witness is None, witness, detail))

    t = P.ring.truncation
    if t is not None:
        witness = None
        for i in range(n):
            for j in range(m):
                # e_i(x_j^t) = t * x_j^(t-1) * anchor[i][j] must vanish in the quotient
                exp = [0] * m
                exp[j] = t[j] - 1
                image = P.anchor[i][j] * P.ring.monomial(tuple(exp), t[j])
                if image:
                    witness = (i + 1, j + 1)
                    break
            if witness:
                break
        checks.append(AxiomCheck("ideal_stable", witness is None, witness))
    return AxiomReport(checks)
