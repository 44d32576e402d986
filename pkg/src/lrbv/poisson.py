"""Polynomial Poisson structures and the Lie-Rinehart algebra of their differentials.

The algebra is spanned over A by ``dx_1..dx_m`` with ``dx_i`` acting as
``{x_i, -}`` and ``[dx_i, dx_j] = d{x_i, x_j}``.  A is a right module over it
through ``a o (b dx_i) = {ab, x_i}``; the induced generator is the Koszul
boundary whose homology is Poisson homology.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from .bvgen import RightConnection, generator_from_connection
from .exterior import GradedOperator
from .homology import Grading, HomologyReport, homology_dims
from .lralg import LRPresentation
from .ring import PolyRing, Polynomial
from .topconn import TopConnection, right_from_top


class PoissonError(ValueError):
    pass


@dataclass(frozen=True)
class PoissonStructure:
    """``pi[(i, j)] = {x_i, x_j}`` for ``i < j`` (0-based); missing pairs are zero."""

    ring: PolyRing
    pi: tuple[tuple[tuple[int, int], Polynomial], ...]

    def __init__(self, ring: PolyRing, pi: Mapping[tuple[int, int], object] | tuple = ()):
        m = ring.nvars
        clean = []
        for (i, j), v in sorted(dict(pi).items()):
            if not (0 <= i < j < m):
                raise PoissonError(f"Poisson key {(i + 1, j + 1)} must satisfy 1 <= i < j <= {m}")
            p = ring.coerce(v)
            if p:
                clean.append(((i, j), p))
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "pi", tuple(clean))

    def entry(self, i: int, j: int) -> Polynomial:
        """``{x_i, x_j}`` for any pair."""
        if i == j:
            return self.ring.zero
        table = dict(self.pi)
        if i < j:
            return table.get((i, j), self.ring.zero)
        return -table.get((j, i), self.ring.zero)


def poisson_bracket(S: PoissonStructure, a: Polynomial, b: Polynomial) -> Polynomial:
    if a.ring != S.ring or b.ring != S.ring:
        raise ValueError("shape mismatch: polynomials must live in the structure's ring")
    out = S.ring.zero
    for (i, j), p in S.pi:
        t = a.diff(i) * b.diff(j) - a.diff(j) * b.diff(i)
        if t:
            out = out + p * t
    return out


def jacobi_check(S: PoissonStructure):
    """None when the Jacobi identity holds on generators, else the first 1-based triple violating it."""
    xs = [S.ring.var(i) for i in range(S.ring.nvars)]
    for i, j, k in combinations(range(S.ring.nvars), 3):
        total = (
            poisson_bracket(S, xs[i], S.entry(j, k))
            + poisson_bracket(S, xs[j], S.entry(k, i))
            + poisson_bracket(S, xs[k], S.entry(i, j))
        )
        if total:
            return (i + 1, j + 1, k + 1)
    return None


def truncation_is_poisson_stable(S: PoissonStructure) -> bool:
    """Whether ``{x_i^t_i, x_j}`` lies in the power ideal for all ``i, j``."""
    bounds = S.ring.truncation
    if bounds is None:
        return True
    for i in range(S.ring.nvars):
        for j in range(S.ring.nvars):
            if bounds[i] == 1:
                continue  # x_i itself is in the ideal
            for exp in S.entry(i, j).terms:
                e = list(exp)
                e[i] += bounds[i] - 1
                if not any(a >= b for a, b in zip(e, bounds)):
                    return False
    return True


def _require_valid(S: PoissonStructure):
    witness = jacobi_check(S)
    if witness is not None:
        raise PoissonError(f"Jacobi identity fails on generators {witness}")
    if not truncation_is_poisson_stable(S):
        raise PoissonError("truncation ideal is not stable under the Poisson bracket")


def lr_from_poisson(S: PoissonStructure) -> LRPresentation:
    _require_valid(S)
    m = S.ring.nvars
    anchor = [[S.entry(i, j) for j in range(m)] for i in range(m)]
    bracket = {(i, j): tuple(p.diff(k) for k in range(m)) for (i, j), p in S.pi}
    return LRPresentation(S.ring, m, anchor, bracket)


def canonical_right_connection(S: PoissonStructure) -> RightConnection:
    """``1 o dx_i = {1, x_i} = 0``."""
    return RightConnection((S.ring.zero,) * S.ring.nvars)


def koszul_generator(S: PoissonStructure) -> GradedOperator:
    return generator_from_connection(lr_from_poisson(S), canonical_right_connection(S))


def homogeneity_degree(S: PoissonStructure) -> int | None:
    """Common total degree of every monomial of pi, or None when pi is zero or inhomogeneous."""
    degrees = {sum(e) for _, p in S.pi for e in p.terms}
    return degrees.pop() if len(degrees) == 1 else None


def default_grading(S: PoissonStructure) -> Grading | None:
    """``weight(x_i) = 1`` and ``weight(dx_i) = s`` for pi homogeneous of degree ``s``.

    Zero pi gets ``weight(dx_i) = 1``; inhomogeneous pi gets no grading.
    """
    m = S.ring.nvars
    if not S.pi:
        return Grading((1,) * m, (1,) * m)
    s = homogeneity_degree(S)
    if s is None:
        return None
    return Grading((1,) * m, (s,) * m)


def poisson_homology(
    S: PoissonStructure,
    window: int | None = None,
    top: TopConnection | None = None,
    grading: Grading | None = None,
) -> HomologyReport:
    """Homology of the Koszul complex, or of the one twisted by a flat top connection."""
    P = lr_from_poisson(S)
    C = canonical_right_connection(S) if top is None else right_from_top(P, top)
    if grading is None and S.ring.truncation is None:
        grading = default_grading(S)
    return homology_dims(P, C, window, grading)
