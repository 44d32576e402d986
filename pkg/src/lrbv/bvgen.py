"""Right (A,L)-connections on A and the generators they induce on the exterior algebra.

A right connection is stored by its values ``r_i = 1 o e_i`` on the basis; the
connection axioms force ``a o (sum b_i e_i) = sum_i b_i (a r_i - e_i(a)) - e_i(b_i) a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .exterior import GradedOperator, Index, Multivector, Terms, _acc, basis_index_sets, gbracket, wedge
from .lralg import LElement, LRPresentation, bracket_L
from .ring import Polynomial, monomials_up_to, truncated_monomials


@dataclass(frozen=True)
class RightConnection:
    r: tuple[Polynomial, ...]

    @classmethod
    def make(cls, P: LRPresentation, values: Sequence) -> RightConnection:
        r = tuple(P.ring.coerce(v) for v in values)
        if len(r) != P.rank:
            raise ValueError(f"right connection needs {P.rank} values, got {len(r)}")
        return cls(r)

    @classmethod
    def zero(cls, P: LRPresentation) -> RightConnection:
        return cls((P.ring.zero,) * P.rank)


@dataclass(frozen=True)
class CurvatureWitness:
    pair: tuple[int, int]  # 1-based
    value: Polynomial


def right_action(P: LRPresentation, C: RightConnection, a: Polynomial, alpha: LElement) -> Polynomial:
    """``a o alpha``."""
    if len(alpha) != P.rank or len(C.r) != P.rank:
        raise ValueError("shape mismatch")
    out = P.ring.zero
    for i, b in enumerate(alpha):
        if not b:
            continue
        out = out + b * (a * C.r[i] - P.act(i, a)) - P.act(i, b) * a
    return out


def _one_circ(P: LRPresentation, C: RightConnection, alpha: LElement) -> Polynomial:
    return right_action(P, C, P.ring.one, alpha)


def generator_on_wedge(P: LRPresentation, C: RightConnection, alphas: Sequence[LElement]) -> Multivector:
    """Apply the generator formula literally to ``<alpha_1, ..., alpha_k>``.

    Used both to define D and to check that the result does not depend on
    which slot carries a coefficient.
    """
    k = len(alphas)
    out = Multivector.zero(P)
    for i in range(k):
        rest = alphas[:i] + alphas[i + 1:]
        coeff = _one_circ(P, C, alphas[i])
        if coeff:
            term = Multivector.wedge_of(P, rest).scale(coeff)
            out = out + term if i % 2 == 0 else out - term
    for j, l in combinations(range(k), 2):
        br = bracket_L(P, alphas[j], alphas[l])
        rest = [br] + [alphas[t] for t in range(k) if t not in (j, l)]
        term = Multivector.wedge_of(P, rest)
        # (-1)^(j+l) with 1-based positions equals (-1)^(j+l) with 0-based ones
        out = out + term if (j + l) % 2 == 0 else out - term
    return out


def _generator_terms(P: LRPresentation, C: RightConnection, a: Polynomial, I: Index) -> Terms:
    """D(a e_I) with the coefficient carried by the first factor."""
    out: Terms = {}
    k = len(I)
    if k == 0:
        return out
    i0 = I[0]
    # first sum: slot 0 holds a e_{i0}, so 1 o (a e_{i0}) = a r_{i0} - e_{i0}(a)
    _acc(out, I[1:], a * C.r[i0] - P.act(i0, a))
    for t in range(1, k):
        c = a * C.r[I[t]]
        _acc(out, I[:t] + I[t + 1:], c if t % 2 == 0 else -c)
    # second sum
    for j, l in combinations(range(k), 2):
        rest = I[:j] + I[j + 1:l] + I[l + 1:]
        vec = P.basis_bracket(I[j], I[l])
        sign = 1 if (j + l) % 2 == 0 else -1
        if j == 0:
            # [a e_{i0}, e_il] = a [e_i0, e_il] - e_il(a) e_i0
            d = P.act(I[l], a)
            if d:
                # <-d e_i0, rest...>
                _push(out, I[0], rest, -d, sign)
        for m, c in enumerate(vec):
            if c:
                _push(out, m, rest, a * c, sign)
    return out


def _push(out: Terms, m: int, rest: Index, c: Polynomial, sign: int):
    """Accumulate ``sign * c * e_m ^ e_rest``."""
    if m in rest:
        return
    pos = sum(1 for x in rest if x < m)
    s = sign if pos % 2 == 0 else -sign
    K = rest[:pos] + (m,) + rest[pos:]
    _acc(out, K, c if s > 0 else -c)


def generator_from_connection(P: LRPresentation, C: RightConnection) -> GradedOperator:
    if len(C.r) != P.rank:
        raise ValueError("shape mismatch")
    return GradedOperator(-1, lambda a, I: _generator_terms(P, C, a, I), P, "D")


def connection_from_generator(P: LRPresentation, D: GradedOperator) -> RightConnection:
    if D.degree != -1:
        raise ValueError("generator must have degree -1")
    r = []
    for i in range(P.rank):
        image = D.on_term(P.ring.one, (i,))
        if any(I for I in image.terms):
            raise ValueError(f"D(e_{i + 1}) has components outside degree 0")
        r.append(image.coefficient(()))
    return RightConnection(tuple(r))


def check_generates(P: LRPresentation, D: GradedOperator, u: Multivector, v: Multivector) -> Multivector:
    """``[u,v] - (-1)^|u| (D(uv) - D(u)v - (-1)^|u| u D(v))``; zero iff D generates on this pair."""
    k = u.degree()
    inner = D(wedge(u, v)) - wedge(D(u), v)
    uDv = wedge(u, D(v))
    inner = inner - uDv if k % 2 == 0 else inner + uDv
    rhs = inner if k % 2 == 0 else -inner
    return gbracket(P, u, v) - rhs


def d_squared(P: LRPresentation, D: GradedOperator, u: Multivector) -> Multivector:
    return D(D(u))


def curvature(P: LRPresentation, C: RightConnection, i: int, j: int) -> Polynomial:
    """``(1 o e_i) o e_j - (1 o e_j) o e_i - 1 o [e_i, e_j]`` (0-based i, j)."""
    ei, ej = P.basis_element(i), P.basis_element(j)
    lhs = right_action(P, C, C.r[i], ej) - right_action(P, C, C.r[j], ei)
    return lhs - _one_circ(P, C, P.basis_bracket(i, j))


def flatness_check(P: LRPresentation, C: RightConnection) -> list[CurvatureWitness]:
    """Curvature witnesses over all basis pairs; an empty list means flat."""
    out = []
    for i, j in combinations(range(P.rank), 2):
        v = curvature(P, C, i, j)
        if v:
            out.append(CurvatureWitness((i + 1, j + 1), v))
    return out


@lru_cache(maxsize=256)
def is_flat(P: LRPresentation, C: RightConnection) -> bool:
    return not flatness_check(P, C)


def basis_multivectors(P: LRPresentation, max_coeff_degree: int):
    """All ``x^a e_I`` with ``deg x^a <= max_coeff_degree`` (every standard monomial when truncated)."""
    ring = P.ring
    if ring.truncation is not None:
        exps = [e for e in truncated_monomials(ring.truncation) if sum(e) <= max_coeff_degree]
    else:
        exps = monomials_up_to(ring.nvars, max_coeff_degree)
    for I in basis_index_sets(P.rank):
        for e in exps:
            yield ring.monomial(e), I


def square_zero_on_basis(P: LRPresentation, D: GradedOperator, max_coeff_degree: int):
    """First ``(monomial, I)`` with ``D(D(x^a e_I)) != 0``, or None."""
    for mono, I in basis_multivectors(P, max_coeff_degree):
        if d_squared(P, D, Multivector._raw(P.ring, P.rank, {I: mono})):
            return mono, I
    return None
