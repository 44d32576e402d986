"""Connections on the top exterior power and their correspondence with right connections on A.

With ``vol = e_1 ^ ... ^ e_n`` and ``nabla_{e_i}(vol) = w_i vol``, the correspondence
reduces to ``w_i + r_i = tau_i`` where ``tau_i`` is the coefficient of ``vol`` in
the Lie derivative of ``vol`` along ``e_i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .bvgen import RightConnection
from .exterior import Multivector, lie_derivative
from .lralg import LElement, LRPresentation, anchor_apply
from .ring import Polynomial


@dataclass(frozen=True)
class TopConnection:
    w: tuple[Polynomial, ...]

    @classmethod
    def make(cls, P: LRPresentation, values: Sequence) -> TopConnection:
        _need_rank(P)
        w = tuple(P.ring.coerce(v) for v in values)
        if len(w) != P.rank:
            raise ValueError(f"top connection needs {P.rank} values, got {len(w)}")
        return cls(w)

    @classmethod
    def zero(cls, P: LRPresentation) -> TopConnection:
        _need_rank(P)
        return cls((P.ring.zero,) * P.rank)


def _need_rank(P: LRPresentation):
    if P.rank < 1:
        raise ValueError("top exterior power needs rank >= 1")


def volume(P: LRPresentation) -> Multivector:
    _need_rank(P)
    return Multivector.basis(P, range(P.rank))


@lru_cache(maxsize=256)
def trace_vector(P: LRPresentation) -> tuple[Polynomial, ...]:
    """``tau_i``: the ``vol`` coefficient of ``[e_i, vol]``, evaluated in the exterior algebra."""
    vol = volume(P)
    top = tuple(range(P.rank))
    return tuple(lie_derivative(P, P.basis_element(i), vol).coefficient(top) for i in range(P.rank))


def right_from_top(P: LRPresentation, nabla: TopConnection) -> RightConnection:
    tau = trace_vector(P)
    return RightConnection(tuple(t - w for t, w in zip(tau, nabla.w)))


def top_from_right(P: LRPresentation, C: RightConnection) -> TopConnection:
    _need_rank(P)
    tau = trace_vector(P)
    return TopConnection(tuple(t - r for t, r in zip(tau, C.r)))


def covariant(P: LRPresentation, nabla: TopConnection, alpha: LElement, b: Polynomial) -> Polynomial:
    """Coefficient of ``nabla_alpha(b vol)`` on ``vol``."""
    out = anchor_apply(P, alpha, b)
    for a, w in zip(alpha, nabla.w):
        if a and w:
            out = out + a * b * w
    return out


def top_curvature(P: LRPresentation, nabla: TopConnection, i: int, j: int) -> Polynomial:
    """``(nabla_i nabla_j - nabla_j nabla_i - nabla_[e_i,e_j])(vol)`` as a ``vol`` coefficient."""
    ei, ej = P.basis_element(i), P.basis_element(j)
    one = P.ring.one
    lhs = covariant(P, nabla, ei, covariant(P, nabla, ej, one)) - covariant(P, nabla, ej, covariant(P, nabla, ei, one))
    return lhs - covariant(P, nabla, P.basis_bracket(i, j), one)


def top_flatness_check(P: LRPresentation, nabla: TopConnection) -> list[tuple[tuple[int, int], Polynomial]]:
    """Witnesses ``((i, j), value)`` (1-based) for non-flat pairs; empty means flat."""
    _need_rank(P)
    out = []
    for i, j in combinations(range(P.rank), 2):
        v = top_curvature(P, nabla, i, j)
        if v:
            out.append(((i + 1, j + 1), v))
    return out
