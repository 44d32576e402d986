import random
from itertools import combinations
from math import comb

import pytest

from lrbv.bvgen import RightConnection, right_action
from lrbv.exterior import Multivector, _acc
from lrbv.homology import (
    Grading,
    GradingError,
    NonFlatError,
    assemble_blocks,
    cochain_differential,
    cohomology_dims,
    duality_check,
    homology_dims,
    rinehart_boundary,
    boundary_equality,
    verify_grading,
)
from lrbv.lralg import LRPresentation
from lrbv.ring import PolyRing
from lrbv.topconn import TopConnection, trace_vector
from lrgen import LIE, _invertible, change_basis, lie_algebra, truncated_euler
from oracles import ce_cohomology_trivial, ce_homology, plane_poisson_homology, structure_constants

R0 = PolyRing(())
SL2 = LRPresentation(R0, 3, [[], [], []], {(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)})
HEIS = LRPresentation(R0, 3, [[], [], []], {(0, 1): (0, 0, 1)})
AB3 = LRPresentation(R0, 3, [[], [], []])
RXY = PolyRing(("x", "y"))
PLANE = LRPresentation(RXY, 2, [["0", "1"], ["-1", "0"]])
CURVED = LRPresentation(RXY, 2, [["1", "0"], ["0", "1"]])
PLANE_GRADING = Grading((1, 1), (0, 0))


def zero(P):
    return RightConnection.zero(P)


# -- boundary examples -------------------------------------------------------


def test_rinehart_boundary_examples():
    C = RightConnection.make(CURVED, ["0", "y"])
    a = RXY.parse("x^2*y + 3")
    assert rinehart_boundary(CURVED, C, Multivector.scalar(CURVED, a)).is_zero()
    for i in range(2):
        expected = right_action(CURVED, C, a, CURVED.basis_element(i))
        assert rinehart_boundary(CURVED, C, Multivector.basis(CURVED, (i,), a)) == Multivector.scalar(CURVED, expected)
    assert rinehart_boundary(SL2, zero(SL2), Multivector.basis(SL2, (0, 1))) == Multivector.basis(SL2, (1,), -2)


def test_rinehart_boundary_rejects_curved():
    with pytest.raises(NonFlatError):
        rinehart_boundary(CURVED, RightConnection.make(CURVED, ["y", "0"]), Multivector.basis(CURVED, (0,)))
    with pytest.raises(NonFlatError):
        homology_dims(CURVED, RightConnection.make(CURVED, ["y", "0"]))


def test_boundary_equality_examples():
    assert boundary_equality(SL2, zero(SL2), 3) is None
    assert boundary_equality(HEIS, zero(HEIS), 3) is None
    assert boundary_equality(PLANE, zero(PLANE), 6) is None


def flipped_boundary(P, C, u):
    """The tensored boundary with the sign of the bracket sum reversed."""
    out = {}
    for I, a in u.terms.items():
        for t, i in enumerate(I):
            c = right_action(P, C, a, P.basis_element(i))
            _acc(out, I[:t] + I[t + 1:], c if t % 2 == 0 else -c)
        for j, l in combinations(range(len(I)), 2):
            rest = [I[s] for s in range(len(I)) if s not in (j, l)]
            br = Multivector.from_element(P, P.basis_bracket(I[j], I[l]))
            term = br * Multivector.basis(P, rest, a)
            for K, c in term.terms.items():
                _acc(out, K, -c if (j + l) % 2 == 0 else c)
    return Multivector._raw(P.ring, P.rank, out)


def test_boundary_equality_detects_perturbed_boundary():
    mono, I = boundary_equality(SL2, zero(SL2), 0, boundary=flipped_boundary)
    assert I == (0, 1) and mono == 1


# -- blocks -------------------------------------------------------------------


def test_graded_plane_blocks():
    # weight = coefficient degree + exterior degree: the boundary has shift -2
    g = Grading((1, 1), (1, 1))
    assert verify_grading(PLANE, g, zero(PLANE).r) == -2
    blocks = assemble_blocks(PLANE, zero(PLANE), 4, g)
    for b in blocks:
        assert len(b.matrix) == len(b.basis)
        assert all(max(row, default=-1) < len(b.target_basis) for row in b.matrix)
        assert all(sum(e) + len(I) == b.weight for e, I in b.basis)
        assert all(sum(e) + len(I) == b.weight - 2 for e, I in b.target_basis)


def test_exact_block_sizes():
    for n in range(5):
        P = LRPresentation(R0, n, [[] for _ in range(n)])
        assert [len(b.basis) for b in assemble_blocks(P, zero(P))] == [comb(n, k) for k in range(n + 1)]
    P = truncated_euler(3)
    assert [len(b.basis) for b in assemble_blocks(P, zero(P))] == [3, 3]


def test_declared_grading_is_verified():
    with pytest.raises(GradingError):
        homology_dims(PLANE, zero(PLANE), 4, Grading((1, 2), (1, 1)))
    with pytest.raises(GradingError):
        homology_dims(PLANE, RightConnection.make(PLANE, ["1", "0"]), 4, PLANE_GRADING)
    with pytest.raises(GradingError):
        homology_dims(PLANE, zero(PLANE), 4, Grading((1,), (0, 0)))


def test_composition_of_blocks_is_zero():
    cases = [(lie_algebra(k, R0), None) for k in LIE] + [(truncated_euler(4), None), (PLANE, PLANE_GRADING)]
    for P, g in cases:
        blocks = assemble_blocks(P, zero(P), 5, g)
        by_cell = {(b.k, b.weight): b for b in blocks}
        for b in blocks:
            nxt = [c for c in blocks if c.basis and c.basis[0] in b.target_basis]
            for c in nxt:
                where = {elt: i for i, elt in enumerate(c.basis)}
                for row in b.matrix:
                    total = {}
                    for col, v in row.items():
                        for col2, w in c.matrix[where[b.target_basis[col]]].items():
                            total[col2] = total.get(col2, 0) + v * w
                    assert not any(total.values())
        assert by_cell


# -- dimensions ---------------------------------------------------------------


def test_dimension_examples():
    assert homology_dims(AB3, zero(AB3)).dims() == (1, 3, 3, 1)
    assert homology_dims(SL2, zero(SL2)).dims() == (1, 0, 0, 1)
    assert homology_dims(HEIS, zero(HEIS)).dims() == (1, 2, 2, 1)
    assert cohomology_dims(AB3, TopConnection.zero(AB3)).dims() == (1, 3, 3, 1)
    assert cohomology_dims(SL2, TopConnection.zero(SL2)).dims() == (1, 0, 0, 1)


def test_truncated_euler_homology():
    # Q[x]/(x^t) with x d/dx: boundary a e1 -> -x a'  kills x^j for j >= 1
    for t in range(1, 5):
        P = truncated_euler(t)
        rep = homology_dims(P, zero(P), window=2)
        assert rep.mode == "exact"
        assert rep.dims() == (1, 1)
        assert homology_dims(P, zero(P), window=7).dims() == rep.dims()


def _random_lie(seed):
    rng = random.Random(seed)
    name = rng.choice(list(LIE))
    P = lie_algebra(name, R0)
    return change_basis(P, _invertible(rng, P.rank)), rng


@pytest.mark.parametrize("seed", range(30))
def test_lie_algebra_homology_matches_oracle(seed):
    P, rng = _random_lie(seed)
    consts = structure_constants(P)
    tau = [t.constant_term() for t in trace_vector(P)]
    for scale in (0, 1, rng.choice([-2, 3])):
        character = [scale * t for t in tau]
        C = RightConnection(tuple(R0.const(c) for c in character))
        assert homology_dims(P, C).dims() == ce_homology(P.rank, consts, character)
    assert cohomology_dims(P, TopConnection.zero(P)).dims() == ce_cohomology_trivial(P.rank, consts)
    assert duality_check(P, TopConnection.zero(P)).passed


@pytest.mark.parametrize("seed", range(10))
def test_euler_characteristic(seed):
    P, _ = _random_lie(seed)
    rep = homology_dims(P, zero(P))
    chain = sum((-1) ** e.k * e.dim_chain for e in rep.entries)
    hom = sum((-1) ** e.k * e.dim_homology for e in rep.entries)
    assert chain == hom


def test_plane_graded_matches_hand_oracle():
    oracle = plane_poisson_homology(6)
    rep = homology_dims(PLANE, zero(PLANE), 6, PLANE_GRADING)
    assert rep.mode == "graded" and rep.shift == -1
    table = rep.table()
    for (k, d), h in oracle.items():
        assert table.get((k, d), 0) == h
    assert rep.dims() == (0, 0, 1)
    for e in rep.entries:
        assert e.stable


def test_plane_cohomology_and_duality():
    nabla = TopConnection.zero(PLANE)
    assert cohomology_dims(PLANE, nabla, 6, PLANE_GRADING).dims() == (1, 0, 0)
    rep = duality_check(PLANE, nabla, 6, PLANE_GRADING)
    assert rep.passed
    assert rep.homology.dims() == (0, 0, 1) and rep.cohomology.dims() == (1, 0, 0)


def test_cochain_differential_squares_to_zero_on_plane():
    nabla = TopConnection.make(PLANE, ["y", "-x"])
    from lrbv.topconn import top_flatness_check

    assert top_flatness_check(PLANE, nabla) == []
    for I in [(), (0,), (1,)]:
        phi = Multivector.basis(PLANE, I, RXY.parse("x^2*y - 3*y^3 + x"))
        assert cochain_differential(PLANE, nabla, cochain_differential(PLANE, nabla, phi)).is_zero()


def test_cohomology_rejects_curved_top():
    curved = TopConnection.make(CURVED, ["0", "x"])
    with pytest.raises(NonFlatError):
        cohomology_dims(CURVED, curved, 3)


@pytest.mark.parametrize(
    "P,some_unstable", [(PLANE, True), (lie_algebra("aff", PolyRing(("x",))), False), (CURVED, True)]
)
def test_windowed_stable_entries_do_not_move(P, some_unstable):
    C = zero(P)
    small = homology_dims(P, C, 4)
    large = homology_dims(P, C, 7)
    assert small.mode == large.mode == "windowed"
    big = large.table()
    for e in small.entries:
        assert e.dim_homology >= 0
        if e.stable:
            assert big[(e.k, e.weight)] == e.dim_homology
    assert any(not e.stable for e in small.entries) == some_unstable


def test_windowed_plane_agrees_with_graded():
    rep = homology_dims(PLANE, zero(PLANE), 8)
    assert rep.dims() == (0, 0, 1)
    assert rep.pass_flags["heuristic_stability"]


def test_report_serialization():
    d = homology_dims(SL2, zero(SL2)).to_dict()
    assert d["mode"] == "exact"
    assert d["blocks"][0] == {"k": 0, "weight": None, "dim_chain": 1, "dim_homology": 1, "stable": True}
    assert d["pass_flags"]["composition_zero"] and d["pass_flags"]["boundary_paths_agree"]
