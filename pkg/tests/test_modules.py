from fractions import Fraction

import pytest

from d0res.branches import BranchParam
from d0res.errors import D0resError, NotNilpotent, RaiseTruncation
from d0res.linalg import ExactMatrix
from d0res.modules import (
    FiniteModule,
    annihilator,
    evaluate_on_module,
    fiber_module,
    graph_skyscraper,
    jet_pair,
    multiplication_matrix,
    nilpotency_index,
    pad,
    support_length,
)
from d0res.poly import Poly, poly_text
from d0res.series import Series

F = Fraction


def B(*coords, n=16):
    return BranchParam(tuple(
        Series.from_pairs([(e, F(c)) for e, c in pairs], n) for pairs in coords
    ))


CUSP = B([(2, 1)], [(3, 1)])
NODE1 = B([(1, 1)], [])
SMOOTH = NODE1


def M(rows):
    return ExactMatrix([[F(x) for x in row] for row in rows])


def test_fiber_module_examples():
    fm = fiber_module(CUSP, 2)
    assert all(a.is_zero() for a in fm.actions)
    fm2 = fiber_module(NODE1, 2)
    assert fm2.actions[0] == M([[0, 0], [1, 0]])
    assert fm2.actions[1].is_zero()
    fm3 = fiber_module(SMOOTH, 1)
    assert fm3.dim == 1 and all(a.is_zero() for a in fm3.actions)


def test_fiber_module_needs_truncation():
    with pytest.raises(RaiseTruncation):
        fiber_module(B([(2, 1)], [(3, 1)], n=4), 5)


def test_fiber_equals_multiplication_table():
    for branch in (CUSP, NODE1, B([(1, 1)], [(2, 1)])):
        for r in (1, 2, 3, 4, 6):
            fm = fiber_module(branch, r)
            for s, a in zip(branch.coords, fm.actions):
                assert multiplication_matrix(s.truncate(r), r) == a


def test_jet_pair_structure():
    jp = jet_pair(CUSP, 3)
    r = jp.rank
    assert jp.m1.dim == 3 and jp.m2.dim == 6
    assert (jp.eps * jp.eps).is_zero()
    assert (jp.proj * jp.incl).is_zero()
    assert jp.incl * jp.proj == jp.eps
    assert jp.incl.rank() == r and jp.proj.rank() == r
    # uniformizer nilpotency jumps by exactly one on the jet
    assert nilpotency_index(jp.t_m1) == 3
    assert nilpotency_index(jp.t_m2) == 4


@pytest.mark.parametrize("r", range(2, 9))
def test_jet_nilpotency_indices(r):
    jp = jet_pair(CUSP, r)
    assert nilpotency_index(jp.t_m1) == r
    assert nilpotency_index(jp.t_m2) == r + 1


def test_cusp_jet_coordinate_action():
    jp = jet_pair(CUSP, 2)
    x2 = jp.m2.actions[0]
    assert x2 == M([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [2, 0, 0, 0]])
    assert jp.m1.actions[0].is_zero()


def test_jet_matches_fiber():
    for r in (1, 2, 3):
        jp = jet_pair(CUSP, r)
        fm = fiber_module(CUSP, r)
        assert jp.m1.same_presentation(fm)


def test_graph_skyscraper():
    fib, jet = graph_skyscraper(SMOOTH)
    assert fib.dim == 1 and all(a.is_zero() for a in fib.actions)
    assert not jet.m2.actions[0].is_zero()      # coefficient of t is 1
    assert jet.m2.actions[1].is_zero()
    _, jet_cusp = graph_skyscraper(CUSP)
    assert all(a.is_zero() for a in jet_cusp.m2.actions)


def test_pad_examples():
    fib, jet = graph_skyscraper(NODE1)
    base = fiber_module(NODE1, 2)
    assert pad(base, fib, 0) is base
    padded = pad(base, fib, 1)
    assert padded.dim == 3
    assert padded.actions[0] == M([[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    jp = pad(jet_pair(NODE1, 2), jet, 2)
    assert jp.m1.dim == 4 and jp.m2.dim == 8
    assert (jp.eps * jp.eps).is_zero()
    assert jp.incl * jp.proj == jp.eps
    with pytest.raises(D0resError):
        pad(base, fiber_module(B([(1, 1)], [], [], n=8), 1), 1)


def test_annihilator_examples():
    ann = annihilator(fiber_module(NODE1, 2), 2)
    texts = [poly_text(p) for p in ann.polys]
    assert "y" in texts and "x^2" in texts
    assert all("x" != t for t in texts)
    sky, _ = graph_skyscraper(NODE1)
    ann_sky = annihilator(sky, 2)
    assert [poly_text(p) for p in ann_sky.polys] == ["x", "y", "x^2", "x*y", "y^2"]
    ann_cusp = annihilator(fiber_module(CUSP, 2), 2)
    texts_cusp = [poly_text(p) for p in ann_cusp.polys]
    assert "x" in texts_cusp and "y" in texts_cusp


def test_annihilator_ideal_closure():
    module = fiber_module(B([(1, 1)], [(2, 1)]), 3)
    ann = annihilator(module)
    # multiplying a basis element by a coordinate stays inside the ideal
    for p in ann.polys:
        for var in range(2):
            shifted = p * Poly.variable(2, var)
            if shifted.total_degree() <= ann.degree_bound:
                assert evaluate_on_module(shifted, module).is_zero()


def test_annihilator_is_iso_invariant_not_basis_dependent():
    mod = fiber_module(NODE1, 3)
    # conjugate by an invertible change of basis: annihilator must not change
    p = M([[1, 0, 0], [2, 1, 0], [0, 1, 1]])
    p_inv = M([[1, 0, 0], [-2, 1, 0], [2, -1, 1]])
    assert p * p_inv == ExactMatrix.identity(3)
    conj = FiniteModule(3, tuple(p * a * p_inv for a in mod.actions))
    assert annihilator(conj, 3) == annihilator(mod, 3)


def test_support_length_examples():
    assert support_length(fiber_module(NODE1, 2)) == 2
    assert support_length(fiber_module(CUSP, 2)) == 1
    sky, _ = graph_skyscraper(NODE1)
    assert support_length(sky) == 1


def test_support_length_lower_bound_small():
    for branch, n in ((CUSP, 2), (NODE1, 1)):
        for l in (1, 2, 3):
            module = fiber_module(branch, n * l)
            assert support_length(module) >= l


def test_nilpotency_index_examples():
    shift = M([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert nilpotency_index(shift) == 3
    assert nilpotency_index(ExactMatrix.zeros(2, 2)) == 1
    with pytest.raises(NotNilpotent):
        nilpotency_index(ExactMatrix.identity(2))


def test_finite_module_validation():
    a = M([[0, 1], [0, 0]])
    b = M([[0, 0], [1, 0]])
    with pytest.raises(D0resError):
        FiniteModule(2, (a, b))       # non-commuting
    with pytest.raises(NotNilpotent):
        FiniteModule(2, (ExactMatrix.identity(2),))
