from fractions import Fraction

import pytest

from d0res.branches import PlaneCurveInput, newton_puiseux
from d0res.errors import D0resError, UnsupportedFieldExtension
from d0res.poly import Poly
from d0res.puiseux import (
    FieldContext,
    newton_polygon_edges,
    roots_in_tower,
    squarefree_decomposition,
)
from d0res.series import Series

from conftest import curve_poly

F = Fraction


def decompose(terms, trunc=32):
    return newton_puiseux(PlaneCurveInput(Poly(2, terms)), trunc)


def coords_of(branch):
    return [
        [(i, c) for i, c in enumerate(s.coeffs) if c != 0]
        for s in branch.coords
    ]


def test_cusp_single_branch():
    (b,) = decompose({(0, 2): F(1), (3, 0): F(-1)})
    assert coords_of(b) == [[(2, F(1))], [(3, F(1))]]


def test_axes_two_branches_in_order():
    bs = decompose({(1, 1): F(1)})
    assert len(bs) == 2
    assert coords_of(bs[0]) == [[(1, F(1))], []]       # y = 0 branch first
    assert coords_of(bs[1]) == [[], [(1, F(1))]]       # x = 0 branch last


def test_nodal_cubic_binomial_series():
    bs = decompose({(0, 2): F(1), (2, 0): F(-1), (3, 0): F(-1)}, trunc=12)
    assert len(bs) == 2
    # y = +- x sqrt(1+x) = +-(t + t^2/2 - t^3/8 + t^4/16 - ...)
    ys = sorted(s.coeffs[1] for b in bs for s in [b.coords[1]])
    assert ys == [F(-1), F(1)]
    for b in bs:
        y = b.coords[1]
        sign = y.coeffs[1]
        assert y.coeffs[2] == sign * F(1, 2)
        assert y.coeffs[3] == sign * F(-1, 8)
        assert y.coeffs[4] == sign * F(1, 16)


def test_e6_and_ramphoid_single_branches():
    (b,) = decompose({(0, 3): F(1), (4, 0): F(-1)})
    assert coords_of(b) == [[(3, F(1))], [(4, F(1))]]
    (b2,) = decompose({(0, 2): F(1), (5, 0): F(-1)})
    assert coords_of(b2) == [[(2, F(1))], [(5, F(1))]]


def test_triple_point_three_branches():
    bs = decompose({(2, 1): F(1), (1, 2): F(-1)})
    assert len(bs) == 3
    assert coords_of(bs[0]) == [[(1, F(1))], []]
    assert coords_of(bs[1]) == [[(1, F(1))], [(1, F(1))]]
    assert coords_of(bs[2]) == [[], [(1, F(1))]]


def test_gaussian_node_needs_i():
    bs = decompose({(0, 2): F(1), (2, 0): F(1)})
    assert len(bs) == 2
    field = bs[0].coords[1].coeffs[1].field
    assert field.minpoly == (F(1), F(0), F(1))
    c0 = bs[0].coords[1].coeffs[1]
    c1 = bs[1].coords[1].coeffs[1]
    assert c0 * c0 == -1 and c1 == -c0


def test_cyclotomic_triple_point():
    bs = decompose({(0, 3): F(1), (3, 0): F(-1)})
    assert len(bs) == 3
    tangents = [b.coords[1].coeffs[1] for b in bs]
    assert tangents[0] == 1
    w = tangents[1]
    assert w ** 3 == 1 and w != 1
    assert tangents[2] == w * w


def test_quartic_resolvent_split():
    # y^4 + 5x^2 y^2 + 4x^4 = (y^2 + x^2)(y^2 + 4x^2): four branches over QQ(i)
    bs = decompose({(0, 4): F(1), (2, 2): F(5), (4, 0): F(4)})
    assert len(bs) == 4
    slopes = [b.coords[1].coeffs[1] for b in bs]
    squares = sorted(str(s * s) for s in slopes)
    assert squares == ["-1", "-1", "-4", "-4"]


def test_unsupported_cubic_extension():
    with pytest.raises(UnsupportedFieldExtension):
        decompose({(0, 3): F(1), (3, 0): F(-2)})  # needs cbrt(2) and omega


def test_residuals_and_multiplicity_sum(corpus_germs):
    for name, germ in corpus_germs.items():
        f = curve_poly(name)
        total = 0
        for b in germ.branches:
            assert f.eval_series(list(b.coords)).is_zero_at_precision()
            total += b.multiplicity()
        assert total == f.min_degree(), name


def test_polygon_edges_in_increasing_slope_order():
    f = Poly(2, {(0, 3): F(1), (1, 1): F(1), (3, 0): F(1)})
    edges = newton_polygon_edges(f)
    slopes = [F(q, p) for p, q, _ in edges]
    assert slopes == sorted(slopes)
    assert slopes == [F(1, 2), F(2)]


def test_roots_in_tower_multiplicities():
    ctx = FieldContext()
    # u^3 - 3u + 2 = (u-1)^2 (u+2)
    roots = roots_in_tower([F(2), F(-3), F(0), F(1)], ctx)
    assert sorted((str(r), m) for r, m in roots) == [("-2", 1), ("1", 2)]
    sq = squarefree_decomposition([F(2), F(-3), F(0), F(1)])
    assert [(m, len(f) - 1) for f, m in sq] == [(1, 1), (2, 1)]


def test_non_primitive_parametrization_rejected():
    from d0res.branches import BranchParam
    with pytest.raises(D0resError):
        BranchParam((Series.from_pairs([(2, F(1))], 8),
                     Series.from_pairs([(4, F(1))], 8)))


def test_smooth_graph_branch():
    (b,) = decompose({(0, 1): F(1), (2, 0): F(-1)})
    assert coords_of(b) == [[(1, F(1))], [(2, F(1))]]
