import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from korovkin import GridDomain, RealFunction
from korovkin.bernstein import (
    CompositionMap,
    bernstein_basis,
    composition_operator,
    kantorovich,
    kantorovich_moments,
    max_kantorovich,
    sup_bernstein,
    tensor_sup_bernstein_2d,
)
from korovkin.domain import NormKind, norm
from korovkin.errors import DomainError, InvariantError, PreconditionError

D = GridDomain.interval(0, 1, 101)
X = D.points[:, 0]
SQUARE = CompositionMap(RealFunction.from_expr("x^2"))


def printed_moments(n, p):
    one = np.ones_like(p)
    neg_x = -n * p / (n + 1) - 1 / (2 * (n + 1))
    sq = n * (n - 1) * p ** 2 / (n + 1) ** 2 + 2 * n * p / (n + 1) ** 2 + 1 / (3 * (n + 1) ** 2)
    return one, neg_x, sq


def test_basis_small_cases():
    np.testing.assert_allclose(bernstein_basis(1, 0.5), [0.5, 0.5])
    p = bernstein_basis(3, 0.5)
    k = np.arange(4)
    assert p @ k == pytest.approx(1.5)
    assert p @ k ** 2 == pytest.approx(3.0)


def test_basis_exact_rational_oracle():
    n, x = 12, Fraction(3, 7)
    exact = [math.comb(n, k) * x ** k * (1 - x) ** (n - k) for k in range(n + 1)]
    np.testing.assert_allclose(bernstein_basis(n, 3 / 7), [float(v) for v in exact], rtol=1e-13)


def test_basis_errors():
    with pytest.raises(DomainError):
        bernstein_basis(3, 1.5)
    with pytest.raises(PreconditionError):
        bernstein_basis(0, 0.5)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 400), st.floats(0, 1))
def test_basis_is_a_partition_of_unity(n, x):
    p = bernstein_basis(n, x)
    assert np.all((p >= 0) & (p <= 1))
    assert abs(p.sum() - 1) < 1e-12


@pytest.mark.parametrize("n", [1, 2, 5, 17, 64])
def test_binomial_moment_identities(n):
    p = bernstein_basis(n, X)
    k = np.arange(n + 1)
    assert np.max(np.abs(p.sum(axis=1) - 1)) < 1e-10
    assert np.max(np.abs(p @ k - n * X)) < 1e-10
    assert np.max(np.abs(p @ k ** 2 - n * X * (1 - X + n * X))) < 1e-10


def test_sup_bernstein_hand_example():
    T = sup_bernstein(1)
    out = T(RealFunction.from_expr("x"))
    assert out[0] == 0.5
    assert out[-1] == 1.0


def test_sup_bernstein_unital_for_any_phi():
    for phi in (None, SQUARE):
        np.testing.assert_allclose(sup_bernstein(7, phi, input_domain=D)(RealFunction.constant(1.0)), 1.0)


def test_sup_bernstein_converges_on_negative_identity():
    f = RealFunction.from_expr("-x")
    errs = [norm(sup_bernstein(n, input_domain=D)(f) + X) for n in (4, 16, 64, 256)]
    assert all(b < a for a, b in zip(errs, errs[1:]))
    assert errs[-1] < 0.02


def test_sup_bernstein_refinement_consistency():
    f = RealFunction.from_expr("sin(7*x)")
    n = 10
    coarse = sup_bernstein(n, refinement=2, input_domain=D)(f)
    fine = sup_bernstein(n, refinement=4, input_domain=D)(f)
    spacing = 1 / ((n + 1) * 2 * math.ceil(100 / (n + 1)))
    # discrete sups increase with refinement and stay within the modulus of continuity
    assert np.all(fine >= coarse - 1e-12)
    assert np.max(fine - coarse) <= 7 * spacing / 2 + 1e-12


@pytest.mark.parametrize("n", [1, 2, 8, 33, 64])
@pytest.mark.parametrize("phi", [None, SQUARE])
def test_kantorovich_matches_printed_closed_forms(n, phi):
    K = kantorovich(n, phi, input_domain=D)
    p = X if phi is None else X ** 2
    want = printed_moments(n, p)
    tests = [RealFunction.constant(1.0), RealFunction.from_expr("-x"), RealFunction.from_expr("x^2")]
    for f, w in zip(tests, want):
        assert np.max(np.abs(K(f) - w)) < 1e-10
    for got, w in zip(kantorovich_moments(n, p), want):
        np.testing.assert_allclose(got, w, atol=1e-14)


def test_kantorovich_point_values():
    K = kantorovich(1)
    assert K(RealFunction.from_expr("-x"))[0] == pytest.approx(-0.25, abs=1e-14)
    assert K(RealFunction.from_expr("x^2"))[0] == pytest.approx(1 / 12, abs=1e-14)


def test_kantorovich_l1_contraction(rng):
    l1 = NormKind.l1(D)
    fine = GridDomain.interval(0, 1, 20001)
    from scipy.integrate import simpson

    for c in rng.uniform(-2, 2, size=(10, 5)):
        f = RealFunction.polynomial(c)
        integral = simpson(np.abs(f.on(fine)), x=fine.points[:, 0])
        for n in (3, 12):
            assert norm(kantorovich(n, input_domain=D)(f), l1) <= integral + 1e-4


def test_quadrature_rules_agree_on_cubics():
    f = RealFunction.from_expr("x^3-x")
    a = kantorovich(5, quadrature="simpson")(f)
    b = kantorovich(5, quadrature="gauss", nodes_per_window=3)(f)
    np.testing.assert_allclose(a, b, atol=1e-13)
    with pytest.raises(PreconditionError):
        kantorovich(5, quadrature="midpoint")


def test_max_kantorovich_example_and_domination():
    sq = RealFunction.from_expr("x^2")
    assert max_kantorovich(1)(sq)[0] == pytest.approx(1 / 12, abs=1e-14)
    f = RealFunction.from_expr("sin(5*x)")
    T = max_kantorovich(6, input_domain=D)(f)
    k6, k7 = kantorovich(6, input_domain=D)(f), kantorovich(7, input_domain=D)(f)
    assert np.all(T >= k6) and np.all(T >= k7)
    assert np.any(T > k6) and np.any(T > k7)


def test_composition_operator():
    A = composition_operator(input_domain=D)
    np.testing.assert_array_equal(A(RealFunction.from_expr("sin(x)")), np.sin(X))
    B = composition_operator(SQUARE, input_domain=D)
    np.testing.assert_allclose(B(RealFunction.from_expr("x")), X ** 2)
    one, negx, sq = (B(f) for f in (RealFunction.constant(1.0), RealFunction.from_expr("-x"),
                                    RealFunction.from_expr("x^2")))
    assert np.max(np.abs(one * sq - negx ** 2)) < 1e-15


def test_composition_map_range_checked():
    with pytest.raises(InvariantError):
        CompositionMap(RealFunction.from_expr("2*x"))


def test_tensor_operator_against_one_dimensional_oracle():
    box = GridDomain.box([(0, 1), (0, 1)], [21, 21])
    n = 5
    T2 = tensor_sup_bernstein_2d(n, input_domain=box)
    T1 = sup_bernstein(n, input_domain=GridDomain.interval(0, 1, 21))
    out2 = T2(RealFunction.from_expr("x", 2)).reshape(21, 21)
    out1 = T1(RealFunction.from_expr("x"))
    for j in range(21):
        np.testing.assert_allclose(out2[:, j], out1, atol=1e-13)
    np.testing.assert_allclose(T2(RealFunction.constant(1.0, 2)), 1.0, atol=1e-13)
    assert tensor_sup_bernstein_2d(1, input_domain=box)(RealFunction.from_expr("x", 2))[0] == pytest.approx(0.5)


def test_tensor_operator_converges_on_sum():
    box = GridDomain.box([(0, 1), (0, 1)], [21, 21])
    f = RealFunction.from_expr("x+y")
    target = box.points.sum(axis=1)
    errs = [norm(tensor_sup_bernstein_2d(n, input_domain=box)(f) - target) for n in (4, 16, 64)]
    assert errs[0] > errs[1] > errs[2]


def test_tensor_operator_rejects_non_square():
    with pytest.raises(DomainError):
        tensor_sup_bernstein_2d(3, input_domain=GridDomain.box([(0, 2), (0, 1)], [5, 5]))
