import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad, simpson

from korovkin import GridDomain, RealFunction
from korovkin.bernstein import kantorovich
from korovkin.choquet import (
    DistortionFunction,
    choquet_functional,
    choquet_integral,
    choquet_kantorovich,
    parse_distortion,
)
from korovkin.errors import InvariantError, PreconditionError
from korovkin.operators import (
    check_comonotone_additive,
    check_monotone,
    check_sublinear,
    check_translatable,
    ordered_pairs,
    sample_pairs,
)

IDENTITY = DistortionFunction.identity()
SQRT = parse_distortion("sqrt")
X = RealFunction.from_expr("x")


def layer_cake_oracle(g):
    # for f = x on [0, 1] the level set {x > t} has length 1 - t
    return quad(lambda t: g(1.0 - t), 0.0, 1.0)[0]


def test_identity_distortion_gives_riemann_value():
    assert choquet_integral(X, 0, 1, IDENTITY, 10_000) == pytest.approx(0.5, abs=1e-3)


def test_sqrt_distortion_layer_cake_value():
    oracle = layer_cake_oracle(SQRT)
    assert oracle == pytest.approx(2 / 3, abs=1e-9)
    assert choquet_integral(X, 0, 1, SQRT, 10_000) == pytest.approx(oracle, abs=2e-3)


def test_constant_is_a_single_layer():
    c = RealFunction.constant(2.5)
    assert choquet_integral(c, 0.2, 0.6, SQRT, 64) == pytest.approx(2.5 * np.sqrt(0.4), rel=1e-13)


def test_riemann_oracle_for_seeded_polynomials(rng):
    t = np.linspace(0, 1, 20_001)
    for c in rng.uniform(-2, 2, size=(10, 5)):
        f = RealFunction.polynomial(c)
        assert choquet_integral(f, 0, 1, IDENTITY, 10_000) == pytest.approx(simpson(f(t), x=t), abs=1e-3)


@pytest.mark.parametrize("c", [0.0, 0.3, 2.0, 10.0])
def test_translation_rule(c):
    f = RealFunction.from_expr("sin(6*x)")
    a, b = 0.1, 0.7
    lhs = choquet_integral(f + c, a, b, SQRT, 128)
    assert lhs == pytest.approx(choquet_integral(f, a, b, SQRT, 128) + c * np.sqrt(b - a), abs=1e-9)


def test_resolution_consistency():
    f = RealFunction.from_expr("sin(6*x)")
    for R in (32, 128, 512):
        lo = choquet_integral(f, 0, 1, SQRT, R)
        hi = choquet_integral(f, 0, 1, SQRT, 2 * R)
        # sin(6x) is 6-Lipschitz
        assert abs(hi - lo) <= 6 / R


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 3), st.lists(st.floats(-2, 2), min_size=1, max_size=4))
def test_homogeneity_and_monotonicity(lam, coeffs):
    f = RealFunction.polynomial(coeffs)
    base = choquet_integral(f, 0, 1, SQRT, 64)
    assert choquet_integral(lam * f, 0, 1, SQRT, 64) == pytest.approx(lam * base, abs=1e-10)
    assert choquet_integral(f + abs(f), 0, 1, SQRT, 64) >= base - 1e-12


def test_functional_is_comonotone_additive():
    T = choquet_functional(0, 1, SQRT, 128)
    assert check_comonotone_additive(T, 1e-9).passed


def test_functional_is_not_additive_in_general():
    T = choquet_functional(0, 1, SQRT, 128)
    f, g = X, 1 - X
    assert T(f + g)[0] < T(f)[0] + T(g)[0] - 1e-3


@pytest.mark.parametrize(
    "spec",
    ["expr:x^2", "expr:2*x", "expr:x/2", "power:1.5", "power:0", "expr:sqrt(x-1)"],
)
def test_invalid_distortions_rejected(spec):
    with pytest.raises(InvariantError):
        parse_distortion(spec)


def test_distortion_spec_forms():
    assert parse_distortion("identity").tag == "identity"
    assert parse_distortion("power:0.5").tag == "sqrt"
    assert parse_distortion("expr:sin(pi*x/2)")(1.0) == pytest.approx(1.0)
    with pytest.raises(PreconditionError):
        parse_distortion("cubic")


def test_integral_preconditions():
    with pytest.raises(PreconditionError):
        choquet_integral(X, 1, 0, SQRT)
    with pytest.raises(PreconditionError):
        choquet_integral(X, 0, 1, SQRT, 1)
    with pytest.raises(PreconditionError):
        choquet_integral(X, 0, 2, SQRT)


def test_operator_unital():
    for n in (1, 5, 40):
        np.testing.assert_allclose(choquet_kantorovich(n, resolution=32)(RealFunction.constant(1.0)), 1.0, atol=1e-13)


def test_identity_distortion_recovers_kantorovich():
    d = GridDomain.interval(0, 1, 51)
    f = RealFunction.from_expr("x^2-sin(3*x)")
    for n in (2, 9):
        C = choquet_kantorovich(n, g=IDENTITY, resolution=1024, input_domain=d)(f)
        K = kantorovich(n, input_domain=d)(f)
        assert np.max(np.abs(C - K)) < 1e-5


def test_operator_axioms():
    d = GridDomain.interval(0, 1, 51)
    T = choquet_kantorovich(6, resolution=64, input_domain=d)
    assert check_sublinear(T, sample_pairs(d, 12), 1e-8).passed
    assert check_monotone(T, ordered_pairs(d, 12), 1e-8).passed
    assert check_translatable(T, sample_pairs(d, 12), 1e-8).passed
