import math

import numpy as np
import pytest

from korovkin import GridDomain, RealFunction
from korovkin.bernstein import (
    CompositionMap,
    composition_operator,
    max_kantorovich,
    max_kantorovich_family,
    sup_bernstein,
    sup_bernstein_family,
)
from korovkin.domain import NormKind, norm
from korovkin.errors import GateRefused, PreconditionError
from korovkin.harness import (
    apriori_bound,
    check_hypotheses,
    converged,
    probe_functional_equation,
    run_korovkin_experiment,
    tabulate,
    weyl_experiment,
)
from korovkin.operators import OperatorInstance, cesaro_family, identity_operator
from korovkin.trig import GOLDEN_ANGLE, circle_mean_operator

D = GridDomain.interval(0, 1, 101)
SQUARE = CompositionMap(RealFunction.from_expr("x^2"))
PROBES = [RealFunction.from_expr("abs(x-0.5)"), RealFunction.from_expr("sin(3*x)")]


def max_of_compositions(domain, phi1, phi2):
    where1, where2 = phi1(domain.points[:, 0]), phi2(domain.points[:, 0])
    return OperatorInstance(
        "max-of-compositions", domain, domain, lambda f: np.maximum(f(where1), f(where2)),
        np.concatenate([where1, where2])[:, None],
    )


def test_composition_operators_pass_the_gate():
    for phi in (None, SQUARE):
        rep = check_hypotheses(composition_operator(phi, input_domain=D))
        assert rep.passed and rep.form == "hypA"
        assert rep.functional_equation_residual["value"] < 1e-10
        assert rep.strict_positivity["min_value"] == 1.0


def test_identity_on_shifted_interval_uses_deficit():
    d = GridDomain.interval(-1, 1, 41)
    rep = check_hypotheses(identity_operator(d))
    assert rep.alpha == 1.0 and rep.passed
    with pytest.raises(PreconditionError):
        check_hypotheses(identity_operator(d), alpha=0.5)


def test_circle_mean_fails_trig_plus_with_unit_residual():
    rep = check_hypotheses(circle_mean_operator(GridDomain.circle(2048)))
    # mean(3+2cos+2sin) = 3 against (-1)^2 + (-1)^2 = 2
    assert rep.form == "trig+"
    assert rep.functional_equation_residual["value"] == pytest.approx(1.0, abs=1e-6)
    assert not rep.passed
    assert "trig+" in rep.summary()
    assert rep.to_dict()["verdict"] == "fail"


def test_probe_functional_equation_survey():
    reps = probe_functional_equation([composition_operator(None, input_domain=D),
                                      composition_operator(SQUARE, input_domain=D)])
    assert all(r.passed for r in reps)
    split = probe_functional_equation([max_of_compositions(D, lambda t: t, lambda t: 1 - t)])[0]
    assert split.functional_equation_residual["value"] > 1e-3
    circle = probe_functional_equation([circle_mean_operator(GridDomain.circle(256))])[0]
    assert circle.functional_equation_residual["value"] == pytest.approx(1.0, abs=1e-6)
    assert probe_functional_equation([]) == []


def test_apriori_identity_pair():
    A = identity_operator(D)
    rep = apriori_bound(A, A, RealFunction.from_expr("x^2"), 0.1)
    assert rep.lhs == 0.0
    assert rep.rhs >= 0.1 - 1e-15
    assert rep.passed and set(rep.terms) == {
        "eps_term", "quad_term", "unit_term", "equation_term", "projection_term"}


@pytest.mark.parametrize(
    "T, f, eps",
    [
        (sup_bernstein(8, input_domain=D), "x^2", 0.05),
        (max_kantorovich(4, input_domain=D), "abs(x-0.5)", 0.1),
        (sup_bernstein(32, SQUARE, input_domain=D), "sin(3*x)", 0.02),
    ],
)
def test_apriori_examples(T, f, eps):
    rep = apriori_bound(T, composition_operator(None, input_domain=D), RealFunction.from_expr(f), eps)
    assert rep.slack >= -1e-8
    assert rep.lhs > 0
    assert rep.delta > 0


def test_apriori_bound_is_not_vacuous():
    # a larger epsilon cannot shrink the estimate's epsilon part
    T = sup_bernstein(8, input_domain=D)
    A = composition_operator(None, input_domain=D)
    f = RealFunction.from_expr("abs(x-0.5)")
    small, big = apriori_bound(T, A, f, 0.02), apriori_bound(T, A, f, 0.5)
    assert big.delta <= small.delta
    assert big.terms["eps_term"] > small.terms["eps_term"]


def test_sup_bernstein_experiment_passes():
    rep = run_korovkin_experiment(
        sup_bernstein_family(None, 4, D, D), identity_operator(D), [4, 8, 16, 32, 64, 128, 256], PROBES
    )
    assert rep.passed
    for series in rep.errors.values():
        errs = [e for _, e in series]
        assert errs[-1] <= max(errs[0], 1e-12)
    assert [r[1] for r in rep.rows()[:3]] == ["test:1", "test:-x", "test:x^2"]
    assert rep.to_dict()["overall_verdict"] == "pass"


def test_l1_experiment_records_unit_norms():
    rep = run_korovkin_experiment(
        max_kantorovich_family(SQUARE, D, D), composition_operator(SQUARE, input_domain=D),
        [4, 16, 64], PROBES, NormKind.l1(D)
    )
    assert rep.passed
    assert all(abs(v - 1) < 1e-9 for _, v in rep.operator_norms)


def test_gate_refuses_circle_mean():
    c = GridDomain.circle(256)
    fam = cesaro_family(sup_bernstein_family(None, 4, D, D))
    with pytest.raises(GateRefused) as err:
        run_korovkin_experiment(fam, circle_mean_operator(c), [1, 2], [])
    assert err.value.report.form == "trig+"


def test_failing_probe_does_not_hide_a_passing_test_set():
    # A = identity while T_n converge to f o x^2: test set fails, verdicts stay independent
    rep = tabulate(sup_bernstein_family(SQUARE, 4, D, D), identity_operator(D), [4, 64],
                   [RealFunction.constant(1.0)], PROBES)
    assert rep.test_set_verdict == "pass"
    assert rep.probes_verdict == "fail"
    assert rep.overall_verdict == "fail"


def test_converged_rule():
    assert converged([(1, 0.2), (2, 0.01)], 0.05)
    assert not converged([(1, 0.02), (2, 0.015)], 0.05)
    assert converged([(1, 0.0), (2, 0.0)], 0.05)
    assert not converged([(1, 0.2), (2, 0.06)], 0.05)


def test_schedule_validation():
    with pytest.raises(PreconditionError):
        tabulate(sup_bernstein_family(None, 4, D, D), identity_operator(D), [8, 4], [], PROBES)


def test_strict_positivity_lower_bound():
    A = composition_operator(None, input_domain=D)
    a1 = A(RealFunction.constant(1.0))
    T = sup_bernstein(16, input_domain=D)
    for f in PROBES:
        diff = T(f) - A(f)
        assert a1.min() * norm(diff) <= norm(diff * a1) + 1e-15


def test_cesaro_of_convergent_family_has_same_limit():
    fam = cesaro_family(sup_bernstein_family(None, 4, GridDomain.interval(0, 1, 41)))
    A = identity_operator(fam.input_domain)
    rep = tabulate(fam, A, [2, 16, 128], [], [RealFunction.from_expr("sin(3*x)")], tol=0.1)
    errs = [e for _, e in rep.errors["sin(3*x)"]]
    assert errs[0] > errs[1] > errs[2]
    assert rep.passed


def test_weyl_experiment_on_golden_angle():
    rep = weyl_experiment([RealFunction.builtin("cos")], schedule=(4, 64, 1024), domain=GridDomain.circle(512))
    assert rep.passed
    assert rep.hypothesis is not None and not rep.hypothesis.passed
    one = [e for _, e in rep.errors["1"]]
    assert max(one) < 1e-15


def test_weyl_cosine_envelope():
    rep = weyl_experiment([RealFunction.builtin("cos")], schedule=(4, 16, 64, 256), domain=GridDomain.circle(512))
    bound = lambda n: (2 / n) / abs(1 - np.exp(1j * GOLDEN_ANGLE))
    for n, err in rep.errors["cos"]:
        assert err <= bound(n) + 1e-6


def test_weyl_rejects_rational_angle():
    with pytest.raises(PreconditionError):
        weyl_experiment([], alpha_rot=math.pi / 2)
