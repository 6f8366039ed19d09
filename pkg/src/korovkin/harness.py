"""Korovkin gate: hypothesis checks, the a-priori estimate and convergence experiments."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .domain import (
    NormKind,
    RealFunction,
    deficit_of_positivity,
    korovkin_delta,
    korovkin_test_set,
    max_eq1_violation,
    norm,
    sample_grid_union,
    trig_test_set,
)
from .errors import GateRefused, InvariantError, PreconditionError
from .operators import OperatorFamily, OperatorInstance, operator_norm
from .trig import GOLDEN_ANGLE, circle_mean_operator, is_irrational_rotation, rotation_family

DEFAULT_TOLS = {"sup": 5e-2, "l1": 2e-2}
# errors at or below this are treated as exact zeros by the convergence verdict
ZERO_ERROR = 1e-12


def _verdict(ok):
    return "pass" if ok else "fail"


@dataclass
class HypothesisReport:
    label: str
    form: str
    alpha: float
    strict_positivity: dict
    functional_equation_residual: dict
    tol: float

    @property
    def passed(self) -> bool:
        return self.strict_positivity["verdict"] == "pass" and self.functional_equation_residual["verdict"] == "pass"

    def summary(self):
        return (
            f"{self.label}: min A(1)={self.strict_positivity['min_value']:.6g} "
            f"({self.strict_positivity['verdict']}), {self.form} residual="
            f"{self.functional_equation_residual['value']:.6g} ({self.functional_equation_residual['verdict']})"
        )

    def to_dict(self):
        return {
            "label": self.label,
            "form": self.form,
            "alpha": self.alpha,
            "strict_positivity": dict(self.strict_positivity),
            "functional_equation_residual": dict(self.functional_equation_residual),
            "tol": self.tol,
            "verdict": _verdict(self.passed),
        }


def _resolve_alpha(domain, alpha):
    deficit = deficit_of_positivity(domain)
    if alpha is None:
        return deficit
    if alpha < deficit - 1e-15:
        raise PreconditionError(f"alpha={alpha} is below the deficit of positivity {deficit}")
    return float(alpha)


def check_hypotheses(A: OperatorInstance, alpha=None, tol=1e-10) -> HypothesisReport:
    """Strict positivity of A(1) and the functional equation on the test functions.

    On circle domains the equation takes its trigonometric form
    A(3+2cos+2sin) = A(-1-cos)^2 + A(-1-sin)^2.
    """
    dom = A.input_domain
    one = RealFunction.constant(1.0, dom.dimension)
    a1 = A(one)
    if dom.kind == "circle-angle":
        _, m_cos, m_sin, quad = trig_test_set(dom, plus_form=True)
        residual = norm(A(quad) - A(m_cos) ** 2 - A(m_sin) ** 2)
        form, alpha = "trig+", 1.0
    else:
        alpha = _resolve_alpha(dom, alpha)
        tests = korovkin_test_set(dom, alpha)
        negs, quad = tests[1:-1], tests[-1]
        residual = norm(a1 * A(quad) - sum(A(g) ** 2 for g in negs))
        form = "hypA"
    min_a1 = float(np.min(a1))
    return HypothesisReport(
        A.label,
        form,
        alpha,
        {"min_value": min_a1, "verdict": _verdict(min_a1 > 0.0)},
        {"value": residual, "verdict": _verdict(residual <= tol)},
        tol,
    )


def probe_functional_equation(candidates, alpha=None, tol=1e-10) -> list[HypothesisReport]:
    """Functional-equation residual of each candidate limit operator."""
    if not candidates:
        return []
    first = candidates[0].input_domain
    for A in candidates[1:]:
        d = A.input_domain
        if d is not first and (d.kind != first.kind or d.size != first.size):
            raise PreconditionError("candidates must share their input domain")
    return [check_hypotheses(A, alpha, tol) for A in candidates]


@dataclass
class AprioriReport:
    label: str
    function: str
    epsilon: float
    alpha: float
    delta: float
    lhs: float
    rhs: float
    slack: float
    verdict: str
    terms: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "label": self.label,
            "function": self.function,
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "delta": self.delta,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "verdict": self.verdict,
            "terms": dict(self.terms),
        }


def apriori_bound(T: OperatorInstance, A: OperatorInstance, f: RealFunction, epsilon, alpha=None,
                  tol=1e-8, verify=True) -> AprioriReport:
    """Both sides of the sup-norm estimate of ||T(f)A(1) - T(1)A(f)||.

    delta is computed over every point at which T or A samples its argument,
    so the pointwise estimate the bound rests on holds for the discretized
    operators exactly.
    """
    dom = T.input_domain
    alpha = _resolve_alpha(dom, alpha)
    pts = sample_grid_union(dom.points, T.sample_points(), A.sample_points())
    delta = korovkin_delta(f, dom, epsilon, points=pts)
    if not math.isfinite(delta):
        raise InvariantError(f"{f.label}: coincident samples differ by more than epsilon")
    if verify:
        gap = max_eq1_violation(f, pts, epsilon, delta)
        if gap > 1e-9 * max(1.0, delta):
            raise InvariantError(f"{f.label}: the a-priori estimate fails at the computed delta (gap {gap:.3g})")

    tests = korovkin_test_set(dom, alpha)
    one, negs, quad = tests[0], tests[1:-1], tests[-1]
    t1, a1 = T(one), A(one)
    tq, aq = T(quad), A(quad)
    lhs = norm(T(f) * a1 - t1 * A(f))
    terms = {
        "eps_term": epsilon * norm(t1) * norm(a1),
        "quad_term": norm(a1) * norm(tq - aq),
        "unit_term": norm(aq) * norm(t1 - a1),
        "equation_term": 2.0 * norm(a1 * aq - sum(A(g) ** 2 for g in negs)),
        "projection_term": 2.0 * sum(norm(A(g)) * norm(T(g) - A(g)) for g in negs),
    }
    rhs = terms["eps_term"] + delta * (
        terms["quad_term"] + terms["unit_term"] + terms["equation_term"] + terms["projection_term"]
    )
    slack = rhs - lhs
    return AprioriReport(
        f"{T.label} vs {A.label}", f.label, float(epsilon), alpha, delta, lhs, rhs, slack, _verdict(slack >= -tol), terms
    )


@dataclass
class ConvergenceReport:
    family: str
    limit: str
    norm: str
    schedule: list
    tol: float
    errors: dict
    roles: dict
    test_set_verdict: str
    probe_verdicts: dict
    probes_verdict: str
    operator_norms: list
    sup_operator_norm: float
    bounded_verdict: str
    overall_verdict: str
    hypothesis: HypothesisReport | None = None

    @property
    def passed(self):
        return self.overall_verdict == "pass"

    def function_id(self, label):
        return f"{self.roles[label]}:{label}"

    def rows(self):
        """(n, function_id, norm, error) in schedule order, functions in report order."""
        out = []
        for i, n in enumerate(self.schedule):
            for label, series in self.errors.items():
                out.append((n, self.function_id(label), self.norm, series[i][1]))
        return out

    def to_dict(self):
        return {
            "family": self.family,
            "limit": self.limit,
            "norm": self.norm,
            "schedule": list(self.schedule),
            "tol": self.tol,
            "errors": {self.function_id(k): [[n, e] for n, e in v] for k, v in self.errors.items()},
            "test_set_verdict": self.test_set_verdict,
            "probe_verdicts": {self.function_id(k): v for k, v in self.probe_verdicts.items()},
            "probes_verdict": self.probes_verdict,
            "operator_norms": [[n, v] for n, v in self.operator_norms],
            "sup_operator_norm": self.sup_operator_norm,
            "bounded_verdict": self.bounded_verdict,
            "overall_verdict": self.overall_verdict,
            "hypothesis": None if self.hypothesis is None else self.hypothesis.to_dict(),
        }


def converged(series, tol) -> bool:
    """Final error below tol and at most half the first error (or numerically zero throughout)."""
    first, last = series[0][1], series[-1][1]
    return last < tol and (last <= 0.5 * first or first <= ZERO_ERROR)


def _check_schedule(schedule):
    sched = [int(n) for n in schedule]
    if not sched:
        raise PreconditionError("schedule is empty")
    if any(b <= a for a, b in zip(sched, sched[1:])) or sched[0] < 1:
        raise PreconditionError("schedule must be strictly increasing positive integers")
    return sched


def _unique_labels(functions):
    seen = {}
    out = []
    for f in functions:
        label = f.label
        if label in seen:
            seen[label] += 1
            label = f"{label}#{seen[f.label]}"
        else:
            seen[label] = 0
        out.append((label, f))
    return out


def tabulate(F: OperatorFamily, A: OperatorInstance, schedule, tests, probes, norm_kind=None, tol=None,
             hypothesis=None) -> ConvergenceReport:
    """Error table ||T_n(f) - A(f)|| for test functions and probes; no gate."""
    sched = _check_schedule(schedule)
    norm_kind = norm_kind or NormKind.sup()
    tol = DEFAULT_TOLS[norm_kind.tag] if tol is None else float(tol)
    labelled = _unique_labels(list(tests) + list(probes))
    roles = {label: ("test" if i < len(tests) else "probe") for i, (label, _) in enumerate(labelled)}
    limits = {label: A(f) for label, f in labelled}
    errors = {label: [] for label, _ in labelled}
    op_norms = []
    for n in sched:
        T = F.member(n)
        op_norms.append((n, operator_norm(T)))
        for label, f in labelled:
            errors[label].append((n, norm(T(f) - limits[label], norm_kind)))
    test_ok = all(converged(errors[k], tol) for k in errors if roles[k] == "test")
    probe_verdicts = {k: _verdict(converged(errors[k], tol)) for k in errors if roles[k] == "probe"}
    probes_ok = all(v == "pass" for v in probe_verdicts.values())
    norms = [v for _, v in op_norms]
    sup_norm = max(norms)
    bounded = math.isfinite(sup_norm) and sup_norm <= 10.0 * max(1.0, norms[0])
    return ConvergenceReport(
        family=F.label,
        limit=A.label,
        norm=norm_kind.tag,
        schedule=sched,
        tol=tol,
        errors=errors,
        roles=roles,
        test_set_verdict=_verdict(test_ok),
        probe_verdicts=probe_verdicts,
        probes_verdict=_verdict(probes_ok),
        operator_norms=op_norms,
        sup_operator_norm=sup_norm,
        bounded_verdict=_verdict(bounded),
        overall_verdict=_verdict(test_ok and probes_ok and bounded),
        hypothesis=hypothesis,
    )


def run_korovkin_experiment(F: OperatorFamily, A: OperatorInstance, schedule, probes, norm_kind=None, alpha=None,
                            tol=None, simplified=False, hyp_tol=1e-10) -> ConvergenceReport:
    """Gate on the hypotheses, then tabulate test-set and probe errors over the schedule.

    Raises GateRefused carrying the HypothesisReport when A fails the gate.
    """
    dom = F.input_domain
    hyp = check_hypotheses(A, alpha, hyp_tol)
    if not hyp.passed:
        raise GateRefused(hyp)
    if dom.kind == "circle-angle":
        tests = trig_test_set(dom, plus_form=not simplified)
    else:
        tests = korovkin_test_set(dom, hyp.alpha, simplified)
    return tabulate(F, A, schedule, tests, probes, norm_kind, tol, hyp)


def weyl_test_set():
    """1, -cos, -sin and cos^2 + sin^2 (the circle image of 1, -pr_k, sum pr_k^2)."""
    return [
        RealFunction(lambda t, *r: np.ones_like(np.asarray(t, dtype=np.float64)), "1"),
        RealFunction(lambda t, *r: -np.cos(t), "-cos"),
        RealFunction(lambda t, *r: -np.sin(t), "-sin"),
        RealFunction(lambda t, *r: np.cos(t) ** 2 + np.sin(t) ** 2, "cos^2+sin^2"),
    ]


def weyl_experiment(probes, alpha_rot=GOLDEN_ANGLE, schedule=(4, 16, 64, 256, 1024, 4096), domain=None,
                    tol=None) -> ConvergenceReport:
    """Ergodic averages of an irrational rotation against the circle mean, in the sup norm.

    The trigonometric functional equation is evaluated and attached to the
    report but does not gate the run.
    """
    if not is_irrational_rotation(alpha_rot):
        raise PreconditionError(f"rotation angle {alpha_rot!r} is (numerically) a rational multiple of pi")
    if isinstance(probes, RealFunction):
        probes = [probes]
    F = rotation_family(alpha_rot, domain=domain)
    A = circle_mean_operator(F.input_domain)
    hyp = check_hypotheses(A)
    return tabulate(F, A, schedule, weyl_test_set(), probes, NormKind.sup(), tol, hyp)
