"""Operators on sampled functions and sampled checks of their order axioms.

The checkers quantify over a finite, seeded set of functions and a fixed set
of scalars. A pointwise comparison ``lhs <= rhs`` counts as satisfied when
``lhs - rhs <= tol * max(1, |lhs|, |rhs|)``; ``max_violation`` records the
largest absolute excess.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domain import GridDomain, RealFunction, korovkin_test_set, norm, trig_test_set
from .errors import InvariantError, PreconditionError

SUBLINEAR_SCALARS = (0.0, 0.5, 1.0, 2.0)
TRANSLATION_SHIFTS = (0.0, 0.5, 1.0, 3.0)
STRONG_EXTRA_SHIFTS = (-0.5, -2.0)
DEFAULT_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class OperatorInstance:
    """An operator T: C(K) -> C(X) realized on grids.

    ``apply`` maps a RealFunction to its values on ``output_domain``.
    ``nodes`` lists the input points at which ``apply`` samples its argument
    (shape (P, N)), or is a zero-argument callable producing them; None means
    the input grid itself.
    """

    label: str
    input_domain: GridDomain
    output_domain: GridDomain
    apply: Callable[[RealFunction], np.ndarray]
    nodes: np.ndarray | Callable[[], np.ndarray] | None = None
    homogeneous: bool = True

    def __call__(self, f: RealFunction) -> np.ndarray:
        out = np.asarray(self.apply(f), dtype=np.float64)
        if out.shape != (self.output_domain.size,):
            raise InvariantError(
                f"{self.label}: expected {self.output_domain.size} output values, got shape {out.shape}"
            )
        return out

    def sample_points(self) -> np.ndarray:
        if self.nodes is None:
            return self.input_domain.points
        return self.nodes() if callable(self.nodes) else self.nodes


class OperatorFamily:
    """n -> T_n with shared domains; members are built lazily and cached."""

    def __init__(self, label, build, input_domain, output_domain, max_n=None):
        self.label = label
        self._build = build
        self.input_domain = input_domain
        self.output_domain = output_domain
        self.max_n = max_n
        self._cache = {}

    def member(self, n: int) -> OperatorInstance:
        n = int(n)
        if n < 1 or (self.max_n is not None and n > self.max_n):
            raise IndexError(f"{self.label}: member {n} is not defined")
        if n not in self._cache:
            op = self._build(n)
            if op.input_domain is not self.input_domain or op.output_domain is not self.output_domain:
                raise InvariantError(f"{self.label}: member {n} does not share the family domains")
            self._cache[n] = op
        return self._cache[n]

    def __repr__(self):
        return f"OperatorFamily({self.label!r})"


@dataclass
class AxiomReport:
    axiom: str
    trials: int
    max_violation: float
    verdict: str
    witness: dict | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self):
        return {
            "axiom": self.axiom,
            "trials": self.trials,
            "max_violation": self.max_violation,
            "verdict": self.verdict,
            "witness": self.witness,
        }


@dataclass
class _Tracker:
    axiom: str
    tol: float
    trials: int = 0
    max_violation: float = 0.0
    witness: dict | None = field(default=None)

    def le(self, lhs, rhs, **context):
        """Record the pointwise comparison lhs <= rhs."""
        self.trials += 1
        lhs = np.asarray(lhs, dtype=np.float64)
        rhs = np.asarray(rhs, dtype=np.float64)
        excess = lhs - rhs
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        bad = excess > self.tol * scale
        worst = float(np.max(excess)) if excess.size else 0.0
        if worst > self.max_violation:
            self.max_violation = worst
        if self.witness is None and np.any(bad):
            i = int(np.argmax(np.where(bad, excess, -np.inf)))
            self.witness = {**context, "index": i, "lhs": float(lhs.flat[i]), "rhs": float(rhs.flat[i])}

    def eq(self, a, b, **context):
        self.le(a, b, **context)
        self.le(b, a, **context)
        self.trials -= 1

    def report(self) -> AxiomReport:
        return AxiomReport(
            self.axiom, self.trials, self.max_violation, "fail" if self.witness is not None else "pass", self.witness
        )


def _functions(samples):
    seen = []
    for item in samples:
        for f in item if isinstance(item, (tuple, list)) else (item,):
            if all(f is not g for g in seen):
                seen.append(f)
    return seen


def check_sublinear(T: OperatorInstance, samples, tol=DEFAULT_TOL) -> AxiomReport:
    """Subadditivity T(f+g) <= T(f)+T(g) and T(lam*f) = lam*T(f) for lam in {0, 1/2, 1, 2}."""
    if not samples:
        raise PreconditionError("check_sublinear needs at least one sample pair")
    if tol < 0:
        raise PreconditionError("tol must be nonnegative")
    tr = _Tracker("SL", tol)
    for f, g in samples:
        tf, tg = T(f), T(g)
        tr.le(T(f + g), tf + tg, kind="subadditive", f=f.label, g=g.label)
    for f in _functions(samples):
        tf = T(f)
        for lam in SUBLINEAR_SCALARS:
            tr.eq(T(lam * f), lam * tf, kind="homogeneous", f=f.label, scalar=lam)
    return tr.report()


def check_translatable(T: OperatorInstance, samples, tol=DEFAULT_TOL, strong=False) -> AxiomReport:
    """T(f + a*1) = T(f) + a*T(1) for a in {0, .5, 1, 3}, plus {-.5, -2} when ``strong``."""
    if not samples:
        raise PreconditionError("check_translatable needs samples")
    shifts = TRANSLATION_SHIFTS + (STRONG_EXTRA_SHIFTS if strong else ())
    dim = T.input_domain.dimension
    t1 = T(RealFunction.constant(1.0, dim))
    tr = _Tracker("TRstar" if strong else "TR", tol)
    for f in _functions(samples):
        tf = T(f)
        for a in shifts:
            tr.eq(T(f + a), tf + a * t1, f=f.label, shift=a)
    return tr.report()


def _check_ordered(T, pairs):
    pts = T.sample_points()
    grid = T.input_domain.points
    for f, g in pairs:
        for where in (grid, pts):
            if np.any(f.at(where) > g.at(where)):
                raise PreconditionError(f"sample pair ({f.label}, {g.label}) is not ordered f <= g")


def check_monotone(T: OperatorInstance, samples, tol=DEFAULT_TOL) -> AxiomReport:
    """f <= g implies T(f) <= T(g); every pair is verified to be ordered first."""
    if not samples:
        raise PreconditionError("check_monotone needs samples")
    _check_ordered(T, samples)
    tr = _Tracker("M", tol)
    for f, g in samples:
        tr.le(T(f), T(g), f=f.label, g=g.label)
    return tr.report()


def comonotone_pairs(domain: GridDomain):
    """Pairs (h, phi o h) with h nondecreasing along every axis and phi increasing."""
    lo = np.array([b[0] for b in domain.bounds])
    hi = np.array([b[1] for b in domain.bounds])
    span = np.where(hi > lo, hi - lo, 1.0)
    dim = domain.dimension

    def unit(*xs):
        # each axis rescaled to [0, 1], then summed: nondecreasing in every coordinate
        return sum((np.asarray(xs[k], dtype=np.float64) - lo[k]) / span[k] for k in range(dim)) / dim

    h0 = RealFunction(unit, "s", dim)
    hs = [
        h0,
        h0 ** 3,
        RealFunction(lambda *xs: np.sqrt(np.maximum(unit(*xs), 0.0)), "sqrt(s)", dim),
        RealFunction(lambda *xs: np.clip(3.0 * unit(*xs) - 1.0, 0.0, 1.0), "ramp(s)", dim),
    ]
    phis = [
        (lambda v: v, "id"),
        (lambda v: v * v, "sq"),
        (np.exp, "exp"),
        (lambda v: 2.0 * v ** 3 - 1.0, "2t^3-1"),
    ]
    pairs = []
    for h in hs:
        for phi, name in phis:
            g = RealFunction(lambda *xs, h=h, phi=phi: phi(h(*xs)), f"{name}({h.label})", dim)
            pairs.append((h, g))
    return pairs


def is_comonotone(fv, gv) -> bool:
    """(f(s)-f(t))*(g(s)-g(t)) >= 0 for all sample pairs, in O(P log P)."""
    fv = np.asarray(fv, dtype=np.float64)
    gv = np.asarray(gv, dtype=np.float64)
    order = np.lexsort((gv, fv))
    f, g = fv[order], gv[order]
    starts = np.flatnonzero(np.concatenate([[True], f[1:] != f[:-1]]))
    lows = np.minimum.reduceat(g, starts)
    highs = np.maximum.reduceat(g, starts)
    # every level of f must sit at or above all g values of strictly smaller f levels
    return bool(np.all(lows[1:] >= np.maximum.accumulate(highs)[:-1]))


def check_comonotone_additive(T: OperatorInstance, tol=DEFAULT_TOL, pairs=None) -> AxiomReport:
    """T(f+g) = T(f)+T(g) for comonotone pairs (generated unless given)."""
    pairs = comonotone_pairs(T.input_domain) if pairs is None else pairs
    pts = T.sample_points()
    tr = _Tracker("CA", tol)
    for f, g in pairs:
        for where in (T.input_domain.points, pts):
            if not is_comonotone(f.at(where), g.at(where)):
                raise InvariantError(f"generated pair ({f.label}, {g.label}) is not comonotone")
        tr.eq(T(f + g), T(f) + T(g), f=f.label, g=g.label)
    return tr.report()


def operator_norm(T: OperatorInstance) -> float:
    """||T|| = ||T(1)||_sup, valid for monotone sublinear T."""
    return norm(T(RealFunction.constant(1.0, T.input_domain.dimension)))


def check_krein(T: OperatorInstance, samples, tol=DEFAULT_TOL) -> AxiomReport:
    """|T(f)-T(g)| <= T(|f-g|) pointwise and ||T(f)-T(g)|| <= ||T||*||f-g||."""
    if not samples:
        raise PreconditionError("check_krein needs samples")
    op_norm = operator_norm(T)
    where = np.concatenate([T.input_domain.points, T.sample_points()], axis=0)
    tr = _Tracker("Krein", tol)
    for f, g in samples:
        diff = T(f) - T(g)
        tr.le(np.abs(diff), T(abs(f - g)), kind="pointwise", f=f.label, g=g.label)
        tr.le(norm(diff), op_norm * norm((f - g).at(where)), kind="lipschitz", f=f.label, g=g.label)
        tr.trials -= 1
    return tr.report()


def cesaro_family(F: OperatorFamily) -> OperatorFamily:
    """member(n) = (1/n) * sum_{k=1..n} F.member(k)."""

    def build(n):
        members = [F.member(k) for k in range(1, n + 1)]

        def apply(f):
            acc = np.zeros(F.output_domain.size)
            for m in members:
                acc += m(f)
            return acc / n

        def nodes():
            return np.unique(np.concatenate([m.sample_points() for m in members], axis=0), axis=0)

        return OperatorInstance(f"cesaro[{F.label}]({n})", F.input_domain, F.output_domain, apply, nodes)

    return OperatorFamily(f"cesaro:{F.label}", build, F.input_domain, F.output_domain, F.max_n)


# ---------------------------------------------------------------------------
# simple operators used as limits, anchors and counterexamples
# ---------------------------------------------------------------------------

def identity_operator(domain: GridDomain) -> OperatorInstance:
    return OperatorInstance("identity", domain, domain, lambda f: f.on(domain), domain.points)


def pointwise_operator(domain: GridDomain, fn, label) -> OperatorInstance:
    """T(f)(x) = fn(f(x)) on the grid of ``domain``."""
    return OperatorInstance(label, domain, domain, lambda f: fn(f.on(domain)), domain.points, homogeneous=False)


# ---------------------------------------------------------------------------
# seeded sample generation
# ---------------------------------------------------------------------------

def random_functions(domain: GridDomain, rng, count, degree=4, coef=2.0):
    """Random polynomials (trig polynomials on circles) with coefficients in [-coef, coef]."""
    out = []
    for i in range(count):
        if domain.kind == "circle-angle":
            a = rng.uniform(-coef, coef, size=degree + 1)
            b = rng.uniform(-coef, coef, size=degree + 1)

            def fn(t, *r, a=a, b=b):
                t = np.asarray(t, dtype=np.float64)
                k = np.arange(a.size)
                return np.cos(np.multiply.outer(t, k)) @ a + np.sin(np.multiply.outer(t, k)) @ b

            out.append(RealFunction(fn, f"trig#{i}", 1))
        elif domain.dimension == 1:
            c = rng.uniform(-coef, coef, size=rng.integers(1, degree + 2))
            out.append(RealFunction.polynomial(c, label=f"poly#{i}"))
        elif domain.dimension == 2:
            c = rng.uniform(-coef, coef, size=(degree + 1, degree + 1))
            c[np.add.outer(np.arange(degree + 1), np.arange(degree + 1)) > degree] = 0.0
            out.append(RealFunction.polynomial2d(c, label=f"poly2d#{i}"))
        else:
            raise PreconditionError("random samples are generated for N <= 2 only")
    return out


def sample_pairs(domain: GridDomain, count, seed=0, include_tests=True):
    """``count`` seeded pairs (f, g): test-function pairs first, then random polynomials."""
    rng = np.random.default_rng(seed)
    pairs = []
    if include_tests:
        tests = trig_test_set(domain) if domain.kind == "circle-angle" else korovkin_test_set(domain)
        pairs = [(tests[i], tests[(i + 1) % len(tests)]) for i in range(len(tests))]
    need = max(0, count - len(pairs))
    fs = random_functions(domain, rng, 2 * need)
    pairs += list(zip(fs[0::2], fs[1::2]))
    return pairs[:count]


def ordered_pairs(domain: GridDomain, count, seed=0):
    """Seeded pairs f <= g: g = f + h^2 + c with h a random polynomial and c >= 0."""
    rng = np.random.default_rng(seed)
    fs = random_functions(domain, rng, 2 * count)
    pairs = []
    for i in range(count):
        f, h = fs[2 * i], fs[2 * i + 1]
        c = float(rng.uniform(0.0, 0.5))
        g = (f + h * h + c).relabel(f"{f.label}+{h.label}^2+{c:.3f}")
        pairs.append((f, g))
    return pairs
