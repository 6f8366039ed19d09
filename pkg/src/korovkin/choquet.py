"""Choquet integrals against distorted Lebesgue measure mu = g o m.

The discrete integral over [a, b] splits the interval into R equal cells,
samples f at the cell midpoints and returns

    sum_i f_(i) * [g(i*h) - g((i-1)*h)],   h = (b - a)/R,

with f_(1) >= f_(2) >= ... the samples in decreasing order. For signed f
this equals (C)int(f + c) - c*g(b - a) for any constant c, which is the
translation convention used for signed integrands.
"""
from __future__ import annotations

import numpy as np

from . import expr as _expr
from .bernstein import _as_map, _domains
from .domain import GridDomain, RealFunction
from .errors import EvaluationError, InvariantError, PreconditionError
from .kernels import bernstein_matrix, choquet_rows
from .operators import OperatorFamily, OperatorInstance

DEFAULT_RESOLUTION = 256
_PROBE = np.linspace(0.0, 1.0, 1001)


class DistortionFunction:
    """Concave, strictly increasing g: [0, 1] -> [0, 1] with g(0)=0 and g(1)=1."""

    def __init__(self, fn, tag):
        self._fn = fn
        self.tag = tag
        self._validate()

    def __call__(self, t):
        with np.errstate(all="ignore"):
            return np.asarray(self._fn(np.asarray(t, dtype=np.float64)), dtype=np.float64)

    def _validate(self):
        try:
            v = self(_PROBE)
        except EvaluationError as exc:
            raise InvariantError(f"distortion {self.tag} cannot be evaluated on [0, 1]: {exc}") from exc
        if not np.all(np.isfinite(v)):
            raise InvariantError(f"distortion {self.tag} is not finite on [0, 1]")
        if abs(v[0]) > 1e-12 or abs(v[-1] - 1.0) > 1e-12:
            raise InvariantError(f"distortion {self.tag} must satisfy g(0)=0 and g(1)=1")
        if np.any(np.diff(v) <= 0.0):
            raise InvariantError(f"distortion {self.tag} is not strictly increasing")
        if np.any(v[1:-1] < 0.5 * (v[:-2] + v[2:]) - 1e-12):
            raise InvariantError(f"distortion {self.tag} is not concave")

    def __repr__(self):
        return f"DistortionFunction({self.tag!r})"

    @classmethod
    def identity(cls):
        return cls(lambda t: t, "identity")

    @classmethod
    def power(cls, p):
        p = float(p)
        if not 0.0 < p <= 1.0:
            raise InvariantError("power distortion needs 0 < p <= 1")
        return cls(lambda t: np.power(t, p), "sqrt" if p == 0.5 else f"power:{p:g}")

    @classmethod
    def from_expr(cls, src):
        tree = _expr.parse_function(src)
        return cls(lambda t: _expr.evaluate(tree, x=t), f"expr:{src}")


def parse_distortion(spec: str) -> DistortionFunction:
    """identity | sqrt | power:<p> | expr:<expression in x>."""
    spec = spec.strip()
    if spec == "identity":
        return DistortionFunction.identity()
    if spec == "sqrt":
        return DistortionFunction.power(0.5)
    if spec.startswith("power:"):
        return DistortionFunction.power(float(spec.split(":", 1)[1]))
    if spec.startswith("expr:"):
        return DistortionFunction.from_expr(spec.split(":", 1)[1])
    raise PreconditionError(f"unknown distortion spec {spec!r}")


def _increments(g, length, R):
    levels = g(length * np.arange(R + 1) / R)
    return np.diff(levels)


def cell_midpoints(a, b, R):
    return a + (b - a) * (np.arange(R) + 0.5) / R


def choquet_integral(f: RealFunction, a: float, b: float, g: DistortionFunction,
                     resolution: int = DEFAULT_RESOLUTION) -> float:
    """(C) integral of f over [a, b] with respect to g o Lebesgue."""
    if not b > a:
        raise PreconditionError("choquet_integral needs b > a")
    if b - a > 1.0 + 1e-12:
        raise PreconditionError("the distortion is defined on [0, 1]: need b - a <= 1")
    if resolution < 2:
        raise PreconditionError("resolution must be at least 2")
    vals = f(cell_midpoints(a, b, resolution))
    return float(choquet_rows(vals[None, :], _increments(g, b - a, resolution))[0])


def choquet_functional(a, b, g, resolution=DEFAULT_RESOLUTION, input_domain=None) -> OperatorInstance:
    """The Choquet integral over [a, b] as an operator into a one-point space."""
    inp = input_domain if input_domain is not None else GridDomain.interval(a, b, 201)
    out = GridDomain.from_points([0.0])
    nodes = cell_midpoints(a, b, resolution)[:, None]

    def apply(f):
        return np.array([choquet_integral(f, a, b, g, resolution)])

    return OperatorInstance(f"choquet[{g.tag}]({a:g},{b:g})", inp, out, apply, nodes)


def choquet_kantorovich(n, phi=None, g: DistortionFunction | None = None, resolution=DEFAULT_RESOLUTION,
                        input_domain=None, output_domain=None) -> OperatorInstance:
    """T_n(f)(x) = sum_k p_{n,k}(phi(x)) * (C)int_{window k} f dmu / mu(window k)."""
    if n < 1:
        raise PreconditionError("choquet_kantorovich needs n >= 1")
    if resolution < 2:
        raise PreconditionError("resolution must be at least 2")
    g = g if g is not None else DistortionFunction.power(0.5)
    phi = _as_map(phi)
    inp, out = _domains(input_domain, output_domain)
    width = 1.0 / (n + 1)
    normalizer = float(g(width))
    if not normalizer > 0.0:
        raise InvariantError("window capacity must be positive")
    inc = _increments(g, width, resolution) / normalizer
    cells = (np.arange(n + 1)[:, None] + (np.arange(resolution)[None, :] + 0.5) / resolution) * width
    basis = bernstein_matrix(n, phi.values(out))

    def apply(f):
        terms = choquet_rows(f(cells.ravel()).reshape(cells.shape), inc)
        return basis @ terms

    return OperatorInstance(
        f"choquet_kantorovich({n},{phi.label},{g.tag})", inp, out, apply, cells.reshape(-1, 1)
    )


def choquet_kantorovich_family(phi=None, g=None, resolution=DEFAULT_RESOLUTION, input_domain=None,
                               output_domain=None) -> OperatorFamily:
    phi = _as_map(phi)
    g = g if g is not None else DistortionFunction.power(0.5)
    inp, out = _domains(input_domain, output_domain)
    return OperatorFamily(
        f"choquet_kantorovich[{phi.label},{g.tag}]",
        lambda n: choquet_kantorovich(n, phi, g, resolution, inp, out),
        inp,
        out,
    )

