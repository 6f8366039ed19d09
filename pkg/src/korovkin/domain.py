"""Grid domains, evaluable functions, norms and Korovkin test functions."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import expr as _expr
from .errors import DomainError, EvaluationError, InvariantError, PreconditionError
from .kernels import pairwise_delta

TWO_PI = 2.0 * math.pi
KINDS = ("interval", "box", "circle-angle", "product", "points")


def _frozen(a):
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridDomain:
    """A finite sampling of a compact set K in R^N.

    ``points`` has shape (P, N). ``axes`` holds the per-axis coordinates of
    tensor grids (intervals, boxes, circles) and is empty otherwise.
    """

    points: np.ndarray
    kind: str
    bounds: tuple
    axes: tuple = field(default=())

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise DomainError("a grid domain needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise InvariantError("grid coordinates must be finite")
        if self.kind not in KINDS:
            raise InvariantError(f"unknown domain kind {self.kind!r}")
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        if len(bounds) != pts.shape[1]:
            raise InvariantError("one [lo, hi] pair per axis is required")
        lo = np.array([b[0] for b in bounds])
        hi = np.array([b[1] for b in bounds])
        if np.any(pts < lo - 1e-12) or np.any(pts > hi + 1e-12):
            raise InvariantError("grid points must lie within the bounds")
        if self.kind == "circle-angle":
            if pts.shape[1] != 1 or np.any(pts < 0.0) or np.any(pts >= TWO_PI):
                raise InvariantError("circle grids hold angles in [0, 2*pi)")
        object.__setattr__(self, "points", _frozen(pts))
        object.__setattr__(self, "bounds", bounds)
        object.__setattr__(self, "axes", tuple(_frozen(a) for a in self.axes))

    # constructors -----------------------------------------------------------
    @classmethod
    def interval(cls, lo=0.0, hi=1.0, size=201):
        if size < 1:
            raise DomainError("grid size must be positive")
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvariantError("interval endpoints must be finite")
        if hi < lo:
            raise DomainError("interval needs lo <= hi")
        axis = np.linspace(lo, hi, size) if size > 1 else np.array([lo])
        return cls(axis[:, None], "interval", ((lo, hi),), (axis,))

    @classmethod
    def box(cls, bounds, sizes):
        if len(bounds) != len(sizes):
            raise DomainError("one grid size per axis is required")
        axes = [np.linspace(lo, hi, s) for (lo, hi), s in zip(bounds, sizes)]
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=1)
        return cls(pts, "box", tuple(bounds), tuple(axes))

    @classmethod
    def circle(cls, size=2048):
        if size < 1:
            raise DomainError("grid size must be positive")
        axis = TWO_PI * np.arange(size) / size
        return cls(axis[:, None], "circle-angle", ((0.0, TWO_PI),), (axis,))

    @classmethod
    def from_points(cls, points, bounds=None):
        pts = np.atleast_1d(np.asarray(points, dtype=np.float64))
        if pts.ndim == 1:
            pts = pts[:, None]
        if bounds is None:
            bounds = tuple(zip(pts.min(axis=0), pts.max(axis=0)))
        return cls(pts, "points", bounds)

    # accessors --------------------------------------------------------------
    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def coords(self):
        """Per-axis coordinate arrays, ready to splat into a RealFunction."""
        return tuple(self.points[:, k] for k in range(self.dimension))

    def shifted(self, alpha):
        """The translate K + alpha*u, u = (1, ..., 1)."""
        if self.kind == "circle-angle":
            raise DomainError("circle domains cannot be translated")
        bounds = tuple((lo + alpha, hi + alpha) for lo, hi in self.bounds)
        axes = tuple(a + alpha for a in self.axes)
        return GridDomain(self.points + alpha, self.kind, bounds, axes)

    def spacing(self):
        """Smallest per-axis grid step (inf for a single point)."""
        steps = [np.min(np.diff(a)) for a in self.axes if a.size > 1]
        return float(min(steps)) if steps else math.inf

    def __repr__(self):
        return f"GridDomain(kind={self.kind!r}, N={self.dimension}, size={self.size}, bounds={self.bounds})"


class RealFunction:
    """A vectorized real function of the coordinates.

    Call it with one coordinate array per axis: ``f(x)`` on intervals and
    circles, ``f(x, y)`` on boxes. Results are always finite.
    """

    def __init__(self, fn: Callable, label: str, dim: int = 1):
        self._fn = fn
        self.label = label
        self.dim = dim

    def __call__(self, *coords):
        if len(coords) < self.dim:
            raise EvaluationError(f"{self.label} needs {self.dim} coordinate(s), got {len(coords)}")
        with np.errstate(all="ignore"):
            out = np.asarray(self._fn(*coords), dtype=np.float64)
        shape = np.broadcast(*[np.asarray(c) for c in coords]).shape
        if out.shape != shape:
            out = np.broadcast_to(out, shape).copy()
        if not np.all(np.isfinite(out)):
            raise EvaluationError(f"{self.label} produced a non-finite value")
        return out

    def on(self, domain: GridDomain):
        """Samples on the points of ``domain``."""
        return self(*domain.coords)

    def at(self, points):
        """Samples at an array of points of shape (P, N) or (P,)."""
        pts = np.asarray(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        return self(*(pts[:, k] for k in range(pts.shape[1])))

    def __repr__(self):
        return f"RealFunction({self.label!r})"

    # constructors -----------------------------------------------------------
    @classmethod
    def constant(cls, c, dim=1):
        c = float(c)
        label = repr(c) if c != int(c) else str(int(c))
        return cls(lambda *xs: np.full(np.shape(xs[0]), c), label, dim)

    @classmethod
    def projection(cls, k, dim=None):
        dim = max(dim or 1, k + 1)
        return cls(lambda *xs: np.asarray(xs[k], dtype=np.float64), _axis_name(k, dim), dim)

    @classmethod
    def polynomial(cls, coeffs, label=None):
        """One-variable polynomial sum_i coeffs[i] * x^i."""
        c = np.asarray(coeffs, dtype=np.float64)
        lab = label or "poly" + np.array2string(c, precision=4, separator=",")
        return cls(lambda x, *rest: np.polynomial.polynomial.polyval(np.asarray(x, dtype=np.float64), c), lab, 1)

    @classmethod
    def polynomial2d(cls, coeffs, label=None):
        """sum_{i,j} coeffs[i, j] * x^i * y^j."""
        c = np.asarray(coeffs, dtype=np.float64)
        lab = label or "poly2d"
        return cls(lambda x, y, *rest: np.polynomial.polynomial.polyval2d(x, y, c), lab, 2)

    @classmethod
    def builtin(cls, name, dim=1):
        try:
            op = _expr.FUNCTIONS[name]
        except KeyError:
            raise DomainError(f"unknown builtin {name!r}") from None
        return cls(lambda x, *rest: op(x), name, dim)

    @classmethod
    def from_expr(cls, src, dim=None):
        tree = _expr.parse_function(src)
        used = _expr.variables(tree)
        need = 2 if "y" in used else 1
        dim = max(dim or 1, need)

        def fn(*xs):
            return _expr.evaluate(tree, x=xs[0], y=xs[1] if len(xs) > 1 else None)

        f = cls(fn, src.strip(), dim)
        f.tree = tree
        return f

    @classmethod
    def from_samples(cls, domain: GridDomain, values, label="samples"):
        """Piecewise-linear interpolant of grid samples (tensor grids only)."""
        vals = np.asarray(values, dtype=np.float64)
        if vals.shape != (domain.size,):
            raise InvariantError("grid samples need exactly one value per grid point")
        if not np.all(np.isfinite(vals)):
            raise InvariantError("grid samples must be finite")
        if domain.dimension == 1:
            axis = domain.points[:, 0]
            order = np.argsort(axis)
            xs, ys = axis[order], vals[order]
            if domain.kind == "circle-angle":
                xs = np.concatenate([xs, [xs[0] + TWO_PI]])
                ys = np.concatenate([ys, [ys[0]]])
                return cls(lambda x, *r: np.interp(np.mod(x, TWO_PI), xs, ys), label, 1)
            return cls(lambda x, *r: np.interp(x, xs, ys), label, 1)
        if not domain.axes:
            raise DomainError("multivariate sample interpolation needs a tensor grid")
        from scipy.interpolate import RegularGridInterpolator

        grid = vals.reshape(tuple(a.size for a in domain.axes))
        interp = RegularGridInterpolator(domain.axes, grid, method="linear", bounds_error=False, fill_value=None)
        return cls(lambda *xs: interp(np.stack(np.broadcast_arrays(*xs), axis=-1)), label, domain.dimension)

    # algebra ----------------------------------------------------------------
    def _combine(self, other, op, sym):
        if isinstance(other, RealFunction):
            dim = max(self.dim, other.dim)
            return RealFunction(lambda *xs: op(self(*xs), other(*xs)), f"({self.label}){sym}({other.label})", dim)
        c = float(other)
        return RealFunction(lambda *xs: op(self(*xs), c), f"({self.label}){sym}{c!r}", self.dim)

    def __add__(self, other):
        return self._combine(other, np.add, "+")

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self._combine(other, np.subtract, "-")

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._combine(other, np.multiply, "*")

    def __rmul__(self, other):
        return self * other

    def __neg__(self):
        return RealFunction(lambda *xs: -self(*xs), f"-({self.label})", self.dim)

    def __pow__(self, p):
        return RealFunction(lambda *xs: self(*xs) ** p, f"({self.label})^{p}", self.dim)

    def __abs__(self):
        return RealFunction(lambda *xs: np.abs(self(*xs)), f"abs({self.label})", self.dim)

    def compose(self, phi: "RealFunction"):
        """x -> self(phi(x)) for one-variable ``self``."""
        return RealFunction(lambda *xs: self(phi(*xs)), f"{self.label}∘{phi.label}", phi.dim)

    def relabel(self, label):
        return RealFunction(self._fn, label, self.dim)


def _axis_name(k, dim):
    if dim <= 3:
        return "xyz"[k]
    return f"x{k + 1}"


@dataclass(frozen=True)
class NormKind:
    """Sup norm, or a weighted l1 norm on a fixed grid."""

    tag: str
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.tag not in ("sup", "l1"):
            raise InvariantError(f"unknown norm {self.tag!r}")
        if self.tag == "l1":
            if self.weights is None:
                raise InvariantError("l1 norm needs grid weights")
            w = _frozen(self.weights)
            if np.any(w < 0):
                raise InvariantError("l1 weights must be nonnegative")
            object.__setattr__(self, "weights", w)

    @classmethod
    def sup(cls):
        return cls("sup")

    @classmethod
    def l1(cls, domain: GridDomain):
        """Trapezoid weights summing to the measure of the domain."""
        if domain.kind == "circle-angle":
            return cls("l1", np.full(domain.size, TWO_PI / domain.size))
        if not domain.axes:
            raise DomainError("l1 weights need a tensor grid")
        w = np.ones(1)
        for axis in domain.axes:
            if axis.size == 1:
                wa = np.ones(1)
            else:
                h = np.diff(axis)
                wa = np.zeros(axis.size)
                wa[:-1] += h / 2
                wa[1:] += h / 2
            w = np.multiply.outer(w, wa).ravel()
        return cls("l1", w)

    @classmethod
    def from_tag(cls, tag, domain):
        return cls.sup() if tag == "sup" else cls.l1(domain)


def norm(values, kind: NormKind | None = None) -> float:
    v = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(v)):
        raise InvariantError("norm of non-finite samples")
    if kind is None or kind.tag == "sup":
        return float(np.max(np.abs(v))) if v.size else 0.0
    if kind.weights.shape != v.shape:
        raise InvariantError("l1 weights and samples disagree in length")
    return float(np.dot(kind.weights, np.abs(v)))


def deficit_of_positivity(domain: GridDomain) -> float:
    """Smallest alpha >= 0 with K + alpha*u inside the positive orthant."""
    if domain is None or domain.size == 0:
        raise DomainError("empty domain")
    return max(0.0, -float(np.min(domain.points)))


def _check_alpha(domain, alpha):
    deficit = deficit_of_positivity(domain)
    if alpha is None:
        return deficit
    if alpha < deficit - 1e-15:
        raise PreconditionError(f"alpha={alpha} is below the deficit of positivity {deficit}")
    return float(alpha)


def _fmt(a):
    return f"{a:g}"


def korovkin_test_set(domain: GridDomain, alpha=None, simplified=False) -> list[RealFunction]:
    """1, -(pr_k + alpha) for each axis, and sum_k (pr_k + alpha)^2.

    With ``simplified`` (operators that are strongly translatable) the
    shifted projections are replaced by 1, -pr_k and sum_k (pr_k^2 + 2*alpha*pr_k).
    """
    alpha = _check_alpha(domain, alpha)
    dim = domain.dimension
    names = [_axis_name(k, dim) for k in range(dim)]
    one = RealFunction.constant(1.0, dim)
    out = [one]
    if simplified:
        for k, name in enumerate(names):
            out.append(RealFunction(lambda *xs, k=k: -np.asarray(xs[k], dtype=np.float64), f"-{name}", dim))
        label = "+".join(f"{n}^2" + (f"+{_fmt(2 * alpha)}*{n}" if alpha else "") for n in names)

        def quad(*xs):
            return sum(np.asarray(xs[k]) ** 2 + 2 * alpha * np.asarray(xs[k]) for k in range(dim))

        out.append(RealFunction(quad, label, dim))
        return out
    for k, name in enumerate(names):
        lab = f"-{name}" if not alpha else f"-({name}+{_fmt(alpha)})"
        out.append(RealFunction(lambda *xs, k=k: -(np.asarray(xs[k], dtype=np.float64) + alpha), lab, dim))
    label = "+".join(f"{n}^2" if not alpha else f"({n}+{_fmt(alpha)})^2" for n in names)

    def sq(*xs):
        return sum((np.asarray(xs[k], dtype=np.float64) + alpha) ** 2 for k in range(dim))

    out.append(RealFunction(sq, label, dim))
    return out


def trig_test_set(domain: GridDomain | None = None, plus_form=True) -> list[RealFunction]:
    """Test functions for 2*pi-periodic operators, as functions of the angle."""
    if domain is not None and domain.kind != "circle-angle":
        raise DomainError("trigonometric test functions live on circle domains")
    if plus_form:
        specs = [
            (lambda t: np.ones_like(t), "1"),
            (lambda t: -1.0 - np.cos(t), "-1-cos"),
            (lambda t: -1.0 - np.sin(t), "-1-sin"),
            (lambda t: 3.0 + 2.0 * np.cos(t) + 2.0 * np.sin(t), "3+2cos+2sin"),
        ]
    else:
        specs = [
            (lambda t: np.ones_like(t), "1"),
            (lambda t: -np.cos(t), "-cos"),
            (lambda t: -np.sin(t), "-sin"),
            (lambda t: 2.0 * np.cos(t) + 2.0 * np.sin(t), "2cos+2sin"),
        ]
    return [RealFunction(lambda t, *r, fn=fn: fn(np.asarray(t, dtype=np.float64)), lab, 1) for fn, lab in specs]


def korovkin_delta(f: RealFunction, domain: GridDomain, epsilon: float, points=None) -> float:
    """Smallest delta with |f(x) - f(y)| <= epsilon + delta*|x - y|^2 over all grid pairs.

    ``points`` (shape (P, N)) replaces the grid of ``domain`` as the sample set.
    Returns ``inf`` when two coincident samples differ by more than epsilon.
    """
    if not epsilon > 0:
        raise PreconditionError("epsilon must be positive")
    pts = domain.points if points is None else np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.shape[0] < 2:
        raise PreconditionError("korovkin_delta needs at least two sample points")
    vals = f.at(pts)
    return pairwise_delta(pts, vals, pts, vals, epsilon)


def max_eq1_violation(f: RealFunction, points, epsilon, delta) -> float:
    """Largest |f(x) - f(y)| - epsilon - delta*|x - y|^2 over all pairs (re-scan)."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[:, None]
    vals = f.at(pts)
    worst = -math.inf
    for start in range(0, pts.shape[0], 512):
        a = pts[start:start + 512]
        d2 = ((a[:, None, :] - pts[None, :, :]) ** 2).sum(axis=2)
        gap = np.abs(vals[start:start + 512, None] - vals[None, :]) - epsilon - delta * d2
        worst = max(worst, float(gap.max()))
    return worst


def sample_grid_union(*arrays: Sequence) -> np.ndarray:
    """Union of point sets of equal dimension, duplicates removed."""
    parts = []
    for a in arrays:
        if a is None:
            continue
        a = np.asarray(a, dtype=np.float64)
        parts.append(a[:, None] if a.ndim == 1 else a)
    return np.unique(np.concatenate(parts, axis=0), axis=0)
