"""Bernstein basis and the Bernstein-type operator families on [0, 1].

All families use the windows [k/(n+1), (k+1)/(n+1)], k = 0..n, and weight
window statistics by p_{n,k}(phi(x)).
"""
from __future__ import annotations

import math

import numpy as np

from .domain import GridDomain, RealFunction
from .errors import DomainError, InvariantError, PreconditionError
from .kernels import bernstein_matrix
from .operators import OperatorFamily, OperatorInstance

DEFAULT_GRID = 201


def bernstein_basis(n: int, x):
    """p_{n,k}(x) for k = 0..n.

    Scalar ``x`` gives a vector of length n+1, an array gives one row per
    entry.
    """
    if n < 1:
        raise PreconditionError("Bernstein degree must be >= 1")
    xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if np.any(xa < 0.0) or np.any(xa > 1.0) or not np.all(np.isfinite(xa)):
        raise DomainError("Bernstein basis is evaluated on [0, 1]")
    out = bernstein_matrix(n, xa)
    return out[0] if np.ndim(x) == 0 else out


class CompositionMap:
    """A continuous phi: [0, 1] -> [0, 1], range-checked on a grid at construction."""

    def __init__(self, phi: RealFunction | None = None, check_grid: GridDomain | None = None):
        self.phi = phi if phi is not None else RealFunction.projection(0).relabel("x")
        grid = check_grid if check_grid is not None else GridDomain.interval(0.0, 1.0, 1001)
        vals = self.phi.on(grid)
        if np.any(vals < -1e-12) or np.any(vals > 1.0 + 1e-12):
            raise InvariantError(f"phi={self.phi.label} leaves [0, 1] on the check grid")

    @property
    def label(self):
        return self.phi.label

    @property
    def is_identity(self):
        return self.phi.label == "x"

    def values(self, domain: GridDomain):
        """phi on the points of ``domain``, clipped into [0, 1]."""
        vals = self.phi.on(domain)
        if np.any(vals < -1e-12) or np.any(vals > 1.0 + 1e-12):
            raise InvariantError(f"phi={self.phi.label} leaves [0, 1] on {domain!r}")
        return np.clip(vals, 0.0, 1.0)

    @classmethod
    def identity(cls):
        return cls()


def _as_map(phi):
    if phi is None:
        return CompositionMap()
    if isinstance(phi, CompositionMap):
        return phi
    return CompositionMap(phi)


def _unit_interval(domain):
    if domain is None:
        return GridDomain.interval(0.0, 1.0, DEFAULT_GRID)
    if domain.dimension != 1 or domain.bounds[0][0] < 0.0 or domain.bounds[0][1] > 1.0:
        raise DomainError("Bernstein-type operators act on grids of [0, 1]")
    return domain


def _domains(input_domain, output_domain):
    inp = _unit_interval(input_domain)
    out = inp if output_domain is None else _unit_interval(output_domain)
    return inp, out


def window_points(n: int, per_window: int) -> np.ndarray:
    """Equispaced samples of each window, endpoints included; shape (n+1, per_window)."""
    if per_window < 2:
        raise InvariantError("a window needs at least its two endpoints")
    k = np.arange(n + 1)[:, None]
    s = np.linspace(0.0, 1.0, per_window)[None, :]
    return (k + s) / (n + 1)


def window_samples(n: int, refinement: int, domain: GridDomain) -> int:
    """Samples per window: refinement * ceil(grid steps per window) + 1."""
    steps = max(domain.size - 1, 1)
    return refinement * math.ceil(steps / (n + 1)) + 1


def sup_bernstein(n, phi=None, refinement=4, input_domain=None, output_domain=None) -> OperatorInstance:
    """T_n(f)(x) = sum_k p_{n,k}(phi(x)) * sup of f over window k.

    The window sup is the max over equispaced samples including both
    endpoints, so it never exceeds the true sup.
    """
    if n < 1 or refinement < 1:
        raise PreconditionError("sup_bernstein needs n >= 1 and refinement >= 1")
    phi = _as_map(phi)
    inp, out = _domains(input_domain, output_domain)
    m = window_samples(n, refinement, inp)
    pts = window_points(n, m)
    nodes = pts.reshape(-1, 1)
    basis = bernstein_matrix(n, phi.values(out))

    def apply(f):
        sups = f(pts.ravel()).reshape(pts.shape).max(axis=1)
        return basis @ sups

    return OperatorInstance(f"sup_bernstein({n},{phi.label})", inp, out, apply, nodes)


def _quadrature(rule, nodes_per_window):
    """Nodes in [0, 1] and weights summing to 1 for one window."""
    if rule == "simpson":
        q = nodes_per_window if nodes_per_window % 2 == 1 else nodes_per_window + 1
        if q < 3:
            raise PreconditionError("Simpson needs at least 3 nodes")
        s = np.linspace(0.0, 1.0, q)
        w = np.ones(q)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return s, w / (3.0 * (q - 1))
    if rule == "trapezoid":
        s = np.linspace(0.0, 1.0, nodes_per_window)
        w = np.full(nodes_per_window, 1.0)
        w[[0, -1]] = 0.5
        return s, w / (nodes_per_window - 1)
    if rule == "gauss":
        t, w = np.polynomial.legendre.leggauss(nodes_per_window)
        return (t + 1.0) / 2.0, w / 2.0
    raise PreconditionError(f"unknown quadrature rule {rule!r}")


def kantorovich(n, phi=None, quadrature="simpson", nodes_per_window=9, input_domain=None,
                output_domain=None) -> OperatorInstance:
    """K_n(f)(x) = (n+1) * sum_k p_{n,k}(phi(x)) * integral of f over window k.

    Default quadrature is composite Simpson with 9 nodes per window, which is
    exact for cubics.
    """
    if n < 1:
        raise PreconditionError("kantorovich needs n >= 1")
    phi = _as_map(phi)
    inp, out = _domains(input_domain, output_domain)
    s, w = _quadrature(quadrature, nodes_per_window)
    pts = (np.arange(n + 1)[:, None] + s[None, :]) / (n + 1)
    basis = bernstein_matrix(n, phi.values(out))

    def apply(f):
        # (n+1) * window integral == window mean, and w already sums to 1
        means = f(pts.ravel()).reshape(pts.shape) @ w
        return basis @ means

    return OperatorInstance(f"kantorovich({n},{phi.label})", inp, out, apply, pts.reshape(-1, 1))


def max_kantorovich(n, phi=None, input_domain=None, output_domain=None, **quad) -> OperatorInstance:
    """Pointwise max of K_n and K_{n+1}."""
    phi = _as_map(phi)
    inp, out = _domains(input_domain, output_domain)
    a = kantorovich(n, phi, input_domain=inp, output_domain=out, **quad)
    b = kantorovich(n + 1, phi, input_domain=inp, output_domain=out, **quad)

    def apply(f):
        return np.maximum(a(f), b(f))

    nodes = np.concatenate([a.nodes, b.nodes], axis=0)
    return OperatorInstance(f"max_kantorovich({n},{phi.label})", inp, out, apply, nodes)


def composition_operator(phi=None, input_domain=None, output_domain=None) -> OperatorInstance:
    """A(f) = f o phi: linear, unital and multiplicative."""
    phi = _as_map(phi)
    inp, out = _domains(input_domain, output_domain)
    where = phi.values(out)

    def apply(f):
        return f(where)

    return OperatorInstance(f"composition({phi.label})", inp, out, apply, where[:, None])


def tensor_sup_bernstein_2d(n, phi=None, refinement=4, input_domain=None, output_domain=None) -> OperatorInstance:
    """T_n(f)(x, y) = sum_{k,j} p_{n,k}(phi(x)) p_{n,j}(phi(y)) * sup of f over window_k x window_j."""
    if n < 1 or refinement < 1:
        raise PreconditionError("tensor_sup_bernstein_2d needs n >= 1 and refinement >= 1")
    phi = _as_map(phi)
    inp = input_domain if input_domain is not None else GridDomain.box(((0.0, 1.0), (0.0, 1.0)), (41, 41))
    if inp.dimension != 2 or any(b != (0.0, 1.0) for b in inp.bounds):
        raise DomainError("the tensor operator needs a grid on [0, 1]^2")
    out = inp if output_domain is None else output_domain
    if out.dimension != 2:
        raise DomainError("the tensor operator outputs on a 2-D grid")
    steps = max(max(a.size for a in inp.axes) - 1, 1) if inp.axes else max(int(round(math.sqrt(inp.size))) - 1, 1)
    m = refinement * math.ceil(steps / (n + 1)) + 1
    w1 = window_points(n, m)
    t = w1.ravel()
    tt, ss = np.meshgrid(t, t, indexing="ij")
    nodes = np.stack([tt.ravel(), ss.ravel()], axis=1)
    px = bernstein_matrix(n, np.clip(phi.phi(out.points[:, 0]), 0.0, 1.0))
    py = bernstein_matrix(n, np.clip(phi.phi(out.points[:, 1]), 0.0, 1.0))

    def apply(f):
        vals = f(tt, ss).reshape(n + 1, m, n + 1, m)
        sups = vals.max(axis=(1, 3))
        return np.einsum("ik,kj,ij->i", px, sups, py)

    return OperatorInstance(f"tensor_sup_bernstein({n},{phi.label})", inp, out, apply, nodes)


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def _family(tag, builder, phi, input_domain, output_domain, **kw):
    phi = _as_map(phi)
    inp, out = _domains(input_domain, output_domain)
    return OperatorFamily(
        f"{tag}[{phi.label}]",
        lambda n: builder(n, phi, input_domain=inp, output_domain=out, **kw),
        inp,
        out,
    )


def sup_bernstein_family(phi=None, refinement=4, input_domain=None, output_domain=None):
    return _family("sup_bernstein", sup_bernstein, phi, input_domain, output_domain, refinement=refinement)


def kantorovich_family(phi=None, input_domain=None, output_domain=None, **quad):
    return _family("kantorovich", kantorovich, phi, input_domain, output_domain, **quad)


def max_kantorovich_family(phi=None, input_domain=None, output_domain=None, **quad):
    return _family("max_kantorovich", max_kantorovich, phi, input_domain, output_domain, **quad)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def kantorovich_moments(n, phi_values):
    """K_n(1), K_n(-x), K_n(x^2) in closed form, from the binomial moment identities."""
    p = np.asarray(phi_values, dtype=np.float64)
    m0 = np.ones_like(p)
    m1 = -n * p / (n + 1) - 1.0 / (2 * (n + 1))
    m2 = n * (n - 1) * p ** 2 / (n + 1) ** 2 + 2 * n * p / (n + 1) ** 2 + 1.0 / (3 * (n + 1) ** 2)
    return m0, m1, m2
