"""Experiment configuration: a flat YAML mapping of the keys below.

    domain: interval | box | circle
    bounds: [lo, hi]  (box: [[lo, hi], [lo, hi]])
    grid: points per axis
    family: sup_bernstein | kantorovich | max_kantorovich | choquet_kantorovich | weyl | cesaro:<family>
    phi: identity | poly:[c0, c1, ...] | expr:<expression in x>
    distortion: identity | sqrt | power:<p> | expr:<expression in x>
    limit: identity | composition | circle_mean | expr:<expression in x>
    theorem: korovkin | weyl
    schedule: [n1, n2, ...]            strictly increasing
    probes: [<expression>, ...]
    norm: sup | l1
    tol, hyp_tol, seed, alpha, alpha_rot (radians or "golden"),
    refinement, resolution, axiom_samples, epsilons, simplified
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from . import bernstein, choquet, trig
from .domain import GridDomain, NormKind, RealFunction
from .errors import KorovkinError
from .operators import cesaro_family, identity_operator

FAMILIES = ("sup_bernstein", "kantorovich", "max_kantorovich", "choquet_kantorovich", "weyl")
LIMITS = ("identity", "composition", "circle_mean")


class ConfigError(KorovkinError, ValueError):
    """Configuration file is unreadable or inconsistent."""


@dataclass
class ExperimentConfig:
    family: str
    schedule: list
    probes: list = field(default_factory=list)
    domain: str = "interval"
    bounds: list = field(default_factory=lambda: [0.0, 1.0])
    grid: int | list = 201
    phi: str = "identity"
    distortion: str = "sqrt"
    limit: str = "composition"
    theorem: str = "korovkin"
    norm: str = "sup"
    tol: float | None = None
    hyp_tol: float = 1e-10
    seed: int = 0
    alpha: float | None = None
    alpha_rot: float | str = "golden"
    refinement: int = 4
    resolution: int = 256
    axiom_samples: int = 10
    epsilons: list = field(default_factory=lambda: [0.1])
    simplified: bool = False

    @classmethod
    def from_mapping(cls, data):
        if not isinstance(data, dict):
            raise ConfigError("config must be a mapping of keys to values")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        for key in ("family", "schedule"):
            if key not in data:
                raise ConfigError(f"missing required key {key!r}")
        cfg = cls(**data)
        cfg.validate()
        return cfg

    @classmethod
    def load(cls, path):
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        try:
            data = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"config is not valid YAML: {exc}") from exc
        return cls.from_mapping(data)

    def validate(self):
        sched = self.schedule
        if not isinstance(sched, list) or not sched or not all(isinstance(n, int) and n >= 1 for n in sched):
            raise ConfigError("schedule must be a nonempty list of positive integers")
        if any(b <= a for a, b in zip(sched, sched[1:])):
            raise ConfigError("schedule must be strictly increasing")
        base = self.family.split(":", 1)[1] if self.family.startswith("cesaro:") else self.family
        if base not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}")
        if self.domain not in ("interval", "box", "circle"):
            raise ConfigError(f"unknown domain {self.domain!r}")
        if self.norm not in ("sup", "l1"):
            raise ConfigError(f"unknown norm {self.norm!r}")
        if self.theorem not in ("korovkin", "weyl"):
            raise ConfigError(f"unknown theorem {self.theorem!r}")
        if self.theorem == "weyl" and base != "weyl":
            raise ConfigError("theorem=weyl needs family=weyl")
        if not (self.limit in LIMITS or self.limit.startswith("expr:")):
            raise ConfigError(f"unknown limit {self.limit!r}")
        if not isinstance(self.probes, list) or not all(isinstance(p, str) for p in self.probes):
            raise ConfigError("probes must be a list of expressions")
        if not isinstance(self.seed, int):
            raise ConfigError("seed must be an integer")

    def to_dict(self):
        return asdict(self)

    def echo(self):
        return json.loads(json.dumps(self.to_dict()))


def parse_phi(spec: str) -> RealFunction:
    spec = spec.strip()
    if spec == "identity":
        return RealFunction.projection(0).relabel("x")
    if spec.startswith("poly:"):
        try:
            coeffs = json.loads(spec.split(":", 1)[1])
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad polynomial coefficients in {spec!r}") from exc
        return RealFunction.polynomial(coeffs, label=spec)
    if spec.startswith("expr:"):
        return RealFunction.from_expr(spec.split(":", 1)[1])
    raise ConfigError(f"unknown phi spec {spec!r}")


def parse_alpha_rot(value):
    if isinstance(value, str):
        if value.strip() == "golden":
            return trig.GOLDEN_ANGLE
        try:
            return float(value)
        except ValueError as exc:
            raise ConfigError(f"bad alpha_rot {value!r}") from exc
    return float(value)


def build_domain(cfg: ExperimentConfig) -> GridDomain:
    if cfg.domain == "circle":
        return GridDomain.circle(int(cfg.grid))
    if cfg.domain == "box":
        sizes = cfg.grid if isinstance(cfg.grid, list) else [int(cfg.grid)] * len(cfg.bounds)
        return GridDomain.box([tuple(b) for b in cfg.bounds], sizes)
    lo, hi = cfg.bounds
    return GridDomain.interval(float(lo), float(hi), int(cfg.grid))


def build_family(cfg: ExperimentConfig, domain: GridDomain, tag: str | None = None):
    tag = cfg.family if tag is None else tag
    if tag.startswith("cesaro:"):
        return cesaro_family(build_family(cfg, domain, tag.split(":", 1)[1]))
    if tag == "weyl":
        if domain.kind != "circle-angle":
            raise ConfigError("family weyl needs domain=circle")
        return trig.rotation_family(parse_alpha_rot(cfg.alpha_rot), domain=domain)
    if domain.kind != "interval":
        raise ConfigError(f"family {tag} needs an interval domain inside [0, 1]")
    phi = bernstein.CompositionMap(parse_phi(cfg.phi))
    if tag == "sup_bernstein":
        return bernstein.sup_bernstein_family(phi, cfg.refinement, domain, domain)
    if tag == "kantorovich":
        return bernstein.kantorovich_family(phi, domain, domain)
    if tag == "max_kantorovich":
        return bernstein.max_kantorovich_family(phi, domain, domain)
    g = choquet.parse_distortion(cfg.distortion)
    return choquet.choquet_kantorovich_family(phi, g, cfg.resolution, domain, domain)


def build_limit(cfg: ExperimentConfig, domain: GridDomain):
    if cfg.limit == "identity":
        return identity_operator(domain)
    if cfg.limit == "circle_mean":
        return trig.circle_mean_operator(domain)
    if domain.kind == "circle-angle":
        raise ConfigError(f"limit {cfg.limit!r} is defined on interval domains only")
    psi = parse_phi(cfg.phi) if cfg.limit == "composition" else RealFunction.from_expr(cfg.limit.split(":", 1)[1])
    return bernstein.composition_operator(bernstein.CompositionMap(psi), domain, domain)


def build_norm(cfg: ExperimentConfig, domain: GridDomain) -> NormKind:
    return NormKind.from_tag(cfg.norm, domain)


def build_probes(cfg: ExperimentConfig, domain: GridDomain):
    return [RealFunction.from_expr(src, domain.dimension) for src in cfg.probes]
