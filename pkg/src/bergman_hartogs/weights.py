"""Radial weights on the disk / punctured disk and the p-Hartogs domain descriptor.

A weight ``phi`` enters in two ways: the base Bergman space is weighted by
``exp(-2 phi)``, and the fibre over ``z`` is the ``l^p`` ball of radius
``exp(-phi(z))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Integral, Rational

import numpy as np

from .errors import DomainError

__all__ = [
    "BaseDomain",
    "WeightSpec",
    "Constant",
    "NegLogAbs",
    "NegLogOneMinusSq",
    "HartogsSpec",
    "eval_phi",
    "fiber_radius",
    "scale_weight",
    "parse_rational",
    "INF",
]

INF = math.inf


def parse_rational(value) -> Fraction:
    """Exact rational from an int, a Fraction, or an ``"a/b"`` string.

    Floats are rejected: callers that need exact floor/frac arithmetic must
    never see a rounded value.
    """
    if isinstance(value, bool):
        raise DomainError(f"not a rational: {value!r}")
    if isinstance(value, (Integral, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            n = int(num)
            d = int(den) if sep else 1
        except ValueError:
            raise DomainError(f"cannot parse rational {value!r}") from None
        if d == 0:
            raise DomainError(f"zero denominator in {value!r}")
        return Fraction(n, d)
    raise DomainError(f"expected an exact rational, got {type(value).__name__} {value!r}")


class BaseDomain(Enum):
    UNIT_DISK = "disk"
    PUNCTURED_UNIT_DISK = "punctured-disk"

    def contains(self, z) -> np.ndarray | bool:
        a = np.abs(z)
        inside = a < 1
        if self is BaseDomain.PUNCTURED_UNIT_DISK:
            inside = inside & (a > 0)
        return inside


class WeightSpec:
    """Common interface of the three weight families.

    Subclasses are frozen dataclasses with a single parameter ``param``.
    """

    family: str = ""

    def phi(self, z):
        raise NotImplementedError

    def density(self, r):
        """``exp(-2 phi(r))`` on radii, vectorised."""
        raise NotImplementedError

    def mp_density(self, u):
        """``exp(-2 phi)`` as a function of ``u = r**2``, in mpmath arithmetic."""
        raise NotImplementedError

    def scaled(self, m: int) -> "WeightSpec":
        raise NotImplementedError

    def sup_fiber_radius(self) -> float:
        """Supremum of ``exp(-phi)`` over the base (bounding-box radius)."""
        raise NotImplementedError

    def to_json(self) -> dict:
        p = self.param
        return {"family": self.family, "param": str(p) if isinstance(p, Fraction) else p}


@dataclass(frozen=True)
class Constant(WeightSpec):
    """``phi = c``: the fibres are balls of constant radius ``exp(-c)``."""

    param: float
    family = "const"

    def __post_init__(self):
        if not math.isfinite(self.param):
            raise DomainError(f"constant weight must be finite, got {self.param}")

    def phi(self, z):
        return np.full(np.shape(z), float(self.param)) if np.ndim(z) else float(self.param)

    def density(self, r):
        return np.exp(-2.0 * self.param) * np.ones_like(r, dtype=float)

    def mp_density(self, u):
        import mpmath

        return mpmath.exp(-2 * _mp(self.param))

    def scaled(self, m):
        return Constant(self.param * m)

    def sup_fiber_radius(self):
        return math.exp(-self.param)


@dataclass(frozen=True)
class NegLogAbs(WeightSpec):
    """``phi = -alpha * log|z|``; ``alpha`` is kept exact when rational."""

    param: Fraction | float
    family = "neglog"

    def __post_init__(self):
        p = self.param
        if isinstance(p, (Integral, Rational)) and not isinstance(p, bool):
            object.__setattr__(self, "param", Fraction(p))
        elif isinstance(p, float):
            if not math.isfinite(p):
                raise DomainError(f"alpha must be finite, got {p}")
        else:
            raise DomainError(f"alpha must be a rational or float, got {p!r}")
        if self.param <= 0:
            raise DomainError(f"NegLogAbs requires alpha > 0, got {self.param}")

    @property
    def alpha(self):
        return self.param

    def phi(self, z):
        a = np.abs(z)
        if np.any(a == 0):
            raise DomainError("-alpha*log|z| is undefined at z = 0")
        out = -float(self.param) * np.log(a)
        return float(out) if np.ndim(out) == 0 else out

    def density(self, r):
        return np.asarray(r, dtype=float) ** (2.0 * float(self.param))

    def mp_density(self, u):
        return u ** _mp(self.param)

    def scaled(self, m):
        return NegLogAbs(self.param * m)

    def sup_fiber_radius(self):
        return 1.0


@dataclass(frozen=True)
class NegLogOneMinusSq(WeightSpec):
    """``phi = -beta * log(1 - |z|^2)``; ``beta = 0`` is the trivial weight."""

    param: float
    family = "neglog1msq"

    def __post_init__(self):
        if not (math.isfinite(float(self.param)) and self.param >= 0):
            raise DomainError(f"beta must be finite and >= 0, got {self.param}")

    @property
    def beta(self):
        return self.param

    def phi(self, z):
        a2 = np.abs(z) ** 2
        if np.any(a2 >= 1):
            raise DomainError("-beta*log(1-|z|^2) needs |z| < 1")
        out = -float(self.param) * np.log1p(-a2)
        return float(out) if np.ndim(out) == 0 else out

    def density(self, r):
        r = np.asarray(r, dtype=float)
        return (1.0 - r * r) ** (2.0 * float(self.param))

    def mp_density(self, u):
        return (1 - u) ** (2 * _mp(self.param))

    def scaled(self, m):
        p = self.param
        return NegLogOneMinusSq(p * m if isinstance(p, Fraction) else float(p) * m)

    def sup_fiber_radius(self):
        return 1.0


def _mp(x):
    import mpmath

    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    # Decimal string so that e.g. 3.7 means 37/10, not its binary neighbour.
    return mpmath.mpf(repr(float(x)))


def _check_base_point(z, base: BaseDomain | None):
    if base is not None and not np.all(base.contains(z)):
        raise DomainError(f"point {z!r} is outside the base domain {base.value}")


def eval_phi(w: WeightSpec, z, base: BaseDomain | None = None):
    """Value of the weight at ``z`` (scalar or array)."""
    _check_base_point(z, base)
    return w.phi(z)


def fiber_radius(w: WeightSpec, z, base: BaseDomain | None = None):
    """Radius ``exp(-phi(z))`` of the fibre ball over ``z``."""
    return np.exp(-eval_phi(w, z, base))


def scale_weight(w: WeightSpec, m: int) -> WeightSpec:
    """The weight ``m * phi`` (same family, parameter times ``m``)."""
    if not isinstance(m, Integral) or m < 1:
        raise DomainError(f"scale factor must be an integer >= 1, got {m!r}")
    return w.scaled(int(m))


@dataclass(frozen=True)
class HartogsSpec:
    """``D = {(z, w) in G x C^N : ||w||_p < exp(-phi(z))}``.

    ``p`` is a float in ``[1, inf]``; use ``math.inf`` (or ``"inf"`` in JSON)
    for the polydisc-fibre case.
    """

    base: BaseDomain
    weight: WeightSpec
    N: int = 1
    p: float = 2.0

    def __post_init__(self):
        if not isinstance(self.N, Integral) or self.N < 1:
            raise DomainError(f"fibre dimension N must be an integer >= 1, got {self.N!r}")
        p = float(self.p)
        if not (p >= 1):
            raise DomainError(f"norm exponent p must lie in [1, inf], got {self.p!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "N", int(self.N))

    def fiber_norm(self, w) -> np.ndarray:
        """``||w||_p`` along the last axis."""
        a = np.abs(np.asarray(w, dtype=complex))
        if a.ndim == 0:
            return a
        if math.isinf(self.p):
            return a.max(axis=-1)
        return (a**self.p).sum(axis=-1) ** (1.0 / self.p)

    def contains(self, z, w) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        ok = self.base.contains(z)
        out = np.zeros(z.shape, dtype=bool)
        if np.any(ok):
            radius = np.exp(-np.asarray(self.weight.phi(np.where(ok, z, 0.5))))
            norm = self.fiber_norm(np.asarray(w, dtype=complex).reshape(z.shape + (self.N,)))
            out = ok & (norm < radius)
        return out

    def to_json(self) -> dict:
        return {
            "base": self.base.value,
            "weight": self.weight.to_json(),
            "N": self.N,
            "p": "inf" if math.isinf(self.p) else self.p,
        }

    @classmethod
    def from_json(cls, data: dict) -> "HartogsSpec":
        allowed = {"base", "weight", "N", "p"}
        unknown = set(data) - allowed
        if unknown:
            raise DomainError(f"unknown HartogsSpec fields: {sorted(unknown)}")
        try:
            base = BaseDomain(data["base"])
        except (KeyError, ValueError):
            raise DomainError(f"bad or missing base: {data.get('base')!r}") from None
        wd = data.get("weight")
        if not isinstance(wd, dict) or set(wd) != {"family", "param"}:
            raise DomainError(f"weight must be {{'family', 'param'}}, got {wd!r}")
        weight = weight_from_json(wd["family"], wd["param"])
        p = data.get("p", 2)
        p = math.inf if p == "inf" else float(p)
        return cls(base=base, weight=weight, N=data.get("N", 1), p=p)


def weight_from_json(family: str, param) -> WeightSpec:
    if family == "const":
        return Constant(float(param))
    if family == "neglog":
        if isinstance(param, float):
            return NegLogAbs(param)
        return NegLogAbs(parse_rational(param))
    if family == "neglog1msq":
        if isinstance(param, str) and "/" in param:
            return NegLogOneMinusSq(parse_rational(param))
        return NegLogOneMinusSq(float(param))
    raise DomainError(f"unknown weight family {family!r}")
