"""Monte Carlo integration over Hartogs domains and identity checking.

Every estimate is reproducible: a seed is split into per-shard streams by
``numpy.random.SeedSequence.spawn`` and shard results are combined in shard
order, so the answer depends on ``(seed, shards, n_samples)`` only, never on
how many worker threads ran the shards.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BergmanError, DomainError
from .hartogs import c_norm_constant
from .numerics import MultiIndex
from .weights import HartogsSpec

__all__ = [
    "LpBall",
    "MCEstimate",
    "IdentityReport",
    "DegenerateDomainError",
    "mc_integrate",
    "check_c_constant",
    "check_reproducing",
    "check_identity",
    "relative_error",
]

_CHUNK = 1 << 17


class DegenerateDomainError(DomainError):
    """No Monte Carlo sample landed inside the domain."""


@dataclass(frozen=True)
class LpBall:
    """The unit ``l^p`` ball in ``C^N``; integrands are called as ``f(w)``."""

    N: int
    p: float = 2.0

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"N must be >= 1, got {self.N}")
        if not float(self.p) >= 1:
            raise DomainError(f"p must lie in [1, inf], got {self.p}")
        object.__setattr__(self, "p", float(self.p))

    def contains(self, w) -> np.ndarray:
        a = np.abs(w)
        if math.isinf(self.p):
            return a.max(axis=-1) < 1
        return (a**self.p).sum(axis=-1) < 1


@dataclass(frozen=True)
class MCEstimate:
    mean: complex | float
    stderr: float
    samples: int
    accepted: int
    seed: int
    shard_means: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        m = complex(self.mean)
        return {
            "mean": {"re": m.real, "im": m.imag},
            "stderr": self.stderr,
            "samples": self.samples,
            "accepted": self.accepted,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class IdentityReport:
    max_rel_err: float
    worst_point: tuple
    points_checked: int
    passed: bool
    tol: float
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "max_rel_err": self.max_rel_err,
            "worst_point": [_jsonable(x) for x in self.worst_point],
            "points_checked": self.points_checked,
            "pass": self.passed,
            "tol": self.tol,
            **{k: _jsonable(v) for k, v in sorted(self.detail.items())},
        }


def _jsonable(x):
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def relative_error(a, b) -> float:
    """``|a - b| / min(|a|, |b|)``: symmetric, and the stricter of the two one-sided errors."""
    a, b = complex(a), complex(b)
    diff = abs(a - b)
    if diff == 0:
        return 0.0
    scale = min(abs(a), abs(b))
    return math.inf if scale == 0 else diff / scale


def _uniform_disk(rng, radius, shape):
    r = radius * np.sqrt(rng.random(shape))
    return r * np.exp(2j * np.pi * rng.random(shape))


def _shard_sums(domain, integrand, n, rng):
    """Sum, sum of squared moduli and acceptance count over ``n`` box samples."""
    total = 0j
    total_sq = 0.0
    accepted = 0
    done = 0
    while done < n:
        m = min(_CHUNK, n - done)
        if isinstance(domain, LpBall):
            w = _uniform_disk(rng, 1.0, (m, domain.N))
            inside = domain.contains(w)
            vals = np.asarray(integrand(w[inside]), dtype=complex) if inside.any() else np.zeros(0, complex)
        else:
            radius = domain.weight.sup_fiber_radius()
            z = _uniform_disk(rng, 1.0, m)
            w = _uniform_disk(rng, radius, (m, domain.N))
            inside = domain.contains(z, w)
            if inside.any():
                wi = w[inside]
                vals = np.asarray(integrand(z[inside], wi[:, 0] if domain.N == 1 else wi), dtype=complex)
            else:
                vals = np.zeros(0, complex)
        vals = np.broadcast_to(vals, (int(inside.sum()),))
        total += complex(vals.sum())
        total_sq += float((vals.real**2 + vals.imag**2).sum())
        accepted += int(inside.sum())
        done += m
    return total, total_sq, accepted


def _box_volume(domain) -> float:
    if isinstance(domain, LpBall):
        return math.pi**domain.N
    r = domain.weight.sup_fiber_radius()
    return math.pi * (math.pi * r * r) ** domain.N


def _split(n: int, shards: int) -> list[int]:
    base, extra = divmod(n, shards)
    return [base + (i < extra) for i in range(shards)]


def mc_integrate(
    domain: HartogsSpec | LpBall,
    integrand: Callable,
    n_samples: int = 1_000_000,
    seed: int = 0,
    shards: int = 8,
    jobs: int = 1,
) -> MCEstimate:
    """Estimate ``integral_domain integrand dV`` by uniform rejection sampling.

    Samples come from the bounding box: the unit disk times the polydisc of
    radius ``sup exp(-phi)`` for a :class:`HartogsSpec` (integrand called as
    ``f(z, w)``, with ``w`` of shape ``(m,)`` when ``N == 1`` and ``(m, N)``
    otherwise), or the unit polydisc for an :class:`LpBall` (integrand
    ``f(w)``). Rejected samples count as zeros, so the estimate is unbiased.
    """
    if n_samples < shards or shards < 1:
        raise DomainError(f"need n_samples >= shards >= 1, got {n_samples}, {shards}")
    children = np.random.SeedSequence(int(seed)).spawn(shards)
    sizes = _split(int(n_samples), shards)

    def run(i):
        return _shard_sums(domain, integrand, sizes[i], np.random.default_rng(children[i]))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(run, range(shards)))
    else:
        parts = [run(i) for i in range(shards)]

    accepted = sum(p[2] for p in parts)
    if accepted == 0:
        raise DegenerateDomainError("no sample was accepted; the domain is empty or too thin")
    vol = _box_volume(domain)
    n = int(n_samples)
    s1 = sum((p[0] for p in parts), 0j)
    s2 = math.fsum(p[1] for p in parts)
    mean = s1 / n
    var = max(s2 / n - abs(mean) ** 2, 0.0) * n / (n - 1)
    est = vol * mean
    if est.imag == 0:
        est = est.real
    shard_means = tuple(vol * p[0] / k for p, k in zip(parts, sizes))
    return MCEstimate(est, vol * math.sqrt(var / n), n, accepted, int(seed), shard_means)


def _simplex_moment(p: float, n: MultiIndex, n_samples: int, seed: int, shards: int) -> MCEstimate:
    # With u_k = |w_k|^p the l^p ball becomes the simplex {sum u < 1} times
    # angles, and |w^n|^2 dV turns into (2 pi / p)^N prod u_k^(a_k - 1) du with
    # a_k = (2 n_k + 2)/p. Uniform simplex points are normalised exponentials.
    N = len(n)
    a = (2.0 * np.asarray(n) + 2.0) / p
    children = np.random.SeedSequence(int(seed)).spawn(shards)
    sums, sqs = [], []
    for child, m in zip(children, _split(n_samples, shards)):
        rng = np.random.default_rng(child)
        e = rng.standard_exponential((m, N + 1))
        u = e[:, :N] / e.sum(axis=1, keepdims=True)
        vals = np.ones(m)
        for k in np.flatnonzero(a != 1.0):
            vals *= u[:, k] ** (a[k] - 1.0)
        sums.append(float(vals.sum()))
        sqs.append(float(vals @ vals))
    scale = (2 * math.pi / p) ** N / math.factorial(N)
    mean = math.fsum(sums) / n_samples
    var = max(math.fsum(sqs) / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    shard_means = tuple(scale * s / k for s, k in zip(sums, _split(n_samples, shards)))
    return MCEstimate(scale * mean, scale * math.sqrt(var / n_samples), n_samples, n_samples, int(seed), shard_means)


def _polydisc_moment(n: MultiIndex, n_samples: int, seed: int, shards: int) -> MCEstimate:
    # On the unit polydisc with u_k = |w_k|^2 uniform: C = pi^N E[prod u_k^n_k].
    N = len(n)
    expo = np.asarray(n, dtype=float)
    children = np.random.SeedSequence(int(seed)).spawn(shards)
    sums, sqs = [], []
    for child, m in zip(children, _split(n_samples, shards)):
        u = np.random.default_rng(child).random((m, N))
        vals = np.prod(u**expo, axis=1)
        sums.append(float(vals.sum()))
        sqs.append(float(vals @ vals))
    scale = math.pi**N
    mean = math.fsum(sums) / n_samples
    var = max(math.fsum(sqs) / n_samples - mean * mean, 0.0) * n_samples / (n_samples - 1)
    shard_means = tuple(scale * s / k for s, k in zip(sums, _split(n_samples, shards)))
    return MCEstimate(scale * mean, scale * math.sqrt(var / n_samples), n_samples, n_samples, int(seed), shard_means)


def check_c_constant(
    p,
    n,
    n_samples: int = 1_000_000,
    seed: int = 0,
    shards: int = 8,
    sampler: str = "simplex",
    sigmas: float = 4.0,
    rel_tol: float = 0.01,
) -> IdentityReport:
    """Compare a Monte Carlo estimate of ``integral_{||w||_p<1} |w^n|^2 dV`` with ``c_norm_constant``.

    ``sampler="simplex"`` samples the ball exactly in the coordinates
    ``u_k = |w_k|^p`` (a uniform simplex for finite ``p``, the unit cube for
    ``p = inf``); ``sampler="box"`` uses plain rejection from the polydisc,
    which is much noisier for small ``p``. Passes iff the estimate is within
    ``sigmas`` standard errors and ``rel_tol`` relative of the formula.
    """
    n = MultiIndex(n)
    p = float(p)
    exact = c_norm_constant(p, n)
    if sampler == "simplex":
        est = _polydisc_moment(n, n_samples, seed, shards) if math.isinf(p) else _simplex_moment(p, n, n_samples, seed, shards)
    elif sampler == "box":
        expo = 2 * np.asarray(n)
        est = mc_integrate(LpBall(len(n), p), lambda w: np.prod(np.abs(w) ** expo, axis=1), n_samples, seed, shards)
    else:
        raise DomainError(f"unknown sampler {sampler!r}")
    rel = abs(est.mean - exact) / exact
    # The floor only matters for exactly constant integrands (stderr == 0).
    within = abs(est.mean - exact) <= sigmas * est.stderr + 1e-12 * exact
    return IdentityReport(
        max_rel_err=rel,
        worst_point=(p, tuple(n)),
        points_checked=1,
        passed=bool(within and rel <= rel_tol),
        tol=rel_tol,
        detail={"estimate": float(est.mean), "stderr": est.stderr, "exact": exact, "z_score": abs(est.mean - exact) / est.stderr if est.stderr else math.inf},
    )


def check_reproducing(
    kernel: Callable,
    domain: HartogsSpec,
    f: Callable,
    eval_point: tuple,
    n_samples: int = 1_000_000,
    seed: int = 0,
    shards: int = 8,
    jobs: int = 1,
    sigmas: float = 4.0,
    rel_tol: float = 0.02,
) -> IdentityReport:
    """Check ``f(P) == integral_D K(P, Q) f(Q) dV(Q)`` by Monte Carlo.

    ``kernel(z, w, zeta, eta)`` is the Bergman kernel of ``domain``
    (holomorphic in ``(z, w)``); ``f(zeta, eta)`` must be holomorphic and in
    ``L^2(D)``. Passes iff the estimate is within ``sigmas`` standard
    errors and ``rel_tol`` relative of ``f(P)``, and the shard-to-shard
    spread agrees with the pooled standard error (a guard against
    integrands whose variance is infinite or badly underestimated).
    """
    z0, w0 = eval_point
    if not bool(domain.contains(np.asarray(z0), np.asarray(w0))):
        raise DomainError(f"evaluation point {eval_point!r} is outside the domain")
    target = complex(f(z0, w0))

    def integrand(zeta, eta):
        return kernel(z0, w0, zeta, eta) * f(zeta, eta)

    est = mc_integrate(domain, integrand, n_samples, seed, shards, jobs)
    mean = complex(est.mean)
    rel = relative_error(mean, target)
    within = abs(mean - target) <= sigmas * est.stderr
    sm = np.asarray(est.shard_means, dtype=complex)
    spread = float(np.sqrt(np.sum(np.abs(sm - sm.mean()) ** 2) / (len(sm) - 1) / len(sm))) if len(sm) > 1 else 0.0
    sane = est.stderr > 0 and math.isfinite(est.stderr) and spread <= 3 * est.stderr
    return IdentityReport(
        max_rel_err=rel,
        worst_point=(complex(z0), complex(w0)),
        points_checked=1,
        passed=bool(within and rel <= rel_tol and sane),
        tol=rel_tol,
        detail={"estimate": mean, "target": target, "stderr": est.stderr, "shard_spread": spread, "variance_ok": sane},
    )


def check_identity(
    lhs: Callable,
    rhs: Callable,
    point_sampler: Callable[[np.random.Generator], Sequence],
    n_points: int,
    tol: float,
    seed: int = 0,
    max_failures: int | None = None,
) -> IdentityReport:
    """Largest symmetric relative disagreement of ``lhs(*P)`` and ``rhs(*P)``.

    Points come from ``point_sampler(rng)``. A point where either side
    raises a package error is recorded and replaced by a fresh sample; more
    than ``max_failures`` such points (default ``n_points``) re-raises.
    Swapping ``lhs`` and ``rhs`` gives the same report.
    """
    rng = np.random.default_rng(int(seed))
    cap = n_points if max_failures is None else max_failures
    worst, worst_pt = -1.0, ()
    checked = failures = 0
    while checked < n_points:
        pt = tuple(point_sampler(rng))
        try:
            a, b = lhs(*pt), rhs(*pt)
        except BergmanError:
            failures += 1
            if failures > cap:
                raise
            continue
        err = relative_error(a, b)
        if err > worst or not math.isfinite(err):
            worst, worst_pt = err, pt
        checked += 1
    return IdentityReport(
        max_rel_err=worst,
        worst_point=worst_pt,
        points_checked=checked,
        passed=bool(worst <= tol),
        tol=tol,
        detail={"resampled": failures},
    )
