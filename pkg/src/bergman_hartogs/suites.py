"""Named verification suites run by ``bergman-hartogs verify``.

Each suite is a list of named checks; every check returns an
:class:`~bergman_hartogs.verify.IdentityReport`. Point samplers draw real
points of the domain with a margin and reduce them to the pairings the
kernels consume.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import closed_forms as cf
from .base_kernels import constant_weight_kernel, punctured_disk_log_kernel
from .hartogs import TruncationPolicy, coefficient_stream, hartogs_kernel, inflate_series
from .numerics import multiindices_of_degree
from .verify import IdentityReport, check_c_constant, check_identity, check_reproducing
from .weights import BaseDomain, Constant, HartogsSpec, NegLogAbs, NegLogOneMinusSq

SUITES = ("c-constants", "series-vs-closed", "transform", "inflation", "reproducing")

TRIANGLE_QS = (Fraction(1), Fraction(2), Fraction(1, 2), Fraction(3, 2), Fraction(5, 3))
DQ_QS = (0.5, 1.0, 2.0, 3.0)
DINF_QS = (0.5, 1.0, 2.0)
TRANSFORM_ALPHAS = (Fraction(1), Fraction(2), Fraction(7, 3))

H1 = HartogsSpec(BaseDomain.PUNCTURED_UNIT_DISK, NegLogAbs(1))
BALL2 = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(0.5))
REPRODUCING_POINTS = {
    "H1": ((0.6 + 0.2j, -0.3 + 0.1j), (0.1 - 0.7j, 0.4 + 0.2j), (-0.5 + 0.4j, 0.3 - 0.2j)),
    "ball": ((0.4, 0.3), (0.3 - 0.3j, 0.5 + 0.2j), (-0.5 + 0.1j, -0.3 - 0.4j)),
}
TEST_FUNCTIONS = {
    "1": lambda z, w: np.ones_like(np.asarray(z, dtype=complex)),
    "w": lambda z, w: w,
    "zw": lambda z, w: z * w,
}


def _disk(rng, radius, size=None):
    r = radius * np.sqrt(rng.random(size))
    return r * np.exp(2j * np.pi * rng.random(size))


# ---- point samplers -------------------------------------------------------


def triangle_points(q, margin: float = 0.9) -> Callable:
    """``(s, t)`` with ``0 < |s| < margin`` and ``|t| < margin |s|^(1/q)``."""
    inv_q = 1 / float(q)

    def sample(rng):
        s = _disk(rng, margin)
        while s == 0:
            s = _disk(rng, margin)
        return s, _disk(rng, margin * abs(s) ** inv_q)

    return sample


def fibre_points(q: float, N: int, margin: float = 0.9) -> Callable:
    """Pairings of two points of ``{|z|^2 + ||w||_inf^(2q) < 1}``.

    ``|z| < margin`` and each ``|w_k| < margin (1 - |z|^2)^(1/(2q))``.
    Returns ``(s, t)`` for ``N == 1`` and ``(s, t_1, ..., t_N)`` otherwise.
    """

    def sample(rng):
        z, zeta = _disk(rng, margin), _disk(rng, margin)
        rz = (1 - abs(z) ** 2) ** (1 / (2 * q))
        rzeta = (1 - abs(zeta) ** 2) ** (1 / (2 * q))
        w = _disk(rng, margin * rz, N)
        eta = _disk(rng, margin * rzeta, N)
        return (complex(z * np.conj(zeta)),) + tuple(complex(x) for x in w * np.conj(eta))

    return sample


def ball_pairings(n_fibre: int, margin: float = 0.9) -> Callable:
    """``(s, <w, eta>)`` for two points of the ball of radius ``margin`` in ``C^(1+n_fibre)``."""

    def point(rng):
        v = rng.standard_normal(2 * (1 + n_fibre))
        v = v[: 1 + n_fibre] + 1j * v[1 + n_fibre :]
        return v / np.linalg.norm(v) * margin * rng.random() ** (1 / (2 + 2 * n_fibre))

    def sample(rng):
        a, b = point(rng), point(rng)
        return complex(a[0] * np.conj(b[0])), complex(np.vdot(b[1:], a[1:]))

    return sample


def punctured_points(margin: float = 0.9) -> Callable:
    """Two points ``z, zeta`` of the punctured disk with ``|.| < margin``."""

    def sample(rng):
        z, zeta = _disk(rng, margin), _disk(rng, margin)
        return (z or margin / 2), (zeta or margin / 2)

    return sample


# ---- suites ---------------------------------------------------------------

Check = tuple  # (name, thunk returning IdentityReport)


def _series(spec, policy):
    return lambda s, *t: hartogs_kernel(spec, s, t[0] if len(t) == 1 else list(t), policy).value


def series_vs_closed(tol: float | None = None, seed: int = 0, n_points: int = 20, max_degree: int = 400) -> Iterator[Check]:
    policy = TruncationPolicy(max_total_degree=max_degree)
    for i, q in enumerate(TRIANGLE_QS):
        spec = HartogsSpec(BaseDomain.PUNCTURED_UNIT_DISK, NegLogAbs(1 / q))
        yield f"triangle q={q}", lambda spec=spec, q=q, i=i: check_identity(
            _series(spec, policy), lambda s, t, q=q: cf.hartogs_triangle(q, s, t),
            triangle_points(q), n_points, tol or 1e-8, seed + i)
    for i, q in enumerate(DQ_QS):
        spec = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(1 / (2 * q)))
        yield f"D_q q={q:g}", lambda spec=spec, q=q, i=i: check_identity(
            _series(spec, policy), lambda s, t, q=q: cf.bergman_dq(q, s, t),
            fibre_points(q, 1), n_points, tol or 1e-8, seed + 100 + i)
    yield "D_1 = ball in C^2", lambda: check_identity(
        lambda s, t: cf.bergman_dq(1, s, t), lambda s, t: 2 / (math.pi**2 * (1 - s - t) ** 3),
        fibre_points(1.0, 1), n_points, tol or 1e-12, seed + 200)
    for i, q in enumerate(DINF_QS):
        spec = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(1 / (2 * q)), N=2, p=math.inf)
        yield f"D^inf_q q={q:g}", lambda spec=spec, q=q, i=i: check_identity(
            _series(spec, policy), lambda s, t1, t2, q=q: cf.dinfty_q(q, s, t1, t2),
            fibre_points(q, 2), n_points, tol or 1e-7, seed + 300 + i)
    # rel2 with f = z, g = z^3 over D*: the weight log|f/g| is -2 log|z|.
    f, g = cf.HoloFunction.monomial(1), cf.HoloFunction.monomial(3)
    for N in (1, 2):
        spec = HartogsSpec(BaseDomain.PUNCTURED_UNIT_DISK, NegLogAbs(2), N=N, p=2)
        yield f"rel2 f=z g=z^3 N={N}", lambda spec=spec, N=N: check_identity(
            lambda s, t: hartogs_kernel(spec, s, t, policy).value,
            lambda s, t, N=N: _rel2_on_pairings(f, g, N, s, t),
            triangle_points(Fraction(1, 2)), n_points, tol or 1e-8, seed + 400 + N)
        yield f"rel1 = rel2 f=z g=z^3 N={N}", lambda N=N: check_identity(
            lambda s, t, N=N: _rel1_on_pairings(f, g, N, s, t),
            lambda s, t, N=N: _rel2_on_pairings(f, g, N, s, t),
            triangle_points(Fraction(1, 2)), n_points, tol or 1e-12, seed + 410 + N)
    for k, q in ((1, Fraction(1)), (2, Fraction(1, 2))):
        yield f"twist k={k} vs triangle q={q}", lambda k=k, q=q: check_identity(
            lambda s, t: _twist_on_pairings(k, s, t), lambda s, t: cf.hartogs_triangle(q, s, t),
            triangle_points(q), n_points, tol or 1e-12, seed + 500 + k)


def _split_pairing(s):
    # Any (z, zeta) with z*conj(zeta) = s; the kernels below only depend on s.
    r = math.sqrt(abs(s))
    return complex(r), complex(s).conjugate() / r


def _rel2_on_pairings(f, g, N, s, t):
    z, zeta = _split_pairing(s)
    return cf.mero_hartogs_rel2(f, g, N, lambda a, b: 1 / (math.pi * (1 - a * np.conj(b)) ** 2), z, zeta, t)


def _rel1_on_pairings(f, g, N, s, t):
    # log|z / z^3| = -2 log|z|, so the weighted base kernel has alpha = 2.
    z, zeta = _split_pairing(s)
    return cf.mero_hartogs_rel1(f, g, N, lambda a, b: punctured_disk_log_kernel(2, a * np.conj(b)), z, zeta, t)


def _twist_on_pairings(k, s, t):
    z, zeta = _split_pairing(s)
    return cf.twisted_triangle(cf.HoloFunction.one(), k, 1, z, zeta, t)


def transform(seed: int = 0, n_points: int = 100, tol: float | None = None) -> Iterator[Check]:
    def kern(alpha):
        return lambda z, zeta: punctured_disk_log_kernel(alpha, z * np.conj(zeta))

    for alpha in TRANSFORM_ALPHAS:
        for k in (1, 2):
            zk, one = cf.HoloFunction.monomial(k), cf.HoloFunction.one()
            # K_alpha from K_{alpha-k} (f = 1, g = z^k) and from K_{alpha+k} (f = z^k, g = 1).
            for label, f, g, shift in (("1/z^k", one, zk, -k), ("z^k", zk, one, k)):
                yield f"alpha={alpha} k={k} f/g={label}", lambda a=alpha, f=f, g=g, sh=shift: check_identity(
                    lambda z, zeta: cf.transform_kernel(f, g, kern(a + sh), z, zeta),
                    kern(a), punctured_points(), n_points, tol or 1e-12, seed)


def inflation(seed: int = 0, n_points: int = 20, tol: float | None = None) -> Iterator[Check]:
    policy = TruncationPolicy()
    ball = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(0.5))
    yield "ball C^2 stream -> ball C^3", lambda: check_identity(
        lambda s, t: inflate_series(coefficient_stream(ball, s, log=True), 2, t, policy, log=True).value,
        lambda s, t: cf.ball_kernel(3, s + t), ball_pairings(2), n_points, tol or 1e-9, seed)
    c = 0.3
    R2 = math.exp(-2 * c)
    const = HartogsSpec(BaseDomain.UNIT_DISK, Constant(c))

    def product(s, t):
        return constant_weight_kernel(0.0, s) * 2 * R2 / (math.pi**2 * (R2 - t) ** 3)

    def const_pairs(rng):
        s = _disk(rng, 0.9)
        return s, _disk(rng, 0.9 * R2)

    yield "constant weight -> disk x ball", lambda: check_identity(
        lambda s, t: inflate_series(coefficient_stream(const, s, log=True), 2, t, policy, log=True).value,
        product, const_pairs, n_points, tol or 1e-9, seed + 1)
    for beta in (0.5, 1.0):
        spec = HartogsSpec(BaseDomain.UNIT_DISK, NegLogOneMinusSq(beta), N=2, p=2)
        yield f"inflation vs multi-index beta={beta:g}", lambda spec=spec, beta=beta: check_identity(
            lambda s, t: hartogs_kernel(spec, s, t, policy, method="inflation").value,
            lambda s, t: hartogs_kernel(spec, s, t, policy).value,
            _beta_pairs(beta), n_points, tol or 1e-9, seed + 2)


def _beta_pairs(beta):
    # |<w, eta>| < |1 - s|^(2 beta) keeps the series geometrically convergent.
    def sample(rng):
        z, zeta = _disk(rng, 0.9), _disk(rng, 0.9)
        rad = ((1 - abs(z) ** 2) * (1 - abs(zeta) ** 2)) ** beta
        return complex(z * np.conj(zeta)), _disk(rng, 0.81 * rad)

    return sample


def c_constants(n_samples: int, seed: int) -> Iterator[Check]:
    for p in (1.0, 2.0, 3.0, math.inf):
        for N in (1, 2, 3):
            for d in range(4):
                for n in multiindices_of_degree(N, d).tolist():
                    yield f"C(p={p:g}; n={tuple(n)})", lambda p=p, n=n: check_c_constant(p, n, n_samples, seed)


def reproducing(n_samples: int, seed: int, jobs: int = 1) -> Iterator[Check]:
    kernels = {
        "H1": (H1, lambda z, w, ze, et: cf.hartogs_triangle(1, z * np.conj(ze), w * np.conj(et))),
        "ball": (BALL2, lambda z, w, ze, et: cf.ball_kernel(2, z * np.conj(ze) + w * np.conj(et))),
    }
    for dom_name, (spec, kernel) in kernels.items():
        for fname, f in TEST_FUNCTIONS.items():
            for pt in REPRODUCING_POINTS[dom_name]:
                yield f"{dom_name} f={fname} at {pt}", lambda spec=spec, kernel=kernel, f=f, pt=pt: check_reproducing(
                    kernel, spec, f, pt, n_samples, seed, jobs=jobs)


def build(suite: str, *, n_samples: int = 1_000_000, seed: int = 0, tol: float | None = None,
          jobs: int = 1, max_degree: int = 400) -> list[tuple[str, str, Callable[[], IdentityReport]]]:
    """All checks of ``suite`` (or of every suite for ``"all"``) as ``(suite, name, thunk)``."""
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name == "c-constants":
            checks = c_constants(n_samples, seed)
        elif name == "series-vs-closed":
            checks = series_vs_closed(tol, seed, max_degree=max_degree)
        elif name == "transform":
            checks = transform(seed, tol=tol)
        elif name == "inflation":
            checks = inflation(seed, tol=tol)
        elif name == "reproducing":
            checks = reproducing(n_samples, seed, jobs)
        else:
            raise ValueError(f"unknown suite {name!r}")
        out.extend((name, label, thunk) for label, thunk in checks)
    return out
