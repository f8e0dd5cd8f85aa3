"""Bergman kernels of complete N-circled p-Hartogs domains as weighted base series.

For ``D = {(z, w) in G x C^N : ||w||_p < exp(-phi(z))}`` the kernel is::

    K_D(z, zeta, w, eta) = sum_n a_p(n) * K_{G, (N+|n|) phi}(z, zeta) * (w conj(eta))^n

with ``a_p(n) = 1 / C(p; n)`` and ``C(p; n) = integral_{||w||_p < 1} |w^n|^2 dV``.
The sum is accumulated one total degree at a time so that truncation can be
decided degreewise.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from numbers import Number
from typing import Callable, Sequence

import numpy as np
from scipy.special import gammaln

from .base_kernels import log_base_kernel
from .errors import ConvergenceError, DomainError
from .numerics import MultiIndex, multiindices_of_degree
from .weights import BaseDomain, HartogsSpec, NegLogAbs

__all__ = [
    "TruncationPolicy",
    "EvalReport",
    "c_norm_constant",
    "log_c_norm_constant",
    "series_coefficient",
    "hartogs_kernel",
    "coefficient_stream",
    "inflate_series",
]

_LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class TruncationPolicy:
    """When to stop summing a degree-graded series.

    Summation stops once ``stagnation_degrees`` consecutive degrees each move
    the partial sum by less than ``stagnation_tol`` relative, and the
    geometric tail estimate is below ``stagnation_tol * max(1, |sum|)``.
    """

    max_total_degree: int = 400
    stagnation_tol: float = 1e-12
    stagnation_degrees: int = 3

    def __post_init__(self):
        if self.max_total_degree < 1:
            raise DomainError("max_total_degree must be >= 1")
        if not self.stagnation_tol > 0:
            raise DomainError("stagnation_tol must be > 0")
        if self.stagnation_degrees < 1:
            raise DomainError("stagnation_degrees must be >= 1")


@dataclass(frozen=True)
class EvalReport:
    value: complex
    terms_used: int
    last_degree: int
    est_tail: float
    converged: bool

    def to_json(self) -> dict:
        d = asdict(self)
        d["value"] = {"re": self.value.real, "im": self.value.imag}
        return d


def _check_p(p) -> float:
    p = float(p)
    if not p >= 1:
        raise DomainError(f"p must lie in [1, inf], got {p}")
    return p


def _log_coefficients(p: float, block: np.ndarray) -> np.ndarray:
    """``log a_p(n)`` for every row of a multi-index block."""
    N = block.shape[1]
    deg = block.sum(axis=1)
    if math.isinf(p):
        return np.log(block + 1.0).sum(axis=1) - N * _LOG_PI
    return (
        (N - 1) * math.log(p / 2)
        + np.log(N + deg)
        + gammaln((2 * N + 2 * deg) / p)
        - N * _LOG_PI
        - gammaln((2 * block + 2) / p).sum(axis=1)
    )


@lru_cache(maxsize=8192)
def _log_coefficients_cached(p: float, N: int, d: int) -> np.ndarray:
    out = _log_coefficients(p, multiindices_of_degree(N, d))
    out.setflags(write=False)
    return out


def log_c_norm_constant(p, n) -> float:
    """``log C(p; n)``."""
    n = MultiIndex(n)
    block = np.array([n], dtype=np.int64)
    return float(-_log_coefficients(_check_p(p), block)[0])


def c_norm_constant(p, n) -> float:
    """``C(p; n) = integral over the unit l^p ball of |w^n|^2``.

    Finite ``p``::

        (2/p)^(N-1) pi^N prod_k Gamma((2 n_k + 2)/p) / ((N + |n|) Gamma((2N + 2|n|)/p))

    and ``C(inf; n) = pi^N / prod_k (n_k + 1)``.

    >>> round(c_norm_constant(2, (0,)), 12) == round(math.pi, 12)
    True
    """
    return math.exp(log_c_norm_constant(p, n))


def series_coefficient(p, n) -> float:
    """``1 / C(p; n)``, the weight of the ``n``-th term of the kernel series."""
    return math.exp(-log_c_norm_constant(p, n))


def _log_fiber(t: Sequence[complex]) -> np.ndarray:
    return np.array([complex(-math.inf, 0) if x == 0 else np.log(complex(x)) for x in t])


def _fiber_pairings(t, N: int, p: float) -> list[complex]:
    if isinstance(t, Number):
        if N == 1:
            return [complex(t)]
        if p != 2:
            raise DomainError(f"N={N}, p={p} needs {N} per-coordinate pairings, got a scalar")
        # For p = 2 each degree block only depends on <w, eta> = sum of the
        # products (multinomial theorem), so the scalar goes in one slot.
        return [complex(t)] + [0j] * (N - 1)
    vals = [complex(x) for x in t]
    if len(vals) != N:
        raise DomainError(f"expected {N} fibre pairings, got {len(vals)}")
    return vals


def _tail_estimate(mags: list[float], window: int) -> float:
    recent = max(mags[-window:])
    if recent == 0:
        return 0.0
    if len(mags) < 2 * window:
        return math.inf
    earlier = max(mags[-2 * window : -window])
    if earlier == 0:
        return math.inf
    ratio = (recent / earlier) ** (1.0 / window)
    if ratio >= 1:
        return math.inf
    return recent * ratio / (1 - ratio)


def _sum_by_degree(degree_term: Callable[[int], tuple[complex, int]], policy: TruncationPolicy) -> EvalReport:
    tol = policy.stagnation_tol
    window = max(policy.stagnation_degrees, 8)
    re_parts: list[float] = []
    im_parts: list[float] = []
    mags: list[float] = []
    total = 0j
    terms = 0
    quiet = 0
    tail = math.inf
    for d in range(policy.max_total_degree + 1):
        contrib, count = degree_term(d)
        if not (math.isfinite(contrib.real) and math.isfinite(contrib.imag)):
            report = EvalReport(total, terms, d - 1, math.inf, False)
            raise ConvergenceError(f"non-finite series term at degree {d}", report)
        re_parts.append(contrib.real)
        im_parts.append(contrib.imag)
        total += contrib
        terms += count
        mags.append(abs(contrib))
        quiet = quiet + 1 if abs(contrib) <= tol * abs(total) or contrib == 0 else 0
        if quiet >= policy.stagnation_degrees:
            tail = _tail_estimate(mags, window)
            value = complex(math.fsum(re_parts), math.fsum(im_parts))
            if tail <= tol * max(1.0, abs(value)):
                return EvalReport(value, terms, d, tail, True)
    value = complex(math.fsum(re_parts), math.fsum(im_parts))
    report = EvalReport(value, terms, policy.max_total_degree, tail, False)
    raise ConvergenceError(
        f"series not converged by degree {policy.max_total_degree} (estimated tail {tail:.3g})",
        report,
    )


def _check_pairing(spec: HartogsSpec, s: complex) -> complex:
    s = complex(s)
    if abs(s) >= 1:
        raise DomainError("base pairing s = z*conj(zeta) must satisfy |s| < 1")
    return s


def hartogs_kernel(spec: HartogsSpec, s, t, policy: TruncationPolicy | None = None, method: str = "multiindex") -> EvalReport:
    """Kernel of ``spec`` at base pairing ``s`` and fibre pairings ``t``.

    ``t`` is ``w * conj(eta)`` when ``N == 1`` and the list of per-coordinate
    products ``(w_1 conj(eta_1), ..., w_N conj(eta_N))`` otherwise; with
    ``p == 2`` a scalar ``<w, eta>`` is also accepted. For
    ``p == 2`` the ``method="inflation"`` path sums the one-dimensional
    series in ``<w, eta> = sum(t)`` and differentiates it term by term
    instead of enumerating multi-indices; both paths are kept so each can
    check the other.

    Raises :class:`ConvergenceError` (with the partial report attached) if
    the series has not settled by ``policy.max_total_degree``.
    """
    policy = policy or TruncationPolicy()
    s = _check_pairing(spec, s)
    pairings = _fiber_pairings(t, spec.N, spec.p)
    if method == "inflation":
        if spec.p != 2:
            raise DomainError("the inflation path only applies to p = 2")
        line = HartogsSpec(spec.base, spec.weight, N=1, p=2)
        stream = coefficient_stream(line, s, log=True)
        return inflate_series(stream, spec.N, sum(pairings), policy, log=True)
    if method != "multiindex":
        raise DomainError(f"unknown method {method!r}")

    N, p = spec.N, spec.p
    log_t = _log_fiber(pairings)

    def degree_term(d: int):
        block = multiindices_of_degree(N, d)
        if d > 0 and np.all(np.isneginf(log_t.real)):
            return 0j, len(block)
        log_k = log_base_kernel(spec.base, spec.weight, N + d, s)
        with np.errstate(invalid="ignore"):
            fiber = np.where(block > 0, block * log_t, 0).sum(axis=1)
        logs = _log_coefficients_cached(p, N, d) + log_k + fiber
        vals = np.exp(logs)
        return complex(vals.sum()), len(block)

    return _sum_by_degree(degree_term, policy)


def coefficient_stream(spec: HartogsSpec, s, log: bool = False) -> Callable[[int], complex]:
    """Coefficients ``c_n(s)`` of the ``N = 1`` kernel as a power series in ``t``.

    ``c_n = (n + 1)/pi * K_{G, (n+1) phi}(s)``. With ``log=True`` the stream
    yields ``log c_n`` instead, which stays finite where ``c_n`` overflows.
    """
    if spec.N != 1:
        raise DomainError("coefficient streams are defined for one-dimensional fibres")
    s = _check_pairing(spec, s)

    def c(n: int) -> complex:
        lg = math.log(n + 1) - _LOG_PI + log_base_kernel(spec.base, spec.weight, n + 1, s)
        return lg if log else complex(np.exp(lg))

    return c


def inflate_series(coeffs: Callable[[int], complex], N: int, t, policy: TruncationPolicy | None = None, log: bool = False) -> EvalReport:
    """Term-wise ``(N-1)``-st ``t``-derivative of ``L(t) = sum c_n t^n``, over ``pi^(N-1)``.

    Evaluates ``sum_k (k+N-1)!/k! * c_{k+N-1} * t^k / pi^(N-1)``, the kernel
    with an ``N``-dimensional ``l^2``-ball fibre built from the kernel with
    a one-dimensional fibre. ``N == 1`` returns ``sum c_n t^n`` unchanged.
    Pass ``log=True`` if ``coeffs`` yields logarithms of the coefficients.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    policy = policy or TruncationPolicy()
    t = complex(t)
    log_t = complex(-math.inf, 0) if t == 0 else complex(np.log(t))
    shift = N - 1

    def degree_term(k: int):
        lc = coeffs(k + shift) if log else None
        if not log:
            c = complex(coeffs(k + shift))
            if c == 0:
                return 0j, 1
            lc = complex(np.log(c))
        if k > 0 and t == 0:
            return 0j, 1
        lg = lc + gammaln(k + N) - gammaln(k + 1) - shift * _LOG_PI + (k * log_t if k else 0)
        return complex(np.exp(lg)), 1

    return _sum_by_degree(degree_term, policy)
