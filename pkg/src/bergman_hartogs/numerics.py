"""Shared numerical substrate.

Log-space Gamma, principal-branch complex powers, graded multi-index
enumeration, and radial moments of rotation-invariant weights computed by
adaptive Gauss-Legendre quadrature.
"""

from __future__ import annotations

import math
from functools import lru_cache
from numbers import Integral

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, SingularityError

__all__ = [
    "MultiIndex",
    "ln_gamma",
    "principal_pow",
    "int_pow",
    "enumerate_multiindices",
    "multiindices_of_degree",
    "adaptive_gauss_legendre",
    "radial_moment",
    "radial_moment_mp",
]


class MultiIndex(tuple):
    """Tuple of nonnegative integers indexing a fibre monomial ``w**n``."""

    def __new__(cls, entries):
        entries = tuple(entries)
        if len(entries) < 1:
            raise DomainError("a multi-index needs at least one entry")
        out = []
        for e in entries:
            if not isinstance(e, Integral) or isinstance(e, bool):
                raise DomainError(f"multi-index entries must be integers, got {e!r}")
            if e < 0:
                raise DomainError(f"multi-index entries must be >= 0, got {e}")
            out.append(int(e))
        return super().__new__(cls, out)

    def total_degree(self) -> int:
        return sum(self)

    def __repr__(self):
        return f"MultiIndex({tuple(self)!r})"


def ln_gamma(x):
    """Natural log of the Gamma function for real ``x > 0``.

    Accepts scalars or arrays. Ratios of Gamma values should be formed as
    differences of ``ln_gamma`` to stay clear of overflow.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError(f"ln_gamma requires finite x > 0, got {x!r}")
    out = special.gammaln(arr)
    return float(out) if out.ndim == 0 else out


def int_pow(s, k: int):
    """``s**k`` for integer ``k`` by binary exponentiation (no logarithms).

    Works elementwise on arrays. Negative ``k`` inverts the result.
    """
    k = int(k)
    if k < 0:
        if np.any(np.asarray(s) == 0):
            raise SingularityError("zero raised to a negative power")
        return 1.0 / int_pow(s, -k)
    result = np.ones_like(s) if isinstance(s, np.ndarray) else 1.0
    base = s
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def principal_pow(s, e):
    """Principal-branch power ``exp(e * (ln|s| + i*Arg s))`` with Arg in (-pi, pi].

    Integer exponents take the exact multiplication path. Scalars in, complex
    scalar out; arrays in, complex array out.
    """
    s_arr = np.asarray(s, dtype=complex)
    e = float(e)
    if np.any(s_arr == 0):
        if e <= 0:
            raise SingularityError(f"0 ** {e} is singular")
    if e.is_integer():
        out = int_pow(s_arr if s_arr.ndim else complex(s_arr), int(e))
        return complex(out) if s_arr.ndim == 0 else np.asarray(out, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(s_arr == 0, 0.0, np.exp(e * np.log(np.where(s_arr == 0, 1.0, s_arr))))
    return complex(out) if s_arr.ndim == 0 else out


def _compositions(N: int, d: int):
    # Compositions of d into N parts, first coordinate descending.
    if N == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _compositions(N - 1, d - first):
            yield (first,) + rest


@lru_cache(maxsize=4096)
def _degree_block(N: int, d: int) -> np.ndarray:
    block = np.array(list(_compositions(N, d)), dtype=np.int64).reshape(-1, N)
    block.setflags(write=False)
    return block


def multiindices_of_degree(N: int, d: int) -> np.ndarray:
    """All multi-indices with ``|n| == d`` as a read-only ``(count, N)`` array.

    Rows are in graded-lexicographic order, e.g. ``(1, 0)`` before ``(0, 1)``.
    """
    if N < 1 or d < 0:
        raise DomainError(f"need N >= 1 and d >= 0, got N={N}, d={d}")
    return _degree_block(int(N), int(d))


def enumerate_multiindices(N: int, max_degree: int) -> list[MultiIndex]:
    """Every ``n`` in ``Z_+^N`` with ``|n| <= max_degree``, graded then lex.

    The count is ``binom(max_degree + N, N)``.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if max_degree < 0:
        return []
    return [
        MultiIndex(row)
        for d in range(max_degree + 1)
        for row in multiindices_of_degree(N, d).tolist()
    ]


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


def _gl_panel(f, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    return half * float(np.dot(_GL_WEIGHTS, f(mid + half * _GL_NODES)))


def adaptive_gauss_legendre(f, a, b, tol=1e-13, max_depth=200, max_panels=50_000):
    """Integrate a vectorised real ``f`` over ``[a, b]`` by panel bisection.

    A panel is accepted once its 20-point estimate agrees with the sum over
    its two halves to ``tol`` times the running estimate of the whole
    integral. Endpoint singularities are resolved by repeated bisection
    toward the endpoint; a divergent integrand exhausts ``max_depth`` or
    ``max_panels`` and raises :class:`ConvergenceError`.
    """
    whole = _gl_panel(f, a, b)
    estimate = whole
    accepted = []
    stack = [(a, b, whole, 0)]
    panels = 0
    while stack:
        lo, hi, val, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _gl_panel(f, lo, mid)
        right = _gl_panel(f, mid, hi)
        refined = left + right
        estimate += refined - val
        panels += 1
        if not math.isfinite(refined):
            raise ConvergenceError(f"non-finite integrand on [{lo}, {hi}]")
        if abs(refined - val) <= tol * max(abs(estimate), 1e-300):
            accepted.append(refined)
            continue
        if depth >= max_depth or panels >= max_panels:
            raise ConvergenceError(
                f"quadrature did not converge on [{lo!r}, {hi!r}] "
                f"(depth {depth}, {panels} panels); integral probably diverges"
            )
        stack.append((mid, hi, right, depth + 1))
        stack.append((lo, mid, left, depth + 1))
    return math.fsum(accepted)


def radial_moment(weight, n: int, inner_radius: float = 0.0, outer_radius: float = 1.0) -> float:
    """``integral |z|^(2n) exp(-2 phi(|z|)) dV`` over an annulus or disk.

    Reduces to ``2*pi * integral_{inner}^{outer} r^(2n+1) exp(-2 phi(r)) dr``.
    ``weight`` is any object with a vectorised ``density(r)`` method returning
    ``exp(-2 phi(r))`` (every :class:`~bergman_hartogs.weights.WeightSpec`
    qualifies).
    """
    if inner_radius < 0 or outer_radius <= inner_radius:
        raise DomainError(f"bad radii: inner={inner_radius}, outer={outer_radius}")
    power = 2 * int(n) + 1

    def integrand(r):
        return r**power * weight.density(r)

    return 2.0 * math.pi * adaptive_gauss_legendre(integrand, float(inner_radius), float(outer_radius))


def radial_moment_mp(weight, n: int, dps: int = 30):
    """Extended-precision radial moment over the unit disk (an ``mpmath.mpf``).

    Integrates ``pi * integral_0^1 u^n * exp(-2 phi(sqrt u)) du`` with
    tanh-sinh quadrature at ``dps`` digits. ``weight`` must provide
    ``mp_density(u)``. Used where the double-precision moments are not
    accurate enough to survive cancellation in an alternating sum.
    """
    import mpmath

    with mpmath.workdps(dps):
        val = mpmath.pi * mpmath.quad(lambda u: u ** int(n) * weight.mp_density(u), [0, 1])
        if not mpmath.isfinite(val) or val <= 0:
            raise ConvergenceError(f"moment n={n} is not finite for {weight!r}")
        return +val
