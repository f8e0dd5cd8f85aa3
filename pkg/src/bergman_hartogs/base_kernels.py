"""Weighted Bergman kernels of the disk and punctured disk.

Every kernel here is a function of the single pairing ``s = z * conj(zeta)``:
it is holomorphic in ``z`` and conjugate-holomorphic in ``zeta``, so Hermitian
symmetry ``K(s) == conj(K(conj(s)))`` holds by construction.

Besides the closed forms there is a brute-force oracle that sums the
orthonormal monomial expansion with moments obtained by quadrature.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational
from typing import NamedTuple

import numpy as np

from .errors import DomainError, SingularityError
from .numerics import int_pow, principal_pow, radial_moment, radial_moment_mp
from .weights import (
    BaseDomain,
    Constant,
    NegLogAbs,
    NegLogOneMinusSq,
    WeightSpec,
)

__all__ = [
    "FloorFrac",
    "alpha_floor_frac",
    "disk_weighted_kernel",
    "punctured_disk_log_kernel",
    "disk_log_kernel",
    "constant_weight_kernel",
    "base_kernel",
    "log_base_kernel",
    "oracle_radial_kernel",
    "moment_table",
]

_LOG_PI = math.log(math.pi)


class FloorFrac(NamedTuple):
    floor_part: int
    frac_num: int
    frac_den: int

    @property
    def frac(self) -> Fraction:
        return Fraction(self.frac_num, self.frac_den)


def alpha_floor_frac(alpha) -> FloorFrac:
    """Exact ``floor(alpha)`` and ``frac(alpha)`` of a rational ``alpha = u/v``."""
    a = _exact(alpha)
    q, r = divmod(a.numerator, a.denominator)
    return FloorFrac(q, r, a.denominator)


def _exact(alpha) -> Fraction:
    if isinstance(alpha, (Integral, Rational)) and not isinstance(alpha, bool):
        return Fraction(alpha)
    raise DomainError(f"expected an exact rational alpha, got {alpha!r}")


def _floor_frac_any(alpha):
    # Exact for rationals, floating only when the caller handed us a float.
    if isinstance(alpha, float):
        fl = math.floor(alpha)
        return fl, alpha - fl
    ff = alpha_floor_frac(alpha)
    return ff.floor_part, float(ff.frac)


def _as_pairing(s):
    arr = np.asarray(s, dtype=complex)
    if np.any(np.abs(arr) >= 1):
        raise DomainError("pairing s = z*conj(zeta) must satisfy |s| < 1")
    return arr


def _out(arr):
    return complex(arr) if np.ndim(arr) == 0 else arr


def disk_weighted_kernel(beta, s):
    """Kernel of ``L^2_h(D, -beta*log(1-|z|^2))``.

    ``(2*beta + 1) / pi * (1 - s)**-(2*beta + 2)``.
    """
    beta = float(beta)
    if not (beta >= 0 and math.isfinite(beta)):
        raise DomainError(f"beta must be finite and >= 0, got {beta}")
    s = _as_pairing(s)
    return _out((2 * beta + 1) / math.pi * principal_pow(1 - s, -(2 * beta + 2)))


def constant_weight_kernel(c, s):
    """Kernel of the disk with constant weight ``c``: ``exp(2c) / (pi (1-s)^2)``."""
    s = _as_pairing(s)
    return _out(math.exp(2 * c) / (math.pi * int_pow(1 - s, 2)))


def disk_log_kernel(alpha, s):
    """Kernel of ``L^2_h(D, -alpha*log|z|)`` on the full disk.

    Only ``n >= 0`` monomials are holomorphic on ``D``, so the sum is
    ``sum_n (alpha + n + 1) s^n / pi = ((1 + alpha) - alpha*s) / (pi (1-s)^2)``.
    """
    a = float(alpha)
    if a <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    s = _as_pairing(s)
    return _out(((1 + a) - a * s) / (math.pi * int_pow(1 - s, 2)))


def punctured_disk_log_kernel(alpha, s):
    """Kernel of ``L^2_h(D*, -alpha*log|z|)``.

    Uses the single floor/frac formula::

        s**(-floor(alpha) - 1) * ((1 - frac) s + frac) / (pi (s - 1)**2)

    which also covers integer ``alpha`` (``frac = 0``). The derivation only
    needs the monomials ``z^n`` with ``n > -alpha - 1``, so any real ``alpha``
    is accepted; weight shifts by ``log|z^k|`` routinely produce
    ``alpha <= 0``.
    """
    if isinstance(alpha, float) and not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha}")
    fl, fr = _floor_frac_any(alpha)
    s = _as_pairing(s)
    if fl + 1 > 0 and np.any(s == 0):
        raise SingularityError("punctured-disk kernel has a pole at s = 0")
    num = int_pow(s, -(fl + 1)) * ((1 - fr) * s + fr)
    return _out(num / (math.pi * int_pow(s - 1, 2)))


def base_kernel(base: BaseDomain, weight: WeightSpec, s):
    """Closed-form ``K_{G, phi}(s)`` for every supported (base, weight) pair."""
    if isinstance(weight, NegLogOneMinusSq):
        return disk_weighted_kernel(weight.param, s)
    if isinstance(weight, Constant):
        return constant_weight_kernel(weight.param, s)
    if isinstance(weight, NegLogAbs):
        if base is BaseDomain.PUNCTURED_UNIT_DISK:
            return punctured_disk_log_kernel(weight.param, s)
        return disk_log_kernel(weight.param, s)
    raise DomainError(f"unsupported weight {weight!r}")


def log_base_kernel(base: BaseDomain, weight: WeightSpec, m: int, s: complex) -> complex:
    """Complex logarithm of ``K_{G, m*phi}(s)`` for a scalar pairing.

    The series engine multiplies kernels of rapidly growing size by rapidly
    shrinking fibre monomials; working with logarithms avoids the overflow
    of either factor. Every branch choice matches :func:`principal_pow`, and
    integer powers enter as integer multiples of a principal logarithm so
    that ``exp`` recovers them exactly. Returns ``-inf`` where the kernel
    vanishes.
    """
    s = complex(s)
    if abs(s) >= 1:
        raise DomainError("pairing s = z*conj(zeta) must satisfy |s| < 1")
    log_1ms = _clog(1 - s)
    if isinstance(weight, NegLogOneMinusSq):
        beta = float(weight.param) * m
        return math.log((2 * beta + 1) / math.pi) - (2 * beta + 2) * log_1ms
    if isinstance(weight, Constant):
        return 2 * m * weight.param - _LOG_PI - 2 * log_1ms
    if isinstance(weight, NegLogAbs):
        alpha = weight.param * m
        if base is BaseDomain.PUNCTURED_UNIT_DISK:
            fl, fr = _floor_frac_any(alpha)
            if s == 0:
                raise SingularityError("punctured-disk kernel has a pole at s = 0")
            return -(fl + 1) * _clog(s) + _clog((1 - fr) * s + fr) - _LOG_PI - 2 * log_1ms
        a = float(alpha)
        return _clog((1 + a) - a * s) - _LOG_PI - 2 * log_1ms
    raise DomainError(f"unsupported weight {weight!r}")


def _clog(x: complex) -> complex:
    if x == 0:
        return complex(-math.inf, 0.0)
    return complex(np.log(complex(x)))


@lru_cache(maxsize=256)
def _moments(weight: WeightSpec, lo: int, hi: int) -> tuple:
    return tuple(radial_moment(weight, n) for n in range(lo, hi + 1))


@lru_cache(maxsize=64)
def _moments_mp(weight: WeightSpec, lo: int, hi: int, dps: int) -> tuple:
    return tuple(radial_moment_mp(weight, n, dps) for n in range(lo, hi + 1))


def moment_table(weight: WeightSpec, min_index: int, max_index: int) -> np.ndarray:
    """Radial moments ``m_n`` for ``min_index <= n <= max_index`` (cached)."""
    return np.array(_moments(weight, int(min_index), int(max_index)))


def oracle_radial_kernel(base: BaseDomain, weight: WeightSpec, s, min_index: int, max_index: int, dps=None):
    """Brute-force kernel ``sum_{n=min}^{max} s^n / m_n``.

    The moments come from quadrature, so this is independent of every closed
    form in the package; the expansion only uses that monomials are
    orthogonal for a radial weight. For the punctured disk ``min_index``
    should be the smallest ``n`` with a finite moment. A divergent moment
    raises :class:`~bergman_hartogs.errors.ConvergenceError`.

    With ``dps=None`` everything runs in double precision. Passing a digit
    count switches to mpmath moments and summation: for strongly weighted
    kernels at ``s`` near ``-1`` the alternating sum cancels almost
    completely (condition number ``((1+|s|)/(1-|s|))**(2*beta+2)``), which
    double precision cannot resolve.
    """
    if min_index > 0 or max_index < 0:
        raise DomainError("need min_index <= 0 <= max_index")
    if base is BaseDomain.UNIT_DISK and min_index < 0:
        raise DomainError("negative powers are not holomorphic on the full disk")
    s = _as_pairing(s)
    if min_index < 0 and np.any(s == 0):
        raise SingularityError("oracle kernel with negative powers has a pole at s = 0")
    if dps is not None:
        return _oracle_mp(weight, s, int(min_index), int(max_index), int(dps))
    coeffs = 1.0 / moment_table(weight, min_index, max_index)
    # Horner in s over n >= 0, then in 1/s over n < 0.
    acc = np.zeros_like(s)
    for c in coeffs[-min_index:][::-1]:
        acc = acc * s + c
    if min_index < 0:
        inv = 1.0 / np.where(s == 0, 1, s)
        tail = np.zeros_like(s)
        for c in coeffs[:-min_index]:
            tail = (tail + c) * inv
        acc = acc + tail
    return _out(acc)


def _oracle_mp(weight, s, lo, hi, dps):
    import mpmath

    moments = _moments_mp(weight, lo, hi, dps)
    flat = np.atleast_1d(s).ravel()
    out = np.empty(flat.shape, dtype=complex)
    with mpmath.workdps(dps):
        coeffs = [1 / m for m in moments]
        for i, sv in enumerate(flat):
            x = mpmath.mpc(sv.real, sv.imag)
            acc = mpmath.mpc(0)
            for c in coeffs[-lo:][::-1]:
                acc = acc * x + c
            if lo < 0:
                tail = mpmath.mpc(0)
                for c in coeffs[:-lo]:
                    tail = (tail + c) / x
                acc += tail
            out[i] = complex(acc)
    return _out(out.reshape(np.shape(s)))
