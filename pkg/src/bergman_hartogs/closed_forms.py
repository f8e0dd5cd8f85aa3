"""Explicit Bergman kernels of Hartogs domains.

Convention: every kernel is holomorphic in the first point and
conjugate-holomorphic in the second. Kernels that only depend on pairings
take ``s = z*conj(zeta)`` and ``t = w*conj(eta)`` (or ``<w, eta>`` for
ball fibres); kernels that involve holomorphic functions of ``z`` take the
points themselves.

All functions accept NumPy arrays and broadcast.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import DomainError, SingularityError
from .numerics import int_pow, principal_pow
from .weights import parse_rational

__all__ = [
    "DEFAULT_MARGIN",
    "HoloFunction",
    "bergman_dq",
    "ball_kernel",
    "dinfty_q",
    "dinfty_q_printed",
    "hartogs_triangle",
    "hartogs_triangle_printed",
    "mero_hartogs_rel1",
    "mero_hartogs_rel2",
    "twisted_triangle",
    "transform_kernel",
]

# Pairings are kept below this fraction of their singular value by the samplers.
DEFAULT_MARGIN = 0.95

_TINY = 1e-300
PI = math.pi


def _c(x):
    return np.asarray(x, dtype=complex)


def _out(x):
    return complex(x) if np.ndim(x) == 0 else x


def _nonsingular(den, what: str):
    if np.any(np.abs(den) < _TINY) or not np.all(np.isfinite(den)):
        raise SingularityError(f"{what}: denominator vanishes")
    return den


@dataclass(frozen=True)
class HoloFunction:
    """A polynomial ``f(z) = sum_k coeffs[k] z**k`` (ascending coefficients)."""

    coeffs: tuple
    kind: str = "polynomial"

    def __post_init__(self):
        c = tuple(complex(x) for x in self.coeffs)
        if not c or all(x == 0 for x in c):
            raise DomainError("holomorphic function must not vanish identically")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def one(cls) -> "HoloFunction":
        return cls((1,), "one")

    @classmethod
    def monomial(cls, k: int) -> "HoloFunction":
        if k < 0:
            raise DomainError(f"monomial degree must be >= 0, got {k}")
        return cls((0,) * k + (1,), "monomial" if k else "one")

    @classmethod
    def polynomial(cls, coeffs) -> "HoloFunction":
        return cls(tuple(coeffs), "polynomial")

    @property
    def degree(self) -> int:
        nz = [i for i, c in enumerate(self.coeffs) if c != 0]
        return nz[-1]

    def monomial_degree(self) -> int | None:
        """``k`` if this is exactly ``z**k``, else ``None``."""
        nz = [i for i, c in enumerate(self.coeffs) if c != 0]
        if len(nz) == 1 and self.coeffs[nz[0]] == 1:
            return nz[0]
        return None

    def roots(self) -> np.ndarray:
        return np.roots(self.coeffs[: self.degree + 1][::-1])

    def __call__(self, z):
        z = _c(z)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return _out(acc)

    def to_json(self) -> dict:
        return {"kind": self.kind, "coeffs": [[c.real, c.imag] for c in self.coeffs]}


def ball_kernel(N: int, pairing):
    """Kernel of the unit ball in ``C^N``: ``N! / (pi^N (1 - <z, w>)^(N+1))``."""
    x = _c(pairing)
    den = _nonsingular(PI**N * int_pow(1 - x, N + 1), "ball kernel")
    return _out(math.factorial(N) / den)


def bergman_dq(q: float, s, t):
    """Kernel of ``D_q = {|z|^2 + |w|^(2q) < 1}`` in ``C^2``.

    ::

        ((q-1) t - (q+1) Y) / (q pi^2 (1-s)^((2q-1)/q) (t - Y)^3),   Y = (1-s)^(1/q)

    ``q = 1`` is the unit ball.
    """
    q = float(q)
    if not q > 0:
        raise DomainError(f"q must be > 0, got {q}")
    s, t = _c(s), _c(t)
    if np.any(np.abs(s) >= 1):
        raise DomainError("need |s| < 1")
    y = principal_pow(1 - s, 1 / q)
    den = _nonsingular(q * PI**2 * principal_pow(1 - s, (2 * q - 1) / q) * (t - y) ** 3, "D_q kernel")
    return _out(((q - 1) * t - (q + 1) * y) / den)


def dinfty_q(q: float, s, t1, t2):
    """Kernel of ``D^inf_q = {(z, w) in C x C^2 : |z|^2 + ||w||_inf^(2q) < 1}``.

    Closed form of the polydisc-fibre series with ``x = t1/X``, ``y = t2/X``,
    ``X = (1-s)^(1/q)``::

        (1-s)^-(2+2/q) (2x(1-y) + 2y(1-x) + (q+2)(1-x)(1-y))
        ---------------------------------------------------
                     q pi^3 (1-x)^3 (1-y)^3

    which is symmetric in ``t1, t2``. The older closed form kept in
    :func:`dinfty_q_printed` is not proportional to this one away from
    ``t = 0``.
    """
    q = float(q)
    if not q > 0:
        raise DomainError(f"q must be > 0, got {q}")
    s, t1, t2 = _c(s), _c(t1), _c(t2)
    if np.any(np.abs(s) >= 1):
        raise DomainError("need |s| < 1")
    big_x = principal_pow(1 - s, 1 / q)
    x, y = t1 / big_x, t2 / big_x
    num = 2 * x * (1 - y) + 2 * y * (1 - x) + (q + 2) * (1 - x) * (1 - y)
    den = _nonsingular(q * PI**3 * (1 - x) ** 3 * (1 - y) ** 3, "D^inf_q kernel")
    return _out(principal_pow(1 - s, -(2 + 2 / q)) * num / den)


def dinfty_q_printed(q: float, s, t1, t2):
    """A previously published ``D^inf_q`` closed form, transcribed literally.

    Kept only so the discrepancy with :func:`dinfty_q` can be measured; it is
    not the Bergman kernel of ``D^inf_q``.
    """
    q = float(q)
    s, t1, t2 = _c(s), _c(t1), _c(t2)
    x = principal_pow(1 - s, 1 / (2 * q))
    pre = 1 / _nonsingular(2 * PI * q * principal_pow(1 - s, 2 + 1 / q) * (t1 - x) ** 3, "printed D^inf_q")
    d2 = _nonsingular((t2 - x) ** 3, "printed D^inf_q")
    first = (t2 * (2 * q - 2) * principal_pow(1 - s, 3 / (2 * q)) - 2 * q * principal_pow(1 - s, 2 / q)) / d2
    second = (2 * q * t2 * principal_pow(1 - s, 5 / (2 * q)) - (2 * q + 2) * principal_pow(1 - s, 3 / q)) / d2
    return _out(pre * (t1 * first - second))


def _triangle_setup(q, s, t):
    q = parse_rational(q)
    if q <= 0:
        raise DomainError(f"q must be positive, got {q}")
    s, t = _c(s), _c(t)
    if np.any(s == 0):
        raise SingularityError("H_q kernel is singular at s = 0")
    if np.any(np.abs(s) >= 1):
        raise DomainError("need 0 < |s| < 1")
    return q.numerator, q.denominator, s, t


def _triangle_residual(a, b, s, t, sb, ta, gap):
    # Degrees n with a | n+1: the weight exponent is an integer there.
    return a * int_pow(t, a - 1) * sb / (PI**2 * int_pow(s - 1, 2) * gap**2)


def hartogs_triangle(q, s, t):
    """Kernel of ``H_q = {|w|^q < |z| < 1}`` for rational ``q = a/b`` in lowest terms.

    Splitting the degrees as ``n = k*a + r`` gives, for each residue
    ``r = 0 .. a-2``, the exponent ``alpha = k*b + b(r+1)/a`` with
    ``f_r = b(r+1) div a`` and ``c_r = b(r+1) mod a``, so::

        ((a - c_r) s + c_r) t^r          a t^a s^b + (1+r) s^b (s^b - t^a)
        ---------------------------  *  ---------------------------------
        a pi^2 s^(f_r+1) (s-1)^2                 (s^b - t^a)^2

    plus the residual term from ``a | n+1``. Only integer powers appear,
    so there are no branch choices. With ``a == 1`` the sum is empty.
    """
    a, b, s, t = _triangle_setup(q, s, t)
    sb = int_pow(s, b)
    ta = int_pow(t, a)
    gap = _nonsingular(sb - ta, "H_q kernel")
    total = _triangle_residual(a, b, s, t, sb, ta, gap)
    if a >= 2:
        base_den = a * PI**2 * int_pow(s - 1, 2) * gap**2
        tr = np.ones_like(t)
        for r in range(a - 1):
            f_r, c_r = divmod(b * (r + 1), a)
            lead = ((a - c_r) * s + c_r) * tr / int_pow(s, f_r + 1)
            tail = a * ta * sb + (1 + r) * sb * gap
            total = total + lead * tail / base_den
            tr = tr * t
    return _out(total)


def hartogs_triangle_printed(q, s, t):
    """A previously published ``H_q`` closed form, transcribed literally.

    It takes ``floor(alpha) = k*b`` and ``frac(alpha) = b(r+1)/a`` for every
    residue, which only holds when ``b(r+1) < a``. It therefore agrees with
    :func:`hartogs_triangle` for integer ``q`` and for ``q = 1/k`` but not,
    for example, for ``q = 3/2``.
    """
    a, b, s, t = _triangle_setup(q, s, t)
    sb = int_pow(s, b)
    ta = int_pow(t, a)
    gap = _nonsingular(sb - ta, "H_q kernel")
    total = _triangle_residual(a, b, s, t, sb, ta, gap)
    if a >= 2:
        lead_den = a * PI**2 * s * int_pow(s - 1, 2)
        tr = np.ones_like(t)
        for r in range(a - 1):
            br = b * (r + 1)
            lead = ((a - br) * s + br) * tr / lead_den
            tail = (a * ta * sb + (1 + r) * sb * gap) / gap**2
            total = total + lead * tail
            tr = tr * t
    return _out(total)


def _points(z, zeta):
    z, zeta = _c(z), _c(zeta)
    return z, zeta, np.conj(zeta)


def mero_hartogs_rel1(f: HoloFunction, g: HoloFunction, N: int, weighted_kernel: Callable, z, zeta, t):
    """Kernel of ``{(z, w) in G x C^N : ||w f(z)|| < |g(z)|}`` from ``K_{G, log|f/g|}``.

    ``weighted_kernel(z, zeta)`` must evaluate the base kernel with weight
    ``log|f/g|``; ``t = <w, eta>``.
    """
    z, zeta, zb = _points(z, zeta)
    t = _c(t)
    fz, fw = f(z), np.conj(f(zeta))
    gz, gw = g(z), np.conj(g(zeta))
    den = _nonsingular(PI**N * int_pow(gz * gw - t * fz * fw, N + 1), "rel1 kernel")
    num = math.factorial(N) * int_pow(fz * fw, N - 1) * int_pow(gz * gw, 2) * weighted_kernel(z, zeta)
    return _out(num / den)


def mero_hartogs_rel2(f: HoloFunction, g: HoloFunction, N: int, base_kernel: Callable, z, zeta, t):
    """Same domain as :func:`mero_hartogs_rel1`, from the unweighted ``K_G``.

    ::

        N! f(z)^N g(z) K_G(z, zeta) conj(f(zeta)^N g(zeta))
        ----------------------------------------------------
        pi^N (g(z) conj(g(zeta)) - t f(z) conj(f(zeta)))^(N+1)

    The factor ``f(z)^N`` makes the kernel vanish over the zeros of ``f``.
    """
    z, zeta, zb = _points(z, zeta)
    t = _c(t)
    fz, fw = f(z), np.conj(f(zeta))
    gz, gw = g(z), np.conj(g(zeta))
    den = _nonsingular(PI**N * int_pow(gz * gw - t * fz * fw, N + 1), "rel2 kernel")
    num = math.factorial(N) * int_pow(fz * fw, N) * gz * gw * base_kernel(z, zeta)
    return _out(num / den)


def twisted_triangle(f: HoloFunction, k: int, N: int, z, zeta, t):
    """Kernel of ``{(z, w) in D* x C^N : ||w f(z)||^(1/k) < |z| < 1}``.

    The case ``g = z^k`` of :func:`mero_hartogs_rel2`, with the disk kernel
    written out (the punctured disk has the same unweighted kernel).
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    z, zeta, zb = _points(z, zeta)
    if np.any(z == 0) or np.any(zeta == 0):
        raise DomainError("points must lie in the punctured disk")
    t = _c(t)
    s = z * zb
    fz, fw = f(z), np.conj(f(zeta))
    sk = int_pow(s, k)
    den = _nonsingular(
        PI ** (N + 1) * int_pow(sk - t * fz * fw, N + 1) * int_pow(1 - s, 2), "twisted triangle kernel"
    )
    return _out(math.factorial(N) * sk * int_pow(fz * fw, N) / den)


def transform_kernel(f: HoloFunction, g: HoloFunction, kernel_phi2: Callable, z, zeta):
    """``K_{phi1}`` from ``K_{phi2}`` when ``phi1 - phi2 = log|f| - log|g|``.

    Multiplication by ``f/g`` is an isometry between the two weighted
    spaces, so ``K_{phi1}(z, zeta) = (f/g)(z) K_{phi2}(z, zeta) conj((f/g)(zeta))``.
    """
    z, zeta, zb = _points(z, zeta)
    gz, gw = g(z), g(zeta)
    if np.any(np.abs(gz) < _TINY) or np.any(np.abs(gw) < _TINY):
        raise SingularityError("g vanishes at an evaluation point")
    return _out(f(z) / gz * kernel_phi2(z, zeta) * np.conj(f(zeta) / gw))
