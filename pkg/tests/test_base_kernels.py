import math
from fractions import Fraction

import numpy as np
import pytest

from bergman_hartogs.base_kernels import (
    alpha_floor_frac,
    base_kernel,
    constant_weight_kernel,
    disk_log_kernel,
    disk_weighted_kernel,
    log_base_kernel,
    moment_table,
    oracle_radial_kernel,
    punctured_disk_log_kernel,
)
from bergman_hartogs.errors import ConvergenceError, DomainError, SingularityError
from bergman_hartogs.weights import BaseDomain, Constant, NegLogAbs, NegLogOneMinusSq

from conftest import random_disk, rel_err

DISK, PUNCT = BaseDomain.UNIT_DISK, BaseDomain.PUNCTURED_UNIT_DISK
BETAS = [0.0, 0.5, 1.0, 3.7]
ALPHAS = [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 3), Fraction(5)]


def min_index(alpha):
    return math.floor(-alpha - 1) + 1


def test_floor_frac_examples():
    ff = alpha_floor_frac(Fraction(7, 3))
    assert (ff.floor_part, ff.frac) == (2, Fraction(1, 3))
    ff = alpha_floor_frac(Fraction(4, 2))
    assert (ff.floor_part, ff.frac_num, ff.frac_den) == (2, 0, 1)
    with pytest.raises(DomainError):
        alpha_floor_frac(0.5)


@pytest.mark.parametrize("a,b", [(2, 1), (3, 2), (5, 3), (7, 3), (1, 4)])
def test_floor_frac_on_triangle_exponents(a, b):
    # alpha = (k a + r + 1) b / a: the fractional part is (b(r+1) mod a)/a,
    # which is b(r+1)/a only while b(r+1) < a.
    for k in range(4):
        for r in range(a - 1):
            ff = alpha_floor_frac(Fraction((k * a + r + 1) * b, a))
            f_r, c_r = divmod(b * (r + 1), a)
            assert ff.floor_part == k * b + f_r
            assert ff.frac == Fraction(c_r, a)
            assert 0 <= ff.frac_num < ff.frac_den


def test_disk_weighted_examples():
    assert disk_weighted_kernel(0, 0) == pytest.approx(1 / math.pi, rel=1e-15)
    for beta in (0.3, 2.0, 5.5):
        assert disk_weighted_kernel(beta, 0) == pytest.approx((2 * beta + 1) / math.pi, rel=1e-15)
    # Weight -(2+|n|)/(2q) log(1-|z|^2) read with density exp(-phi), i.e.
    # beta = (2+|n|)/(4q) in the exp(-2 phi) convention used here.
    q, deg, s = 1.5, 2, 0.3 - 0.2j
    want = (2 + deg + 2 * q) / (2 * math.pi * q) * (1 - s) ** (-(2 + deg + 4 * q) / (2 * q))
    assert rel_err(disk_weighted_kernel((2 + deg) / (4 * q), s), want) < 1e-14


def test_punctured_examples():
    s = 0.4 + 0.3j
    assert rel_err(punctured_disk_log_kernel(1, s), 1 / (math.pi * s * (s - 1) ** 2)) < 1e-15
    want = (s / 2 + 0.5) / (s * math.pi * (s - 1) ** 2)
    assert rel_err(punctured_disk_log_kernel(Fraction(1, 2), s), want) < 1e-15
    # alpha -> 0 recovers the full-disk kernel.
    assert rel_err(punctured_disk_log_kernel(1e-12, s), 1 / (math.pi * (1 - s) ** 2)) < 1e-11
    assert rel_err(punctured_disk_log_kernel(0, s), 1 / (math.pi * (1 - s) ** 2)) < 1e-15


def test_punctured_nonpositive_alpha_matches_oracle():
    s = random_disk(np.random.default_rng(3), 0.85, 40)
    for alpha in (Fraction(-1, 2), Fraction(-1), Fraction(-2), Fraction(-5, 3)):
        lo = min_index(alpha)
        ref = sum((float(alpha) + n + 1) / math.pi * s**n for n in range(lo, lo + 600))
        got = punctured_disk_log_kernel(alpha, s)
        assert np.max(np.abs(got - ref) / np.abs(ref)) < 1e-11, alpha


def test_errors():
    with pytest.raises(DomainError):
        disk_weighted_kernel(1, 1.0)
    with pytest.raises(DomainError):
        disk_weighted_kernel(-0.5, 0.1)
    with pytest.raises(SingularityError):
        punctured_disk_log_kernel(1, 0)
    with pytest.raises(DomainError):
        punctured_disk_log_kernel(1, 0.99 + 0.5j)
    with pytest.raises(DomainError):
        disk_log_kernel(-1, 0.2)


def test_frozen_base_kernels(frozen):
    for rec in frozen["base_kernels"]:
        s = complex(*rec["s"])
        if rec["family"] == "neglog1msq":
            got = disk_weighted_kernel(float(rec["param"]), s)
        else:
            got = punctured_disk_log_kernel(Fraction(rec["param"]), s)
        assert rel_err(got, complex(*rec["value"])) < 1e-13, rec


def test_oracle_examples():
    assert oracle_radial_kernel(DISK, Constant(0.0), 0.5, 0, 200) == pytest.approx(4 / math.pi, rel=1e-12)
    o = oracle_radial_kernel(PUNCT, NegLogAbs(1), 0.4, -1, 200)
    assert rel_err(o, punctured_disk_log_kernel(1, 0.4)) < 1e-10
    o = oracle_radial_kernel(DISK, NegLogOneMinusSq(1), 0.3, 0, 200)
    assert rel_err(o, disk_weighted_kernel(1, 0.3)) < 1e-10


@pytest.mark.parametrize("beta", BETAS[:3])
def test_oracle_matches_disk_weighted(beta):
    s = random_disk(np.random.default_rng(11), 0.9, 100)
    o = oracle_radial_kernel(DISK, NegLogOneMinusSq(beta), s, 0, 900)
    c = disk_weighted_kernel(beta, s)
    assert np.max(np.abs(o - c) / np.abs(c)) <= 1e-10


@pytest.mark.parametrize("alpha", ALPHAS)
def test_oracle_matches_punctured(alpha):
    s = random_disk(np.random.default_rng(12), 0.9, 100)
    o = oracle_radial_kernel(PUNCT, NegLogAbs(alpha), s, min_index(alpha), 900)
    c = punctured_disk_log_kernel(alpha, s)
    assert np.max(np.abs(o - c) / np.abs(c)) <= 1e-10


def test_oracle_high_precision_path():
    s = np.array([-0.85 + 0.1j, 0.3 + 0.6j])
    o = oracle_radial_kernel(DISK, NegLogOneMinusSq(3.7), s, 0, 700, dps=30)
    c = disk_weighted_kernel(3.7, s)
    assert np.max(np.abs(o - c) / np.abs(c)) <= 1e-12


def test_oracle_divergent_moment():
    with pytest.raises(ConvergenceError):
        oracle_radial_kernel(PUNCT, NegLogAbs(1), 0.3, -2, 10)
    with pytest.raises(DomainError):
        oracle_radial_kernel(DISK, Constant(0.0), 0.3, -1, 10)


def test_moment_table():
    m = moment_table(NegLogAbs(2), -2, 3)
    np.testing.assert_allclose(m, [math.pi / (2 + n + 1) for n in range(-2, 4)], rtol=1e-12)


KERNELS = [
    ("disk beta=1.3", lambda s: disk_weighted_kernel(1.3, s), False),
    ("const c=-0.4", lambda s: constant_weight_kernel(-0.4, s), False),
    ("disk log alpha=2", lambda s: disk_log_kernel(2, s), False),
    ("punctured 7/3", lambda s: punctured_disk_log_kernel(Fraction(7, 3), s), True),
    ("punctured 1/2", lambda s: punctured_disk_log_kernel(Fraction(1, 2), s), True),
]


@pytest.mark.parametrize("name,k,punct", KERNELS, ids=[k[0] for k in KERNELS])
def test_hermitian_and_positive(name, k, punct, rng):
    z = random_disk(rng, 0.95, 1000)
    zeta = random_disk(rng, 0.95, 1000)
    if punct:
        z, zeta = np.where(z == 0, 0.1, z), np.where(zeta == 0, 0.1, zeta)
    s = z * np.conj(zeta)
    np.testing.assert_allclose(k(s), np.conj(k(np.conj(s))), rtol=1e-13)
    diag = k(np.abs(z) ** 2)
    assert np.all(np.abs(diag.imag) <= 1e-13 * np.abs(diag)) and np.all(diag.real > 0)


@pytest.mark.parametrize("w,base", [
    (NegLogOneMinusSq(0.7), DISK), (Constant(0.25), DISK),
    (NegLogAbs(Fraction(5, 3)), PUNCT), (NegLogAbs(Fraction(2)), DISK),
])
def test_log_kernel_consistent(w, base):
    for m in (1, 3, 40):
        for s in (0.3 + 0.2j, -0.6 - 0.1j, 0.05j):
            want = base_kernel(base, w.scaled(m), s)
            got = np.exp(log_base_kernel(base, w, m, s))
            assert rel_err(got, want) < 1e-12
