"""Arithmetic in Z_p for the threshold layer.

Polynomial sampling with a pinned constant term, Horner evaluation,
Lagrange coefficients for interpolation at zero, and the interpolation
itself.  Everything is desk-scale exact integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random
from typing import Sequence

__all__ = [
    "PrimeModulus",
    "Polynomial",
    "SharePoint",
    "is_prime",
    "random_polynomial",
    "poly_eval",
    "lagrange_coefficients",
    "interpolate_at_zero",
]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin; the base set is exact below 3.3 * 10^24."""
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeModulus:
    p: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")


@dataclass(frozen=True)
class Polynomial:
    """Coefficients c_0..c_{t-1}, constant term first."""

    coefficients: tuple[int, ...]


@dataclass(frozen=True)
class SharePoint:
    """Evaluation point (index, value mod p); index 0 is reserved for the secret."""

    index: int
    value: int

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError("share index must be at least 1")


def random_polynomial(secret: int, t: int, p: int, rng: Random) -> Polynomial:
    """Uniform polynomial of degree exactly t - 1 with f(0) = secret.

    The leading coefficient is sampled nonzero so the degree does not drop
    (t = 1 pins the constant polynomial, where no such freedom exists).
    """
    if not 1 <= t <= p - 1:
        raise ValueError(f"threshold {t} out of range for modulus {p}")
    if not 0 <= secret < p:
        raise ValueError("secret out of range")
    coeffs = [secret]
    coeffs.extend(rng.randrange(p) for _ in range(t - 2))
    if t >= 2:
        coeffs.append(rng.randrange(1, p))
    return Polynomial(tuple(coeffs))


def poly_eval(f: Polynomial, x: int, p: int) -> int:
    acc = 0
    for c in reversed(f.coefficients):
        acc = (acc * x + c) % p
    return acc


def lagrange_coefficients(indices: Sequence[int], p: int) -> tuple[int, ...]:
    """Public weights c_i with sum_i c_i * f(i) = f(0) for deg f < len(indices).

    c_i = prod_{j != i} (-i_j) * (i - i_j)^-1 mod p.
    """
    if len(set(indices)) != len(indices):
        raise ValueError("duplicate share indices")
    if any(i % p == 0 for i in indices):
        raise ValueError("index congruent to 0 mod p")
    out = []
    for i in indices:
        num = 1
        den = 1
        for j in indices:
            if j != i:
                num = num * (-j) % p
                den = den * (i - j) % p
        out.append(num * pow(den, -1, p) % p)
    return tuple(out)


def interpolate_at_zero(points: Sequence[SharePoint], p: int) -> int:
    """Recover f(0) from evaluation points; exact whenever the points lie on
    a polynomial of degree below the point count."""
    if not points:
        raise ValueError("at least one point is required")
    coeffs = lagrange_coefficients([pt.index for pt in points], p)
    return sum(c * pt.value for c, pt in zip(coeffs, points)) % p
