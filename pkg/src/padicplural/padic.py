"""Exact p-adic valuation, norm and distance on integers and rationals.

All values are exact: rationals are :class:`fractions.Fraction` and the
valuation of zero is ``math.inf``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Union

ExactRational = Union[int, Fraction]

#: Valuation of zero.
INFINITY = math.inf

# Deterministic Miller-Rabin witnesses; correct for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class NotPrime(ValueError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic primality test for n < 3.3e24 (trial division + Miller-Rabin)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=64)
def check_prime(p: int) -> int:
    """Return ``p`` unchanged if it is a prime, else raise :class:`NotPrime`."""
    if isinstance(p, bool) or not isinstance(p, int):
        raise NotPrime(f"p must be an integer, got {p!r}")
    if p >= 3.3e24:
        raise NotPrime(f"p={p} is beyond the deterministic primality range")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return p


def int_valuation(n: int, p: int) -> float | int:
    """Number of times ``p`` divides the integer ``n``; ``INFINITY`` for 0.

    ``p`` is not checked for primality here; this is the hot-loop helper.
    """
    if n == 0:
        return INFINITY
    if p == 2:
        return (n & -n).bit_length() - 1
    v = 0
    # Strip p**2**j blocks first so large valuations cost O(log v) divisions.
    if n % p == 0:
        powers = [p]
        while True:
            q, r = divmod(n, powers[-1])
            if r:
                break
            n = q
            v += 1 << (len(powers) - 1)
            powers.append(powers[-1] * powers[-1])
        for j in range(len(powers) - 2, -1, -1):
            q, r = divmod(n, powers[j])
            if not r:
                n = q
                v += 1 << j
    return v


def valuation(x: ExactRational, p: int) -> float | int:
    """p-adic valuation of an exact rational.

    For ``x = p**k * u/v`` with ``p`` dividing neither ``u`` nor ``v`` this is
    ``k``; for ``x == 0`` it is ``INFINITY``.

    >>> valuation(81, 3)
    4
    >>> valuation(Fraction(3, 8), 2)
    -3
    """
    check_prime(p)
    x = _exact(x)
    if x == 0:
        return INFINITY
    return int_valuation(x.numerator, p) - int_valuation(x.denominator, p)


def padic_norm(x: ExactRational, p: int) -> Fraction:
    """``p ** -valuation(x, p)`` as an exact rational; 0 for ``x == 0``."""
    v = valuation(x, p)
    return power_of(p, -v)


def padic_distance(a: ExactRational, b: ExactRational, p: int) -> Fraction:
    """p-adic distance ``|a - b|_p``.

    Agrees with the integer recursion ``d(r, q) = 1`` if ``p`` does not divide
    ``r - q``, else ``d(r/p, q/p) / p``, and extends it to rationals.
    """
    return padic_norm(_exact(a) - _exact(b), p)


def power_of(p: int, e: float | int) -> Fraction:
    """Exact ``p ** e`` for an integer exponent; ``p ** -inf`` is 0."""
    if e == -INFINITY:
        return Fraction(0)
    if e >= 0:
        return Fraction(p**e)
    return Fraction(1, p ** (-e))


def sum_of_inverse_powers(valuations, p: int) -> Fraction:
    """Exact ``sum(p ** -v for v in valuations)``, skipping infinite ``v``.

    Summed on a common power-of-p scale so only one Fraction is built.
    """
    finite = [v for v in valuations if v != INFINITY]
    if not finite:
        return Fraction(0)
    top = max(finite)
    if p == 2:
        num = sum(1 << (top - v) for v in finite)
    else:
        num = sum(p ** (top - v) for v in finite)
    if top >= 0:
        return Fraction(num, p**top)
    return Fraction(num * p ** (-top))


def _exact(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")
