"""Arithmetic in the prime field F_p.

Coefficients are plain Python ints kept in ``[0, p)``; the functions here
supply the few operations that are not a one-liner at the call site.
"""

DEFAULT_MODULUS = 32003

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for every 64-bit integer."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


def validate_modulus(p: int) -> int:
    if p < 3 or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p}")
    return p


def ff_inv(a: int, p: int) -> int:
    """Multiplicative inverse of ``a`` in F_p."""
    a %= p
    if a == 0:
        raise ZeroDivisionError("division by zero in F_p")
    return pow(a, p - 2, p)
