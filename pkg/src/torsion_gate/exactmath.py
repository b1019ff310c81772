"""Exact integer and small-finite-field arithmetic.

Everything in this package is integer-exact: Python's arbitrary-precision
ints everywhere, no floating point.  ``isqrt`` (re-exported from ``math``)
is the only square-root primitive; inequality gates involving square roots
are decided by squaring, never by ``float``.

Finite fields F_{p^n} are realized in a polynomial basis over an
irreducibility-checked modulus; elements are packed base-p digit strings,
i.e. integer indices in ``range(q)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt  # noqa: F401  re-exported: isqrt is exact for ints

__all__ = [
    "Factorization",
    "FiniteField",
    "PrimePower",
    "divisors",
    "euler_phi",
    "factorize",
    "field_make",
    "gcd",
    "is_prime",
    "isqrt",
    "primes_up_to",
]


def is_prime(n: int) -> bool:
    """Trial-division primality test (all inputs in this package are small)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_up_to(limit: int) -> list[int]:
    """All primes <= limit, by sieve."""
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for k in range(2, isqrt(limit) + 1):
        if sieve[k]:
            sieve[k * k :: k] = bytearray(len(sieve[k * k :: k]))
    return [k for k in range(limit + 1) if sieve[k]]


@dataclass(frozen=True)
class Factorization:
    """Ordered prime factorization: ((q_1, e_1), ..., (q_n, e_n)), q_j increasing."""

    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        primes = [q for q, _ in self.factors]
        if primes != sorted(primes) or len(set(primes)) != len(primes):
            raise ValueError("factors must be strictly increasing primes")
        if any(e < 1 for _, e in self.factors) or not all(is_prime(q) for q in primes):
            raise ValueError("invalid factorization")

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def value(self) -> int:
        out = 1
        for q, e in self.factors:
            out *= q**e
        return out

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(q for q, _ in self.factors)

    @property
    def prime_powers(self) -> tuple[int, ...]:
        """The maximal prime-power divisors q_j^{e_j}."""
        return tuple(q**e for q, e in self.factors)

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)


def factorize(n: int) -> Factorization:
    """Trial-division factorization; factorize(1) is the empty product."""
    if n < 1:
        raise ValueError(f"cannot factor {n}: need a positive integer")
    out = []
    m = n
    f = 2
    while f * f <= m:
        if m % f == 0:
            e = 0
            while m % f == 0:
                m //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if m > 1:
        out.append((m, 1))
    return Factorization(tuple(out))


def divisors(n: int) -> list[int]:
    """Sorted positive divisors of n."""
    out = [1]
    for q, e in factorize(n):
        out = [d * q**k for d in out for k in range(e + 1)]
    return sorted(out)


def euler_phi(n: int) -> int:
    out = n
    for q, _ in factorize(n):
        out = out // q * (q - 1)
    return out


@dataclass(frozen=True)
class PrimePower:
    """q = p^n with p prime (checked) and n >= 1."""

    p: int
    n: int

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.n < 1:
            raise ValueError("exponent must be >= 1")

    @property
    def q(self) -> int:
        return self.p**self.n

    def __str__(self) -> str:
        return str(self.q) if self.n == 1 else f"{self.p}^{self.n}"


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over F_p (little-endian coefficient tuples)
# ---------------------------------------------------------------------------


def _ptrim(a: tuple[int, ...]) -> tuple[int, ...]:
    k = len(a)
    while k > 0 and a[k - 1] == 0:
        k -= 1
    return a[:k]


def _pmul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(tuple(out))


def _pmod(a: tuple[int, ...], f: tuple[int, ...], p: int) -> tuple[int, ...]:
    # f must be monic
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _ptrim(tuple(a))


def _pgcd(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    while b:
        inv = pow(b[-1], -1, p)
        bm = tuple(c * inv % p for c in b)  # make monic so _pmod applies
        a, b = b, _pmod(a, bm, p)
    return a


def _ppow_xq(f: tuple[int, ...], p: int, k: int) -> tuple[int, ...]:
    """x^(p^k) mod f, by k successive p-th powers."""
    t = _pmod((0, 1), f, p)
    for _ in range(k):
        acc: tuple[int, ...] = (1,)
        base = t
        e = p
        while e:
            if e & 1:
                acc = _pmod(_pmul(acc, base, p), f, p)
            base = _pmod(_pmul(base, base, p), f, p)
            e >>= 1
        t = acc
    return t


def _is_irreducible(f: tuple[int, ...], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    n = len(f) - 1
    if n < 1:
        return False
    x = _pmod((0, 1), f, p)
    if _ptrim(tuple((a - b) % p for a, b in _zip_pad(_ppow_xq(f, p, n), x))):
        return False
    for r in factorize(n).primes:
        h = tuple((a - b) % p for a, b in _zip_pad(_ppow_xq(f, p, n // r), x))
        if len(_pgcd(f, _ptrim(h), p)) > 1:
            return False
    return True


def _zip_pad(a: tuple[int, ...], b: tuple[int, ...]):
    m = max(len(a), len(b))
    return zip(a + (0,) * (m - len(a)), b + (0,) * (m - len(b)))


# Fixed default moduli keep brute-force outputs bit-reproducible.
_DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (3, 2): (1, 0, 1),  # x^2 + 1      (-1 is a nonsquare mod 3)
    (3, 3): (2, 2, 0, 1),  # x^3 - x - 1  (no roots in F_3)
}


def _default_modulus(p: int, n: int) -> tuple[int, ...]:
    if n == 1:
        return (0, 1)
    pinned = _DEFAULT_MODULI.get((p, n))
    if pinned is not None:
        return pinned
    # first monic irreducible in lexicographic coefficient order
    def _next(c: list[int]) -> bool:
        for i in range(len(c) - 1, -1, -1):
            c[i] += 1
            if c[i] < p:
                return True
            c[i] = 0
        return False

    c = [0] * n
    while True:
        f = tuple(c) + (1,)
        if _is_irreducible(f, p):
            return f
        if not _next(c):
            raise RuntimeError("no irreducible modulus found")  # unreachable


class FiniteField:
    """F_{p^n} in the polynomial basis F_p[x]/(modulus).

    Elements are integer indices 0..q-1: index sum(c_i * p^i) stands for
    the coset c_0 + c_1*x + ... + c_{n-1}*x^{n-1}.  Prime-subfield
    constants therefore embed as themselves.  Instances are immutable and
    safe to share across threads.
    """

    def __init__(self, pp: PrimePower, modulus: tuple[int, ...] | None = None):
        p, n = pp.p, pp.n
        if p == 2 and n > 1:
            raise ValueError("characteristic-2 extensions are not supported")
        if modulus is None:
            modulus = _default_modulus(p, n)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != n + 1 or modulus[n] != 1:
            raise ValueError(f"modulus must be monic of degree {n}")
        if n >= 1 and not _is_irreducible(modulus, p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.prime_power = pp
        self.p = p
        self.n = n
        self.q = pp.q
        self.modulus = modulus

    # --- element codec ---

    def coeffs(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.n):
            a, r = divmod(a, p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        p = self.p
        cs = [c % p for c in coeffs]
        if len(cs) > self.n:
            cs = list(_pmod(tuple(cs), self.modulus, p))
        out = 0
        for c in reversed(cs):
            out = out * p + c
        return out

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def elements(self) -> range:
        return range(self.q)

    # --- arithmetic ---

    def add(self, a: int, b: int) -> int:
        p = self.p
        out = 0
        shift = 1
        for _ in range(self.n):
            out += (a % p + b % p) % p * shift
            a //= p
            b //= p
            shift *= p
        return out

    def neg(self, a: int) -> int:
        p = self.p
        out = 0
        shift = 1
        for _ in range(self.n):
            out += (-(a % p)) % p * shift
            a //= p
            shift *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        prod = _pmod(_pmul(self.coeffs(a), self.coeffs(b), self.p), self.modulus, self.p)
        return self.from_coeffs(prod)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = self.one
        base = a
        while e:
            if e & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            e >>= 1
        return acc

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.q - 2)

    def quadratic_character(self, a: int) -> int:
        """Quadratic character of F_q: 0 at 0, +1 on nonzero squares, -1 otherwise."""
        if self.p == 2:
            raise ValueError("quadratic character needs odd characteristic")
        if a == 0:
            return 0
        c = self.pow(a, (self.q - 1) // 2)
        if c == self.one:
            return 1
        assert c == self.from_coeffs((self.p - 1,)), "x^((q-1)/2) must be +-1"
        return -1


def field_make(pp: PrimePower, modulus: tuple[int, ...] | None = None) -> FiniteField:
    """Construct F_q for q = p^n, verifying the modulus is irreducible."""
    return FiniteField(pp, modulus)
