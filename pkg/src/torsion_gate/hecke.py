"""Hecke operators T_n on Manin symbols via Merel's matrix-sum formula.

T_n sends a symbol (x,y) to the sum of the right translates
(x,y).[[a,b],[c,d]] over all integer matrices with

    a > b >= 0,   d > c >= 0,   ad - bc = n,

omitting any translate whose reduction mod N fails gcd(x',y',N) = 1
(Merel, "Universal Fourier expansions of modular forms", Prop. 20).
The distinguished symbol (0,1) is the class of the modular symbol
{0, oo}; the vectors T_1(0,1), ..., T_{2d}(0,1) feed the Kamienny-style
independence test.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from .exactmath import gcd, is_prime
from .maninspace import (
    FreeVector,
    ManinSymbol,
    SymbolSpace,
    p1_normalize,
    quotient_rank_mod_p,
)

__all__ = [
    "MerelMatrix",
    "criterion_vectors",
    "generic_winding_expansion",
    "hecke_action",
    "hecke_action_vector",
    "independence_mod_p",
    "merel_matrices",
    "winding_symbol",
]


class MerelMatrix(NamedTuple):
    a: int
    b: int
    c: int
    d: int

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c


@lru_cache(maxsize=None)
def merel_matrices(n: int) -> tuple[MerelMatrix, ...]:
    """All matrices with a > b >= 0, d > c >= 0, ad - bc = n, sorted.

    Enumeration: for each (a, d) with ad >= n, let r = ad - n and emit
    every (b, c) with 0 <= b < a, 0 <= c < d, bc = r.  Any solution with
    r > 0 forces a + d <= n + 1, and r = 0 forces ad = n, so a, d <= n.
    """
    if n < 1:
        raise ValueError("Hecke index must be positive")
    out = []
    for a in range(1, n + 1):
        for d in range(max(1, -(-n // a)), n + 1):
            r = a * d - n
            if r == 0:
                out.extend(MerelMatrix(a, 0, c, d) for c in range(d))
                out.extend(MerelMatrix(a, b, 0, d) for b in range(1, a))
            else:
                for b in range(1, a):
                    if r % b == 0 and r // b < d:
                        out.append(MerelMatrix(a, b, r // b, d))
    out.sort()
    for m in out:
        assert m.a > m.b >= 0 and m.d > m.c >= 0 and m.det == n
    return tuple(out)


def winding_symbol(N: int) -> ManinSymbol:
    """The Manin symbol of the modular symbol {0, oo} at level N."""
    return p1_normalize(N, 0, 1)


def hecke_action(space: SymbolSpace, n: int, x: ManinSymbol) -> FreeVector:
    """T_n applied to one canonical symbol, as a canonical FreeVector."""
    N = space.N
    if x not in space.gen_index:
        raise ValueError(f"{x} is not a canonical symbol at level {N}")
    acc: dict[ManinSymbol, int] = {}
    for m in merel_matrices(n):
        up = (x.u * m.a + x.v * m.c) % N
        vp = (x.u * m.b + x.v * m.d) % N
        if gcd(gcd(up, vp), N) != 1:
            continue  # omission rule: translate left P^1(Z/NZ)
        sym = p1_normalize(N, up, vp)
        acc[sym] = acc.get(sym, 0) + 1
    return FreeVector(acc)


def hecke_action_vector(space: SymbolSpace, n: int, vec: FreeVector) -> FreeVector:
    """Linear extension of ``hecke_action`` to sparse vectors."""
    out = FreeVector()
    for sym, c in vec:
        out = out + c * hecke_action(space, n, sym)
    return out


def generic_winding_expansion(N: int, n: int) -> tuple[tuple[tuple[int, int], int], ...]:
    """T_n(0,1) as raw translates mod N: ((x', y'), coefficient) pairs.

    No P^1 canonicalization is applied, only reduction mod N and the
    omission rule, so for small n this reproduces the level-independent
    displayed expansions.  Sorted by raw pair.
    """
    acc: dict[tuple[int, int], int] = {}
    for m in merel_matrices(n):
        pair = (m.c % N, m.d % N)  # (0,1).[[a,b],[c,d]] = (c, d)
        if gcd(gcd(pair[0], pair[1]), N) != 1:
            continue
        acc[pair] = acc.get(pair, 0) + 1
    return tuple(sorted(acc.items()))


def criterion_vectors(space: SymbolSpace, d: int) -> list[FreeVector]:
    """The 2d vectors T_1(0,1), ..., T_{2d}(0,1) at the space's level."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    e = winding_symbol(space.N)
    return [hecke_action(space, i, e) for i in range(1, 2 * d + 1)]


def independence_mod_p(space: SymbolSpace, d: int, p: int) -> bool:
    """Whether T_1(0,1), ..., T_{2d}(0,1) are independent in the quotient mod p.

    True iff their span in (quotient tensor F_p) has full dimension 2d.
    Requires p an odd prime not dividing the level.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if space.N % p == 0:
        raise ValueError(f"p = {p} divides the level N = {space.N}")
    return quotient_rank_mod_p(space, criterion_vectors(space, d), p) == 2 * d
