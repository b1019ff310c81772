"""Manin-symbol presentation of the weight-2 relative homology of X_0(N).

The free Z-module on P^1(Z/NZ), modulo the two-term relations x + x.sigma
and the three-term relations x + x.tau + x.tau^2, presents
H_1(X_0(N), cusps; Z).  Symbols act on the right:
(u,v).[[a,b],[c,d]] = (ua+vc, ub+vd), with sigma = [[0,-1],[1,0]] and
tau = [[0,-1],[1,-1]].

Ranks are computed exactly: over Q by fraction-free (Bareiss) elimination
on arbitrary-precision integers, over F_p by dense elimination mod p.
Linear independence in the quotient is always phrased as an augmented-rank
difference, never through an extracted basis, so no choice of generators
for the quotient ever enters.

P^1 normalization follows the divisor-canonical scheme (Stein's
"Modular Forms: A Computational Approach", Algorithm 8.29): the canonical
representative of a class is its lexicographically least member, which has
first coordinate gcd(u, N).
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple

from .exactmath import divisors, euler_phi, factorize, gcd, is_prime

__all__ = [
    "FreeVector",
    "ManinSymbol",
    "SIGMA",
    "SymbolSpace",
    "TAU",
    "build_space",
    "cusp_count_x0",
    "genus_x0",
    "index_x0",
    "p1_list",
    "p1_normalize",
    "quotient_rank_mod_p",
    "quotient_rank_q",
    "render_terms",
    "right_translate",
    "space_load",
    "space_save",
]


class ManinSymbol(NamedTuple):
    """A canonical representative (u, v) of a class of P^1(Z/NZ)."""

    u: int
    v: int

    def __str__(self) -> str:
        return f"({self.u},{self.v})"


SIGMA = ((0, -1), (1, 0))
TAU = ((0, -1), (1, -1))


def right_translate(N: int, u: int, v: int, m) -> tuple[int, int]:
    """(u,v).m reduced mod N, *not* canonicalized."""
    (a, b), (c, d) = m
    return ((u * a + v * c) % N, (u * b + v * d) % N)


def _lift_unit(N: int, d: int, a: int) -> int:
    """Lift a unit a mod d (d | N) to a congruent unit mod N."""
    if d == 1:
        return 1
    a %= d
    for x in range(a, N, d):
        if gcd(x, N) == 1:
            return x
    raise AssertionError("unit lift must exist")


def p1_normalize(N: int, u: int, v: int) -> ManinSymbol:
    """Canonical representative of the class [u : v] in P^1(Z/NZ).

    Two pairs normalize equal iff they differ by a unit scalar mod N.
    Raises ValueError unless gcd(u, v, N) = 1.
    """
    if N < 1:
        raise ValueError("level must be positive")
    if N == 1:
        return ManinSymbol(0, 0)
    u %= N
    v %= N
    if gcd(gcd(u, v), N) != 1:
        raise ValueError(f"({u},{v}) is not a point of P^1(Z/{N}Z)")
    g = gcd(u, N)
    if g == N:  # u = 0: the class of (0,1)
        return ManinSymbol(0, 1)
    # scale by a unit s with s*u = g (mod N)
    m = N // g
    s = _lift_unit(N, m, pow(u // g, -1, m))
    v0 = s * v % N
    if g == 1:
        return ManinSymbol(1, v0)
    # the scalars fixing the first coordinate are the units t = 1 (mod N/g);
    # pick the least second coordinate over that stabilizer
    best = v0
    for t in range(1 + m, N, m):
        if gcd(t, N) == 1:
            w = t * v0 % N
            if w < best:
                best = w
    return ManinSymbol(g, best)


def p1_list(N: int) -> tuple[ManinSymbol, ...]:
    """All canonical representatives of P^1(Z/NZ), sorted; length psi(N)."""
    if N < 1:
        raise ValueError("level must be positive")
    if N == 1:
        return (ManinSymbol(0, 0),)
    seen = set()
    # every class has a representative whose first coordinate divides N
    for g in divisors(N):
        u = g % N
        for v in range(N):
            if gcd(gcd(u, v), N) == 1:
                seen.add(p1_normalize(N, u, v))
    return tuple(sorted(seen))


# ---------------------------------------------------------------------------
# classical Gamma_0(N) formulas (used as independent consistency checks)
# ---------------------------------------------------------------------------


def index_x0(N: int) -> int:
    """Index psi(N) = N * prod_{p | N} (1 + 1/p) of Gamma_0(N) in PSL_2(Z)."""
    out = N
    for p, _ in factorize(N):
        out = out // p * (p + 1)
    return out


def _nu2(N: int) -> int:
    if N % 4 == 0:
        return 0
    out = 1
    for p, _ in factorize(N):
        if p == 2:
            continue
        out *= 1 + (1 if p % 4 == 1 else -1)
    return out


def _nu3(N: int) -> int:
    if N % 9 == 0:
        return 0
    out = 1
    for p, _ in factorize(N):
        if p == 3:
            continue
        out *= 1 + (1 if p % 3 == 1 else -1)
    return out


def cusp_count_x0(N: int) -> int:
    """Number of cusps of X_0(N): sum over d | N of phi(gcd(d, N/d))."""
    return sum(euler_phi(gcd(d, N // d)) for d in divisors(N))


def genus_x0(N: int) -> int:
    """Genus of X_0(N) via g = 1 + mu/12 - nu2/4 - nu3/3 - nuinf/2, exactly."""
    twelve_g = 12 + index_x0(N) - 3 * _nu2(N) - 4 * _nu3(N) - 6 * cusp_count_x0(N)
    assert twelve_g % 12 == 0, f"genus formula must be integral at N={N}"
    g = twelve_g // 12
    assert g >= 0
    return g


# ---------------------------------------------------------------------------
# sparse integer vectors over the symbol generators
# ---------------------------------------------------------------------------


class FreeVector:
    """Sparse integer combination of canonical Manin symbols.

    Zero coefficients are never stored; keys are expected to be canonical
    at one fixed level (enforced where a vector meets a SymbolSpace).
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[ManinSymbol, int] | Iterable[tuple[ManinSymbol, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[ManinSymbol, int] = {}
        for sym, c in items:
            c = acc.get(sym, 0) + c
            if c:
                acc[sym] = c
            else:
                acc.pop(sym, None)
        self._coeffs = acc

    def coefficient(self, sym: ManinSymbol) -> int:
        return self._coeffs.get(sym, 0)

    def terms(self) -> tuple[tuple[ManinSymbol, int], ...]:
        return tuple(sorted(self._coeffs.items()))

    def __iter__(self):
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._coeffs)

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    def __eq__(self, other) -> bool:
        return isinstance(other, FreeVector) and self._coeffs == other._coeffs

    def __add__(self, other: "FreeVector") -> "FreeVector":
        out = dict(self._coeffs)
        for sym, c in other._coeffs.items():
            s = out.get(sym, 0) + c
            if s:
                out[sym] = s
            else:
                out.pop(sym, None)
        return FreeVector(out)

    def __sub__(self, other: "FreeVector") -> "FreeVector":
        return self + (-1) * other

    def __mul__(self, k: int) -> "FreeVector":
        if k == 0:
            return FreeVector()
        return FreeVector({sym: k * c for sym, c in self._coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "FreeVector":
        return (-1) * self

    def __repr__(self) -> str:
        return f"FreeVector({self})"

    def __str__(self) -> str:
        return render_terms(self.terms())


def render_terms(terms) -> str:
    """Compact rendering like ``2(0,1)+(1,2)-(1,0)``; terms must be presorted."""
    if not terms:
        return "0"
    parts = []
    for sym, c in terms:
        mag = "" if abs(c) == 1 else str(abs(c))
        body = f"{mag}({sym[0]},{sym[1]})"
        if not parts:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append(("-" if c < 0 else "+") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# the symbol space and its relation matrix
# ---------------------------------------------------------------------------


class SymbolSpace:
    """Level, ordered P^1 generators, and the sigma/tau relation rows.

    Rows are emitted for *every* generator (duplicates from sigma/tau
    orbits included); rank computations dedupe internally.  Instances are
    immutable after construction, so concurrent rank queries are safe.
    """

    def __init__(self, N: int, gens: tuple[ManinSymbol, ...], rows: tuple[tuple[tuple[int, int], ...], ...]):
        self.N = N
        self.gens = gens
        self.gen_index = {s: i for i, s in enumerate(gens)}
        self.relation_rows = rows
        self._rank_q: int | None = None
        self._rank_p: dict[int, int] = {}

    @property
    def psi(self) -> int:
        return len(self.gens)

    def _distinct_rows(self) -> list[tuple[tuple[int, int], ...]]:
        return list(dict.fromkeys(self.relation_rows))

    def _dense_rows(self, extra: Iterable[FreeVector] = ()) -> list[list[int]]:
        ncols = self.psi
        out = []
        for row in self._distinct_rows():
            dense = [0] * ncols
            for col, c in row:
                dense[col] = c
            out.append(dense)
        for vec in extra:
            dense = [0] * ncols
            for sym, c in vec:
                idx = self.gen_index.get(sym)
                if idx is None:
                    raise ValueError(f"symbol {sym} is not canonical at level {self.N}")
                dense[idx] = c
            out.append(dense)
        return out

    @property
    def rank_q(self) -> int:
        """Rank of the relation matrix over Q (computed once, then cached)."""
        if self._rank_q is None:
            self._rank_q = bareiss_rank(self._dense_rows())
        return self._rank_q

    @property
    def quotient_rank(self) -> int:
        """dim over Q of the quotient, i.e. of H_1(X_0(N), cusps) tensor Q."""
        return self.psi - self.rank_q

    def rank_mod_p(self, p: int) -> int:
        if p not in self._rank_p:
            self._rank_p[p] = rank_mod_p(self._dense_rows(), p)
        return self._rank_p[p]


def build_space(N: int) -> SymbolSpace:
    """Assemble the generators and all sigma- and tau-relation rows at level N."""
    gens = p1_list(N)
    assert len(gens) == index_x0(N), f"P^1(Z/{N}) enumeration does not match psi"
    index = {s: i for i, s in enumerate(gens)}

    def normalized(sym: ManinSymbol, m) -> int:
        return index[p1_normalize(N, *right_translate(N, sym.u, sym.v, m))]

    rows = []
    for sym in gens:
        i = index[sym]
        acc: dict[int, int] = {i: 1}
        j = normalized(sym, SIGMA)
        acc[j] = acc.get(j, 0) + 1
        rows.append(tuple(sorted(acc.items())))

        acc = {i: 1}
        t = p1_normalize(N, *right_translate(N, sym.u, sym.v, TAU))
        j = index[t]
        acc[j] = acc.get(j, 0) + 1
        k = normalized(t, TAU)
        acc[k] = acc.get(k, 0) + 1
        rows.append(tuple(sorted(acc.items())))
    return SymbolSpace(N, gens, tuple(rows))


# ---------------------------------------------------------------------------
# exact rank computations
# ---------------------------------------------------------------------------


def bareiss_rank(rows: list[list[int]]) -> int:
    """Rank over Q of an integer matrix, by fraction-free Bareiss elimination.

    Destroys ``rows``.  Every intermediate entry is a minor of the input,
    and every division below is exact.
    """
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    prev = 1
    col = 0
    while rows and col < ncols:
        pivot_at = None
        best = None
        for i, r in enumerate(rows):
            x = r[col]
            if x and (best is None or abs(x) < best):
                best = abs(x)
                pivot_at = i
                if best == 1:
                    break
        if pivot_at is None:
            col += 1
            continue
        pivot = rows.pop(pivot_at)
        pv = pivot[col]
        nxt = []
        for r in rows:
            x = r[col]
            new = [(pv * a - x * b) // prev for a, b in zip(r[col + 1 :], pivot[col + 1 :])]
            if any(new):
                nxt.append([0] * (col + 1) + new)
        rows = nxt
        prev = pv
        rank += 1
        col += 1
    return rank


def rank_mod_p(rows: list[list[int]], p: int) -> int:
    """Rank over F_p by dense Gaussian elimination (destroys ``rows``)."""
    echelon: list[tuple[int, list[int]]] = []  # (pivot column, normalized row)
    rank = 0
    for row in rows:
        row = [a % p for a in row]
        for pc, pr in echelon:
            f = row[pc]
            if f:
                row = [(a - f * b) % p for a, b in zip(row, pr)]
        for pc, a in enumerate(row):
            if a:
                inv = pow(a, -1, p)
                pr = [inv * x % p for x in row]
                echelon.append((pc, pr))
                echelon.sort(key=lambda e: e[0])
                rank += 1
                break
    return rank


def _require_odd_prime(p: int) -> None:
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


def quotient_rank_mod_p(space: SymbolSpace, vectors: Iterable[FreeVector], p: int) -> int:
    """dim over F_p of the span of the vectors' images in the quotient mod p.

    Computed as rank_{F_p}([R; V]) - rank_{F_p}(R); by right-exactness of
    tensoring with F_p this is basis-free and exact.
    """
    _require_odd_prime(p)
    vectors = list(vectors)
    base = space.rank_mod_p(p)
    return rank_mod_p(space._dense_rows(vectors), p) - base


def quotient_rank_q(space: SymbolSpace, vectors: Iterable[FreeVector]) -> int:
    """dim over Q of the span of the vectors' images in the quotient."""
    vectors = list(vectors)
    return bareiss_rank(space._dense_rows(vectors)) - space.rank_q


# ---------------------------------------------------------------------------
# optional on-disk cache for a built space
# ---------------------------------------------------------------------------

_CACHE_MAGIC = "torsion-gate-space 1"


def space_save(space: SymbolSpace, path) -> None:
    """Serialize a space: header, then one relation row per line."""
    lines = [
        _CACHE_MAGIC,
        f"N {space.N}",
        f"psi {space.psi}",
        f"rows {len(space.relation_rows)}",
    ]
    for row in space.relation_rows:
        lines.append(" ".join(f"{col}:{c}" for col, c in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def space_load(path) -> SymbolSpace:
    """Load a serialized space, re-deriving and re-validating the generators."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _CACHE_MAGIC:
        raise ValueError(f"{path}: not a symbol-space cache file")

    def header(idx: int, key: str) -> int:
        name, _, value = lines[idx].partition(" ")
        if name != key:
            raise ValueError(f"{path}: expected '{key}' header line")
        return int(value)

    N = header(1, "N")
    psi = header(2, "psi")
    nrows = header(3, "rows")
    gens = p1_list(N)
    if len(gens) != psi or psi != index_x0(N):
        raise ValueError(f"{path}: psi header {psi} does not match level {N}")
    body = lines[4 : 4 + nrows]
    if len(body) != nrows:
        raise ValueError(f"{path}: expected {nrows} relation rows")
    rows = []
    for line in body:
        row = []
        for chunk in line.split():
            col, _, c = chunk.partition(":")
            row.append((int(col), int(c)))
        rows.append(tuple(row))
    return SymbolSpace(N, gens, tuple(rows))
