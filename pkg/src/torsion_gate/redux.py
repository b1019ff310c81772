"""Finite-field reduction arguments ("method A").

For a level N whose J_1(N)(Q) is known finite (a cited-facts table: the
simple isogeny factors all have nonvanishing L(A, 1), so finiteness
follows from Kato's theorem) and with Gon(X_1(N)) > d, an elliptic curve
over a degree-d field with an N-torsion point must have good reduction at
any odd prime p not dividing N.  The contradiction is then arithmetic:
no elliptic curve over the residue field F_{p^i}, i <= d, can have group
order divisible by N.  Admissible group orders come from Waterhouse's
classification of isogeny classes (Waterhouse 1969, Thm 4.1), and an
exhaustive enumeration of curves y^2 = cubic serves as an independent
desk-scale oracle for that classification.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .exactmath import PrimePower, field_make, is_prime, isqrt
from .gate import ConditionEvidence, _ev, gonality_exceeds

__all__ = [
    "BruteForceCensus",
    "JACOBIAN_FINITE_FACTS",
    "JacobianFiniteFact",
    "MethodAVerdict",
    "TraceCensus",
    "admissible_traces",
    "additive_excluded",
    "brute_force_census",
    "method_a_verdict",
    "orders_divisible_by",
]

BRUTE_FORCE_MAX_Q = 343  # runtime guard for the exhaustive census


@dataclass(frozen=True)
class TraceCensus:
    """Hasse interval and Waterhouse-admissible traces over F_q."""

    q: PrimePower
    hasse_lo: int
    hasse_hi: int
    traces: frozenset[int]

    @property
    def orders(self) -> frozenset[int]:
        return frozenset(self.q.q + 1 - t for t in self.traces)


def admissible_traces(pp: PrimePower) -> TraceCensus:
    """Traces t of elliptic-curve isogeny classes over F_q, per Waterhouse.

    t with t^2 <= 4q occurs iff one of:
      (1) gcd(t, p) = 1;
      (2) n even and t = +-2 p^{n/2};
      (3) n even, p != 1 mod 3, and t = +-p^{n/2};
      (4) n odd, p in {2, 3}, and t = +-p^{(n+1)/2};
      (5) t = 0, and n odd or p != 1 mod 4.
    """
    p, n, q = pp.p, pp.n, pp.q
    bound = isqrt(4 * q)  # |t| <= 2 sqrt(q) iff t^2 <= 4q
    traces = set()
    for t in range(-bound, bound + 1):
        if t % p != 0:
            traces.add(t)
        elif t == 0:
            if n % 2 == 1 or p % 4 != 1:
                traces.add(t)
        elif n % 2 == 0:
            half = p ** (n // 2)
            if abs(t) == 2 * half or (abs(t) == half and p % 3 != 1):
                traces.add(t)
        else:
            if p in (2, 3) and abs(t) == p ** ((n + 1) // 2):
                traces.add(t)
    assert all(t * t <= 4 * q for t in traces)
    return TraceCensus(q=pp, hasse_lo=q + 1 - bound, hasse_hi=q + 1 + bound, traces=frozenset(traces))


def orders_divisible_by(pp: PrimePower, N: int) -> set[int]:
    """Admissible group orders over F_q divisible by N; empty = impossible."""
    if N < 1:
        raise ValueError("N must be positive")
    q = pp.q
    census = admissible_traces(pp)
    return {q + 1 - t for t in census.traces if (q + 1 - t) % N == 0}


def additive_excluded(N: int, p: int, d: int) -> ConditionEvidence:
    """No additive-reduction group order p^i * c (i <= d, c <= 4) is divisible by N.

    An additive fiber over the residue field has |E~(k)| = |G_a| * |G| with
    |G_a| = p^i and a component group G of order at most four.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    for i in range(1, d + 1):
        for c in range(1, 5):
            order = p**i * c
            if order % N == 0:
                return _ev(
                    "additive-reduction",
                    False,
                    f"additive fiber order {p}^{i}*{c} = {order} is divisible by {N}",
                    N=N,
                    p=p,
                    p_power_index=i,
                    component_order=c,
                    group_order=order,
                )
    return _ev(
        "additive-reduction",
        True,
        f"{N} divides no additive fiber order {p}^i*c, i<={d}, c<=4",
        N=N,
        p=p,
        d=d,
        max_component_order=4,
    )


# ---------------------------------------------------------------------------
# exhaustive brute-force oracle
# ---------------------------------------------------------------------------


@dataclass
class BruteForceCensus:
    """Observed traces (with curve counts) and group orders over F_q."""

    q: int
    trace_counts: dict[int, int]
    orders: frozenset[int]

    @property
    def trace_set(self) -> frozenset[int]:
        return frozenset(self.trace_counts)


def brute_force_census(pp: PrimePower, workers: int = 1) -> BruteForceCensus:
    """Count points on every curve y^2 = x^3 + a x^2 + b x + c over F_q.

    Requires p odd and q <= 343.  Points are counted through the quadratic
    character: |E| = q + 1 + sum_x chi(f(x)).  Singular cubics
    (disc(f) = 0) are skipped.  The coefficient space is partitioned over
    workers; accumulation is an associative union, so the result does not
    depend on the worker count.
    """
    if pp.p == 2:
        raise ValueError("census requires odd characteristic")
    q = pp.q
    if q > BRUTE_FORCE_MAX_Q:
        raise ValueError(f"census guard: q = {q} exceeds {BRUTE_FORCE_MAX_Q}")
    F = field_make(pp)
    rng = range(q)
    add = [[F.add(a, b) for b in rng] for a in rng]
    mul = [[F.mul(a, b) for b in rng] for a in rng]
    chi = [F.quadratic_character(a) for a in rng]
    sq = [mul[x][x] for x in rng]
    cube = [mul[x][sq[x]] for x in rng]
    # disc(x^3 + a x^2 + b x + c) = 18abc - 4a^3c + a^2b^2 - 4b^3 - 27c^2,
    # evaluated in F_q via the prime-subfield constants below.
    c18 = 18 % pp.p
    cm4 = -4 % pp.p
    cm27 = -27 % pp.p

    def scan(a_values: list[int]) -> tuple[Counter, set[int]]:
        traces: Counter = Counter()
        orders: set[int] = set()
        for a in a_values:
            a2 = sq[a]
            a3 = cube[a]
            mul_a = mul[a]
            for b in rng:
                base = [add[cube[x]][add[mul_a[sq[x]]][mul[b][x]]] for x in rng]
                k_lin = add[mul[c18][mul[a][b]]][mul[cm4][a3]]  # (18ab - 4a^3)
                k_const = add[mul[a2][sq[b]]][mul[cm4][cube[b]]]  # a^2b^2 - 4b^3
                for c in rng:
                    disc = add[add[mul[k_lin][c]][k_const]][mul[cm27][sq[c]]]
                    if disc == 0:
                        continue
                    add_c = add[c]
                    s = sum(chi[add_c[v]] for v in base)
                    orders.add(q + 1 + s)
                    traces[-s] += 1
        return traces, orders

    if workers <= 1:
        traces, orders = scan(list(rng))
    else:
        chunks = [list(rng)[i::workers] for i in range(workers)]
        traces = Counter()
        orders = set()
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part_traces, part_orders in pool.map(scan, chunks):
                traces.update(part_traces)
                orders |= part_orders
    return BruteForceCensus(q=q, trace_counts=dict(traces), orders=frozenset(orders))


# ---------------------------------------------------------------------------
# cited finiteness facts and the method-A verdict
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class JacobianFiniteFact:
    """J_1(N)(Q) is finite; dimensions of the simple isogeny factors as cited."""

    N: int
    factor_dims: tuple[int, ...]
    citation: str


JACOBIAN_FINITE_FACTS: dict[int, JacobianFiniteFact] = {
    fact.N: fact
    for fact in (
        JacobianFiniteFact(49, (1, 48, 6, 12, 2), "L(A_i,1) != 0 for all factors; finiteness via Kato"),
        JacobianFiniteFact(25, (8, 4), "L(A_i,1) != 0 for all factors; finiteness via Kato"),
        JacobianFiniteFact(55, (1, 2, 1, 1, 4, 32, 8, 8, 16, 4, 4), "L(A_i,1) != 0 for all factors; finiteness via Kato"),
        JacobianFiniteFact(40, (1, 1, 1, 4, 2, 2, 8, 2, 4), "L(A_i,1) != 0 for all factors; finiteness via Kato"),
        JacobianFiniteFact(22, (1, 1, 4), "L(A_i,1) != 0 for all factors; finiteness via Kato"),
    )
}


@dataclass
class MethodAVerdict:
    """Gate-report fragment: the reduction argument's combined outcome."""

    N: int
    d: int
    p: int
    passed: bool
    evidence: list[ConditionEvidence]


def method_a_verdict(N: int, d: int, p: int) -> MethodAVerdict:
    """Run the full reduction argument for (N, d) at the odd prime p.

    Passes iff N is in the finite-Jacobian table, Gon(X_1(N)) > d, no
    additive fiber order is divisible by N, and for every i <= d no
    admissible order over F_{p^i} is divisible by N.  A pass reproduces
    the contradiction: good reduction is forced, yet no residue-field
    curve admits a point of order N.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if N % p == 0:
        raise ValueError(f"p = {p} must not divide N = {N}")
    evidence: list[ConditionEvidence] = []

    fact = JACOBIAN_FINITE_FACTS.get(N)
    if fact is None:
        evidence.append(
            _ev(
                "finite-jacobian-table",
                False,
                f"J_1({N})(Q) is not in the cited finite-Jacobian table",
                N=N,
            )
        )
    else:
        evidence.append(
            _ev(
                "finite-jacobian-table",
                True,
                f"J_1({N})(Q) finite ({fact.citation}; factor dims {fact.factor_dims})",
                N=N,
                factor_count=len(fact.factor_dims),
            )
        )

    gon_ok = gonality_exceeds("X1", N, d)
    rel = ">" if gon_ok else "<="
    evidence.append(_ev("gonality-x1", gon_ok, f"Gon(X_1({N})) {rel} {d} (table lookup)", N=N, d=d))

    evidence.append(additive_excluded(N, p, d))

    for i in range(1, d + 1):
        pp = PrimePower(p, i)
        census = admissible_traces(pp)
        bad = orders_divisible_by(pp, N)
        if bad:
            evidence.append(
                _ev(
                    "good-reduction-orders",
                    False,
                    f"an admissible order over F_{pp} is divisible by {N}",
                    q=pp.q,
                    order=min(bad),
                    trace=pp.q + 1 - min(bad),
                )
            )
        else:
            evidence.append(
                _ev(
                    "good-reduction-orders",
                    True,
                    f"no admissible order over F_{pp} is divisible by {N}",
                    q=pp.q,
                    hasse_lo=census.hasse_lo,
                    hasse_hi=census.hasse_hi,
                )
            )

    return MethodAVerdict(N=N, d=d, p=p, passed=all(e.passed for e in evidence), evidence=evidence)
