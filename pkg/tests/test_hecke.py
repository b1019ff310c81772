from __future__ import annotations

import pytest

from torsion_gate.hecke import (
    MerelMatrix,
    criterion_vectors,
    generic_winding_expansion,
    hecke_action,
    hecke_action_vector,
    independence_mod_p,
    merel_matrices,
    winding_symbol,
)
from torsion_gate.maninspace import FreeVector, ManinSymbol, p1_normalize, quotient_rank_q

# Reference expansions of T_n(0,1) as raw translate sums, n = 1..6.  These
# are level-independent whenever no summand is omitted (true at any level
# coprime to every entry, e.g. 169); each term is ((x, y), coefficient).
REFERENCE_WINDING_EXPANSIONS = {
    1: [((0, 1), 1)],
    2: [((0, 2), 1), ((1, 2), 1), ((0, 1), 2)],
    3: [((0, 3), 1), ((1, 3), 1), ((2, 3), 1), ((0, 1), 3), ((1, 2), 1)],
    4: [
        ((0, 4), 1),
        ((1, 4), 1),
        ((2, 4), 1),
        ((3, 4), 1),
        ((0, 1), 4),
        ((0, 2), 2),
        ((1, 2), 2),
        ((2, 3), 1),
    ],
    5: [
        ((0, 5), 1),
        ((1, 5), 1),
        ((2, 5), 1),
        ((3, 5), 1),
        ((4, 5), 1),
        ((0, 1), 5),
        ((1, 3), 1),
        ((1, 2), 2),
        ((3, 4), 1),
        ((2, 3), 1),
    ],
    6: [
        ((0, 6), 1),
        ((1, 6), 1),
        ((2, 6), 1),
        ((3, 6), 1),
        ((4, 6), 1),
        ((5, 6), 1),
        ((0, 1), 6),
        ((0, 3), 2),
        ((0, 2), 3),
        ((1, 3), 1),
        ((2, 3), 2),
        ((1, 2), 3),
        ((2, 4), 1),
        ((3, 4), 1),
        ((4, 5), 1),
    ],
}

MEREL_COUNTS = {1: 1, 2: 4, 3: 7, 4: 13, 5: 15, 6: 26}


def test_merel_matrix_counts():
    for n, want in MEREL_COUNTS.items():
        assert len(merel_matrices(n)) == want


def test_merel_matrices_exact_for_small_n():
    assert merel_matrices(1) == (MerelMatrix(1, 0, 0, 1),)
    assert merel_matrices(2) == (
        MerelMatrix(1, 0, 0, 2),
        MerelMatrix(1, 0, 1, 2),
        MerelMatrix(2, 0, 0, 1),
        MerelMatrix(2, 1, 0, 1),
    )


def test_merel_matrices_satisfy_defining_conditions():
    for n in range(1, 13):
        mats = merel_matrices(n)
        assert len(set(mats)) == len(mats)
        assert list(mats) == sorted(mats)
        for m in mats:
            assert m.a > m.b >= 0
            assert m.d > m.c >= 0
            assert m.det == n


def test_merel_matrices_against_exhaustive_search():
    # independent brute force over the full box [0, n]^4
    for n in range(1, 9):
        brute = {
            (a, b, c, d)
            for a in range(n + 1)
            for b in range(n + 1)
            for c in range(n + 1)
            for d in range(n + 1)
            if a > b >= 0 and d > c >= 0 and a * d - b * c == n
        }
        assert {tuple(m) for m in merel_matrices(n)} == brute


def test_merel_rejects_bad_index():
    with pytest.raises(ValueError):
        merel_matrices(0)


def test_generic_expansions_match_reference():
    for n, terms in REFERENCE_WINDING_EXPANSIONS.items():
        assert dict(generic_winding_expansion(169, n)) == dict(terms)


def test_hecke_action_at_level_169(get_space):
    space = get_space(169)
    e = winding_symbol(169)
    assert e == ManinSymbol(0, 1)
    assert hecke_action(space, 1, e) == FreeVector({e: 1})
    for n, terms in REFERENCE_WINDING_EXPANSIONS.items():
        expected = FreeVector((p1_normalize(169, x, y), c) for (x, y), c in terms)
        assert hecke_action(space, n, e) == expected


def test_hecke_omission_rule_at_level_two(get_space):
    # at N=2 the summand (0,2) of T_2 reduces to (0,0) and is omitted
    space = get_space(2)
    got = hecke_action(space, 2, ManinSymbol(0, 1))
    assert got == FreeVector({ManinSymbol(1, 0): 1, ManinSymbol(0, 1): 2})
    assert dict(generic_winding_expansion(2, 2)) == {(1, 0): 1, (0, 1): 2}


def test_hecke_action_rejects_noncanonical_symbol(get_space):
    space = get_space(169)
    with pytest.raises(ValueError):
        hecke_action(space, 2, ManinSymbol(0, 2))


def test_t1_is_identity_on_winding_symbol(get_space):
    for N in (169, 49, 25, 143, 91, 77, 55, 40, 22):
        space = get_space(N)
        e = winding_symbol(N)
        assert hecke_action(space, 1, e) == FreeVector({e: 1})


def test_criterion_vectors(get_space):
    space = get_space(91)
    vecs = criterion_vectors(space, 3)
    assert len(vecs) == 6
    space2 = get_space(2)
    got = criterion_vectors(space2, 1)
    assert got[0] == FreeVector({ManinSymbol(0, 1): 1})
    assert got[1] == FreeVector({ManinSymbol(0, 1): 2, ManinSymbol(1, 0): 1})


@pytest.mark.parametrize(
    "N,p,want",
    [
        (169, 5, True),
        (143, 3, True),
        (91, 3, True),
        (77, 3, True),
        (169, 3, False),  # the span drops to rank 5 mod 3
        (11, 3, False),  # quotient rank 3 < 6 bounds any span
    ],
)
def test_independence_mod_p(get_space, N, p, want):
    assert independence_mod_p(get_space(N), 3, p) is want


def test_independence_rejects_bad_primes(get_space):
    space = get_space(169)
    with pytest.raises(ValueError):
        independence_mod_p(space, 3, 2)
    with pytest.raises(ValueError):
        independence_mod_p(space, 3, 13)  # divides the level


def test_hecke_multiplicativity_on_quotient(get_space):
    # T_2 T_3 = T_6 for coprime indices: the difference must vanish in the
    # rational quotient (rank-0 augmented test, basis-free)
    for N in (91, 143, 169):
        space = get_space(N)
        e = winding_symbol(N)
        t6 = hecke_action(space, 6, e)
        t2t3 = hecke_action_vector(space, 2, hecke_action(space, 3, e))
        assert quotient_rank_q(space, [t2t3 - t6]) == 0
        assert t2t3 != t6  # only equal after quotienting


def test_rank_bound_invariant(get_space):
    # span dimension never exceeds the vector count or the quotient rank
    from torsion_gate.maninspace import quotient_rank_mod_p

    for N, p in ((11, 3), (22, 3), (91, 3), (169, 5)):
        space = get_space(N)
        vecs = criterion_vectors(space, 3)
        r = quotient_rank_mod_p(space, vecs, p)
        assert r <= min(len(vecs), space.quotient_rank)
