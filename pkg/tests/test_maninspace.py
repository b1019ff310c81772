from __future__ import annotations

import pytest

from torsion_gate.exactmath import gcd
from torsion_gate.maninspace import (
    FreeVector,
    ManinSymbol,
    SIGMA,
    TAU,
    build_space,
    cusp_count_x0,
    genus_x0,
    index_x0,
    p1_list,
    p1_normalize,
    quotient_rank_mod_p,
    quotient_rank_q,
    right_translate,
    space_load,
    space_save,
)

# quotient dimension 2g + c - 1, with g and c from the classical formulas
EXPECTED_QUOTIENT_RANK = {
    11: 3,
    22: 7,
    25: 5,
    40: 13,
    49: 9,
    55: 13,
    77: 17,
    91: 17,
    143: 29,
    169: 29,
}


def test_p1_normalize_examples():
    assert p1_normalize(169, 0, 2) == ManinSymbol(0, 1)
    assert p1_normalize(169, 2, 4) == ManinSymbol(1, 2)
    assert p1_normalize(1, 0, 0) == ManinSymbol(0, 0)
    with pytest.raises(ValueError):
        p1_normalize(2, 0, 0)
    with pytest.raises(ValueError):
        p1_normalize(12, 2, 4)


def test_p1_normalize_idempotent_and_unit_invariant():
    for N in range(1, 51):
        for u in range(N):
            for v in range(N):
                if gcd(gcd(u, v), N) != 1:
                    continue
                sym = p1_normalize(N, u, v)
                assert p1_normalize(N, *sym) == sym
    # scaling by any unit lands in the same class
    for N in (12, 15, 16, 25):
        units = [t for t in range(1, N) if gcd(t, N) == 1]
        for u in range(N):
            for v in range(N):
                if gcd(gcd(u, v), N) != 1:
                    continue
                sym = p1_normalize(N, u, v)
                for t in units[:6]:
                    assert p1_normalize(N, t * u, t * v) == sym


def test_p1_list_lengths():
    assert len(p1_list(13)) == 14
    assert len(p1_list(169)) == 182
    assert len(p1_list(22)) == 36
    assert p1_list(1) == (ManinSymbol(0, 0),)


def test_p1_list_matches_index_formula():
    for N in range(1, 201):
        assert len(p1_list(N)) == index_x0(N), N


def test_p1_list_entries_are_canonical_and_distinct():
    for N in (22, 40, 169):
        gens = p1_list(N)
        assert len(set(gens)) == len(gens)
        for sym in gens:
            assert p1_normalize(N, *sym) == sym


def test_sigma_involution_and_tau_order_three():
    for N in range(1, 51):
        for sym in p1_list(N):
            pair = right_translate(N, *right_translate(N, sym.u, sym.v, SIGMA), SIGMA)
            assert p1_normalize(N, *pair) == sym
            pair = (sym.u, sym.v)
            for _ in range(3):
                pair = right_translate(N, *pair, TAU)
            assert p1_normalize(N, *pair) == sym


def test_genus_and_cusp_examples():
    assert genus_x0(40) == 3
    assert genus_x0(71) == 6
    assert genus_x0(169) == 8
    assert cusp_count_x0(169) == 14
    assert 2 * genus_x0(169) + cusp_count_x0(169) - 1 == 29
    assert genus_x0(1) == 0 and cusp_count_x0(1) == 1


def test_quotient_rank_matches_genus_cusp_formula(get_space):
    for N, want in EXPECTED_QUOTIENT_RANK.items():
        space = get_space(N)
        assert space.quotient_rank == want
        assert space.quotient_rank == 2 * genus_x0(N) + cusp_count_x0(N) - 1
        assert space.psi == index_x0(N)
        assert len(space.relation_rows) == 2 * space.psi


def test_sigma_relation_row_dies_in_quotient(get_space):
    space = get_space(169)
    vec = FreeVector({ManinSymbol(0, 1): 1, ManinSymbol(1, 0): 1})
    assert quotient_rank_mod_p(space, [vec], 5) == 0
    assert quotient_rank_q(space, [vec]) == 0  # i.e. (0,1) = -(1,0) in the quotient


def test_quotient_rank_mod_p_rejects_bad_p(get_space):
    space = get_space(11)
    with pytest.raises(ValueError):
        quotient_rank_mod_p(space, [], 2)
    with pytest.raises(ValueError):
        quotient_rank_mod_p(space, [], 9)


def test_quotient_rank_mod_p_rejects_foreign_symbols(get_space):
    space = get_space(11)
    with pytest.raises(ValueError):
        quotient_rank_mod_p(space, [FreeVector({ManinSymbol(0, 2): 1})], 3)


def test_free_vector_algebra():
    a = FreeVector({ManinSymbol(0, 1): 2, ManinSymbol(1, 2): 1})
    b = FreeVector({ManinSymbol(0, 1): -2, ManinSymbol(1, 5): 3})
    assert (a + b).terms() == ((ManinSymbol(1, 2), 1), (ManinSymbol(1, 5), 3))
    assert a - a == FreeVector()
    assert not (a - a)
    assert 0 * a == FreeVector()
    assert (-1) * a == -a
    assert str(a) == "2(0,1)+(1,2)"
    assert str(-a) == "-2(0,1)-(1,2)"
    assert str(FreeVector()) == "0"
    assert a.coefficient(ManinSymbol(0, 1)) == 2
    assert a.coefficient(ManinSymbol(9, 9)) == 0


def test_space_cache_roundtrip(tmp_path, get_space):
    space = get_space(22)
    path = tmp_path / "space_22.txt"
    space_save(space, path)
    loaded = space_load(path)
    assert loaded.N == 22
    assert loaded.gens == space.gens
    assert loaded.relation_rows == space.relation_rows
    assert loaded.quotient_rank == space.quotient_rank


def test_space_cache_validates(tmp_path):
    space = build_space(11)
    path = tmp_path / "space_11.txt"
    space_save(space, path)
    lines = path.read_text().splitlines()
    lines[2] = "psi 13"  # tamper with the generator count
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ValueError):
        space_load(path)
    path.write_text("something else\n")
    with pytest.raises(ValueError):
        space_load(path)
