from __future__ import annotations

import pytest

from torsion_gate.gate import (
    GONALITY,
    X0_THREE_GONAL_BY_GENUS,
    X0_TWO_GONAL_BY_GENUS,
    find_witness_prime,
    gonality_exceeds,
    hasse_gate,
    t3_divisibility,
    t4_coprimality,
    verify_cyclic_exclusion,
)
from torsion_gate.maninspace import genus_x0


def test_hasse_gate_examples():
    assert hasse_gate(169, 5, 3).passed
    assert hasse_gate(143, 3, 3).passed
    assert not hasse_gate(25, 3, 3).passed  # 25 < (1 + sqrt(27))^2 ~ 38.4
    assert not hasse_gate(38, 3, 3).passed  # boundary: 38 < 38.39...
    assert hasse_gate(39, 3, 3).passed


def test_hasse_gate_monotone_in_level():
    for p, d in ((3, 3), (5, 3), (3, 1)):
        passed_before = False
        for N in range(1, 400):
            ok = hasse_gate(N, p, d).passed
            assert not (passed_before and not ok), (N, p, d)
            passed_before = ok


def test_hasse_gate_validates_arguments():
    with pytest.raises(ValueError):
        hasse_gate(169, 6, 3)
    with pytest.raises(ValueError):
        hasse_gate(169, 5, 0)


def test_t3_divisibility():
    ev = t3_divisibility(169, 5, 3)
    assert ev.passed
    witnesses = dict(ev.witnesses)
    assert witnesses["p_pow_2_minus_1"] == 24
    assert witnesses["p_pow_4_minus_1"] == 624
    assert witnesses["p_pow_6_minus_1"] == 15624
    ev = t3_divisibility(91, 3, 3)  # 7 | 3^6 - 1 = 728
    assert not ev.passed
    assert dict(ev.witnesses)["divides"] == 7
    assert not t3_divisibility(2, 3, 1).passed  # 2 | 3^2 - 1
    with pytest.raises(ValueError):
        t3_divisibility(15, 3, 3)


def test_t4_coprimality():
    assert t4_coprimality(143, 3, 3).passed  # gcd with 8 and 80 is 1
    assert t4_coprimality(77, 3, 3).passed
    ev = t4_coprimality(55, 3, 3)  # gcd(55, 80) = 5
    assert not ev.passed
    assert dict(ev.witnesses)["gcd_with_p_pow_4_minus_1"] == 5
    for bad in (49, 11, 12):
        with pytest.raises(ValueError):
            t4_coprimality(bad, 3, 3)
    with pytest.raises(ValueError):
        t4_coprimality(15, 3, 3)  # p divides N


def test_gonality_examples():
    assert gonality_exceeds("X0", 169, 3)
    assert not gonality_exceeds("X0", 54, 3)
    assert not gonality_exceeds("X1", 20, 3)
    assert not gonality_exceeds("X0", 25, 1)
    assert gonality_exceeds("X0", 11, 1)
    with pytest.raises(ValueError):
        gonality_exceeds("X0", 169, 4)
    with pytest.raises(ValueError):
        gonality_exceeds("X2", 169, 3)


def test_gonality_tables_are_cumulative():
    for family in ("X0", "X1"):
        assert GONALITY.levels(family, 1) <= GONALITY.levels(family, 2)
        assert GONALITY.levels(family, 2) <= GONALITY.levels(family, 3)


def test_gonality_tables_match_their_genus_labels():
    for table in (X0_TWO_GONAL_BY_GENUS, X0_THREE_GONAL_BY_GENUS):
        for genus, levels in table.items():
            for N in levels:
                assert genus_x0(N) == genus, (N, genus)


def test_hyperelliptic_levels_count_as_trigonal_covered():
    # levels of gonality 2 sit inside the gonality <= 3 set even when the
    # published trigonal list proper does not repeat them
    assert 30 in GONALITY.levels("X0", 3)
    assert 71 in GONALITY.levels("X0", 3)


def test_find_witness_prime_cases(get_space):
    hit = find_witness_prime(169, 3, 50, space_factory=get_space)
    assert (hit.p, hit.method) == (5, "T3")
    hit = find_witness_prime(143, 3, 50, space_factory=get_space)
    assert (hit.p, hit.method) == (3, "T4")
    assert find_witness_prime(55, 3, 3, space_factory=get_space) is None
    assert find_witness_prime(49, 3, 50, space_factory=get_space) is None  # gonality gate


def test_find_witness_prime_never_returns_divisor_or_two(get_space):
    for N in (169, 143, 91, 77):
        hit = find_witness_prime(N, 3, space_factory=get_space)
        assert hit is not None
        assert hit.p > 2 and N % hit.p != 0
        names = [e.name for e in hit.evidence]
        assert names[0] == "gonality-x0" and names[-1] == "hecke-independence"


def test_find_witness_prime_workers_deterministic(get_space):
    a = find_witness_prime(169, 3, 50, workers=1, space_factory=get_space)
    b = find_witness_prime(169, 3, 50, workers=4, space_factory=get_space)
    assert (a.p, a.method) == (b.p, b.method)


def test_find_witness_prime_validates_p_max():
    with pytest.raises(ValueError):
        find_witness_prime(169, 3, 2)


@pytest.mark.parametrize(
    "N,outcome,p",
    [
        (169, "excluded-T3", 5),
        (143, "excluded-T4", 3),
        (91, "excluded-T4", 3),
        (77, "excluded-T4", 3),
        (49, "excluded-methodA", 3),
        (25, "excluded-methodA", 3),
        (55, "excluded-methodA", 3),
        (40, "excluded-methodA", 3),
        (22, "excluded-methodA", 3),
    ],
)
def test_verify_cyclic_exclusion_all_cases(get_space, N, outcome, p):
    report = verify_cyclic_exclusion(N, 3, space_factory=get_space)
    assert report.outcome == outcome
    assert report.witness_prime == p
    assert report.excluded
    assert all(e.passed for e in report.evidence if e.name != "witness-prime-search")


def test_verify_cyclic_exclusion_inconclusive(get_space):
    report = verify_cyclic_exclusion(20, 3, space_factory=get_space)
    assert report.outcome == "inconclusive"
    assert report.witness_prime is None
    assert not report.excluded
    # 169 needs p = 5: capping the search at 3 must come back inconclusive
    report = verify_cyclic_exclusion(169, 3, p_max=3, space_factory=get_space)
    assert report.outcome == "inconclusive"


def test_verify_cyclic_exclusion_beyond_table_range(get_space):
    report = verify_cyclic_exclusion(91, 4, space_factory=get_space)
    assert report.outcome == "inconclusive"
    assert report.evidence[0].name == "gonality-tables-range"
    assert find_witness_prime(91, 4, space_factory=get_space) is None


def test_report_json_dict_uses_decimal_strings(get_space):
    report = verify_cyclic_exclusion(91, 3, space_factory=get_space)
    doc = report.to_json_dict()
    assert doc["witness_prime"] == "3"
    for ev in doc["evidence"]:
        assert all(isinstance(v, str) and v.lstrip("-").isdigit() for v in ev["witnesses"].values())
