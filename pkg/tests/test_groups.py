"""Group constructors, commutator machinery, series, and predicates."""

import numpy as np
import pytest

import oracles
from gamma_forge.core import ConstructionError, EvenOrderError
from gamma_forge.groups import (
    FunctionalGroup,
    Group,
    SemidirectSpec,
    SpecParseError,
    Subgroup,
    center,
    commutator,
    construct,
    cyclic,
    derived_series,
    derived_subgroup,
    direct,
    from_file,
    heisenberg,
    is_metabelian,
    is_two_engel,
    is_uniquely_2_divisible,
    lower_central_series,
    nested_commutator,
    nilpotency_class,
    sd,
    sqrt_element,
    unitriangular,
    upper_central_series,
)
from gamma_forge.checks import commutator_identities_hold, metabelian_identities_hold


@pytest.fixture(scope="module")
def g21():
    return construct("sd:7:3:2")


@pytest.fixture(scope="module")
def w81():
    return construct("wr:3")


def test_cyclic_basic():
    z7 = cyclic(7)
    assert z7.order == 7
    assert z7.mul(3, 5) == 1
    assert z7.inv(2) == 5


def test_direct_product():
    g = direct([cyclic(3), cyclic(5)])
    assert g.order == 15
    assert g.is_abelian()
    assert g.label(0) == "(0,0)"


def test_sd_construction_matches_oracle(g21):
    assert g21.order == 21
    assert not g21.is_abelian()
    for a in oracles.P21:
        for b in oracles.P21:
            got = g21.mul(oracles.idx21(a), oracles.idx21(b))
            assert got == oracles.idx21(oracles.mul21(a, b))


def test_sd_rejects_bad_action():
    with pytest.raises(ConstructionError, match="invalid action"):
        sd(7, 3, 3)  # 3^3 = 27 = 6 mod 7


def test_sd_even_order_rejected():
    with pytest.raises(ConstructionError, match="odd"):
        sd(9, 2, 8)  # valid action but even acting group


def test_heisenberg_structure():
    h = heisenberg(3)
    assert h.order == 27
    assert nilpotency_class(h) == 2
    assert center(h).order == 3
    series = upper_central_series(h)
    assert series[-1].order == 27  # second center is everything


def test_wreath_structure(w81):
    assert w81.order == 81
    assert nilpotency_class(w81) == 3
    series = upper_central_series(w81)
    assert [s.order for s in series] == [1, 3, 9, 81]
    low = lower_central_series(w81)
    assert [s.order for s in low] == [81, 9, 3, 1]


def test_wreath_gamma3_is_diagonal(w81):
    # third lower-central term: diagonal vectors (c,c,c) with trivial top part
    low = lower_central_series(w81)
    gamma3 = set(low[2].members)
    expected = {oracles.idx81(((c, c, c), 0)) for c in range(3)}
    assert gamma3 == expected


def test_wreath_matches_oracle(w81):
    rng = np.random.default_rng(0)
    for _ in range(300):
        i, j = int(rng.integers(81)), int(rng.integers(81))
        a, b = oracles.P81[i], oracles.P81[j]
        assert w81.mul(i, j) == oracles.idx81(oracles.mul81(a, b))


def test_unitriangular_table_group():
    u = unitriangular(3, 3)
    assert isinstance(u, Group)
    assert u.order == 27
    assert nilpotency_class(u) == 2


def test_unitriangular_functional():
    u = unitriangular(5, 3)
    assert isinstance(u, FunctionalGroup)
    assert u.order == 3 ** 10
    # generators have order 3
    for g0 in u.gens:
        assert u.order_of(g0) == 3
    assert not is_metabelian(u)
    series = derived_series(u)
    assert [s.order for s in series] == [3 ** 10, 729, 3, 1]
    assert nilpotency_class(u) == 4


def test_ut43_metabelian_class3():
    u = construct("ut:4:3")
    assert isinstance(u, Group)
    assert u.order == 729
    assert is_metabelian(u)
    assert nilpotency_class(u) == 3


def test_commutator_examples(g21):
    z9 = cyclic(9)
    for x in range(9):
        for y in range(9):
            assert commutator(z9, x, y) == 0
    x, y = oracles.idx21((1, 0)), oracles.idx21((0, 1))
    assert g21.label(commutator(g21, x, y)) == "(3,0)"
    assert g21.label(nested_commutator(g21, [x, y, y])) == "(2,0)"
    assert commutator(g21, x, y) == oracles.idx21(oracles.comm21((1, 0), (0, 1)))


def test_u2d_examples(g21):
    assert is_uniquely_2_divisible(cyclic(7))
    assert not is_uniquely_2_divisible(cyclic(2))
    assert is_uniquely_2_divisible(g21)


def test_sqrt_examples(g21):
    z7 = cyclic(7)
    assert sqrt_element(z7, 4) == 2
    assert g21.label(sqrt_element(g21, oracles.idx21((4, 0)))) == "(2,0)"
    assert g21.label(sqrt_element(g21, oracles.idx21((0, 1)))) == "(0,2)"
    with pytest.raises(EvenOrderError):
        sqrt_element(cyclic(4), 1)


def test_sqrt_of_square_is_identity_map(g21):
    for x in range(g21.order):
        assert sqrt_element(g21, g21.mul(x, x)) == x
    h = heisenberg(3)
    for x in range(h.order):
        assert sqrt_element(h, h.mul(x, x)) == x


def test_group21_series(g21):
    assert center(g21).order == 1
    series = upper_central_series(g21)
    assert [s.order for s in series] == [1]  # stalls at the trivial subgroup
    assert nilpotency_class(g21) is None
    low = lower_central_series(g21)
    assert low[1].order == 7  # derived part is the normal cyclic factor
    assert low[-1].order == 7  # never reaches 1


def test_derived_and_metabelian(g21):
    z = direct([cyclic(3), cyclic(9)])
    assert is_metabelian(z)
    assert derived_series(z)[-1].order == 1
    assert is_metabelian(g21)
    members, _ = derived_subgroup(g21)
    assert set(g21.label(m) for m in members) == {f"({h},0)" for h in range(7)}


def test_two_engel_examples(g21):
    ok, w = is_two_engel(cyclic(9))
    assert ok and w is None
    ok, w = is_two_engel(heisenberg(3))
    assert ok
    ok, w = is_two_engel(g21)
    assert not ok
    assert (g21.label(w[0]), g21.label(w[1])) == ("(1,0)", "(0,1)")


def test_nested_commutator_detects_class():
    h = heisenberg(3)
    # class 2: every length-3 commutator trivial, some length-2 not
    assert all(nested_commutator(h, [x, y, z]) == 0
               for x in range(0, 27, 5) for y in range(27) for z in range(27))
    assert any(commutator(h, x, y) != 0 for x in range(27) for y in range(27))


def test_commutator_identity_suite_exhaustive(g21):
    ok, w, exhaustive = commutator_identities_hold(g21)
    assert ok and exhaustive, w
    h = heisenberg(3)
    ok, w, exhaustive = commutator_identities_hold(h)
    assert ok and exhaustive, w


def test_commutator_identity_suite_sampled_beyond_81():
    g = construct("sd:31:5:2")
    ok, w, exhaustive = commutator_identities_hold(g, seed=3)
    assert ok and not exhaustive, w


def test_metabelian_identity_suite(g21, w81):
    ok, w, exhaustive = metabelian_identities_hold(g21)
    assert ok and exhaustive, w
    ok, w, exhaustive = metabelian_identities_hold(w81)
    assert ok and exhaustive, w


def test_wreath_nested_commutator_class_crosscheck(w81):
    # class 3: every 4-argument nested commutator vanishes (sampled), while
    # some 3-argument one does not
    rng = np.random.default_rng(5)
    for _ in range(4000):
        xs = [int(v) for v in rng.integers(0, 81, 4)]
        assert nested_commutator(w81, xs) == 0
    found = False
    for _ in range(4000):
        xs = [int(v) for v in rng.integers(0, 81, 3)]
        if nested_commutator(w81, xs) != 0:
            found = True
            break
    assert found


def test_commuting_automorphism_sums_are_automorphisms():
    # pointwise product of two commuting odd-order automorphisms is again one
    for spec_str in ("sd:7:3:2", "sd:7:3:4", "sd:13:3:3", "sd:11:5:3", "sd:31:5:2", "wr:3"):
        g = construct(spec_str)
        spec = g.sd_spec
        nH = spec.nH
        mulH = spec.H.tbl
        for f1 in range(spec.nF):
            for f2 in range(spec.nF):
                phi = mulH[spec.action[f1], spec.action[f2]]
                assert len(set(phi.tolist())) == nH  # bijective
                hom = phi[mulH] == mulH[phi[:, None], phi[None, :]]
                assert hom.all()


def test_semidirect_spec_validation():
    H, F = cyclic(7), cyclic(3)
    bad = np.stack([np.arange(7)] * 3)  # constant action is not a homomorphism image set
    bad[1] = (2 * np.arange(7)) % 7
    with pytest.raises(ConstructionError):
        SemidirectSpec(H, F, bad)


def test_subgroup_validation(g21):
    with pytest.raises(ConstructionError, match="identity"):
        Subgroup(g21, (1, 2))
    with pytest.raises(ConstructionError, match="closed"):
        Subgroup(g21, (0, 1))  # (1,0) alone does not close without the rest of H
    Subgroup(g21, tuple(range(7)))  # the normal cyclic factor is fine


def test_spec_parser_errors():
    with pytest.raises(SpecParseError, match="unknown group family"):
        construct("weird:3")
    with pytest.raises(SpecParseError, match="bad token"):
        construct("cyclic:x")
    with pytest.raises(SpecParseError, match="sd takes"):
        construct("sd:7:3")
    with pytest.raises(SpecParseError, match="nested dp"):
        construct("dp:dp:cyclic:3,cyclic:3,cyclic:5")


def test_from_file_roundtrip(tmp_path, g21):
    from gamma_forge import tableio
    path = tmp_path / "g21.tbl"
    tableio.export_table(g21.table, path)
    g2 = from_file(path)
    assert (g2.tbl == g21.tbl).all()


def test_even_order_flagged():
    g = cyclic(4)
    assert "even order" in g.notes
    assert not is_uniquely_2_divisible(g)
