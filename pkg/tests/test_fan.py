import pytest
from hypothesis import given, settings, strategies as st

from toricomplex.fan import (
    cone_multiplicity,
    cones_of_dim,
    is_complete,
    is_simplicial,
    is_smooth,
    locate_max_cone,
    make_fan,
    star_fan,
    star_subdivision,
    validate_fan,
)

from fans import A1_SING, A2, BLP2, CONIFOLD, P1, P1XP1, P2, P3, SUITE


def test_suite_fans_valid_and_complete():
    for name, f in SUITE.items():
        assert validate_fan(f) == [], name
        assert is_complete(f), name
        assert is_smooth(f), name


def test_affine_fans():
    assert validate_fan(A2) == []
    assert not is_complete(A2)
    assert validate_fan(A1_SING) == []
    assert is_simplicial(A1_SING)
    assert not is_smooth(A1_SING)
    assert cone_multiplicity(A1_SING, (0, 1)) == 2
    assert validate_fan(CONIFOLD) == []
    assert not is_simplicial(CONIFOLD)


def test_multiplicity_needs_simplicial():
    with pytest.raises(ValueError):
        cone_multiplicity(CONIFOLD, (0, 1, 2, 3))


def test_validate_overlapping():
    bad = make_fan(2, [(1, 0), (0, 1), (1, 1), (1, -1)], [(0, 1), (2, 3)])
    assert any(c == "overlapping-cones" for c, _ in validate_fan(bad))


def test_validate_nonprimitive():
    bad = make_fan(2, [(2, 0), (0, 1)], [(0, 1)])
    assert any(c == "nonprimitive-ray" for c, _ in validate_fan(bad))


def test_validate_duplicate_ray():
    bad = make_fan(2, [(1, 0), (1, 0)], [(0, 1)])
    codes = {c for c, _ in validate_fan(bad)}
    assert "duplicate-ray" in codes


def test_validate_nested():
    bad = make_fan(2, [(1, 0), (0, 1)], [(0, 1), (0,)])
    assert any(c == "nested-max-cones" for c, _ in validate_fan(bad))


def test_validate_stray_ray():
    bad = make_fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1)])
    assert any(c == "stray-ray" for c, _ in validate_fan(bad))


def test_validate_nonpointed():
    bad = make_fan(2, [(1, 0), (-1, 0), (0, 1)], [(0, 1, 2)])
    assert any(c == "nonpointed-cone" for c, _ in validate_fan(bad))


def test_validate_nonextremal():
    bad = make_fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1, 2)])
    assert any(c == "nonextremal-generator" for c, _ in validate_fan(bad))


def test_star_subdivision_p2():
    b = star_subdivision(P2, (1, 1))
    assert b.rays == ((1, 0), (0, 1), (-1, -1), (1, 1))
    assert validate_fan(b) == []
    assert is_complete(b) and is_smooth(b)
    assert len(b.max_cones) == 4


def test_star_subdivision_noop_on_ray():
    assert star_subdivision(P2, (1, 0)) == P2


def test_star_subdivision_errors():
    with pytest.raises(ValueError):
        star_subdivision(P2, (2, 2))
    with pytest.raises(ValueError):
        star_subdivision(A2, (-1, 0))


def test_conifold_small_resolution_fan():
    y = star_subdivision(CONIFOLD, (1, 1, 2))
    assert validate_fan(y) == []
    assert is_smooth(y)
    assert len(y.max_cones) == 4


def test_star_fan_of_exceptional_is_p1xp1():
    y = star_subdivision(CONIFOLD, (1, 1, 2))
    sf = star_fan(y, 4)
    assert validate_fan(sf.fan) == []
    assert is_complete(sf.fan) and is_smooth(sf.fan)
    assert len(sf.fan.rays) == 4
    # two pairs of opposite rays: the quadric surface
    rays = set(sf.fan.rays)
    assert all(tuple(-x for x in r) in rays for r in rays)
    assert all(m == 1 for m in sf.multiplicity.values())


def test_star_fan_of_p2_line():
    sf = star_fan(P2, 0)
    assert is_complete(sf.fan)
    assert sf.fan.rank == 1
    assert len(sf.fan.rays) == 2


def test_star_fan_multiplicity():
    # wall cone((0,1),(2,1)) has index 2; seen from the divisor at (0,1)
    sf = star_fan(A1_SING, 0)
    assert sf.multiplicity[1] == 2


def test_cones_of_dim():
    assert len(cones_of_dim(P2, 1)) == 3
    assert len(cones_of_dim(P2, 2)) == 3
    assert len(cones_of_dim(P3, 2)) == 6
    assert len(cones_of_dim(CONIFOLD, 2)) == 4


def test_locate_max_cone():
    assert locate_max_cone(P2, (1, 1)) == 0
    assert locate_max_cone(A2, (-1, 0)) is None


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(SUITE)), st.tuples(
    st.integers(-3, 3), st.integers(-3, 3)))
def test_subdivision_preserves_validity(name, v):
    f = SUITE[name]
    if f.rank != 2 or not any(v):
        return
    from toricomplex.lattice import primitive_vector
    v = primitive_vector(v)
    g = star_subdivision(f, v)
    assert validate_fan(g) == []
    assert is_complete(g)
    if v not in f.rays:
        assert len(g.rays) == len(f.rays) + 1
