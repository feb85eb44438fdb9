import random

import pytest

from toriq.cones import Cone
from toriq.fans import (
    Fan,
    FanSystem,
    FanViolation,
    GluingViolation,
    build_fan,
    build_fan_system,
    minimal_cone_containing,
)

from _oracles import random_fan

E1, E2, E3 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def cone(*gens, rank=3):
    return Cone.from_generators(list(gens), rank)


# ---------------------------------------------------------------------------
# fans


def test_two_chart_fan_cone_count(ex):
    # each 2-dimensional maximal cone contributes 4 faces; the origin is shared
    fan = ex.source_fan
    assert len(fan.maximal_cones) == 2
    face_sets = [set(c.faces()) for c in fan.maximal_cones]
    assert len(face_sets[0]) == 4 and len(face_sets[1]) == 4
    assert face_sets[0] & face_sets[1] == {Cone.zero(4)}
    assert len(fan.all_cones) == 7


def test_affine_space_fan_cone_count(ex):
    assert len(ex.target_fan.all_cones) == 8


def test_fan_violation_on_interior_ray():
    with pytest.raises(FanViolation) as err:
        build_fan([cone((1, 0), (0, 1), rank=2), cone((1, 1), rank=2)])
    assert err.value.indices == (0, 1)


def test_fan_drops_redundant_face_cones():
    sigma = cone(E1, E2)
    fan = build_fan([sigma, cone(E1)])
    assert fan.maximal_cones == (sigma,)
    assert cone(E1) in fan.all_cones


def test_fan_rejects_non_pointed():
    with pytest.raises(ValueError):
        build_fan([cone((1, 0), (-1, 0), rank=2)])


def test_minimal_cone_containing_ray(ex):
    rho4 = ex.cones["rho4"]
    assert minimal_cone_containing(ex.target_fan, rho4) == ex.cones["tau1"]


def test_minimal_cone_containing_outside(ex):
    assert minimal_cone_containing(ex.target_fan, (-1, 0, 0)) is None


def test_minimal_cone_containing_vector(ex):
    got = minimal_cone_containing(ex.source_fan, (0, 0, 1, 1))
    assert got == ex.cones["sigma2"]


def test_minimal_cone_uniqueness_random():
    rng = random.Random(31)
    for _ in range(15):
        fan = random_fan(rng)
        for _ in range(10):
            v = tuple(rng.randint(-4, 4) for _ in range(fan.rank))
            got = fan.minimal_cone_containing(v)
            candidates = [c for c in fan.all_cones if c.contains_point(v)]
            if got is None:
                assert not candidates
            else:
                assert all(c.contains_cone(got) for c in candidates)


# ---------------------------------------------------------------------------
# fan systems


def test_glued_system_is_non_separated(ex):
    assert not ex.system.separated
    assert len(ex.system.orbits()) == 7


def test_single_chart_system_is_separated(ex):
    sys = build_fan_system([ex.cones["delta"]])
    assert sys.separated
    assert len(sys.orbits()) == 8


def test_full_intersection_gluing_is_separated(ex):
    tau1, rho3 = ex.cones["tau1"], ex.cones["rho3"]
    sys = build_fan_system([tau1, rho3], {(0, 1): Cone.zero(3)})
    assert sys.separated  # tau1 and rho3 intersect only in the origin


def test_gluing_must_be_common_face(ex):
    # rho4 is a face of tau2 but lies in the relative interior of tau1
    with pytest.raises(GluingViolation):
        build_fan_system([ex.cones["tau1"], ex.cones["tau2"]], {(0, 1): ex.cones["rho4"]})


def test_gluing_transitivity_check():
    ray = Cone.from_generators([(1,)], 1)
    zero = Cone.zero(1)
    with pytest.raises(GluingViolation):
        FanSystem([ray, ray, ray], {(0, 1): ray, (1, 2): ray, (0, 2): zero})


def test_separated_system_to_fan_and_back(ex):
    tau1, rho3 = ex.cones["tau1"], ex.cones["rho3"]
    sys = build_fan_system([tau1, rho3], {(0, 1): Cone.zero(3)})
    fan = sys.as_fan()
    assert set(fan.maximal_cones) == {tau1, rho3}
    back = fan.as_system()
    assert {c for c in back.charts} == {c for c in sys.charts}
    assert back.separated


def test_non_separated_system_has_no_fan(ex):
    with pytest.raises(ValueError):
        ex.system.as_fan()


# ---------------------------------------------------------------------------
# orbit bookkeeping


def test_shared_torus_orbit(ex):
    sys = ex.system
    zero = Cone.zero(3)
    assert sys.orbit(0, zero) == sys.orbit(1, zero)


def test_unshared_face_orbits_are_distinct(ex):
    sys = ex.system
    rho4 = ex.cones["rho4"]
    orbit_rho4 = sys.orbit(1, rho4)
    for face in ex.cones["tau1"].faces():
        assert sys.orbit(0, face) != orbit_rho4


def test_orbit_requires_face_of_chart(ex):
    with pytest.raises(ValueError):
        ex.system.orbit(0, ex.cones["rho3"])  # rho3 is not a face of tau1
    with pytest.raises(ValueError):
        # rho4 lies inside tau1 set-theoretically but is not a face of it,
        # so no orbit of chart 0 is indexed by it
        ex.system.orbit(0, ex.cones["rho4"])


def test_doubled_line_orbits():
    ray = Cone.from_generators([(1,)], 1)
    doubled = FanSystem([ray, ray], {(0, 1): Cone.zero(1)})
    assert not doubled.separated
    assert len(doubled.orbits()) == 3  # shared torus, two distinct ray orbits
    assert doubled.orbit(0, ray) != doubled.orbit(1, ray)
    with pytest.raises(ValueError):
        doubled.orbit_of_cone(ray)  # ambiguous across the two charts


def test_orbit_of_cone_lookup(ex):
    sys = ex.system
    assert sys.orbit_of_cone(ex.cones["rho4"]).chart == 1
    with pytest.raises(ValueError):
        sys.orbit_of_cone(ex.cones["delta"])


def test_system_equivalence_under_permutation(ex):
    tau1, tau2 = ex.cones["tau1"], ex.cones["tau2"]
    zero = Cone.zero(3)
    a = FanSystem([tau1, tau2], {(0, 1): zero})
    b = FanSystem([tau2, tau1], {(0, 1): zero})
    assert a != b
    assert a.is_equivalent(b)


def test_rank_zero_fan():
    fan = Fan([Cone.zero(0)])
    assert len(fan.all_cones) == 1
    assert len(fan.orbits()) == 1
