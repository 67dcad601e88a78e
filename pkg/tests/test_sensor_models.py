import pytest
from hypothesis import given, strategies as st

from smartcane.errors import DomainError
from smartcane.sensor_models import (
    IDEAL,
    REALISTIC,
    Obstacle,
    WalkerState,
    WaterPatch,
    World,
    advance_walker,
    nearest_obstacle_distance,
    sense_ultrasonic,
    water_depth_at,
)
from smartcane.signal_chain import SensorSpec, default_calibration

SPEC = SensorSpec()
TABLE = default_calibration()


def world_with(*positions, **kw):
    return World(obstacles=[Obstacle(p) for p in positions], **kw)


def test_nearest_obstacle_examples():
    assert nearest_obstacle_distance(world_with(120, 200), WalkerState(0), 0, 400) == 120
    assert nearest_obstacle_distance(world_with(10), WalkerState(50), 0, 400) is None
    assert nearest_obstacle_distance(world_with(500), WalkerState(0), 0, 48) is None


def test_nearest_obstacle_respects_visibility_window():
    world = World(obstacles=[Obstacle(30, appear_tick=5, vanish_tick=10)])
    walker = WalkerState(0)
    assert nearest_obstacle_distance(world, walker, 4, 100) is None
    assert nearest_obstacle_distance(world, walker, 5, 100) == 30
    assert nearest_obstacle_distance(world, walker, 9, 100) == 30
    assert nearest_obstacle_distance(world, walker, 10, 100) is None


def test_obstacle_at_walker_is_not_ahead():
    assert nearest_obstacle_distance(world_with(20), WalkerState(20), 0, 100) is None


def test_duplicate_obstacles_allowed():
    assert nearest_obstacle_distance(world_with(30, 30), WalkerState(10), 0, 100) == 20


@given(st.lists(st.floats(0, 500), max_size=8), st.floats(0, 500), st.floats(1, 200))
def test_nearest_obstacle_bounds(positions, pos, max_range):
    d = nearest_obstacle_distance(world_with(*positions), WalkerState(pos), 0, max_range)
    ahead = [p - pos for p in positions if p > pos]
    if d is None:
        assert not ahead or min(ahead) > max_range
    else:
        assert 0 < d <= max_range
        assert d == min(ahead)


def test_sense_ultrasonic_examples():
    assert sense_ultrasonic(world_with(20), WalkerState(0), 0, SPEC, TABLE, REALISTIC) == (20, 193)
    assert sense_ultrasonic(World(), WalkerState(0), 0, SPEC, TABLE) == (None, 0.0)
    assert sense_ultrasonic(world_with(5), WalkerState(0), 0, SPEC, TABLE, IDEAL) == (5, 50)


def test_sense_ultrasonic_extends_past_table():
    spec = SensorSpec(max_range_in=60)
    d, mv = sense_ultrasonic(world_with(50), WalkerState(0), 0, spec, TABLE)
    assert d == 50
    assert mv == pytest.approx(396 + 10 * 10)


def test_sense_ultrasonic_rejects_unknown_mode():
    with pytest.raises(DomainError):
        sense_ultrasonic(World(), WalkerState(0), 0, SPEC, TABLE, "noisy")


@given(st.floats(0.01, 39))
def test_ideal_mode_recovers_distance(d):
    _, mv = sense_ultrasonic(world_with(d), WalkerState(0), 0, SPEC, TABLE, IDEAL)
    assert mv / SPEC.mv_per_inch == pytest.approx(d, rel=1e-15)


def test_water_depth_examples():
    world = World(water=[WaterPatch(50, 60, 0.8)])
    assert water_depth_at(world, WalkerState(55)) == 0.8
    assert water_depth_at(world, WalkerState(10)) == 0
    overlapping = World(water=[WaterPatch(50, 60, 0.3), WaterPatch(52, 58, 0.9)])
    assert water_depth_at(overlapping, WalkerState(55)) == 0.9


@given(st.lists(st.tuples(st.floats(0, 100), st.floats(0.1, 20), st.floats(0, 3)), max_size=5),
       st.floats(0, 130))
def test_water_depth_non_negative(patches, pos):
    world = World(water=[WaterPatch(a, a + w, d) for a, w, d in patches])
    depth = water_depth_at(world, WalkerState(pos))
    assert depth >= 0
    if not any(a <= pos <= a + w for a, w, _ in patches):
        assert depth == 0


def test_water_patch_invariants():
    with pytest.raises(DomainError):
        WaterPatch(10, 10, 1)
    with pytest.raises(DomainError):
        WaterPatch(0, 10, -0.1)


def test_advance_walker_examples():
    assert advance_walker(WalkerState(0, 2), 5).pos_in == 10
    assert advance_walker(WalkerState(0, 0), 100).pos_in == 0
    assert advance_walker(WalkerState(90, 5), 10, corridor_len_in=100).pos_in == 100
    with pytest.raises(DomainError):
        advance_walker(WalkerState(0, 1), -1)


@given(st.floats(0, 100), st.floats(0, 10), st.integers(0, 1000), st.integers(0, 1000))
def test_advance_walker_monotone(pos, speed, a, b):
    walker = WalkerState(pos, speed)
    lo, hi = sorted((a, b))
    assert advance_walker(walker, lo).pos_in <= advance_walker(walker, hi).pos_in


def test_world_rejects_features_past_corridor():
    with pytest.raises(DomainError):
        World(obstacles=[Obstacle(150)], corridor_len_in=100)
    with pytest.raises(DomainError):
        World(water=[WaterPatch(90, 110, 1)], corridor_len_in=100)


def test_obstacle_invariants():
    with pytest.raises(DomainError):
        Obstacle(-1)
    with pytest.raises(DomainError):
        Obstacle(10, appear_tick=5, vanish_tick=4)
