import math

import numpy as np
import pytest

from scenario.geometry import Point3D, Topology, as_array, distance, sample_topology
from utils.config import GeometryConfig
from utils.errors import GeometryError


def test_distance_is_euclidean():
    assert distance(Point3D(0, 0, 0), Point3D(3, 4, 12)) == pytest.approx(13.0)


def test_point_rejects_bad_coordinates():
    with pytest.raises(GeometryError):
        Point3D(1.0, math.nan, 1.0)
    with pytest.raises(GeometryError):
        Point3D(1.0, 1.0, -0.5)
    # GeometryError is also a ValueError so callers can catch either
    with pytest.raises(ValueError):
        Point3D(math.inf, 0.0, 0.0)


def test_as_array_shape():
    points = [Point3D(1, 2, 3), Point3D(4, 5, 6)]
    np.testing.assert_array_equal(as_array(points), [[1, 2, 3], [4, 5, 6]])
    assert as_array([]).shape == (0, 3)


def test_sample_topology_respects_regions(rng):
    geometry = GeometryConfig()
    topo = sample_topology(geometry, rng)

    assert len(topo.uplink_devices) == 10 and len(topo.downlink_irs) == 4
    assert all(0.0 <= p.x <= 20.0 and p.z == 1.0 for p in topo.uplink_devices)
    assert all(20.0 <= p.x <= 40.0 for p in topo.downlink_devices)
    assert all(5.0 <= p.x <= 20.0 and p.z == 10.0 for p in topo.uplink_irs)
    assert all(20.0 <= p.x <= 35.0 for p in topo.downlink_irs)
    assert topo.ap == Point3D(20.0, 20.0, 10.0)


def test_sample_topology_scales_with_area(rng):
    geometry = GeometryConfig(area=[10.0, 10.0])
    topo = sample_topology(geometry, rng)
    assert topo.ap == Point3D(5.0, 5.0, 10.0)
    assert all(p.x <= 5.0 and p.y <= 10.0 for p in topo.uplink_devices)


def test_sample_topology_is_seeded():
    a = sample_topology(GeometryConfig(), np.random.default_rng(5))
    b = sample_topology(GeometryConfig(), np.random.default_rng(5))
    assert a.to_record() == b.to_record()


def test_sample_topology_rejects_empty_area(rng):
    with pytest.raises(GeometryError):
        sample_topology(GeometryConfig(area=[0.0, 40.0]), rng)


def test_topology_validation():
    d = [Point3D(1, 1, 1)]
    with pytest.raises(GeometryError):
        Topology([], d, d, d, Point3D(2, 2, 10))
    with pytest.raises(GeometryError):
        Topology(d, d, d, [Point3D(50, 1, 10)], Point3D(2, 2, 10))


def test_record_round_trip(rng):
    topo = sample_topology(GeometryConfig(), rng)
    record = topo.to_record()
    assert set(record) == {"ud", "dd", "ur", "dr", "ap"}
    restored = Topology.from_record(record, topo.area)
    assert restored.to_record() == record


def test_with_devices_keeps_infrastructure(rng):
    topo = sample_topology(GeometryConfig(), rng)
    moved = topo.with_devices([Point3D(1, 1, 1)], [Point3D(30, 1, 1)])
    assert moved.uplink_irs == topo.uplink_irs
    assert moved.ap == topo.ap
    assert len(moved.uplink_devices) == 1
