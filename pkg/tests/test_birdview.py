import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from urbandrl import birdview as bv
from urbandrl import drivesim as ds


@pytest.fixture(scope="module")
def road():
    return ds.build_roundabout()


def _history(ego, objects=(), length=4):
    h = bv.HistoryBuffer(length)
    h.push(bv.Snapshot(ego, tuple(objects)))
    return h


def _inside(box, px, py, shrink=0.0):
    x, y, h, length, width = box
    rx, ry = px - x, py - y
    lon = rx * math.cos(h) + ry * math.sin(h)
    lat = -rx * math.sin(h) + ry * math.cos(h)
    return (np.abs(lon) <= length / 2 - shrink) & (np.abs(lat) <= width / 2 - shrink)


def _pixel_centers_world(ego_pose, res=256):
    # inverse transform of world_to_pixel for pixel centers
    k = res / 40.0
    cols, rows = np.meshgrid(np.arange(res) + 0.5, np.arange(res) + 0.5)
    left = 20.0 - cols / k
    fwd = 32.0 - rows / k
    ex, ey, eh = ego_pose
    c, s = math.cos(eh), math.sin(eh)
    return ex + fwd * c - left * s, ey + fwd * s + left * c


# ------------------------------------------------------------------ mapping
def test_ego_pixel_anchor():
    assert np.allclose(bv.world_to_pixel((3.0, -7.0), (3.0, -7.0, 0.4)), (128.0, 204.8))
    assert np.allclose(bv.world_to_pixel((0.0, 0.0), (0.0, 0.0, 0.0), 64), (32.0, 51.2))


def test_point_ahead_maps_up():
    ego = (1.0, 2.0, 0.7)
    ahead = (1.0 + 10 * math.cos(0.7), 2.0 + 10 * math.sin(0.7))
    col, row = bv.world_to_pixel(ahead, ego)
    assert col == pytest.approx(128.0) and row == pytest.approx(204.8 - 64.0)


def test_left_of_ego_maps_to_smaller_column():
    col, _ = bv.world_to_pixel((0.0, 5.0), (0.0, 0.0, 0.0))
    assert col == pytest.approx(128.0 - 32.0)


@settings(max_examples=100, deadline=None)
@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-math.pi, math.pi),
       st.floats(-20, 20), st.floats(-20, 20), st.floats(-math.pi, math.pi))
def test_rigid_motion_invariance(ex, ey, eh, px, py, rot):
    c, s = math.cos(rot), math.sin(rot)
    before = bv.world_to_pixel((px, py), (ex, ey, eh))
    after = bv.world_to_pixel((c * px - s * py, s * px + c * py),
                              (c * ex - s * ey, s * ex + c * ey, eh + rot))
    assert np.allclose(before, after, atol=1e-7)


def test_bad_resolution():
    with pytest.raises(ValueError):
        bv.world_to_pixel((0, 0), (0, 0, 0), 128)


# ------------------------------------------------------------------ history
def test_history_push_and_evict():
    h = bv.HistoryBuffer(4)
    snaps = [bv.Snapshot((float(i), 0.0, 0.0, 4.5, 2.0), ()) for i in range(10)]
    h.push(snaps[0])
    assert len(h) == 1
    for s in snaps[1:]:
        h.push(s)
    assert len(h) == 4 and h.snapshots() == snaps[-4:]


def test_history_stride_picks_control_rate_frames():
    h = bv.HistoryBuffer(4, stride=4)
    snaps = [bv.Snapshot((float(i), 0.0, 0.0, 4.5, 2.0), ()) for i in range(30)]
    for s in snaps:
        h.push(s)
    assert [s.ego[0] for s in h.snapshots()] == [17.0, 21.0, 25.0, 29.0]


def test_render_needs_history(road):
    with pytest.raises(ValueError):
        bv.render(road, bv.HistoryBuffer())


# ------------------------------------------------------------------ raster
def test_frame_shape_range_and_conservation(road):
    w = ds.reset_episode(ds.ScenarioConfig(), 0)
    h = bv.push_history(bv.HistoryBuffer(), w)
    full = bv.render_full(road, h)
    small = bv.render(road, h)
    assert full.shape == (256, 256, 3) and small.shape == (64, 64, 3)
    assert small.min() >= 0.0 and small.max() <= 1.0
    assert abs(float(full.astype(np.float64).mean()) - float(small.astype(np.float64).mean())) < 1e-6


def test_render_determinism(road):
    w = ds.reset_episode(ds.ScenarioConfig(), 4)
    a = bv.render(road, bv.push_history(bv.HistoryBuffer(), w))
    b = bv.render(road, bv.push_history(bv.HistoryBuffer(), w))
    assert a.tobytes() == b.tobytes()


def test_single_ego_box_area(road):
    # ego parked well away from the route so only map/background surround it
    ego = (0.0, 0.0, 0.3, 4.5, 2.0)
    labels = bv.render_labels(road, _history(ego))
    red = labels >= bv.EGO_BASE
    k = 6.4
    area = 4.5 * k * 2.0 * k
    perimeter = 2 * (4.5 + 2.0) * k
    assert abs(red.sum() - area) <= perimeter   # within a one-pixel rim
    xs, ys = _pixel_centers_world(ego[:3])
    assert red[_inside(ego, xs, ys, shrink=1 / k)].all()
    assert not red[~_inside(ego, xs, ys, shrink=-1 / k)].any()


def test_traffic_ahead_visible(road):
    ego = (0.0, -50.0, math.pi / 2, 4.5, 2.0)
    car = (0.0, -40.0, math.pi / 2, 4.5, 2.0)
    frame = bv.render(road, _history(ego, [car]))
    g = frame[..., 1] > np.maximum(frame[..., 0], frame[..., 2])
    rows, _ = np.nonzero(g)
    ego_row = 51.2
    assert g.any() and rows.max() < ego_row


def test_moving_ego_history_fades(road):
    h = bv.HistoryBuffer(4)
    # sideways drift keeps all four boxes inside the view without overlap
    poses = [(15.0 - 5.0 * i, -60.0 + 0.5 * i, math.pi / 2, 4.5, 2.0) for i in range(4)]
    for p in poses:
        h.push(bv.Snapshot(p, ()))
    full = bv.render_full(road, h)
    newest = poses[-1][:3]
    red = []
    for p in poses:
        col, row = bv.world_to_pixel(p[:2], newest)
        red.append(full[int(row), int(col), 0])
    assert red == sorted(red) and len(set(red)) == 4
    assert np.allclose(red, bv.BRIGHTNESS)


def _random_world(rng, road):
    n = int(rng.integers(0, 12))
    w = ds.reset_episode(ds.ScenarioConfig(n_traffic=n), int(rng.integers(1 << 30)))
    s = rng.uniform(0, road.route.length)
    x, y, hdg = road.route.pose_at(s)
    w.ego = ds.VehicleState(x + rng.normal(0, 1.5), y + rng.normal(0, 1.5),
                            hdg + rng.normal(0, 0.3))
    return w


def test_role_separation_on_random_worlds(road):
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        w = _random_world(rng, road)
        h = bv.HistoryBuffer(4, stride=2)
        for _ in range(int(rng.integers(1, 9))):
            bv.push_history(h, w)
            ds.step_traffic(road, w.traffic, w.ego.box(), 0.05, w.rng)
        labels = bv.render_labels(road, h)
        img = bv.colorize(labels)
        r, g, b = img[..., 0], img[..., 1], img[..., 2]
        route = labels == bv.ROUTE
        ego = labels >= bv.EGO_BASE
        obj = (labels >= bv.OBJECT_BASE) & ~ego
        other = ~(route | ego | obj)
        assert (b[route] > np.maximum(r[route], g[route])).all()
        assert (r[ego] > np.maximum(g[ego], b[ego])).all()
        assert (g[obj] > np.maximum(r[obj], b[obj])).all()
        assert ((r[other] == g[other]) & (g[other] == b[other])).all()
        # geometric cross-check: interiors of newest boxes carry their role
        newest = h.snapshots()[-1]
        xs, ys = _pixel_centers_world(newest.ego[:3])
        assert ego[_inside(newest.ego, xs, ys, shrink=0.2)].all()
        small = bv.render(road, h)
        green = small[..., 1] > np.maximum(small[..., 0], small[..., 2])
        for box in newest.objects:
            # the ego is drawn on top, so it may hide part of an overlapping car
            core = _inside(box, xs, ys, shrink=0.2) & ~ego
            if core.any():
                assert obj[core].all()
            # a vehicle with a visible core must show up in the 64 px frame
            if core.sum() >= 32:
                rows, cols = np.nonzero(core)
                assert green[rows // 4, cols // 4].any()


def test_drivable_area_matches_road(road):
    ego = (0.0, -20.0, math.pi / 2, 4.5, 2.0)
    labels = bv.render_labels(road, _history(ego))
    xs, ys = _pixel_centers_world(ego[:3])
    drivable = road.is_drivable(np.stack([xs.ravel(), ys.ravel()], 1)).reshape(xs.shape)
    painted = labels != 0
    # disagreement only on the one-pixel boundary band
    assert (painted != drivable).mean() < 0.03


# ---------------------------------------------------------------------- io
def test_ppm_roundtrip(tmp_path, road):
    w = ds.reset_episode(ds.ScenarioConfig(), 0)
    frame = bv.render(road, bv.push_history(bv.HistoryBuffer(), w))
    path = tmp_path / "f.ppm"
    bv.write_ppm(path, frame)
    assert path.read_bytes().startswith(b"P6\n64 64\n255\n")
    assert np.array_equal(bv.read_ppm(path), bv.to_bytes(frame))


def test_dataset_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    frames = rng.integers(0, 256, size=(5, 64, 64, 3), dtype=np.uint8)
    path = tmp_path / "d.bin"
    assert bv.write_dataset(path, frames) == 5
    assert bv.read_dataset_header(path) == (5, 64, 64, 3)
    assert np.array_equal(bv.read_dataset(path), frames)
    path.write_bytes(path.read_bytes()[:-3])
    with pytest.raises(ValueError, match="payload"):
        bv.read_dataset(path)
    path.write_bytes(b"XXXX" + bytes(20))
    with pytest.raises(ValueError, match="magic"):
        bv.read_dataset(path)
