import math

import numpy as np
import pytest

from wandtrace.errors import WrongPhaseError
from wandtrace.imaging import BitMask, Blob
from wandtrace.trace import (
    EventKind,
    Phase,
    TraceConfig,
    TriggerZone,
    bridge,
    default_trace_config,
    finalize_pattern,
    initial_state,
    reset,
    trace_step,
)

from oracles import segment_chebyshev_distance

W, H = 64, 48


def cfg(**overrides):
    return default_trace_config(W, H, **overrides)


def blob_at(x, y, size=2):
    """Square blob with top-left (x, y), centroid offset accordingly."""
    pixels = frozenset((x + dx, y + dy)
                       for dx in range(size) for dy in range(size))
    xs = [p[0] for p in pixels]
    ys = [p[1] for p in pixels]
    return Blob(area=len(pixels),
                centroid=(sum(xs) / len(xs), sum(ys) / len(ys)),
                bbox=(min(xs), min(ys), max(xs), max(ys)),
                pixels=pixels)


def start_blob(config):
    cx, cy = config.start_zone.center
    return blob_at(int(cx) - 1, int(cy) - 1)


def end_blob(config):
    cx, cy = config.end_zone.center
    return blob_at(int(cx) - 1, int(cy) - 1)


def mid_blob(step):
    return blob_at(20 + step, 20)


# ----------------------------------------------------------------- zones

def test_zone_contains_is_inclusive():
    z = TriggerZone((10.0, 10.0), 5.0, "start")
    assert z.contains((15.0, 10.0))
    assert not z.contains((15.001, 10.0))


def test_config_rejects_overlapping_zones():
    with pytest.raises(ValueError):
        TraceConfig(start_zone=TriggerZone((10, 10), 6, "start"),
                    end_zone=TriggerZone((20, 10), 6, "end"))


def test_default_zone_geometry():
    c = default_trace_config(320, 240)
    assert c.start_zone.center == (48.0, 120.0)
    assert c.end_zone.center == (272.0, 120.0)
    assert c.start_zone.radius == pytest.approx(0.08 * 240)
    assert c.min_path_points == 10
    assert c.gap_tolerance == 5
    assert c.stroke_width == 3


# ------------------------------------------------------------ transitions

def test_idle_blob_at_start_center_begins_tracing():
    config = cfg()
    state, event = trace_step(initial_state(W, H), start_blob(config), config)
    assert state.phase is Phase.TRACING
    assert event is not None and event.kind is EventKind.STARTED
    assert len(state.path) == 1
    assert state.accumulator.count() == 4  # the blob's own pixels


def test_idle_ignores_blob_outside_start_zone():
    config = cfg()
    state, event = trace_step(initial_state(W, H), mid_blob(0), config)
    assert state.phase is Phase.IDLE
    assert event is None
    assert state.path == ()
    assert state.accumulator.count() == 0


def test_idle_ignores_absent_blob():
    config = cfg()
    state, event = trace_step(initial_state(W, H), None, config)
    assert state.phase is Phase.IDLE and event is None


def trace_to_tracing(config, n_mid=0):
    state, _ = trace_step(initial_state(W, H), start_blob(config), config)
    for i in range(n_mid):
        state, event = trace_step(state, mid_blob(i), config)
        assert event is None
    return state


def test_completion_after_twelve_points():
    config = cfg()
    state = trace_to_tracing(config, n_mid=11)  # path length now 12
    state, event = trace_step(state, end_blob(config), config)
    assert state.phase is Phase.COMPLETE
    assert event.kind is EventKind.COMPLETED
    assert len(state.path) == 13
    assert event.pattern is not None
    assert event.pattern.pixels.shape == (H, W)


def test_end_zone_entry_before_min_path_is_ignored():
    config = cfg(min_path_points=10)
    state = trace_to_tracing(config, n_mid=2)  # path length 3
    state, event = trace_step(state, end_blob(config), config)
    assert state.phase is Phase.TRACING
    assert event is None
    assert len(state.path) == 4


def test_gap_abort_after_tolerance_exceeded():
    config = cfg(gap_tolerance=5)
    state = trace_to_tracing(config, n_mid=3)
    for i in range(5):
        state, event = trace_step(state, None, config)
        assert event is None, f"aborted too early at missing frame {i + 1}"
        assert state.phase is Phase.TRACING
    state, event = trace_step(state, None, config)
    assert event.kind is EventKind.ABORTED
    assert state.phase is Phase.IDLE
    assert state.path == () and state.accumulator.count() == 0


def test_gap_counter_resets_when_blob_returns():
    config = cfg(gap_tolerance=2)
    state = trace_to_tracing(config, n_mid=1)
    state, _ = trace_step(state, None, config)
    state, _ = trace_step(state, None, config)
    state, event = trace_step(state, mid_blob(5), config)
    assert event is None and state.missing_run == 0
    # two more absences are again tolerated
    state, _ = trace_step(state, None, config)
    state, event = trace_step(state, None, config)
    assert event is None and state.phase is Phase.TRACING


def test_reentering_start_zone_does_not_restart():
    config = cfg()
    state = trace_to_tracing(config, n_mid=4)
    before = len(state.path)
    state, event = trace_step(state, start_blob(config), config)
    assert event is None
    assert state.phase is Phase.TRACING
    assert len(state.path) == before + 1


def test_complete_is_terminal_until_reset():
    config = cfg()
    state = trace_to_tracing(config, n_mid=11)
    state, _ = trace_step(state, end_blob(config), config)
    frozen = state.accumulator.count()
    state, event = trace_step(state, start_blob(config), config)
    assert state.phase is Phase.COMPLETE
    assert event is None
    assert state.accumulator.count() == frozen
    fresh = reset(state)
    assert fresh.phase is Phase.IDLE
    assert fresh.path == () and fresh.accumulator.count() == 0
    assert fresh.frames_seen == state.frames_seen


def test_accumulator_grows_monotonically_and_includes_blobs():
    config = cfg()
    state = trace_to_tracing(config)
    count = state.accumulator.count()
    for i in range(8):
        b = mid_blob(2 * i)
        state, _ = trace_step(state, b, config)
        assert state.accumulator.count() >= count
        count = state.accumulator.count()
        for x, y in b.pixels:
            assert state.accumulator.bits[y, x]


def test_bridge_fires_only_on_large_jumps():
    config = cfg()
    state = trace_to_tracing(config)
    # A 2x2 blob: jump threshold is 2*sqrt(4/pi) ~ 2.26 pixels.
    near = blob_at(21, 20)
    state, _ = trace_step(state, near, config)
    small_count = state.accumulator.count()
    prev = state.path[-1][1]
    far = blob_at(40, 20)
    jump = math.hypot(far.centroid[0] - prev[0], far.centroid[1] - prev[1])
    assert jump > 2.0 * math.sqrt(far.area / math.pi)
    state, _ = trace_step(state, far, config)
    # The gap between the two blobs must now be filled: check a midpoint.
    mid_x = int((prev[0] + far.centroid[0]) / 2)
    assert state.accumulator.bits[20, mid_x]
    assert state.accumulator.count() > small_count + far.area


def test_step_determinism():
    config = cfg()
    a = trace_to_tracing(config, n_mid=6)
    b = trace_to_tracing(config, n_mid=6)
    assert a.phase == b.phase
    assert a.path == b.path
    assert np.array_equal(a.accumulator.bits, b.accumulator.bits)


# ---------------------------------------------------------------- bridge

def test_bridge_degenerate_segment_is_3x3_block():
    canvas = BitMask(np.zeros((9, 9), dtype=bool))
    out = bridge(canvas, (4, 4), (4, 4), width=3)
    expected = {(x, y) for x in (3, 4, 5) for y in (3, 4, 5)}
    got = {(x, y) for y, x in zip(*np.nonzero(out.bits))}
    assert got == expected


def test_bridge_horizontal_width_one_is_exact():
    canvas = BitMask(np.zeros((4, 8), dtype=bool))
    out = bridge(canvas, (0, 0), (7, 0), width=1)
    got = {(x, y) for y, x in zip(*np.nonzero(out.bits))}
    assert got == {(x, 0) for x in range(8)}


def test_bridge_preserves_existing_pixels():
    bits = np.zeros((8, 8), dtype=bool)
    bits[7, 7] = True
    out = bridge(BitMask(bits), (0, 0), (3, 0), width=1)
    assert out.bits[7, 7]
    assert not bits[0, 0], "input canvas must not be mutated"
    assert out.bits[0, 0]


def test_bridge_integer_segments_stay_within_half_width():
    # With endpoints already on the pixel grid there is no rounding, so
    # every stamped pixel sits within width/2 (Chebyshev) of the segment.
    rng = np.random.default_rng(17)
    for _ in range(200):
        p0 = tuple(float(v) for v in rng.integers(2, 30, size=2))
        p1 = tuple(float(v) for v in rng.integers(2, 30, size=2))
        for width in (1, 3, 5):
            out = bridge(BitMask(np.zeros((32, 32), dtype=bool)), p0, p1, width)
            ys, xs = np.nonzero(out.bits)
            assert len(xs) > 0
            for x, y in zip(xs, ys):
                d = segment_chebyshev_distance(float(x), float(y), p0, p1)
                assert d <= width / 2 + 1e-9
            assert out.bits[int(p0[1]), int(p0[0])]
            assert out.bits[int(p1[1]), int(p1[0])]


def test_bridge_fractional_segments_allow_rounding_slack():
    # Fractional endpoints are snapped to the nearest pixel before the
    # line walk, shifting the whole discrete line by up to half a pixel;
    # allow that on top of the stroke half-width.
    rng = np.random.default_rng(17)
    for _ in range(200):
        p0 = tuple(rng.uniform(2, 29, size=2))
        p1 = tuple(rng.uniform(2, 29, size=2))
        for width in (1, 3, 5):
            out = bridge(BitMask(np.zeros((32, 32), dtype=bool)), p0, p1, width)
            ys, xs = np.nonzero(out.bits)
            assert len(xs) > 0
            for x, y in zip(xs, ys):
                d = segment_chebyshev_distance(float(x), float(y), p0, p1)
                assert d <= width / 2 + 0.5 + 1e-9
            # endpoints always covered
            assert out.bits[int(p0[1] + 0.5), int(p0[0] + 0.5)]
            assert out.bits[int(p1[1] + 0.5), int(p1[0] + 0.5)]


# ------------------------------------------------------ finalize_pattern

def test_finalize_maps_bits_to_255():
    config = cfg()
    state = trace_to_tracing(config, n_mid=11)
    state, _ = trace_step(state, end_blob(config), config)
    img = finalize_pattern(state)
    assert img.pixels.shape == (H, W)
    assert set(np.unique(img.pixels)) <= {0, 255}
    assert int((img.pixels == 255).sum()) == state.accumulator.count()


def test_finalize_requires_complete_phase():
    with pytest.raises(WrongPhaseError):
        finalize_pattern(initial_state(W, H))
    config = cfg()
    with pytest.raises(WrongPhaseError):
        finalize_pattern(trace_to_tracing(config, n_mid=3))
