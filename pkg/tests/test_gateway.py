import json

import numpy as np
import pytest

from wandtrace.dispatch import LOW, VirtualGpio
from wandtrace.gateway import (
    POINTER_BLOB_RADIUS,
    Session,
    create_app,
    rle_decode,
    rle_encode,
)
from wandtrace.imaging import BitMask
from wandtrace.pipeline import PipelineConfig, run_pipeline
from wandtrace.synth import letter_path, render_pointer_frame, sample_points

from conftest import SMALL_H, SMALL_W


def started(model):
    s = Session(model)
    out = s.handle({"type": "session_start",
                    "width": SMALL_W, "height": SMALL_H})
    assert out[0]["type"] == "update"
    return s, out[0]


def c_path_points(model_session):
    config = PipelineConfig.default(SMALL_W, SMALL_H)
    script = letter_path("C", config.trace, SMALL_W, SMALL_H,
                         jitter_sigma=0.0, background_noise_max=0)
    return [(float(x), float(y)) for x, y in sample_points(script)]


# ----------------------------------------------------------- handshake

def test_session_start_reports_idle_and_zones(ac_model):
    _, update = started(ac_model)
    assert update["phase"] == "idle"
    assert update["frame_index"] == 0
    assert update["path"] == []
    assert update["prediction"] is None and update["pins"] is None
    zones = update["zones"]
    assert zones["start"]["role"] == "start"
    assert zones["end"]["role"] == "end"
    assert zones["start"]["cx"] < zones["end"]["cx"]
    assert zones["start"]["r"] > 0
    acc = update["accumulator"]
    assert acc["width"] == SMALL_W and acc["height"] == SMALL_H
    decoded = rle_decode(acc["rows"], SMALL_W, SMALL_H)
    assert decoded.count() == 0


def test_pointer_before_start_is_protocol_error(ac_model):
    s = Session(ac_model)
    out = s.handle({"type": "pointer", "x": 10, "y": 10})
    assert out == [{"type": "error", "code": "protocol",
                    "message": "'pointer' before session_start"}]


def test_unknown_type_and_malformed_messages(ac_model):
    s, _ = started(ac_model)
    assert s.handle({"type": "warp"})[0]["code"] == "protocol"
    assert s.handle({"no_type": 1})[0]["code"] == "protocol"
    assert s.handle("pointer")[0]["code"] == "protocol"
    assert s.handle({"type": "pointer", "x": "left"})[0]["code"] == "protocol"
    assert s.handle({"type": "session_start", "width": 4,
                     "height": 4})[0]["code"] == "protocol"


def test_session_survives_errors(ac_model):
    s, _ = started(ac_model)
    s.handle({"type": "bogus"})
    out = s.handle({"type": "pointer_absent"})
    assert out[0]["type"] == "update"
    assert out[0]["frame_index"] == 1


# ------------------------------------------------------------- tracing

def test_scripted_c_drag_completes_with_led_off(ac_model):
    # completion fires on the first pointer inside the end zone; trailing
    # samples then open a fresh idle segment
    s, _ = started(ac_model)
    completions = []
    for x, y in c_path_points(ac_model):
        out = s.handle({"type": "pointer", "x": x, "y": y})[0]
        if out.get("prediction") is not None:
            completions.append(out)
    assert len(completions) == 1
    final = completions[0]
    assert final["type"] == "update"
    assert final["phase"] == "complete"
    assert final["prediction"]["label"] == 2
    assert final["prediction"]["letter"] == "C"
    assert set(final["prediction"]["scores"]) == {"0", "2"}
    assert final["pins"] == {"17": LOW}
    assert len(final["path"]) >= 10
    # the accumulator decodes and carries the drawn stroke
    acc = rle_decode(final["accumulator"]["rows"], SMALL_W, SMALL_H)
    assert acc.count() > 0


def test_gateway_matches_offline_pipeline(ac_model):
    # same coordinates as pointer messages and as offline rendered frames
    pts = c_path_points(ac_model)
    s, _ = started(ac_model)
    completion = None
    for x, y in pts:
        out = s.handle({"type": "pointer", "x": x, "y": y})[0]
        if out.get("prediction"):
            completion = out
    frames = [render_pointer_frame(x, y, SMALL_W, SMALL_H, index=i + 1,
                                   radius=POINTER_BLOB_RADIUS)
              for i, (x, y) in enumerate(pts)]
    config = PipelineConfig.default(SMALL_W, SMALL_H)
    report = run_pipeline(frames, config, ac_model, VirtualGpio())
    done = [e for e in report.events if e.kind == "completed"][0]
    assert completion["prediction"]["label"] == done.label
    assert completion["prediction"]["scores"] == \
        {str(k): v for k, v in done.scores.items()}
    assert completion["pins"] == \
        {str(p): lv for p, lv in report.pin_states.items()}


def test_message_sequence_is_byte_deterministic(ac_model):
    msgs = [{"type": "session_start", "width": SMALL_W, "height": SMALL_H}]
    msgs += [{"type": "pointer", "x": x, "y": y}
             for x, y in c_path_points(ac_model)]
    msgs.append({"type": "pointer_absent"})

    def transcript():
        s = Session(ac_model)
        out = []
        for m in msgs:
            out.extend(s.handle(m))
        return json.dumps(out, sort_keys=True)

    assert transcript() == transcript()


def test_out_of_bounds_pointer_is_validation_error(ac_model):
    s, _ = started(ac_model)
    out = s.handle({"type": "pointer", "x": SMALL_W + 5.0, "y": 10.0})
    assert out[0] == {"type": "error", "code": "validation",
                      "message": out[0]["message"]}
    assert "outside" in out[0]["message"]
    # the frame was not consumed
    follow = s.handle({"type": "pointer_absent"})[0]
    assert follow["frame_index"] == 1


def test_reset_returns_to_idle(ac_model):
    s, _ = started(ac_model)
    zones = PipelineConfig.default(SMALL_W, SMALL_H).trace
    sx, sy = zones.start_zone.center
    s.handle({"type": "pointer", "x": sx, "y": sy})
    mid = s.handle({"type": "pointer", "x": sx + 10, "y": sy})[0]
    assert mid["phase"] == "tracing"
    out = s.handle({"type": "reset"})[0]
    assert out["phase"] == "idle"
    assert out["path"] == []
    decoded = rle_decode(out["accumulator"]["rows"], SMALL_W, SMALL_H)
    assert decoded.count() == 0


def test_config_overrides_apply(ac_model):
    s = Session(ac_model)
    out = s.handle({"type": "session_start", "width": SMALL_W,
                    "height": SMALL_H,
                    "config": {"min_path_points": 3, "threshold": 120}})
    assert out[0]["type"] == "update"
    assert s.pipe.config.threshold == 120
    assert s.pipe.config.trace.min_path_points == 3
    bad = s.handle({"type": "session_start", "width": SMALL_W,
                    "height": SMALL_H, "config": {"volume": 11}})
    assert bad[0]["code"] == "protocol"


# ----------------------------------------------------------------- RLE

def test_rle_round_trip_random_masks():
    rng = np.random.default_rng(61)
    for _ in range(50):
        h = int(rng.integers(1, 20))
        w = int(rng.integers(1, 40))
        bits = rng.random((h, w)) < rng.uniform(0.0, 1.0)
        mask = BitMask(bits)
        rows = rle_encode(mask)
        assert len(rows) == h
        for runs in rows:
            assert sum(runs) == w
            assert all(r >= 0 for r in runs)
            # zero-run first, then strictly alternating nonzero runs
            assert all(r > 0 for r in runs[1:])
        back = rle_decode(rows, w, h)
        assert np.array_equal(back.bits, bits)


def test_rle_edge_rows():
    all_zero = BitMask(np.zeros((1, 7), dtype=bool))
    assert rle_encode(all_zero) == [[7]]
    all_one = BitMask(np.ones((1, 7), dtype=bool))
    assert rle_encode(all_one) == [[0, 7]]


def test_rle_decode_validates():
    with pytest.raises(ValueError):
        rle_decode([[3]], width=4, height=1)
    with pytest.raises(ValueError):
        rle_decode([[4]], width=4, height=2)
    with pytest.raises(ValueError):
        rle_decode([[-1, 5]], width=4, height=1)


# ------------------------------------------------------------ HTTP app

def test_health_and_websocket_app(ac_model):
    from fastapi.testclient import TestClient

    app = create_app(ac_model)
    client = TestClient(app)
    health = client.get("/health").json()
    assert health["status"] == "ok"
    assert health["algorithm"] == "svm"
    assert health["classes"] == [0, 2]
    assert health["letters"] == ["A", "C"]
    assert health["dim"] == 784

    with client.websocket_connect("/session") as ws:
        ws.send_json({"type": "session_start",
                      "width": SMALL_W, "height": SMALL_H})
        first = ws.receive_json()
        assert first["type"] == "update"
        assert first["phase"] == "idle"
        ws.send_json({"type": "pointer", "x": 30.0, "y": 30.0})
        assert ws.receive_json()["type"] == "update"
        ws.send_text("{broken json")
        err = ws.receive_json()
        assert err["type"] == "error" and err["code"] == "protocol"
