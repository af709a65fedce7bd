import json
import os
import pathlib
import subprocess

import numpy as np
import pytest

scenefind = pytest.importorskip("scenefind")

SCHEMAS = pathlib.Path(__file__).resolve().parents[2] / "schemas"


def numpy_hausdorff(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    d = np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1))
    return max(d.min(axis=1).max(), d.min(axis=0).max())


@pytest.fixture(scope="module")
def data_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("data")
    for rid in (1, 2):
        cfg = scenefind.SynthConfig()
        cfg.recording_id = rid
        cfg.vehicles = 80
        cfg.duration = 60.0
        scenefind.write_recording(scenefind.generate_synthetic(cfg, 40 + rid), out)
    return out


def scene_with_context(rec):
    for t in rec.tracks:
        frame = (t.initial_frame + t.final_frame) // 2
        key = scenefind.SceneKey(rec.id, t.vehicle_id, frame)
        if scenefind.relative_lane(rec, t.vehicle_id, frame) != scenefind.RelativeLane.Right:
            continue
        try:
            return scenefind.extract_context_set(rec, key)
        except scenefind.ScenefindError as e:
            assert e.code == "EmptyContext"
    pytest.fail("no right-lane scene with a context")


def test_hausdorff_matches_numpy():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a = rng.uniform(-50, 50, size=(rng.integers(1, 9), 4))
        b = rng.uniform(-50, 50, size=(rng.integers(1, 9), 4))
        got = scenefind.hausdorff_points(a.tolist(), b.tolist())
        assert got == pytest.approx(numpy_hausdorff(a, b), rel=1e-12)


def test_empty_point_set_raises():
    with pytest.raises(scenefind.ScenefindError) as info:
        scenefind.hausdorff_points([], [[0, 0, 0, 0]])
    assert info.value.code == "EmptySet"


def test_round_trip_and_digest(data_dir):
    rec = scenefind.load_recording(data_dir, 1)
    assert rec.id == 1
    assert len(rec.tracks) == 80
    assert len(scenefind.dataset_digest(data_dir)) == 64


def test_context_and_lambda(data_dir):
    rec = scenefind.load_recording(data_dir, 1)
    ctx = scene_with_context(rec)
    assert ctx.lambda_ == scenefind.DEFAULT_LAMBDA
    for p in ctx.points:
        assert p.y_scaled == pytest.approx(10.0 * p.y)
        assert p.vy_scaled == pytest.approx(10.0 * p.vy)
    assert scenefind.hausdorff(ctx, ctx) == 0.0
    unit = ctx.with_lambda(1.0)
    assert [p.y_scaled for p in unit.points] == [p.y for p in ctx.points]


def test_search_self_match_and_thread_independence(data_dir):
    ds = scenefind.load_dataset(data_dir)
    ctx = scene_with_context(ds[0])
    one = scenefind.search(ds, ctx.key, top_n=15, threads=1)
    many = scenefind.search(ds, ctx.key, top_n=15, threads=4)
    assert one.entries[0].key == ctx.key
    assert one.entries[0].distance == 0.0
    assert one.to_json() == many.to_json()
    distances = [e.distance for e in one.entries]
    assert distances == sorted(distances)
    for e in one.entries:
        assert e.distance == pytest.approx(numpy_hausdorff(ctx.scaled_points(), e.context.scaled_points()))


def test_responses_and_density(data_dir):
    ds = scenefind.load_dataset(data_dir)
    ctx = scene_with_context(ds[0])
    result = scenefind.search(ds, ctx.key, top_n=20)
    trajs = scenefind.extract_responses(ds, [e.key for e in result.entries], horizon=3.0)
    assert len(trajs) == len(result.entries)
    for t in trajs:
        assert t.samples[0].t == 0.0
        assert t.samples[0].long_pos == pytest.approx(0.0, abs=1e-9)
    grid = np.linspace(-6, 6, 1201)
    dens = scenefind.estimate_density(np.random.default_rng(1).normal(size=500).tolist(), grid.tolist())
    d = np.asarray(dens.density)
    integral = float(((d[1:] + d[:-1]) * np.diff(grid)).sum() / 2)
    assert integral == pytest.approx(1.0, abs=1e-6)


def test_unknown_scene_raises(data_dir):
    rec = scenefind.load_recording(data_dir, 1)
    with pytest.raises(scenefind.ScenefindError) as info:
        scenefind.extract_context_set(rec, scenefind.SceneKey(1, 99999, 1))
    assert info.value.code == "UnknownScene"


@pytest.mark.skipif("SCENEFIND_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_agrees_with_module(data_dir, tmp_path):
    ds = scenefind.load_dataset(data_dir)
    ctx = scene_with_context(ds[0])
    out = tmp_path / "r.json"
    k = ctx.key
    subprocess.run(
        [os.environ["SCENEFIND_CLI"], "search", "--data-dir", str(data_dir), "--recording", str(k.recording_id),
         "--ego", str(k.ego_id), "--frame", str(k.frame), "--top", "15", "--out", str(out)],
        check=True, capture_output=True)
    assert json.loads(out.read_text()) == json.loads(scenefind.search(ds, k, top_n=15).to_json())


@pytest.mark.skipif("SCENEFIND_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_outputs_match_shipped_schemas(data_dir, tmp_path):
    jsonschema = pytest.importorskip("jsonschema")
    ds = scenefind.load_dataset(data_dir)
    k = scene_with_context(ds[0]).key
    out = tmp_path / "r.json"
    subprocess.run(
        [os.environ["SCENEFIND_CLI"], "search", "--data-dir", str(data_dir), "--recording", str(k.recording_id),
         "--ego", str(k.ego_id), "--frame", str(k.frame), "--top", "5", "--out", str(out)],
        check=True, capture_output=True)
    for schema, doc in (("search-result", out), ("run-manifest", tmp_path / "r.manifest.json")):
        spec = json.loads((SCHEMAS / f"{schema}.schema.json").read_text())
        jsonschema.Draft202012Validator(spec).validate(json.loads(doc.read_text()))
