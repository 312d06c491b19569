"""Visualization models: folding, matrix, wrap geometry, bars, sort keys."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cohortlab.vis import (
    FoldConfig,
    UnknownOutcomeKey,
    UnknownSortKey,
    WrapConfig,
    build_bars,
    build_matrix,
    build_wrap,
    catmull_rom_chain,
    cycle_distribution,
    fold,
    order_uids,
    outcome_band,
    parse_sort_key,
    unfold,
)
from cohortlab.vis.sortkeys import ClinicalFieldKey, OutcomeKey, WindowMeanKey

from conftest import tiny_store


# ---------------------------------------------------------------------------
# folding


def test_fold_boundaries():
    segments = fold([(0.0, 100.0)], 24.0)
    assert segments == [[(0.0, 100.0)]]
    segments = fold([(24.0, 100.0)], 24.0)
    assert segments == [[], [(0.0, 100.0)]]


def test_fold_interior_empty_segments():
    segments = fold([(0.0, 1.0), (50.0, 2.0)], 24.0)
    assert len(segments) == 3
    assert segments[1] == []
    assert segments[2] == [(2.0, 2.0)]


def test_fold_empty_series():
    assert fold([], 24.0) == []


def test_fold_matches_naive_assignment():
    rng = np.random.default_rng(5)
    times = np.sort(rng.uniform(0, 400, size=200))
    series = [(float(t), float(v)) for t, v in zip(times, rng.normal(150, 20, 200))]
    segments = fold(series, 24.0)
    for t, v in series:
        idx = int(math.floor(t / 24.0))
        assert (t - idx * 24.0, v) in segments[idx]


@given(st.lists(st.tuples(st.floats(0, 1000), st.floats(-500, 500)),
                min_size=1, max_size=60),
       st.floats(0.5, 100))
def test_fold_partition_round_trip(points, cycle):
    series = sorted(points)
    assert unfold(fold(series, cycle), cycle) == series


def test_cycle_distribution_mass_at_zero(small_store):
    store = tiny_store(
        [{"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        bp_rows=[("a", float(24 * k), 150.0, 90.0) for k in range(5)],
    )
    bins = cycle_distribution(store, ["a"], 24.0, 24)
    assert bins[0]["count"] == 5
    assert sum(b["count"] for b in bins) == 5
    assert all(b["count"] == 0 for b in bins[1:])


def test_cycle_distribution_empty_cohort(small_store):
    bins = cycle_distribution(small_store, [], 24.0, 12)
    assert len(bins) == 12
    assert all(b["count"] == 0 for b in bins)


def test_cycle_distribution_matches_naive(small_store):
    uids = list(small_store.uids)[:40]
    n_bins = 24
    bins = cycle_distribution(small_store, uids, 24.0, n_bins)
    naive = [0] * n_bins
    total = 0
    for uid in uids:
        for t, _ in small_store.derive(uid, "sbp"):
            tic = t - math.floor(t / 24.0) * 24.0
            naive[min(int(tic // 1.0), n_bins - 1)] += 1
            total += 1
    assert [b["count"] for b in bins] == naive
    assert sum(b["count"] for b in bins) == total


# ---------------------------------------------------------------------------
# matrix


def _bp_patient(uid, readings):
    """One-patient store with given (t, sbp) readings."""
    return tiny_store(
        [{"uid": uid, "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        bp_rows=[(uid, t, v, 60.0) for t, v in readings],
    )


AGE_KEY = ClinicalFieldKey("age")


def test_matrix_mean_and_category():
    store = _bp_patient("a", [(1.0, 170.0), (2.0, 190.0)])
    model = build_matrix(store, {"a"}, FoldConfig(), AGE_KEY, "nihss_initial")
    cell = model.cells[(0, 0)]
    assert cell.mean_value == pytest.approx(180.0)
    assert cell.category_name == "crisis"
    assert cell.count == 2


def test_matrix_alpha_saturates():
    readings = [(float(i), 150.0) for i in range(8)]
    store = _bp_patient("a", readings)
    model = build_matrix(store, {"a"}, FoldConfig(), AGE_KEY, "nihss_initial")
    assert model.cells[(0, 0)].alpha == 1.0


def test_matrix_single_measurement_alpha():
    store = _bp_patient("a", [(1.0, 119.0)])
    model = build_matrix(store, {"a"}, FoldConfig(), AGE_KEY, "nihss_initial")
    cell = model.cells[(0, 0)]
    assert cell.category_name == "normal"
    assert cell.alpha == pytest.approx(0.15 + 0.85 / 6)


def test_matrix_category_step_non_decreasing():
    cfg = FoldConfig()
    legend = cfg.effective_legend()
    order = {e.name: i for i, e in enumerate(legend)}
    last = -1
    for v in np.linspace(40, 260, 441):
        idx = order[cfg.category_for(float(v))]
        assert idx >= last
        last = idx


def test_matrix_means_match_naive(small_store):
    uids = set(list(small_store.uids)[:30])
    cfg = FoldConfig(cycle_hours=24.0, bp_type="map")
    model = build_matrix(small_store, uids, cfg, AGE_KEY, "mrs_discharge")
    row_of = {r.uid: i for i, r in enumerate(model.rows)}
    for uid in uids:
        per_window = {}
        for t, v in small_store.derive(uid, "map"):
            per_window.setdefault(int(t // 24), []).append(v)
        for w, values in per_window.items():
            cell = model.cells[(row_of[uid], w)]
            assert cell.count == len(values)
            assert cell.mean_value == pytest.approx(
                sum(values) / len(values), abs=1e-9)


def test_matrix_invariants(small_store):
    uids = set(list(small_store.uids)[:50])
    cfg = FoldConfig()
    model = build_matrix(small_store, uids, cfg, AGE_KEY, "mrs_discharge")
    assert len(model.rows) == 50
    for (row, window), cell in model.cells.items():
        assert 0 <= row < len(model.rows)
        assert 0 <= window < model.n_windows
        assert cell.count >= 1
        assert cfg.opacity_floor <= cell.alpha <= 1.0


def test_matrix_deterministic(small_store):
    uids = set(list(small_store.uids)[:50])
    a = build_matrix(small_store, uids, FoldConfig(), AGE_KEY, "mrs_discharge")
    b = build_matrix(small_store, uids, FoldConfig(), AGE_KEY, "mrs_discharge")
    assert a.to_json() == b.to_json()


def test_matrix_cycle_filter_prefilters_measurements():
    store = _bp_patient("a", [(2.0, 100.0), (10.0, 200.0)])
    model = build_matrix(store, {"a"}, FoldConfig(), AGE_KEY, "nihss_initial",
                         cycle_filter=(0.0, 5.0))
    cell = model.cells[(0, 0)]
    assert cell.count == 1
    assert cell.mean_value == pytest.approx(100.0)


def test_matrix_empty_cohort(small_store):
    model = build_matrix(small_store, set(), FoldConfig(), AGE_KEY, "mrs_discharge")
    assert model.rows == [] and model.n_windows == 0 and model.cells == {}


def test_matrix_unknown_outcome_key(small_store):
    with pytest.raises(UnknownOutcomeKey):
        build_matrix(small_store, set(), FoldConfig(), AGE_KEY, "age")


# ---------------------------------------------------------------------------
# sort keys


def _three_patients():
    return tiny_store([
        {"uid": "u1", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0},
        {"uid": "u2", "male": 0.0, "age": 65.0, "toast": 2.0, "nihss_initial": None},
        {"uid": "u3", "male": 1.0, "age": 80.0, "toast": 3.0, "nihss_initial": 2.0},
    ])


def test_sort_clinical_field_asc():
    store = _three_patients()
    assert order_uids(store, ["u1", "u2", "u3"], ClinicalFieldKey("age")) == \
        ["u2", "u1", "u3"]


def test_sort_missing_sink_regardless_of_direction():
    store = _three_patients()
    key = ClinicalFieldKey("nihss_initial")
    assert order_uids(store, ["u1", "u2", "u3"], key, "asc") == ["u3", "u1", "u2"]
    assert order_uids(store, ["u1", "u2", "u3"], key, "desc") == ["u1", "u3", "u2"]


def test_sort_all_missing_pure_uid_order():
    store = tiny_store([
        {"uid": "b", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": None},
        {"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": None},
    ])
    key = ClinicalFieldKey("nihss_initial")
    assert order_uids(store, ["b", "a"], key, "desc") == ["a", "b"]


def test_sort_window_mean_matches_naive(small_store):
    uids = list(small_store.uids)[:40]
    key = WindowMeanKey("sbp", 0)
    ordered = order_uids(small_store, uids, key, "desc")

    def day0_mean(uid):
        vals = [v for t, v in small_store.derive(uid, "sbp") if 0 <= t < 24]
        return sum(vals) / len(vals) if vals else None

    means = {u: day0_mean(u) for u in uids}
    present = [u for u in uids if means[u] is not None]
    best = max(present, key=lambda u: (means[u], ))
    assert ordered[0] == best or means[ordered[0]] == means[best]
    assert [u for u in ordered if means[u] is None] == \
        sorted(u for u in uids if means[u] is None)


def test_sort_key_ties_break_by_uid():
    store = tiny_store([
        {"uid": "z", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 1.0},
        {"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 1.0},
    ])
    for direction in ("asc", "desc"):
        assert order_uids(store, ["z", "a"], ClinicalFieldKey("age"), direction) == \
            ["a", "z"]


def test_parse_sort_key_forms(small_store):
    cb = small_store.codebook
    assert parse_sort_key("clinical:age", cb) == ClinicalFieldKey("age")
    assert parse_sort_key("window_mean:sbp:0", cb) == WindowMeanKey("sbp", 0)
    assert parse_sort_key("outcome:mrs_discharge", cb) == OutcomeKey("mrs_discharge")
    with pytest.raises(UnknownSortKey):
        parse_sort_key("clinical:nope", cb)
    with pytest.raises(UnknownSortKey):
        parse_sort_key("window_mean:xyz:0", cb)
    with pytest.raises(UnknownSortKey):
        parse_sort_key("bogus", cb)
    with pytest.raises(UnknownOutcomeKey):
        parse_sort_key("outcome:age", cb)


def test_outcome_bands():
    assert outcome_band("mrs_discharge", 0) == "good"
    assert outcome_band("mrs_discharge", 1) == "good"
    assert outcome_band("mrs_discharge", 2) == "moderate"
    assert outcome_band("mrs_discharge", 3) == "moderate"
    assert outcome_band("mrs_discharge", 4) == "poor"
    assert outcome_band("mrs_discharge", 6) == "poor"
    assert outcome_band("nihss_initial", 4) == "good"
    assert outcome_band("nihss_initial", 5) == "moderate"
    assert outcome_band("nihss_initial", 16) == "poor"
    assert outcome_band("mrs_discharge", None) == "unknown"
    with pytest.raises(UnknownOutcomeKey):
        outcome_band("age", 70)


# ---------------------------------------------------------------------------
# wrap geometry


def _hermite_reference(knots, samples_per_span, alpha=0.5):
    """Independent centripetal Catmull-Rom evaluation in cubic Hermite
    form (tangents from the non-uniform knot parameterization)."""
    pts = np.asarray(knots, dtype=float)
    controls = np.concatenate(([pts[0]], pts, [pts[-1]]))
    d = np.linalg.norm(np.diff(controls, axis=0), axis=1)
    steps = np.maximum(d ** alpha, 1e-9)
    t = np.concatenate(([0.0], np.cumsum(steps)))
    out = []
    for i in range(len(pts) - 1):
        p0, p1, p2, p3 = controls[i:i + 4]
        t0, t1, t2, t3 = t[i:i + 4]
        dt = t2 - t1
        m1 = dt * ((p1 - p0) / (t1 - t0) - (p2 - p0) / (t2 - t0) + (p2 - p1) / dt)
        m2 = dt * ((p2 - p1) / dt - (p3 - p1) / (t3 - t1) + (p3 - p2) / (t3 - t2))
        for s in np.linspace(0, 1, samples_per_span):
            h00 = 2 * s**3 - 3 * s**2 + 1
            h10 = s**3 - 2 * s**2 + s
            h01 = -2 * s**3 + 3 * s**2
            h11 = s**3 - s**2
            out.append(h00 * p1 + h10 * m1 + h01 * p2 + h11 * m2)
    return np.asarray(out)


def test_spline_square_matches_reference():
    square = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)]
    samples, flags = catmull_rom_chain(square, 12)
    ref = _hermite_reference(square, 12)
    # chain drops duplicated interior knots; rebuild that view of the reference
    keep = np.ones(len(ref), dtype=bool)
    for i in range(1, 3):
        keep[i * 12] = False
    assert np.allclose(samples, ref[keep], atol=1e-9)
    # passes through all four corners
    for corner in square:
        assert any(np.allclose(s, corner, atol=1e-9) for s in samples)
    # stays inside the circumscribed circle x 1.5
    assert np.all(np.linalg.norm(samples, axis=1) <= math.sqrt(2) * 1.5)


def test_spline_single_and_two_knots():
    samples, flags = catmull_rom_chain([(0.5, 0.5)], 8)
    assert samples.shape == (1, 2) and flags.tolist() == [True]
    samples, flags = catmull_rom_chain([(0.0, 0.0), (1.0, 0.0)], 8)
    assert np.allclose(samples[0], (0, 0)) and np.allclose(samples[-1], (1, 0))
    assert flags[0] and flags[-1]


def _wrap_store():
    rows = []
    rng = np.random.default_rng(13)
    t = 0.5
    while t < 9.3 * 24:  # 10 segments worth of data
        rows.append(("w", round(t, 4), round(float(rng.uniform(90, 230)), 1), 70.0))
        t += float(rng.uniform(3, 9))
    return tiny_store(
        [{"uid": "w", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        bp_rows=rows,
        event_rows=[("w", "IAT", 4.0, 6.5)],
    ), len(rows)


def test_wrap_radius_endpoint_mapping():
    cfg = WrapConfig()
    assert cfg.radius_of(cfg.bp_lo) == cfg.r_min
    assert cfg.radius_of(cfg.bp_hi) == cfg.r_max
    assert cfg.radius_of(cfg.bp_lo - 50) == cfg.r_min  # clamped
    assert cfg.radius_of(cfg.bp_hi + 50) == cfg.r_max


def test_wrap_knots_on_spline(small_store):
    store, _ = _wrap_store()
    geo = build_wrap(store, "w", WrapConfig())
    for seg in geo.segments:
        knot_samples = seg.samples[seg.knot_flags]
        assert len(knot_samples) == len(seg.knots)
        for sample, knot in zip(knot_samples, seg.knots):
            assert abs(sample[0] - knot.x) < 1e-9
            assert abs(sample[1] - knot.y) < 1e-9


def test_wrap_knot_radii_exact_and_samples_bounded():
    store, _ = _wrap_store()
    cfg = WrapConfig()
    geo = build_wrap(store, "w", cfg)
    for seg in geo.segments:
        for knot in seg.knots:
            assert cfg.r_min - 1e-12 <= knot.radius <= cfg.r_max + 1e-12
            assert 0 <= knot.theta < 2 * math.pi
        radii = np.linalg.norm(seg.samples, axis=1)
        assert np.all(radii >= cfg.r_min * 0.75 - 1e-12)
        assert np.all(radii <= cfg.r_max * 1.25 + 1e-12)


def test_wrap_angle_convention():
    store = tiny_store(
        [{"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        bp_rows=[("a", 0.0, 220.0, 70.0), ("a", 6.0, 220.0, 70.0)],
    )
    geo = build_wrap(store, "a", WrapConfig())
    knots = geo.segments[0].knots
    # t=0 -> 12 o'clock (top); t=6 of 24 -> quarter turn clockwise (3 o'clock)
    assert knots[0].x == pytest.approx(0.0, abs=1e-12)
    assert knots[0].y == pytest.approx(1.0)  # value 220 = bpHi -> rMax
    assert knots[1].x == pytest.approx(1.0)
    assert knots[1].y == pytest.approx(0.0, abs=1e-12)


def test_wrap_stroke_alpha_formula():
    store, _ = _wrap_store()
    geo = build_wrap(store, "w", WrapConfig())
    s = len(geo.segments)
    expected = min(max(1.6 / s, 0.08), 0.8)
    assert all(seg.stroke_alpha == pytest.approx(expected) for seg in geo.segments)
    assert s == 10


def test_wrap_single_knot_segment_is_dot():
    store = tiny_store(
        [{"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        bp_rows=[("a", 3.0, 150.0, 90.0)],
    )
    geo = build_wrap(store, "a", WrapConfig())
    assert len(geo.segments) == 1
    seg = geo.segments[0]
    assert len(seg.samples) == 1 and seg.knot_flags.tolist() == [True]


def test_wrap_empty_patient_no_segments():
    store = tiny_store(
        [{"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}])
    geo = build_wrap(store, "a", WrapConfig())
    assert geo.segments == []


def test_wrap_above_baseline_flags():
    store = tiny_store(
        [{"uid": "a", "male": 1.0, "age": 70.0, "toast": 1.0, "nihss_initial": 4.0}],
        bp_rows=[("a", 0.0, 180.0, 70.0), ("a", 6.0, 100.0, 70.0)],
    )
    cfg = WrapConfig(baseline=120.0)
    geo = build_wrap(store, "a", cfg)
    seg = geo.segments[0]
    knot_flags = seg.above_baseline[seg.knot_flags]
    assert knot_flags.tolist() == [True, False]


def test_wrap_segments_ordered():
    store, _ = _wrap_store()
    geo = build_wrap(store, "w", WrapConfig())
    idxs = [s.segment_idx for s in geo.segments]
    assert idxs == sorted(idxs)


# ---------------------------------------------------------------------------
# bars


def test_bars_strict_above_rule():
    store = _bp_patient("a", [(1.0, 120.0), (2.0, 120.5)])
    model = build_bars(store, "a", "sbp", baseline_low=120.0)
    assert [b.flag for b in model.bars] == ["below", "above"]


def test_bars_dual_range():
    store = _bp_patient("a", [(1.0, 165.0), (2.0, 149.0), (3.0, 180.0), (4.0, 181.0)])
    model = build_bars(store, "a", "sbp", baseline_low=150.0, baseline_high=180.0)
    assert [b.flag for b in model.bars] == ["inRange", "outRange", "inRange", "outRange"]


def test_bars_one_per_measurement():
    store, n = _wrap_store()
    model = build_bars(store, "w", "sbp", baseline_low=140.0)
    assert len(model.bars) == n
    assert [m.kind for m in model.event_marks] == ["IAT"]
    mark = model.event_marks[0]
    assert mark.t_start < mark.t_end


def test_bars_invalid_dual_baselines():
    store = _bp_patient("a", [(1.0, 150.0)])
    with pytest.raises(ValueError):
        build_bars(store, "a", "sbp", baseline_low=150.0, baseline_high=150.0)
