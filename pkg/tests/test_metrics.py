import numpy as np
import pytest

from fhop.detections import BBox, Detection, DetectionLog
from fhop.errors import ValidationError
from fhop.metrics import (
    count_accuracy,
    f1_score,
    frame_distance,
    iou,
    match_detections,
    skip_error,
)
from fhop.traces import SkipTrace

from conftest import random_plain_boxes, to_detections, to_log
from reference import (
    ref_f1,
    ref_frame_distance,
    ref_greedy_hits,
    ref_max_hits,
    ref_skip_error,
)


def box(x1, y1, x2, y2):
    return BBox(x1, y1, x2, y2)


def det(x1, y1, x2, y2, label="car"):
    return Detection(bbox=box(x1, y1, x2, y2), class_label=label, score=1.0)


def rand_box(rng):
    x1 = float(rng.uniform(0.0, 10.0))
    y1 = float(rng.uniform(0.0, 10.0))
    return box(x1, y1, x1 + float(rng.uniform(0.5, 5.0)), y1 + float(rng.uniform(0.5, 5.0)))


class TestIou:
    def test_identical_boxes(self):
        assert iou(box(1, 2, 5, 6), box(1, 2, 5, 6)) == 1.0

    def test_disjoint_boxes(self):
        assert iou(box(0, 0, 1, 1), box(2, 2, 3, 3)) == 0.0

    def test_touching_edges_are_disjoint(self):
        assert iou(box(0, 0, 1, 1), box(1, 0, 2, 1)) == 0.0

    def test_partial_overlap(self):
        # intersection 2, union 6
        assert iou(box(0, 0, 2, 2), box(1, 0, 3, 2)) == pytest.approx(1 / 3, abs=1e-15)

    def test_symmetric_and_bounded(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            a, b = rand_box(rng), rand_box(rng)
            assert iou(a, b) == iou(b, a)
            assert 0.0 <= iou(a, b) <= 1.0

    def test_one_iff_identical(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            a, b = rand_box(rng), rand_box(rng)
            if iou(a, b) == 1.0:
                assert a == b


class TestMatchDetections:
    def test_identical_singletons(self):
        a = [det(0, 0, 2, 2)]
        assert match_detections(a, a).hits == 1

    def test_class_gate(self):
        a = [det(0, 0, 2, 2, "car")]
        b = [det(0, 0, 2, 2, "truck")]
        assert match_detections(a, b).hits == 0

    def test_greedy_two_hits(self):
        # a overlaps both others (0.9 and 0.6), b overlaps only the second (2/3);
        # greedy must still pair everyone: (a, first) then (b, second)
        a = det(0.0, 0.0, 10.0, 10.0)
        b = det(4.5, 0.0, 14.5, 10.0)
        first = box(0.0, 0.0, 10.0, 9.0)
        second = box(2.5, 0.0, 12.5, 10.0)
        assert iou(a.bbox, first) == pytest.approx(0.9)
        assert iou(a.bbox, second) == pytest.approx(0.6)
        assert iou(b.bbox, second) == pytest.approx(2 / 3)
        assert iou(b.bbox, first) < 0.5
        other = [
            Detection(bbox=first, class_label="car", score=1.0),
            Detection(bbox=second, class_label="car", score=1.0),
        ]
        result = match_detections([a, b], other)
        assert result.hits == 2
        assert {(ri, oi) for ri, oi, _ in result.pairs} == {(0, 0), (1, 1)}
        plain_ref = [((0.0, 0.0, 10.0, 10.0), "car"), ((4.5, 0.0, 14.5, 10.0), "car")]
        plain_other = [((0.0, 0.0, 10.0, 9.0), "car"), ((2.5, 0.0, 12.5, 10.0), "car")]
        assert ref_max_hits(plain_ref, plain_other, 0.5) == 2

    def test_each_side_matched_once(self):
        shared = det(0, 0, 4, 4)
        result = match_detections([shared, shared], [shared, shared, shared])
        assert result.hits == 2
        assert len({i for i, _, _ in result.pairs}) == 2
        assert len({j for _, j, _ in result.pairs}) == 2

    def test_empty_sets(self):
        assert match_detections([], []).hits == 0
        assert match_detections([det(0, 0, 1, 1)], []).hits == 0

    def test_threshold_validation(self):
        with pytest.raises(ValidationError):
            match_detections([], [], iou_threshold=0.0)
        with pytest.raises(ValidationError):
            match_detections([], [], iou_threshold=1.5)

    def test_agrees_with_reference_greedy(self):
        rng = np.random.default_rng(23)
        for _ in range(300):
            pa = random_plain_boxes(rng, 4)
            pb = random_plain_boxes(rng, 4)
            got = match_detections(to_detections(pa), to_detections(pb)).hits
            assert got == ref_greedy_hits(pa, pb, 0.5)


class TestF1Score:
    def test_identical_nonempty(self):
        a = [det(0, 0, 2, 2), det(5, 5, 8, 8)]
        assert f1_score(a, a) == 1.0

    def test_one_hit_of_two_each(self):
        a = [det(0, 0, 2, 2), det(10, 10, 12, 12)]
        b = [det(0, 0, 2, 2), det(30, 30, 32, 32)]
        assert f1_score(a, b) == pytest.approx(0.5, abs=1e-15)

    def test_both_empty(self):
        assert f1_score([], []) == 1.0

    def test_one_empty(self):
        assert f1_score([det(0, 0, 1, 1)], []) == 0.0
        assert f1_score([], [det(0, 0, 1, 1)]) == 0.0

    def test_no_hits(self):
        assert f1_score([det(0, 0, 1, 1)], [det(5, 5, 6, 6)]) == 0.0

    def test_symmetry_property(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            pa = random_plain_boxes(rng, 4)
            pb = random_plain_boxes(rng, 4)
            a, b = to_detections(pa), to_detections(pb)
            assert f1_score(a, b) == pytest.approx(f1_score(b, a), abs=1e-12)


class TestFrameDistance:
    def test_self_distance_zero(self):
        log = to_log([[((0, 0, 2, 2), "car")], [((5, 5, 7, 7), "car")]])
        assert frame_distance(log, 0, 0) == 0.0
        assert frame_distance(log, 1, 1) == 0.0

    def test_disjoint_sets(self):
        log = to_log([[((0, 0, 2, 2), "car")], [((10, 10, 12, 12), "car")]])
        assert frame_distance(log, 0, 1) == 1.0

    def test_complement_of_f1(self):
        plain = [
            [((0, 0, 2, 2), "car"), ((10, 10, 12, 12), "car")],
            [((0, 0, 2, 2), "car"), ((30, 30, 32, 32), "car")],
        ]
        assert frame_distance(to_log(plain), 0, 1) == pytest.approx(0.5, abs=1e-15)

    def test_index_range(self):
        log = to_log([[], []])
        with pytest.raises(ValidationError):
            frame_distance(log, 0, 2)


class TestSkipError:
    def test_zero_skip(self):
        log = to_log([[((0, 0, 2, 2), "car")]] * 3)
        assert skip_error(log, 0, 0) == 0.0

    def test_static_scene(self):
        log = to_log([[((0, 0, 2, 2), "car")]] * 6)
        assert skip_error(log, 0, 5) == 0.0

    def test_matches_term_by_term_sum(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            plain = [random_plain_boxes(rng, 3) for _ in range(8)]
            log = to_log(plain)
            i = int(rng.integers(0, 4))
            k = int(rng.integers(0, 8 - i))
            assert skip_error(log, i, k) == pytest.approx(
                ref_skip_error(plain, i, k, 0.5), abs=1e-12
            )

    def test_monotone_in_k(self):
        rng = np.random.default_rng(37)
        plain = [random_plain_boxes(rng, 3) for _ in range(10)]
        log = to_log(plain)
        values = [skip_error(log, 0, k) for k in range(10)]
        assert all(b >= a for a, b in zip(values, values[1:]))

    def test_range_overflow(self):
        log = to_log([[], [], []])
        with pytest.raises(ValidationError):
            skip_error(log, 1, 2)


class TestCountAccuracy:
    def test_process_all(self):
        log = to_log([[((0, 0, 2, 2), "car")], [], [((1, 1, 3, 3), "car")]])
        trace = SkipTrace(entries=((0, 0), (1, 0), (2, 0)), total_frames=3)
        assert count_accuracy(log, trace) == 1.0

    def test_constant_count(self):
        log = to_log([[((float(t), 0, float(t) + 2, 2), "car")] for t in range(6)])
        trace = SkipTrace(entries=((0, 5),), total_frames=6)
        assert count_accuracy(log, trace) == 1.0

    def test_two_frame_example(self):
        plain = [
            [((0, 0, 1, 1), "car"), ((2, 2, 3, 3), "car")],
            [((0, 0, 1, 1), "car"), ((2, 2, 3, 3), "car"),
             ((4, 4, 5, 5), "car"), ((6, 6, 7, 7), "car")],
        ]
        trace = SkipTrace(entries=((0, 1),), total_frames=2)
        assert count_accuracy(to_log(plain), trace) == pytest.approx(0.75, abs=1e-15)

    def test_length_mismatch(self):
        log = to_log([[], []])
        trace = SkipTrace(entries=((0, 2),), total_frames=3)
        with pytest.raises(ValidationError):
            count_accuracy(log, trace)


def test_f1_matches_reference_on_random_sets():
    rng = np.random.default_rng(41)
    for _ in range(200):
        pa = random_plain_boxes(rng, 5)
        pb = random_plain_boxes(rng, 5)
        got = f1_score(to_detections(pa), to_detections(pb))
        assert got == pytest.approx(ref_f1(pa, pb, 0.5), abs=1e-12)


def test_frame_distance_matches_reference():
    rng = np.random.default_rng(43)
    plain = [random_plain_boxes(rng, 4) for _ in range(12)]
    log = to_log(plain)
    for i in range(12):
        for j in range(12):
            assert frame_distance(log, i, j) == pytest.approx(
                ref_frame_distance(plain, i, j, 0.5), abs=1e-12
            )
