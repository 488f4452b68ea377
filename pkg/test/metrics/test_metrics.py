import math

import numpy as np
import pytest

from scipy.spatial.transform import Rotation

from c2fgrasp.data import GraspLabelSet, Quality
from c2fgrasp.geometry import FLIP_X, GraspPose, rotation_angle, rot_z, symmetric_rotation_distance
from c2fgrasp.metrics import (EASY, HARD, GraspAP, MatchThresholds, NMS, TopK, average_precision,
                              evaluate, evaluate_scenes, nms, perturb_gt, pose_match, report_lines)

from helpers import random_rotation


def rotate_by(pose, angle, axis=(0.0, 0.0, 1.0), offset=(0.0, 0.0, 0.0), confidence=1.0):
    axis = np.asarray(axis, dtype=np.float64) / np.linalg.norm(axis)
    R = Rotation.from_rotvec(axis * angle).as_matrix() @ pose.rotation
    return GraspPose(R, pose.translation + np.asarray(offset), confidence)


def spread_gts(n, spacing=0.1, rng=None):
    rng = rng or np.random.default_rng(0)
    return [GraspPose(random_rotation(rng), [spacing * ix, 0.0, 0.0]) for ix in range(n)]


def brute_force_matches(preds, gts, trans_tol, rot_tol, k=10):
    """Rank by rank, every free ground truth inside both tolerances competes on
    (angle, translation error, index)."""
    free = set(range(len(gts)))
    matched = []
    for pred in preds[:k]:
        candidates = []
        for ix in sorted(free):
            gt = gts[ix]
            t_err = math.sqrt(sum((a - b) ** 2 for a, b in zip(pred.translation, gt.translation)))
            angle = min(Rotation.from_matrix(pred.rotation.T @ gt.rotation).magnitude(),
                        Rotation.from_matrix(pred.rotation.T @ gt.rotation @ FLIP_X).magnitude())
            if t_err < trans_tol and angle < rot_tol:
                candidates.append((angle, t_err, ix))
        if candidates:
            ix = min(candidates)[2]
            free.discard(ix)
            matched.append(ix)
        else:
            matched.append(None)
    hits, score = 0, 0.0
    for rank, ix in enumerate(matched):
        if ix is not None:
            hits += 1
            score += hits / (rank + 1)
    return matched, score / min(len(gts), k)


def test_thresholds():
    assert HARD.trans_tol == EASY.trans_tol == 0.02
    assert abs(HARD.rot_tol - math.radians(5)) < 1e-15
    assert abs(EASY.rot_tol - math.radians(10)) < 1e-15
    with pytest.raises(ValueError):
        MatchThresholds(0.0, 0.1)
    with pytest.raises(ValueError):
        MatchThresholds(0.02, float('inf'))


def test_pose_match(rng):
    gt = GraspPose(random_rotation(rng), [0.1, 0.2, 0.3])
    assert pose_match(gt, gt)
    assert not pose_match(rotate_by(gt, 0.0, offset=(0.03, 0.0, 0.0)), gt)
    # strict at the boundary
    assert not pose_match(GraspPose(np.eye(3), [0.02, 0.0, 0.0]), GraspPose(np.eye(3), np.zeros(3)))
    seven = rotate_by(gt, math.radians(7.0), axis=(1.0, 2.0, 3.0))
    assert not pose_match(seven, gt, HARD)
    assert pose_match(seven, gt, EASY)
    # the gripper flip is not an error
    flipped = GraspPose(gt.rotation @ FLIP_X, gt.translation)
    assert pose_match(flipped, gt)


def test_pose_match_tolerance_is_an_angle(rng):
    gt = GraspPose(random_rotation(rng), np.zeros(3))
    four, six = (rotate_by(gt, math.radians(a), axis=(0.3, -1.0, 0.5)) for a in (4.0, 6.0))
    assert abs(symmetric_rotation_distance(six.rotation, gt.rotation) - math.radians(3.0)) < 1e-9
    assert pose_match(four, gt, HARD)
    assert not pose_match(six, gt, HARD)


def test_pose_match_rigid_invariance(rng):
    for _ in range(100):
        gt = GraspPose(random_rotation(rng), rng.uniform(-0.1, 0.1, size=3))
        pred = rotate_by(gt, rng.uniform(0, 0.2), axis=rng.normal(size=3),
                         offset=rng.normal(0, 0.01, size=3))
        R, t = random_rotation(rng), rng.uniform(-1, 1, size=3)
        for th in (HARD, EASY):
            assert pose_match(pred, gt, th) == pose_match(pred.transformed(R, t), gt.transformed(R, t), th)


def test_nms_examples():
    a = GraspPose(np.eye(3), np.zeros(3), 0.9)
    assert nms([a, a.with_confidence(0.8)]) == [a]

    far = GraspPose(np.eye(3), [0.1, 0.0, 0.0], 0.8)
    assert nms([far, a]) == [a, far]

    b = GraspPose(np.eye(3), [0.015, 0.0, 0.0], 0.8)
    c = GraspPose(np.eye(3), [0.03, 0.0, 0.0], 0.7)
    assert nms([c, b, a]) == [a, c]

    # overlap needs both tolerances
    turned = GraspPose(rot_z(math.radians(20.0)), np.zeros(3), 0.5)
    assert nms([a, turned]) == [a, turned]
    assert nms([]) == []


def test_nms_properties(rng):
    for _ in range(200):
        n = int(rng.integers(1, 30))
        base = random_rotation(rng)
        poses = [rotate_by(GraspPose(base, np.zeros(3)), rng.uniform(0, 0.2), axis=rng.normal(size=3),
                           offset=rng.uniform(-0.03, 0.03, size=3), confidence=rng.uniform())
                 for _ in range(n)]
        kept = nms(poses)
        assert kept
        assert [p.confidence for p in kept] == sorted((p.confidence for p in kept), reverse=True)
        for ix, p in enumerate(kept):
            for q in kept[ix + 1:]:
                assert not (np.linalg.norm(p.translation - q.translation) < 0.02
                            and pose_match(p, q, MatchThresholds(0.02, math.radians(5.0))))
        assert nms(kept) == kept


def test_transforms():
    a = GraspPose(np.eye(3), np.zeros(3), 0.2)
    b = GraspPose(np.eye(3), [0.5, 0.0, 0.0], 0.9)
    c = GraspPose(np.eye(3), [1.0, 0.0, 0.0], 0.5)
    assert TopK(2)([a, b, c]) == [b, c]
    assert NMS()([a, a.with_confidence(0.1)]) == [a]
    assert 'k=2' in repr(TopK(2))


def test_average_precision_examples():
    gts = spread_gts(12)
    result = average_precision(gts[:10], gts)
    assert result.ap == 1.0
    assert [m[1] for m in result.matches] == list(range(10))

    miss = [GraspPose(np.eye(3), [5.0, 5.0, 5.0])] * 3
    assert average_precision(miss, gts).ap == 0.0

    one = spread_gts(1)
    result = average_precision([miss[0], one[0]], one)
    assert result.ap == 0.5
    assert result.matches == [(0, None), (1, 0)]
    assert result.precision_at_rank == [0.0, 0.5]


def test_average_precision_truncates(rng):
    gts = spread_gts(12)
    result = average_precision(gts, gts)
    assert len(result.matches) == 10
    assert result.ap == 1.0
    assert average_precision(gts, gts, max_detections=12).ap == 1.0


def test_average_precision_label_set():
    gts = spread_gts(2)
    labels = GraspLabelSet(gts, [Quality.BAD, Quality.GOOD])
    result = average_precision([gts[0], gts[1]], labels)
    assert result.num_gts == 1
    assert result.matches == [(0, None), (1, 0)]
    with pytest.raises(ValueError):
        average_precision(gts, GraspLabelSet([gts[0]], [Quality.BAD]))


def test_each_gt_matches_once():
    gt = GraspPose(np.eye(3), np.zeros(3))
    result = average_precision([gt, gt, gt], [gt])
    assert result.matches == [(0, 0), (1, None), (2, None)]
    assert result.ap == 1.0


def test_matching_prefers_closest_rotation():
    gts = [GraspPose(rot_z(math.radians(4.0)), np.zeros(3)),
           GraspPose(rot_z(math.radians(1.0)), [0.01, 0.0, 0.0])]
    result = average_precision([GraspPose(np.eye(3), np.zeros(3))], gts)
    assert result.matches == [(0, 1)]


def test_brute_force_oracle():
    rng = np.random.default_rng(7)
    for _ in range(200):
        base = random_rotation(rng)
        gts = [rotate_by(GraspPose(base, np.zeros(3)), rng.uniform(0, 0.15), axis=rng.normal(size=3),
                         offset=rng.uniform(-0.015, 0.015, size=3))
               for _ in range(int(rng.integers(1, 9)))]
        preds = [rotate_by(GraspPose(base, np.zeros(3)), rng.uniform(0, 0.15), axis=rng.normal(size=3),
                           offset=rng.uniform(-0.015, 0.015, size=3))
                 for _ in range(int(rng.integers(0, 11)))]
        for th in (HARD, EASY):
            result = average_precision(preds, gts, th)
            matched, ap = brute_force_matches(preds, gts, th.trans_tol, th.rot_tol)
            assert [m[1] for m in result.matches] == matched
            assert result.ap == ap
        assert average_precision(preds, gts, EASY).ap >= average_precision(preds, gts, HARD).ap


def test_evaluate_exact():
    gts = spread_gts(8)
    report = evaluate(gts, gts)
    assert report.ap_hard == report.ap_easy == 1.0
    assert report.num_predictions == report.num_gts == 8
    assert 'ap_hard' in report.show()


def test_evaluate_perturbed(rng):
    gts = spread_gts(8)
    close, off = [], []
    for ix, gt in enumerate(gts):
        direction = rng.normal(size=3)
        direction /= np.linalg.norm(direction)
        confidence = 1.0 / (1 + ix)
        close.append(rotate_by(gt, math.radians(3.0), axis=rng.normal(size=3),
                               offset=0.01 * direction, confidence=confidence))
        off.append(rotate_by(gt, math.radians(7.0), axis=rng.normal(size=3), confidence=confidence))

    report = evaluate(close, gts)
    assert report.ap_hard == 1.0
    report = evaluate(off, gts)
    assert report.ap_hard == 0.0
    assert report.ap_easy == 1.0
    assert report.matches_easy == [(ix, ix) for ix in range(8)]


def test_evaluate_applies_nms():
    gt = GraspPose(np.eye(3), np.zeros(3))
    duplicates = [gt.with_confidence(c) for c in (0.9, 0.8, 0.7)]
    report = evaluate(duplicates, [gt])
    assert report.num_predictions == 1
    assert report.ap_hard == 1.0


def test_report_lines():
    gts = spread_gts(2)
    text = report_lines(evaluate(gts[:1], gts))
    assert text == "ap_hard 0.5\nap_easy 0.5\nnum_predictions 1\nnum_gts 2\n"


def test_evaluate_scenes():
    gts = spread_gts(4)
    scenes = [(gts[:k], gts) for k in range(1, 4)]
    serial = evaluate_scenes(scenes, jobs=1)
    parallel = evaluate_scenes(scenes, jobs=2)
    assert [r.ap_hard for r in serial] == [r.ap_hard for r in parallel] == [0.25, 0.5, 0.75]
    with pytest.raises(ValueError):
        evaluate_scenes(scenes, jobs=0)


def test_grasp_ap_metric():
    gts = spread_gts(4)
    metric = GraspAP()
    assert metric.result() == {'ap_hard': 0.0, 'ap_easy': 0.0}
    metric.update_state(gts, gts)
    metric(gts[:2], gts)
    assert metric.result() == {'ap_hard': 0.75, 'ap_easy': 0.75}
    metric.update_from_report(evaluate([], gts))
    assert metric.result()['ap_hard'] == 0.5
    metric.reset_states()
    assert metric.reports == []


def test_perturb_gt_zero_noise(rng):
    gts = spread_gts(5, rng=rng)
    labels = GraspLabelSet(gts + [gts[0]], [Quality.GOOD] * 5 + [Quality.BAD])
    out = perturb_gt(labels, 0.0, 0.0, seed=3)
    assert len(out) == 5
    for ix, (a, b) in enumerate(zip(out, gts)):
        assert np.array_equal(a.rotation, b.rotation)
        assert np.array_equal(a.translation, b.translation)
        assert a.confidence == 1.0 / (1 + ix)


def test_perturb_gt_is_seeded(rng):
    gts = spread_gts(5, rng=rng)
    a = perturb_gt(gts, 0.01, 0.1, seed=4)
    b = perturb_gt(gts, 0.01, 0.1, seed=4)
    c = perturb_gt(gts, 0.01, 0.1, seed=5)
    assert all(np.array_equal(p.matrix, q.matrix) for p, q in zip(a, b))
    assert not all(np.array_equal(p.matrix, q.matrix) for p, q in zip(a, c))
    with pytest.raises(ValueError):
        perturb_gt(gts, -0.1, 0.1, seed=0)
    assert perturb_gt([], 0.1, 0.1, seed=0) == []


def test_perturb_gt_statistics():
    n = 10000
    gts = [GraspPose(np.eye(3), np.zeros(3))] * n
    out = perturb_gt(gts, 0.0, 0.2, seed=0)
    angles = np.array([rotation_angle(p.rotation, np.eye(3)) for p in out])
    assert abs(angles.mean() - 0.2 * math.sqrt(2.0 / math.pi)) < 3 * 0.2 / math.sqrt(n)


@pytest.mark.parametrize('offset, degrees, hard, easy', [
    (0.019, 4.9, True, True),
    (0.021, 0.0, False, False),
    (0.0, 5.1, False, True),
    (0.0, 7.0, False, True),
])
def test_threshold_boundaries(rng, offset, degrees, hard, easy):
    gt = GraspPose(random_rotation(rng), [0.1, 0.0, 0.0])
    direction = rng.normal(size=3)
    pred = rotate_by(gt, math.radians(degrees), axis=rng.normal(size=3),
                     offset=offset * direction / np.linalg.norm(direction))
    assert pose_match(pred, gt, HARD) is hard
    assert pose_match(pred, gt, EASY) is easy


def test_evaluate_identity_on_random_sets():
    rng = np.random.default_rng(11)
    for _ in range(50):
        gts = spread_gts(int(rng.integers(1, 11)), rng=rng)
        report = evaluate(gts, gts)
        assert report.ap_hard == report.ap_easy == 1.0
