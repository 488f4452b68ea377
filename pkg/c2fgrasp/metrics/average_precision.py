import logging
import numpy as np

from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple, Union

from .matching import nms, pose_match
from .thresholds import MatchThresholds, HARD, EASY
from .. import config
from ..data.label_set import GraspLabelSet
from ..geometry.distance import symmetric_rotation_distance
from ..geometry.pose import GraspPose
from ..utils.progress import progress
from ..utils.table import render_table

__all__ = ['APResult', 'EvalReport', 'average_precision', 'evaluate', 'evaluate_scenes', 'report_lines']

logger = logging.getLogger(__name__)

GroundTruth = Union[GraspLabelSet, Sequence[GraspPose]]


@dataclass
class APResult:
    """AP of one difficulty level.

    `matches[k]` is `(k, gt_index)` for the prediction at rank k, `gt_index` None
    when it matched nothing.
    """
    ap: float
    matches: List[Tuple[int, Optional[int]]]
    precision_at_rank: List[float]
    num_gts: int


@dataclass
class EvalReport:
    ap_hard: float
    ap_easy: float
    # hard-level matches and precisions
    matches: List[Tuple[int, Optional[int]]] = field(default_factory=list)
    precision_at_rank: List[float] = field(default_factory=list)
    matches_easy: List[Tuple[int, Optional[int]]] = field(default_factory=list)
    precision_at_rank_easy: List[float] = field(default_factory=list)
    num_predictions: int = 0
    num_gts: int = 0

    def show(self) -> str:
        summary = render_table(["metric", "value"],
                               [["ap_hard", self.ap_hard], ["ap_easy", self.ap_easy],
                                ["predictions", self.num_predictions], ["ground truths", self.num_gts],
                                ["denominator", min(self.num_gts, config.max_detections())]])
        easy = dict(self.matches_easy)
        rows = []
        for (rank, gt), precision in zip(self.matches, self.precision_at_rank):
            easy_precision = self.precision_at_rank_easy[rank] if rank < len(self.precision_at_rank_easy) else ""
            rows.append([rank + 1, "-" if gt is None else gt, precision,
                         "-" if easy.get(rank) is None else easy[rank], easy_precision])
        if not rows:
            return summary
        ranks = render_table(["rank", "hard gt", "hard precision", "easy gt", "easy precision"], rows)
        return f"{summary}\n\n{ranks}"


def _good_poses(gts: GroundTruth) -> List[GraspPose]:
    if isinstance(gts, GraspLabelSet):
        return gts.good()
    return list(gts)


def average_precision(preds: Sequence[GraspPose], gts: GroundTruth,
                      th: MatchThresholds = HARD,
                      max_detections: Optional[int] = None) -> APResult:
    """AP over the top-ranked predictions.

    Predictions are taken in the given order and truncated to `max_detections`
    (`c2fgrasp.max_detections()` by default). Each one claims the unmatched
    ground truth that it matches with the smallest rotation distance, ties
    broken by translation distance and then by index. With `m_k` the match
    indicator at rank k:

        AP = sum_k precision@k * m_k / min(|gts|, max_detections)

    Raises:
    ----------
    ValueError: if there are no ground-truth grasps.
    """
    gts = _good_poses(gts)
    if not gts:
        raise ValueError("Average precision is undefined without ground-truth grasps.")
    max_detections = config.max_detections() if max_detections is None else int(max_detections)
    preds = list(preds)[:max_detections]

    taken = [False] * len(gts)
    matches: List[Tuple[int, Optional[int]]] = []
    precisions: List[float] = []
    hits = 0
    score = 0.0
    for rank, pred in enumerate(preds):
        best, best_key = None, None
        for ix, gt in enumerate(gts):
            if taken[ix] or not pose_match(pred, gt, th):
                continue
            key = (symmetric_rotation_distance(pred.rotation, gt.rotation),
                   float(np.linalg.norm(pred.translation - gt.translation)), ix)
            if best_key is None or key < best_key:
                best, best_key = ix, key
        if best is not None:
            taken[best] = True
            hits += 1
        precision = hits / (rank + 1)
        if best is not None:
            score += precision
        matches.append((rank, best))
        precisions.append(precision)

    ap = score / min(len(gts), max_detections)
    assert 0.0 <= ap <= 1.0 + 1e-12, ap
    return APResult(min(ap, 1.0), matches, precisions, len(gts))


def evaluate(preds: Sequence[GraspPose], gts: GroundTruth,
             max_detections: Optional[int] = None) -> EvalReport:
    """NMS at (2 cm, 5 deg), keep the top detections, then AP at both difficulties."""
    gts = _good_poses(gts)
    max_detections = config.max_detections() if max_detections is None else int(max_detections)
    kept = nms(preds, HARD.trans_tol, HARD.rot_tol)[:max_detections]
    hard = average_precision(kept, gts, HARD, max_detections)
    easy = average_precision(kept, gts, EASY, max_detections)
    return EvalReport(hard.ap, easy.ap, hard.matches, hard.precision_at_rank,
                      easy.matches, easy.precision_at_rank, len(kept), len(gts))


def _evaluate_scene(scene: Tuple[Sequence[GraspPose], GroundTruth]) -> EvalReport:
    preds, gts = scene
    return evaluate(preds, gts)


def evaluate_scenes(scenes: Sequence[Tuple[Sequence[GraspPose], GroundTruth]], jobs: int = 1,
                    verbose: bool = False) -> List[EvalReport]:
    """Evaluate `(preds, gts)` pairs, in a process pool when `jobs > 1`.

    Reports come back in input order.
    """
    scenes = list(scenes)
    jobs = int(jobs)
    if jobs < 1:
        raise ValueError(f"jobs must be a positive integer, but got {jobs}.")
    if jobs == 1 or len(scenes) <= 1:
        return [_evaluate_scene(scene) for scene in progress(scenes, verbose=verbose, desc='Evaluating')]
    with Pool(processes=min(jobs, len(scenes))) as workers:
        reports = workers.map(_evaluate_scene, scenes)
    logger.info(f"Evaluated {len(scenes)} scene(s) with {jobs} worker(s).")
    return reports


def report_lines(report: EvalReport) -> str:
    """Deterministic `key value` lines for a report."""
    values = [("ap_hard", report.ap_hard), ("ap_easy", report.ap_easy),
              ("num_predictions", report.num_predictions), ("num_gts", report.num_gts)]
    return "".join(f"{key} {value:.17g}\n" if isinstance(value, float) else f"{key} {value}\n"
                   for key, value in values)
