from typing import Dict, List, Optional, Sequence

import numpy as np

from .average_precision import EvalReport, GroundTruth, evaluate
from ..geometry.pose import GraspPose

__all__ = ['Metric', 'GraspAP']


class Metric:

    def __init__(self, name: Optional[str] = None):
        self.name = name
        self.reset_states()

    def __call__(self, *args, **kwargs):
        return self.update_state(*args, **kwargs)

    def update_state(self, *args, **kwargs):
        raise NotImplementedError

    def reset_states(self):
        raise NotImplementedError

    def result(self):
        raise NotImplementedError


class GraspAP(Metric):
    """Mean AP_H and AP_E over scenes."""

    def __init__(self, name: str = "grasp_ap"):
        super().__init__(name)

    def update_state(self, preds: Sequence[GraspPose], gts: GroundTruth) -> EvalReport:
        report = evaluate(preds, gts)
        self.reports.append(report)
        return report

    def reset_states(self):
        self.reports: List[EvalReport] = []

    def result(self) -> Dict[str, float]:
        if not self.reports:
            return {'ap_hard': 0.0, 'ap_easy': 0.0}
        return {'ap_hard': float(np.mean([r.ap_hard for r in self.reports])),
                'ap_easy': float(np.mean([r.ap_easy for r in self.reports]))}

    def update_from_report(self, report: EvalReport) -> EvalReport:
        """Accumulate a report evaluated elsewhere, e.g. in a worker process."""
        self.reports.append(report)
        return report
