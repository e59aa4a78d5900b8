from .metrics import CorrelationReport, mse, pearson, spearman
from .ranking import RANKING_TOLERANCE, ranking_groups, ranking_violation_rate
from .evaluate import GROUPINGS, build_reports, evaluate, format_reports, load_subjective_scores, write_reports

__all__ = [
    "CorrelationReport",
    "mse",
    "pearson",
    "spearman",
    "RANKING_TOLERANCE",
    "ranking_groups",
    "ranking_violation_rate",
    "GROUPINGS",
    "build_reports",
    "evaluate",
    "format_reports",
    "load_subjective_scores",
    "write_reports",
]
