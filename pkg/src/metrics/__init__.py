from src.metrics.accuracy import ndcg_at_k
from src.metrics.diversity import ItemFrequency, coverage_at_k, entropy_at_k, gini_at_k
from src.metrics.recommend import RecLists, recommend_topk
from src.metrics.report import MetricReport, evaluate, report_from_lists

__all__ = [
    "ItemFrequency",
    "MetricReport",
    "RecLists",
    "coverage_at_k",
    "entropy_at_k",
    "evaluate",
    "gini_at_k",
    "ndcg_at_k",
    "recommend_topk",
    "report_from_lists",
]
