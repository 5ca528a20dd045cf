"""Graph-recovery metrics.

An estimated graph may be a DAG or a CPDAG: a symmetric 1-pair counts as one
undirected edge, and an undirected edge whose skeleton matches a true edge is
scored as correct.
"""

from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import NotADag, ShapeError
from .graphs import check_adjacency, is_dag


@dataclass
class MetricsReport:
    fdr: float
    tpr: float
    fpr: float
    precision: float
    recall: float
    f1: float
    shd: int
    nnz: int
    gscore: float

    def to_dict(self):
        return asdict(self)


def _edge_counts(est, true):
    """(TP, R, FP, FN, nnz) from the directed/undirected edge comparison."""
    d = est.shape[0]
    tp = rev = fp = fn = nnz = 0
    for i in range(d):
        for j in range(d):
            if i == j or est[i, j] == 0:
                continue
            if est[j, i]:
                if i > j:  # visit each undirected pair once
                    continue
                nnz += 1
                if true[i, j] or true[j, i]:
                    tp += 1
                else:
                    fp += 1
            else:
                nnz += 1
                if true[i, j]:
                    tp += 1
                elif true[j, i]:
                    rev += 1
                else:
                    fp += 1
    for i in range(d):
        for j in range(d):
            if true[i, j] and not est[i, j] and not est[j, i]:
                fn += 1
    return tp, rev, fp, fn, nnz


def _gscore(tp, fp, n_true):
    return max(0, tp - fp) / max(1, n_true)


def evaluate(B_est, B_true) -> MetricsReport:
    """Score an estimated graph against a true DAG on the nine-metric report."""
    est = np.asarray(check_adjacency(B_est, binary=True), dtype=np.int8)
    true = np.asarray(check_adjacency(B_true, binary=True), dtype=np.int8)
    if est.shape != true.shape:
        raise ShapeError(f"graph shapes differ: {est.shape} vs {true.shape}")
    if not is_dag(true):
        raise NotADag("ground truth must be a DAG")

    d = true.shape[0]
    tp, rev, fp, fn, nnz = _edge_counts(est, true)
    n_true = int(true.sum())
    n_neg = d * (d - 1) // 2 - n_true

    fdr = (rev + fp) / max(1, nnz)
    tpr = tp / max(1, n_true)
    fpr = (rev + fp) / max(1, n_neg)
    precision = tp / max(1, nnz)
    recall = tpr
    if precision + recall == 0:
        f1 = 0.0
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    shd = fp + fn + rev
    return MetricsReport(
        fdr=fdr,
        tpr=tpr,
        fpr=fpr,
        precision=precision,
        recall=recall,
        f1=f1,
        shd=int(shd),
        nnz=int(nnz),
        gscore=_gscore(tp, fp, n_true),
    )
