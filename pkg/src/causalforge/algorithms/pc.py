"""PC algorithm, original and stable variants.

Skeleton discovery runs level-wise conditional independence tests, recording
the separating set for every removed edge; unshielded triples whose middle
node is absent from the separating set become v-structures; Meek rules close
the result to a CPDAG. The CI source is abstract so a d-separation oracle can
stand in for the Fisher-z test in exactness checks.
"""

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exceptions import InvalidConfig
from ..graphs import check_adjacency, close_under_meek, d_separated, is_dag, support
from ..numerics import fisher_z_test, partial_correlation, sample_covariance
from ..priors import PriorKnowledge, constrain_pattern

PC_VARIANTS = ("original", "stable")


@dataclass
class PcConfig:
    alpha: float = 0.05
    variant: str = "original"
    max_condition_size: Optional[int] = None

    def validate(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidConfig("alpha must lie in (0, 1)")
        if self.variant not in PC_VARIANTS:
            raise InvalidConfig(f"unknown PC variant {self.variant!r}")
        if self.max_condition_size is not None and self.max_condition_size < 0:
            raise InvalidConfig("max_condition_size must be >= 0")
        return self


class FisherZCI:
    """Conditional independence from data via partial correlation + Fisher z."""

    def __init__(self, X, alpha=0.05):
        X = np.asarray(X, dtype=float)
        self.n, self.d = X.shape
        self.alpha = alpha
        self.cov = sample_covariance(X)

    def independent(self, i, j, S):
        r = partial_correlation(self.cov, i, j, tuple(S))
        return fisher_z_test(r, self.n, len(S), self.alpha).independent


class OracleCI:
    """Perfect CI answers read off a ground-truth DAG by d-separation."""

    def __init__(self, B_true):
        B = support(check_adjacency(B_true))
        if not is_dag(B):
            raise InvalidConfig("oracle CI source requires a DAG")
        self.B = B
        self.d = B.shape[0]

    def independent(self, i, j, S):
        return d_separated(self.B, i, j, S)


def pc_skeleton(ci, cfg: PcConfig, init=None, protected=frozenset()):
    """Level-wise skeleton search. Returns (symmetric adjacency, sepsets).

    init optionally replaces the complete starting skeleton; pairs listed in
    protected (frozensets) are never tested nor removed.
    """
    cfg.validate()
    d = ci.d
    if init is None:
        adj = np.ones((d, d), dtype=np.int8)
        np.fill_diagonal(adj, 0)
    else:
        adj = np.array(init, dtype=np.int8, copy=True)
    sepsets = {}
    max_level = cfg.max_condition_size
    if max_level is None:
        max_level = max(0, d - 2)

    for level in range(max_level + 1):
        pairs = [
            (i, j)
            for i in range(d)
            for j in range(d)
            if i != j and adj[i, j] and frozenset((i, j)) not in protected
        ]
        if not any(int(adj[i].sum()) - 1 >= level for i, j in pairs):
            break
        if cfg.variant == "stable":
            frozen = [np.flatnonzero(adj[i]).tolist() for i in range(d)]
        for i, j in pairs:
            if not adj[i, j]:  # removed earlier in this sweep
                continue
            nbrs = frozen[i] if cfg.variant == "stable" else np.flatnonzero(adj[i]).tolist()
            cand = [k for k in nbrs if k != j]
            if len(cand) < level:
                continue
            for S in itertools.combinations(cand, level):
                if ci.independent(i, j, S):
                    adj[i, j] = adj[j, i] = 0
                    sepsets[frozenset((i, j))] = tuple(S)
                    break
    return adj, sepsets


def orient_v_structures(skeleton, sepsets):
    """Direct unshielded colliders; two-way conflicts stay undirected."""
    P = np.array(skeleton, dtype=np.int8, copy=True)
    d = P.shape[0]
    proposed = set()
    for k in range(d):
        nbrs = np.flatnonzero(P[k])
        for a in range(len(nbrs)):
            for b in range(a + 1, len(nbrs)):
                i, j = nbrs[a], nbrs[b]
                if P[i, j] or P[j, i]:
                    continue
                key = frozenset((int(i), int(j)))
                if key not in sepsets:  # pair cut without a CI witness
                    continue
                if k not in sepsets[key]:
                    proposed.add((int(i), int(k)))
                    proposed.add((int(j), int(k)))
    for a, b in proposed:
        if (b, a) in proposed:
            continue
        P[b, a] = 0
    return P


def apply_meek_rules(pdag):
    """Meek R1-R4 closure of a PDAG."""
    return close_under_meek(pdag)


def pc(X, cfg: PcConfig = None, prior: PriorKnowledge = None, init=None):
    """Full PC run: skeleton, v-structures, Meek closure, prior enforcement.

    X is either an n x d data matrix or a CI-source object exposing d and
    independent(i, j, S). init optionally narrows the starting skeleton to a
    candidate mask (symmetrized, so a pair survives if either direction is
    allowed). Returns a CPDAG-style binary matrix.
    """
    cfg = (cfg or PcConfig()).validate()
    ci = X if hasattr(X, "independent") else FisherZCI(X, alpha=cfg.alpha)
    d = ci.d
    if d <= 1:
        return np.zeros((d, d), dtype=np.int8)

    if init is None:
        init = np.ones((d, d), dtype=np.int8)
    else:
        M = np.asarray(init, dtype=bool)
        init = (M | M.T).astype(np.int8)
    np.fill_diagonal(init, 0)
    protected = set()
    if prior is not None:
        prior.validate(d)
        for i, j in prior.forbidden:
            if (j, i) in prior.forbidden:
                init[i, j] = init[j, i] = 0
        for i, j in prior.required:
            protected.add(frozenset((i, j)))

    skel, sepsets = pc_skeleton(ci, cfg, init=init, protected=frozenset(protected))
    P = orient_v_structures(skel, sepsets)
    P = apply_meek_rules(P)
    if prior is not None and not prior.is_empty():
        P = constrain_pattern(P, prior)
    return P
