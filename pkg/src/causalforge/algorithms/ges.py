"""Greedy equivalence search over CPDAGs with a linear-Gaussian BIC score.

Forward phase grows the graph from empty by the best valid Insert operator,
backward phase shrinks it by the best valid Delete, and the pattern is
re-completed after every application. The score is decomposable, so each
operator is ranked by a single local-score difference at the target node;
local scores are memoised per (node, parent set) against one covariance
matrix computed up front.
"""

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exceptions import InsufficientSamples, InvalidConfig, SingularCovariance
from ..graphs import dag_to_cpdag, pdag_to_dag
from ..numerics import sample_covariance

_VAR_FLOOR = 1e-12


@dataclass
class GesConfig:
    penalty_discount: float = 1.0
    max_parents: Optional[int] = None

    def validate(self):
        if not self.penalty_discount > 0:
            raise InvalidConfig("penalty_discount must be > 0")
        if self.max_parents is not None and self.max_parents < 0:
            raise InvalidConfig("max_parents must be >= 0")
        return self


def bic_local(cov, n, node, parents, cfg: GesConfig = None):
    """Local BIC of one node given a parent set, from covariance suffstats.

    Returns -(n/2) log(sigma^2) - penalty_discount * ((|parents|+1)/2) log(n)
    where sigma^2 is the residual variance (1/n convention) of regressing the
    node on its parents, floored to keep the log finite.
    """
    cfg = (cfg or GesConfig()).validate()
    cov = np.asarray(cov, dtype=float)
    pa = sorted(int(p) for p in parents)
    var = float(cov[node, node])
    if pa:
        sub = cov[np.ix_(pa, pa)]
        cvec = cov[pa, node]
        try:
            beta = np.linalg.solve(sub, cvec)
        except np.linalg.LinAlgError as exc:
            raise SingularCovariance(
                f"covariance singular on parent set of node {node}"
            ) from exc
        var = var - float(cvec @ beta)
    var = max(var, _VAR_FLOOR)
    k = len(pa)
    return -(n / 2.0) * np.log(var) - cfg.penalty_discount * ((k + 1) / 2.0) * np.log(n)


class _LocalScores:
    """Memoised local scores keyed by (node, frozenset(parents))."""

    def __init__(self, cov, n, cfg):
        self.cov = cov
        self.n = n
        self.cfg = cfg
        self._cache = {}

    def __call__(self, node, parents):
        key = (node, frozenset(parents))
        if key not in self._cache:
            self._cache[key] = bic_local(self.cov, self.n, node, key[1], self.cfg)
        return self._cache[key]


# ---------------------------------------------------------------------------
# pattern predicates

def _parents(P, y):
    d = P.shape[0]
    return {x for x in range(d) if P[x, y] and not P[y, x]}


def _neighbors(P, y):
    d = P.shape[0]
    return [x for x in range(d) if P[x, y] and P[y, x]]


def _adjacent(P, a, b):
    return bool(P[a, b] or P[b, a])


def _is_clique(P, nodes):
    nodes = sorted(nodes)
    for a in range(len(nodes)):
        for b in range(a + 1, len(nodes)):
            if not _adjacent(P, nodes[a], nodes[b]):
                return False
    return True


def _blocks_semidirected(P, y, x, blocked):
    """True when every semi-directed path y ~> x meets the blocked set."""
    d = P.shape[0]
    seen = {y}
    stack = [y]
    while stack:
        u = stack.pop()
        for v in range(d):
            if not P[u, v] or v in seen:  # traversable: u -> v or u - v
                continue
            if v == x:
                return False
            if v in blocked:
                continue
            seen.add(v)
            stack.append(v)
    return True


def _subsets_lex(items):
    """All subsets of items as tuples, in lexicographic order."""
    items = sorted(items)
    subs = []
    for r in range(len(items) + 1):
        subs.extend(itertools.combinations(items, r))
    subs.sort()
    return subs


# ---------------------------------------------------------------------------
# operators

def _best_insert(P, score, max_parents):
    """Highest-scoring valid Insert(x, y, T); first in (x, y, T) order on ties."""
    d = P.shape[0]
    best = None
    for x in range(d):
        for y in range(d):
            if x == y or P[x, y] or P[y, x]:
                continue
            pa_y = _parents(P, y)
            nbrs = _neighbors(P, y)
            na = [t for t in nbrs if _adjacent(P, t, x)]
            t_pool = [t for t in nbrs if not _adjacent(P, t, x)]
            for T in _subsets_lex(t_pool):
                block = set(na) | set(T)
                base = block | pa_y
                if max_parents is not None and len(base) + 1 > max_parents:
                    continue
                if not _is_clique(P, block):
                    continue
                if not _blocks_semidirected(P, y, x, block):
                    continue
                delta = score(y, base | {x}) - score(y, base)
                if delta > 0.0 and (best is None or delta > best[0]):
                    best = (delta, x, y, T)
    return best


def _best_delete(P, score):
    """Highest-scoring valid Delete(x, y, H); first in (x, y, H) order on ties."""
    d = P.shape[0]
    best = None
    for x in range(d):
        for y in range(d):
            if x == y or not P[x, y]:  # needs x -> y or x - y
                continue
            pa_y = _parents(P, y)
            na = [t for t in _neighbors(P, y) if _adjacent(P, t, x)]
            for H in _subsets_lex(na):
                rest = set(na) - set(H)
                if not _is_clique(P, rest):
                    continue
                base = rest | (pa_y - {x})
                delta = score(y, base) - score(y, base | {x})
                if delta > 0.0 and (best is None or delta > best[0]):
                    best = (delta, x, y, H)
    return best


def _apply_insert(P, x, y, T):
    Q = P.copy()
    Q[x, y] = 1
    for t in T:
        Q[y, t] = 0  # orient t - y as t -> y
    return Q


def _apply_delete(P, x, y, H):
    Q = P.copy()
    Q[x, y] = Q[y, x] = 0
    for h in H:
        Q[h, y] = 0  # orient y - h as y -> h
        if Q[x, h] and Q[h, x]:
            Q[h, x] = 0  # orient x - h as x -> h
    return Q


def _recomplete(Q):
    """CPDAG of the modified pattern via a consistent extension."""
    return dag_to_cpdag(pdag_to_dag(Q))


def _total_score(P, score):
    G = pdag_to_dag(P)
    d = G.shape[0]
    return float(sum(score(y, _parents(G, y)) for y in range(d)))


# ---------------------------------------------------------------------------
# search

def ges(X, cfg: GesConfig = None, trace=None):
    """Two-phase greedy equivalence search. Returns a CPDAG adjacency matrix.

    When trace is a list, one record per accepted operator is appended with
    the phase, operator arguments, score delta, and running total score.
    """
    cfg = (cfg or GesConfig()).validate()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise InvalidConfig("ges expects an n x d data matrix")
    n, d = X.shape
    if d <= 1:
        return np.zeros((d, d), dtype=np.int8)
    if n <= d + 3:
        raise InsufficientSamples(f"ges needs n > d + 3, got n={n}, d={d}")

    score = _LocalScores(sample_covariance(X), n, cfg)
    P = np.zeros((d, d), dtype=np.int8)

    for phase, finder, applier in (
        ("forward", _best_insert, _apply_insert),
        ("backward", _best_delete, _apply_delete),
    ):
        while True:
            args = (cfg.max_parents,) if phase == "forward" else ()
            best = finder(P, score, *args)
            if best is None:
                break
            delta, x, y, subset = best
            P = _recomplete(applier(P, x, y, subset))
            if trace is not None:
                trace.append(
                    {
                        "phase": phase,
                        "x": int(x),
                        "y": int(y),
                        "subset": [int(t) for t in subset],
                        "delta": float(delta),
                        "total": _total_score(P, score),
                    }
                )
    return P
