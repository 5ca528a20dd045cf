"""Directed-graph core: adjacency-matrix checks, topological operations,
random DAG generators, CPDAG machinery, and d-separation.

Graphs are plain numpy arrays throughout. A d x d matrix A encodes the edge
i -> j as a nonzero entry A[i, j]. Binary graphs hold {0, 1}; weighted graphs
hold reals. Partially directed graphs (PDAGs/CPDAGs) are binary matrices in
which a symmetric 1-pair encodes an undirected edge.
"""

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from typing import Optional

import numpy as np

from .exceptions import InvalidConfig, InvalidGraph, NotADag

GRAPH_MODELS = ("erdos_renyi", "scale_free", "low_rank")


def check_adjacency(A, binary=False):
    """Validate a square zero-diagonal adjacency matrix; returns it as an array.

    Raises InvalidGraph on non-square input, nonzero diagonal, non-finite
    entries, or (with binary=True) entries outside {0, 1}.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InvalidGraph(f"adjacency must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidGraph("adjacency contains non-finite entries")
    if np.any(np.diag(A) != 0):
        raise InvalidGraph("adjacency has nonzero diagonal entries")
    if binary and not np.all(np.isin(A, (0, 1))):
        raise InvalidGraph("binary adjacency must contain only 0 and 1")
    return A


def support(W):
    """0/1 support of a weighted adjacency matrix."""
    return (np.asarray(W) != 0).astype(np.int8)


def is_dag(g) -> bool:
    """True iff the directed graph on support(g) has no directed cycle."""
    A = check_adjacency(g)
    try:
        _kahn_order(support(A))
        return True
    except NotADag:
        return False


def topological_order(g):
    """A node ordering placing every edge's source before its target.

    Raises NotADag if the graph is cyclic.
    """
    A = check_adjacency(g)
    return _kahn_order(support(A))


def _kahn_order(B):
    d = B.shape[0]
    preds = {j: np.flatnonzero(B[:, j]).tolist() for j in range(d)}
    try:
        return list(TopologicalSorter(preds).static_order())
    except CycleError as e:
        raise NotADag("graph contains a directed cycle") from e


def find_cycle(A) -> Optional[list]:
    """Some directed cycle of support(A) as a list of (i, j) edges, or None."""
    B = support(np.asarray(A))
    d = B.shape[0]
    children = [np.flatnonzero(B[i]).tolist() for i in range(d)]
    color = [0] * d  # 0 unvisited, 1 on stack, 2 done
    parent = [-1] * d
    for root in range(d):
        if color[root]:
            continue
        stack = [(root, iter(children[root]))]
        color[root] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == 0:
                    color[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(children[nxt])))
                    advanced = True
                    break
                if color[nxt] == 1:
                    # back edge node -> nxt closes a cycle
                    cycle = [(node, nxt)]
                    cur = node
                    while cur != nxt:
                        cycle.append((parent[cur], cur))
                        cur = parent[cur]
                    cycle.reverse()
                    return cycle
            if not advanced:
                color[node] = 2
                stack.pop()
    return None


# ---------------------------------------------------------------------------
# Random DAG generation


@dataclass
class RandomGraphConfig:
    """Settings for the random weighted-DAG generators.

    model: one of "erdos_renyi", "scale_free", "low_rank".
    d: node count.  e: target edge count (exact for ER and low-rank).
    rank: rank bound for the low_rank model.
    weight_range: (lo, hi) magnitudes, 0 < lo < hi; signs are random.
    seed: 64-bit generator seed; equal configs give bit-identical graphs.
    """

    model: str = "erdos_renyi"
    d: int = 10
    e: int = 20
    rank: Optional[int] = None
    weight_range: tuple = (0.5, 2.0)
    seed: int = 0

    def validate(self):
        if self.model not in GRAPH_MODELS:
            raise InvalidConfig(f"unknown graph model {self.model!r}")
        if self.d < 1:
            raise InvalidConfig("d must be >= 1")
        max_e = self.d * (self.d - 1) // 2
        if not 0 <= self.e <= max_e:
            raise InvalidConfig(f"e must be in [0, {max_e}] for d={self.d}")
        lo, hi = self.weight_range
        if not 0 < lo < hi:
            raise InvalidConfig("weight_range must satisfy 0 < lo < hi")
        if self.model == "low_rank":
            if self.rank is None or not 1 <= self.rank <= self.d:
                raise InvalidConfig("low_rank requires 1 <= rank <= d")
        return self


def low_rank_matrix(d, rank, rng):
    """Dense d x d matrix of rank <= rank, built as U @ V.T with normal factors."""
    U = rng.standard_normal((d, rank))
    V = rng.standard_normal((d, rank))
    return U @ V.T


def random_dag(cfg: RandomGraphConfig):
    """Sample a weighted random DAG according to cfg.

    Edges carry magnitudes uniform in weight_range with random signs. The
    result is acyclic by construction for every model and seed.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    d, e = cfg.d, cfg.e
    lo, hi = cfg.weight_range

    if cfg.model == "erdos_renyi":
        perm = rng.permutation(d)
        slots = [(perm[a], perm[b]) for a in range(d) for b in range(a + 1, d)]
        k = min(e, len(slots))
        chosen = sorted(rng.choice(len(slots), size=k, replace=False)) if k else []
        edges = [slots[c] for c in chosen]
        return _assign_weights(d, edges, lo, hi, rng)

    if cfg.model == "scale_free":
        edges = _preferential_attachment(d, e, rng)
        return _assign_weights(d, edges, lo, hi, rng)

    # low_rank: mask the dense low-rank matrix to the e largest-magnitude
    # entries among acyclic slots, then rescale magnitudes into weight_range.
    full = low_rank_matrix(d, cfg.rank, rng)
    perm = rng.permutation(d)
    slots = [(perm[a], perm[b]) for a in range(d) for b in range(a + 1, d)]
    k = min(e, len(slots))
    mags = np.array([abs(full[i, j]) for i, j in slots])
    keep = np.argsort(-mags, kind="stable")[:k]
    W = np.zeros((d, d))
    if k:
        kept_vals = np.array([full[slots[c]] for c in keep])
        m, M = np.abs(kept_vals).min(), np.abs(kept_vals).max()
        if M > m:
            scaled = lo + (hi - lo) * (np.abs(kept_vals) - m) / (M - m)
        else:
            scaled = np.full(k, 0.5 * (lo + hi))
        for c, mag, val in zip(keep, scaled, kept_vals):
            i, j = slots[c]
            W[i, j] = mag if val >= 0 else -mag
    return W


def _assign_weights(d, edges, lo, hi, rng):
    W = np.zeros((d, d))
    if edges:
        mags = rng.uniform(lo, hi, len(edges))
        signs = np.where(rng.random(len(edges)) < 0.5, -1.0, 1.0)
        for (i, j), m, s in zip(edges, mags, signs):
            W[i, j] = s * m
    return W


def _preferential_attachment(d, e, rng):
    """Barabasi-Albert edges, oriented old -> new, under a random relabeling."""
    m = max(1, min(int(np.ceil(e / d)) if d else 1, d - 1)) if d > 1 else 0
    if d <= 1 or m == 0:
        return []
    targets = list(range(m))
    repeated = []
    edges = []
    for new in range(m, d):
        for t in targets:
            edges.append((t, new))
        repeated.extend(targets)
        repeated.extend([new] * m)
        # sample m distinct attachment targets for the next arrival
        pool = list(dict.fromkeys(repeated))
        weights = np.array([repeated.count(p) for p in pool], dtype=float)
        weights /= weights.sum()
        take = min(m, len(pool))
        targets = list(rng.choice(pool, size=take, replace=False, p=weights))
    relabel = rng.permutation(d)
    return [(int(relabel[i]), int(relabel[j])) for i, j in edges]


# ---------------------------------------------------------------------------
# CPDAGs: pattern construction, Meek closure, consistent extensions


def dag_to_cpdag(g):
    """Completed PDAG of the Markov equivalence class of DAG g.

    V-structures of g are kept directed on its skeleton; every other edge
    starts undirected and the result is closed under the Meek rules.
    """
    B = check_adjacency(g, binary=True)
    if not is_dag(B):
        raise NotADag("dag_to_cpdag requires an acyclic input")
    d = B.shape[0]
    skel = ((B + B.T) > 0).astype(np.int8)
    P = skel.copy()
    for k in range(d):
        parents = np.flatnonzero(B[:, k])
        for ai in range(len(parents)):
            for bi in range(ai + 1, len(parents)):
                i, j = parents[ai], parents[bi]
                if skel[i, j] == 0:  # unshielded collider i -> k <- j
                    P[k, i] = 0
                    P[k, j] = 0
    return close_under_meek(P)


def close_under_meek(pdag):
    """Fixpoint of Meek orientation rules R1-R4 on a PDAG (copy returned)."""
    P = np.array(pdag, dtype=np.int8, copy=True)
    d = P.shape[0]

    def und(i, j):
        return P[i, j] == 1 and P[j, i] == 1

    def arr(i, j):
        return P[i, j] == 1 and P[j, i] == 0

    def adj(i, j):
        return P[i, j] == 1 or P[j, i] == 1

    changed = True
    while changed:
        changed = False
        for a in range(d):
            for b in range(d):
                if a == b or not und(a, b):
                    continue
                if _meek_fires(P, d, a, b, und, arr, adj):
                    P[b, a] = 0  # orient a -> b
                    changed = True
    return P


def _meek_fires(P, d, a, b, und, arr, adj):
    # R1: c -> a, a - b, c and b nonadjacent
    for c in range(d):
        if c not in (a, b) and arr(c, a) and not adj(c, b):
            return True
    # R2: a -> c -> b with a - b
    for c in range(d):
        if c not in (a, b) and arr(a, c) and arr(c, b):
            return True
    # R3: a - c -> b, a - d -> b, c and d nonadjacent
    spokes = [c for c in range(d) if c not in (a, b) and und(a, c) and arr(c, b)]
    for x in range(len(spokes)):
        for y in range(x + 1, len(spokes)):
            if not adj(spokes[x], spokes[y]):
                return True
    # R4: a - c, c -> e, e -> b, c and b nonadjacent
    for c in range(d):
        if c in (a, b) or not und(a, c) or adj(c, b):
            continue
        for e_ in range(d):
            if e_ not in (a, b, c) and arr(c, e_) and arr(e_, b):
                return True
    return False


def pdag_to_dag(pdag):
    """A DAG consistent with the PDAG (Dor-Tarsi extension).

    Keeps every directed edge, orients every undirected edge, creates no new
    v-structure. Raises NotADag when no consistent extension exists.
    """
    P = np.array(pdag, dtype=np.int8, copy=True)
    d = P.shape[0]
    G = np.zeros((d, d), dtype=np.int8)
    # record already-directed edges up front
    for i in range(d):
        for j in range(d):
            if P[i, j] == 1 and P[j, i] == 0:
                G[i, j] = 1
    active = list(range(d))
    while active:
        found = None
        for x in active:
            others = [y for y in active if y != x]
            if any(P[x, y] == 1 and P[y, x] == 0 for y in others):
                continue  # x has an outgoing directed edge
            und_nbrs = [y for y in others if P[x, y] == 1 and P[y, x] == 1]
            adj_x = [y for y in others if P[x, y] == 1 or P[y, x] == 1]
            ok = all(
                all(z == y or P[y, z] or P[z, y] for z in adj_x)
                for y in und_nbrs
            )
            if ok:
                found = x
                break
        if found is None:
            raise NotADag("PDAG admits no consistent DAG extension")
        for y in active:
            if y != found and P[found, y] == 1 and P[y, found] == 1:
                G[y, found] = 1
        P[found, :] = 0
        P[:, found] = 0
        active.remove(found)
    return G


# ---------------------------------------------------------------------------
# d-separation


def d_separated(B, x, y, S) -> bool:
    """True iff x and y are d-separated by the set S in DAG B.

    Reachability formulation: walk active trails out of x, tracking whether
    each node is entered through a parent or a child edge.
    """
    B = np.asarray(B)
    d = B.shape[0]
    Z = set(S)
    if x in Z or y in Z:
        raise InvalidGraph("conditioning set must exclude the endpoints")
    parents = [set(np.flatnonzero(B[:, v])) for v in range(d)]
    children = [set(np.flatnonzero(B[v, :])) for v in range(d)]
    # ancestors of Z (including Z)
    anc = set(Z)
    frontier = list(Z)
    while frontier:
        v = frontier.pop()
        for p in parents[v]:
            if p not in anc:
                anc.add(p)
                frontier.append(p)
    # (node, direction) BFS; direction True = entered moving up (toward parents)
    visited = set()
    frontier = [(x, True)]
    while frontier:
        v, up = frontier.pop()
        if (v, up) in visited:
            continue
        visited.add((v, up))
        if v == y and v not in Z:
            return False
        if up and v not in Z:
            for p in parents[v]:
                frontier.append((p, True))
            for c in children[v]:
                frontier.append((c, False))
        elif not up:
            if v not in Z:
                for c in children[v]:
                    frontier.append((c, False))
            if v in anc:
                for p in parents[v]:
                    frontier.append((p, True))
    return True
