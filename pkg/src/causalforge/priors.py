"""Background-knowledge constraints on learned graphs.

A prior is a pair of ordered-edge sets: required edges must appear in the
final graph with the given orientation, forbidden edges must not appear.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import InvalidConfig, PriorConflict
from .graphs import close_under_meek, find_cycle

_MAX_REPAIR_PASSES = 200


@dataclass
class PriorKnowledge:
    required: frozenset = field(default_factory=frozenset)
    forbidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        self.required = frozenset((int(i), int(j)) for i, j in self.required)
        self.forbidden = frozenset((int(i), int(j)) for i, j in self.forbidden)

    def validate(self, d=None):
        for i, j in self.required | self.forbidden:
            if i == j:
                raise InvalidConfig("prior edges must join distinct nodes")
            if d is not None and not (0 <= i < d and 0 <= j < d):
                raise InvalidConfig(f"prior edge ({i}, {j}) out of range for d={d}")
        clash = self.required & self.forbidden
        if clash:
            raise PriorConflict(f"edges both required and forbidden: {sorted(clash)}")
        if self.required and d is not None:
            G = np.zeros((d, d), dtype=np.int8)
            for i, j in self.required:
                G[i, j] = 1
            if find_cycle(G) is not None:
                raise PriorConflict("required edges form a directed cycle")
        return self

    def is_empty(self):
        return not self.required and not self.forbidden

    def to_dict(self):
        return {
            "required": sorted(list(e) for e in self.required),
            "forbidden": sorted(list(e) for e in self.forbidden),
        }

    @classmethod
    def from_dict(cls, obj):
        obj = obj or {}
        return cls(
            required=frozenset(tuple(e) for e in obj.get("required", ())),
            forbidden=frozenset(tuple(e) for e in obj.get("forbidden", ())),
        )


def constrain_pattern(P, prior: PriorKnowledge):
    """Force a (C)PDAG to honor the prior, re-close under Meek, repair cycles.

    Required edges are inserted or oriented as given; forbidden directed edges
    are deleted and forbidden orientations of undirected edges flipped. Any
    directed cycle that surgery plus closure introduces is broken by deleting
    its lexicographically smallest non-required edge.
    """
    P = np.array(P, dtype=np.int8, copy=True)
    d = P.shape[0]
    prior.validate(d)
    for _ in range(_MAX_REPAIR_PASSES):
        changed = False
        for i, j in sorted(prior.required):
            if P[i, j] != 1 or P[j, i] != 0:
                P[i, j] = 1
                P[j, i] = 0
                changed = True
        for i, j in sorted(prior.forbidden):
            if P[i, j] == 1:
                P[i, j] = 0  # undirected edges keep the allowed direction
                changed = True
        P = close_under_meek(P)
        directed = (P == 1) & (P.T == 0)
        cyc = find_cycle(directed.astype(np.int8))
        if cyc is not None:
            victims = [e for e in cyc if e not in prior.required]
            if not victims:
                raise PriorConflict("required edges force a directed cycle")
            i, j = min(victims)
            P[i, j] = 0
            changed = True
        violation = any(P[i, j] for i, j in prior.forbidden) or any(
            not (P[i, j] == 1 and P[j, i] == 0) for i, j in prior.required
        )
        if not changed and not violation:
            return P
    raise PriorConflict("prior constraints could not be stabilized")
