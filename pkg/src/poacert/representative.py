"""Representative two-strategy congestion model.

For weight vector w over n players, the model carries one resource e(P, Q)
per ordered pair of player subsets, 4^n in total.  Player i's first
strategy sigma*_i collects every e(P, Q) with i in P, the second o*_i every
e(P, Q) with i in Q.  Any (profile, profile) pair of any congestion model
with the same weights maps resource-wise into this one: send e to
e(users under the first profile, users under the second); loads and user
sets are preserved, which is what makes the worst-case programs over this
single model speak for the whole class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .games import CongestionModel, GameError

PLAYER_CAP = 10  # 4^n resources; past this the model is no longer a desk object


def _mask_id(p_mask: int, q_mask: int) -> str:
    def part(mask):
        return ",".join(str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1)

    return f"P:{{{part(p_mask)}}}|Q:{{{part(q_mask)}}}"


@dataclass(frozen=True)
class RepresentativeModel:
    model: CongestionModel
    sigma_star: tuple  # profile of first strategies
    o_star: tuple  # profile of second strategies
    pairs: tuple  # per resource, (P_mask, Q_mask)
    index: Mapping  # (P_mask, Q_mask) -> resource id

    @property
    def n(self) -> int:
        return self.model.n

    def resource_for(self, p_players, q_players) -> str:
        p = p_players if isinstance(p_players, int) else _mask_of(p_players)
        q = q_players if isinstance(q_players, int) else _mask_of(q_players)
        try:
            return self.index[(p, q)]
        except KeyError:
            raise GameError(f"no resource for masks P={p:b}, Q={q:b}") from None


def _mask_of(players) -> int:
    m = 0
    for i in players:
        m |= 1 << i
    return m


def build_representative(weights, cap: int = PLAYER_CAP) -> RepresentativeModel:
    n = len(weights)
    if n > cap:
        raise GameError(f"{n} players would need {4**n} resources (cap {cap})")
    size = 1 << n
    resources = []
    pairs = []
    index = {}
    for p in range(size):
        for q in range(size):
            rid = _mask_id(p, q)
            index[(p, q)] = rid
            resources.append(rid)
            pairs.append((p, q))
    strategies = []
    for i in range(n):
        bit = 1 << i
        sigma = frozenset(index[(p, q)] for (p, q) in pairs if p & bit)
        omega = frozenset(index[(p, q)] for (p, q) in pairs if q & bit)
        strategies.append((sigma, omega))
    model = CongestionModel(tuple(weights), tuple(resources), tuple(strategies))
    return RepresentativeModel(
        model=model,
        sigma_star=tuple(0 for _ in range(n)),
        o_star=tuple(1 for _ in range(n)),
        pairs=tuple(pairs),
        index=index,
    )


def map_profile_pair(rep: RepresentativeModel, model: CongestionModel, sigma, tau) -> dict:
    """Resource-wise embedding of (sigma, tau) into the representative model.

    Returns {resource of `model` -> representative resource id}; requires
    matching weight vectors, since the embedding must preserve loads.
    """
    if tuple(model.weights) != tuple(rep.model.weights):
        raise GameError("profile mapping requires identical weight vectors")
    out = {}
    for e in model.resources:
        p = _mask_of(i for i in range(model.n) if e in model.strategies[i][sigma[i]])
        q = _mask_of(i for i in range(model.n) if e in model.strategies[i][tau[i]])
        out[e] = rep.index[(p, q)]
    return out
