"""Exhaustive oracle: the true optimal makespan for small robot sets.

Branch-and-bound over chronologically committed wake events under the
continue movement model.  Each search node commits one (waker, sleeper)
event; events are forced into nondecreasing time order with ties ordered
by (waker, sleeper), so every awakening outcome is enumerated exactly once.
The incumbent starts from a chronological greedy simulation; an optional
hint (any feasible makespan, e.g. from the constant-factor strategy)
tightens pruning further.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .cfa import RobotSet
from .geometry import PolygonDomain
from .ptas import AwakeningTree, make_provider

SIZE_CAP = 8
_TIE = 1e-12


@dataclass
class OracleResult:
    makespan: float
    tree: AwakeningTree
    nodes_explored: int
    lower_bound: float


def _greedy_incumbent(n: int, src: int, cost, pos0, nxt):
    pos = [pos0(i) for i in range(n)]
    free = [0.0] * n
    awake = [False] * n
    awake[src] = True
    wake = {src: 0.0}
    parents: dict[int, int] = {}
    order: dict[int, list[int]] = {i: [] for i in range(n)}
    while len(wake) < n:
        best = None
        for p in range(n):
            if not awake[p]:
                continue
            for u in range(n):
                if awake[u]:
                    continue
                t = free[p] + cost(pos[p], u)
                if best is None or (t, p, u) < best:
                    best = (t, p, u)
        if best is None:
            raise ValueError("greedy awakening stalled; disconnected metric")
        t, p, u = best
        awake[u] = True
        wake[u] = t
        free[u] = t
        parents[u] = p
        order[p].append(u)
        pos[p] = nxt(pos[p], u)
        free[p] = t
    return max(wake.values()), wake, parents, order


def optimal_makespan(s: RobotSet, d: PolygonDomain, metric: str = "geodesic",
                     size_cap: int = SIZE_CAP,
                     incumbent_hint: Optional[float] = None) -> OracleResult:
    """Minimum achievable makespan over every awakening tree and visit
    order, continue model.  Refuses robot sets larger than size_cap."""
    n = len(s)
    if n == 0:
        raise ValueError("empty robot set")
    if n > size_cap:
        raise ValueError(f"{n} robots exceed the oracle size cap of {size_cap}")
    ids = list(s.ids())
    src = ids.index(s.source_id)
    provider = make_provider(s.points(), d, metric)

    home = [provider.pos0(i) for i in range(n)]
    cost = provider.cost
    nxt = provider.next_pos

    best_mk, best_wake, best_parents, best_order = _greedy_incumbent(
        n, src, cost, provider.pos0, nxt)
    prune_bound = best_mk
    if incumbent_hint is not None and incumbent_hint + 1e-9 < prune_bound:
        prune_bound = incumbent_hint + 1e-9

    # direct-reach lower bound: nobody can be woken sooner than the source
    # can reach it, so the farthest robot bounds the optimum from below
    trivial_lb = max((cost(home[src], u) for u in range(n) if u != src),
                     default=0.0)

    pos = list(home)
    free = [0.0] * n
    awake = [False] * n
    awake[src] = True
    wake = [math.inf] * n
    wake[src] = 0.0
    parents = [-1] * n
    order: dict[int, list[int]] = {i: [] for i in range(n)}
    nodes = 0

    state = {"best_mk": best_mk, "prune": prune_bound,
             "wake": dict(best_wake), "parents": dict(best_parents),
             "order": {p: list(ko) for p, ko in best_order.items()},
             "nodes": 0}

    def lower_bound(last_t: float) -> float:
        lb = 0.0
        for u in range(n):
            if awake[u]:
                continue
            cheapest = math.inf
            for p in range(n):
                if p == u:
                    continue
                if awake[p]:
                    c = free[p] + cost(pos[p], u)
                else:
                    c = last_t + cost(home[p], u)
                if c < cheapest:
                    cheapest = c
            if cheapest > lb:
                lb = cheapest
        return lb

    def dfs(n_awake: int, last_t: float, last_p: int, last_u: int) -> None:
        state["nodes"] += 1
        if n_awake == n:
            mk = max(w for w in wake if w < math.inf)
            if mk < state["best_mk"]:
                state["best_mk"] = mk
                state["prune"] = min(state["prune"], mk)
                state["wake"] = {i: wake[i] for i in range(n)}
                state["parents"] = {i: parents[i] for i in range(n) if parents[i] >= 0}
                state["order"] = {p: list(ko) for p, ko in order.items()}
            return
        if lower_bound(last_t) >= state["prune"] + _TIE:
            return
        for p in range(n):
            if not awake[p]:
                continue
            for u in range(n):
                if awake[u]:
                    continue
                t = free[p] + cost(pos[p], u)
                if t >= state["prune"] + _TIE:
                    continue
                if t < last_t - _TIE:
                    continue
                if abs(t - last_t) <= _TIE and (p, u) <= (last_p, last_u):
                    continue
                old_pos, old_free = pos[p], free[p]
                awake[u] = True
                wake[u] = t
                free[u] = t
                parents[u] = p
                order[p].append(u)
                pos[p] = nxt(old_pos, u)
                free[p] = t
                dfs(n_awake + 1, t, p, u)
                awake[u] = False
                wake[u] = math.inf
                free[u] = 0.0
                parents[u] = -1
                order[p].pop()
                pos[p] = old_pos
                free[p] = old_free

    dfs(1, 0.0, -1, -1)

    wake_ids = {ids[i]: state["wake"][i] for i in state["wake"]}
    parents_ids = {ids[c]: ids[p] for c, p in state["parents"].items()}
    children_ids = {ids[p]: [ids[c] for c in ko]
                    for p, ko in state["order"].items() if ko}
    for rid in wake_ids:
        children_ids.setdefault(rid, [])
    tree = AwakeningTree(root=s.source_id, parents=parents_ids,
                         children=children_ids, wake_times=wake_ids,
                         makespan=float(state["best_mk"]), metric=metric,
                         model="continue")
    return OracleResult(makespan=float(state["best_mk"]), tree=tree,
                        nodes_explored=state["nodes"],
                        lower_bound=float(trivial_lb))
