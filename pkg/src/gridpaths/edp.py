"""Exact edge-disjoint and vertex-disjoint path search on DAGs.

The edge-disjoint solver routes terminal pairs one at a time in the given
order: paths for the current pair are enumerated depth-first over edges not
already used (tracked in a bitmask), extensions into vertices that cannot
reach the current target are skipped, and after each committed path every
remaining pair must stay reachable in the residual edge set or the branch
is abandoned.  The search is exhaustive, so a None answer is a proof of
infeasibility at the given budget.

A path is a vertex sequence; a single-vertex path (source equals sink) is
legal and consumes no edges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .digraph import Digraph, Label, label_from_json, label_to_json
from .errors import BudgetExceededError

DEFAULT_BUDGET = 10_000_000


@dataclass
class PathSet:
    """One directed path per terminal pair, index-aligned with the pair list."""

    paths: list[list[Label]]

    def to_json_dict(self) -> dict:
        return {"paths": [[label_to_json(v) for v in p] for p in self.paths]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "PathSet":
        try:
            return cls([[label_from_json(v) for v in p] for p in data["paths"]])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed path set document: {exc}") from exc


def _pairs(terminals) -> list[tuple[Label, Label]]:
    pairs = getattr(terminals, "pairs", terminals)
    return [(s, t) for s, t in pairs]


def check_edp_solution(g: Digraph, terminals, ps: PathSet) -> list[str]:
    """Violations of the edge-disjoint-paths conditions; empty means valid.

    Each path must be a directed path from its pair's source to its sink
    without repeating an edge, and no edge may appear in two paths.  Sharing
    vertices is allowed; single-vertex paths share nothing.
    """
    pairs = _pairs(terminals)
    violations = []
    if len(ps.paths) != len(pairs):
        return [f"expected {len(pairs)} paths, got {len(ps.paths)}"]
    for idx, (path, (s, t)) in enumerate(zip(ps.paths, pairs)):
        if not path:
            violations.append(f"path {idx} is empty")
            continue
        if path[0] != s:
            violations.append(f"path {idx} starts at {path[0]!r}, expected {s!r}")
        if path[-1] != t:
            violations.append(f"path {idx} ends at {path[-1]!r}, expected {t!r}")
        seen = set()
        for u, v in zip(path, path[1:]):
            if not g.has_edge(u, v):
                violations.append(f"path {idx} uses missing edge ({u!r}, {v!r})")
            elif (u, v) in seen:
                violations.append(f"path {idx} repeats edge ({u!r}, {v!r})")
            seen.add((u, v))
    owner: dict[tuple[Label, Label], int] = {}
    for idx, path in enumerate(ps.paths):
        for edge in zip(path, path[1:]):
            prev = owner.setdefault(edge, idx)
            if prev != idx:
                violations.append(
                    f"paths {prev} and {idx} share edge ({edge[0]!r}, {edge[1]!r})"
                )
    return violations


def check_vdp_solution(g: Digraph, terminals, ps: PathSet) -> bool:
    """True iff the paths are valid and pairwise vertex-disjoint.

    Disjointness is required on all vertices, endpoints included; terminal
    pairs must therefore be pairwise distinct vertices.
    """
    if check_edp_solution(g, terminals, ps):
        return False
    seen: set[Label] = set()
    for path in ps.paths:
        for v in path:
            if v in seen:
                return False
            seen.add(v)
    return True


def _index_graph(g: Digraph, pairs: Sequence[tuple[Label, Label]]):
    verts = g.vertices
    vid = {v: num for num, v in enumerate(verts)}
    for s, t in pairs:
        if s not in vid or t not in vid:
            raise ValueError(f"terminal pair ({s!r}, {t!r}) not in graph")
    out_adj: list[list[tuple[int, int]]] = [[] for _ in verts]
    in_adj: list[list[int]] = [[] for _ in verts]
    for eidx, (u, v) in enumerate(g.edges):
        out_adj[vid[u]].append((eidx, vid[v]))
        in_adj[vid[v]].append(vid[u])
    return verts, vid, out_adj, in_adj


def _require_dag(g: Digraph) -> None:
    _, cycle = g.topological_sort()
    if cycle is not None:
        raise ValueError(f"graph is not acyclic; cycle through {cycle[0]!r}")


def _ancestor_mask(target: int, in_adj: list[list[int]]) -> int:
    mask = 1 << target
    stack = [target]
    while stack:
        v = stack.pop()
        for u in in_adj[v]:
            bit = 1 << u
            if not mask & bit:
                mask |= bit
                stack.append(u)
    return mask


def solve_edp_dag(g: Digraph, terminals, budget: int = DEFAULT_BUDGET) -> PathSet | None:
    """Exact edge-disjoint routing on a DAG; None means provably infeasible.

    Deterministic: pairs are routed in the given order and edges tried in
    the graph's edge order.  Raises BudgetExceededError when the expansion
    cap is hit before the search finishes.
    """
    _require_dag(g)
    pairs = _pairs(terminals)
    verts, vid, out_adj, in_adj = _index_graph(g, pairs)
    pvids = [(vid[s], vid[t]) for s, t in pairs]
    anc_masks = [_ancestor_mask(tv, in_adj) for _, tv in pvids]
    npairs = len(pairs)
    result: list[list[int]] = [[] for _ in range(npairs)]
    expansions = 0

    def reachable(sv: int, tv: int, used: int) -> bool:
        if sv == tv:
            return True
        seen = 1 << sv
        stack = [sv]
        while stack:
            v = stack.pop()
            for eidx, w in out_adj[v]:
                if used & (1 << eidx):
                    continue
                if w == tv:
                    return True
                bit = 1 << w
                if not seen & bit:
                    seen |= bit
                    stack.append(w)
        return False

    def remaining_ok(idx: int, used: int) -> bool:
        return all(reachable(sv, tv, used) for sv, tv in pvids[idx:])

    def route(idx: int, used: int) -> bool:
        nonlocal expansions
        if idx == npairs:
            return True
        sv, tv = pvids[idx]
        if sv == tv:
            result[idx] = [sv]
            return route(idx + 1, used)
        anc = anc_masks[idx]
        path = [sv]

        def dfs(v: int, used_now: int) -> bool:
            nonlocal expansions
            if v == tv:
                if remaining_ok(idx + 1, used_now):
                    result[idx] = list(path)
                    if route(idx + 1, used_now):
                        return True
                return False
            for eidx, w in out_adj[v]:
                bit = 1 << eidx
                if used_now & bit:
                    continue
                if not (anc >> w) & 1:
                    continue
                expansions += 1
                if expansions > budget:
                    raise BudgetExceededError(budget)
                path.append(w)
                if dfs(w, used_now | bit):
                    return True
                path.pop()
            return False

        return dfs(sv, used)

    if not remaining_ok(0, 0):
        return None
    if route(0, 0):
        return PathSet([[verts[v] for v in p] for p in result])
    return None


def solve_vdp_dag(g: Digraph, terminals, budget: int = DEFAULT_BUDGET) -> PathSet | None:
    """Exact vertex-disjoint routing on a DAG (disjoint on all vertices).

    Independent of solve_edp_dag: occupancy is tracked per vertex, so this
    doubles as the cross-check for the line-graph transform.
    """
    _require_dag(g)
    pairs = _pairs(terminals)
    seen_terms: set[Label] = set()
    for s, t in pairs:
        for v in (s, t) if s != t else (s,):
            if v in seen_terms:
                raise ValueError(f"terminal vertex {v!r} appears in two pairs")
            seen_terms.add(v)
    verts, vid, out_adj, in_adj = _index_graph(g, pairs)
    pvids = [(vid[s], vid[t]) for s, t in pairs]
    anc_masks = [_ancestor_mask(tv, in_adj) for _, tv in pvids]
    npairs = len(pairs)
    result: list[list[int]] = [[] for _ in range(npairs)]
    expansions = 0

    def reachable(sv: int, tv: int, used: int) -> bool:
        if used & (1 << sv) or used & (1 << tv):
            return False
        if sv == tv:
            return True
        seen = 1 << sv
        stack = [sv]
        while stack:
            v = stack.pop()
            for _, w in out_adj[v]:
                if w == tv:
                    return True
                bit = 1 << w
                if used & bit or seen & bit:
                    continue
                seen |= bit
                stack.append(w)
        return False

    def remaining_ok(idx: int, used: int) -> bool:
        return all(reachable(sv, tv, used) for sv, tv in pvids[idx:])

    def route(idx: int, used: int) -> bool:
        nonlocal expansions
        if idx == npairs:
            return True
        sv, tv = pvids[idx]
        if sv == tv:
            result[idx] = [sv]
            if remaining_ok(idx + 1, used | (1 << sv)):
                return route(idx + 1, used | (1 << sv))
            return False
        anc = anc_masks[idx]
        path = [sv]

        def dfs(v: int, used_now: int) -> bool:
            nonlocal expansions
            if v == tv:
                if remaining_ok(idx + 1, used_now):
                    result[idx] = list(path)
                    if route(idx + 1, used_now):
                        return True
                return False
            for _, w in out_adj[v]:
                bit = 1 << w
                if used_now & bit:
                    continue
                if not (anc >> w) & 1:
                    continue
                expansions += 1
                if expansions > budget:
                    raise BudgetExceededError(budget)
                path.append(w)
                if dfs(w, used_now | bit):
                    return True
                path.pop()
            return False

        return dfs(sv, used | (1 << sv))

    if not remaining_ok(0, 0):
        return None
    if route(0, 0):
        return PathSet([[verts[v] for v in p] for p in result])
    return None


@dataclass(frozen=True)
class LineVertex:
    """Vertex of the line-graph transform, standing for one original edge."""

    tail: Label
    head: Label


@dataclass(frozen=True)
class PairSource:
    """Fresh super-source for terminal pair ``index`` in the transform."""

    index: int


@dataclass(frozen=True)
class PairSink:
    """Fresh super-sink for terminal pair ``index`` in the transform."""

    index: int


def edp_to_vdp_dag(g: Digraph, terminals) -> tuple[Digraph, list[tuple[Label, Label]]]:
    """Line-graph transform: edge-disjoint on g == vertex-disjoint on the result.

    One vertex per edge of g, an edge e -> f whenever head(e) = tail(f),
    plus per pair a fresh super-source adjacent to the edges leaving its
    source and a fresh super-sink fed by the edges entering its sink.
    Vertex-disjoint super-source-to-super-sink paths correspond bijectively
    to edge-disjoint original paths (a direct source -> sink edge standing
    in for a single-vertex path when a pair's endpoints coincide).
    """
    pairs = _pairs(terminals)
    verts: list[Label] = [LineVertex(u, v) for u, v in g.edges]
    edges: list[tuple[Label, Label]] = []
    for u, v in g.edges:
        for w in g.out(v):
            edges.append((LineVertex(u, v), LineVertex(v, w)))
    new_pairs: list[tuple[Label, Label]] = []
    for num, (s, t) in enumerate(pairs):
        src = PairSource(num)
        snk = PairSink(num)
        verts.append(src)
        verts.append(snk)
        for w in g.out(s):
            edges.append((src, LineVertex(s, w)))
        for u in g.inn(t):
            edges.append((LineVertex(u, t), snk))
        if s == t:
            edges.append((src, snk))
        new_pairs.append((src, snk))
    return Digraph(verts, edges), new_pairs
