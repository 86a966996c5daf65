"""The two directions of the reduction, as executable maps.

Forward: a monotone grid tiling assignment yields one column-direction path
per bottom terminal and one row-direction path per left terminal, stitched
through the connector chains; the result is edge-disjoint because distinct
paths can only meet at whole (unsplit) grid vertices.

Backward: from any edge-disjoint solution, each cell's chosen pair is read
off as the first whole vertex of that cell's grid shared by the cell's
column path and row path.  Failure to find one would mean the gadget is
broken, so it raises instead of recovering.
"""

from __future__ import annotations

from .digraph import (
    EmbeddedDigraph,
    GridVertex,
    HConnector,
    Label,
    Terminal,
    TreeNode,
    VConnector,
    WHOLE,
)
from .edp import PathSet, check_edp_solution
from .gridtiling import GTAssignment, check_gt_solution
from .reduction import ReductionOutput, grid_dims, grid_vertex_parts, level_set


class InvalidSolutionError(ValueError):
    """The supplied assignment or path set fails its validity check."""


class ExtractionFailedError(RuntimeError):
    """No shared whole vertex exists in some cell; the reduction is broken."""


def row_path(g: EmbeddedDigraph, i: int, j: int, ell: int) -> list:
    """Left-to-right path across row ell of grid (i, j).

    Runs from the lb copy in column 1 to the tr copy in column N, taking the
    dotted edge at every split position and passing straight through whole
    vertices.
    """
    _, n = grid_dims(g)
    if not (1 <= ell <= n):
        raise ValueError(f"row index {ell} out of range for N={n}")
    verts: list[Label] = []
    for q in range(1, n + 1):
        entry, exit_ = grid_vertex_parts(g, i, j, q, ell)
        verts.append(entry)
        if exit_ != entry:
            verts.append(exit_)
    return verts


def column_path(g: EmbeddedDigraph, i: int, j: int, ell: int) -> list:
    """Bottom-to-top path up column ell of grid (i, j); mirror of row_path."""
    _, n = grid_dims(g)
    if not (1 <= ell <= n):
        raise ValueError(f"column index {ell} out of range for N={n}")
    verts: list[Label] = []
    for r in range(1, n + 1):
        entry, exit_ = grid_vertex_parts(g, i, j, ell, r)
        verts.append(entry)
        if exit_ != entry:
            verts.append(exit_)
    return verts


def _fan_interior(g: EmbeddedDigraph, terminal: Terminal, leaf: Label, outward: bool) -> list:
    """Interior vertices between a terminal and a boundary leaf, in path order.

    Empty for a direct fan edge; for a degree-reduced graph, the unique
    chain of this terminal's tree nodes.
    """
    if outward and g.has_edge(terminal, leaf):
        return []
    if not outward and g.has_edge(leaf, terminal):
        return []

    def is_own_tree_node(v: Label) -> bool:
        return (
            isinstance(v, TreeNode)
            and v.family == terminal.family
            and v.index == terminal.index
        )

    chain = []
    cur = leaf
    while True:
        nbrs = g.inn(cur) if outward else g.out(cur)
        parents = [u for u in nbrs if u == terminal or is_own_tree_node(u)]
        if len(parents) != 1:
            raise ValueError(f"no unique fan route between {terminal!r} and {leaf!r}")
        parent = parents[0]
        if parent == terminal:
            break
        chain.append(parent)
        cur = parent
    if outward:
        chain.reverse()
    return chain


def gt_solution_to_paths(out: ReductionOutput, asg: GTAssignment) -> PathSet:
    """Build the edge-disjoint path set realizing a grid tiling solution.

    Path i climbs column alpha_{i,j} of each grid (i, j), riding the vertical
    connector chain from alpha_{i,j} to alpha_{i,j+1} in between; path k+j
    runs the rows symmetrically.  Monotonicity of the assignment is exactly
    what makes the connector rides possible.
    """
    inst = out.provenance
    if not check_gt_solution(inst, asg):
        raise InvalidSolutionError("assignment does not solve the instance")
    g = out.graph
    k = inst.k
    paths: list[list[Label]] = []
    for i in range(1, k + 1):
        alpha = {j: asg.choice[(i, j)][0] for j in range(1, k + 1)}
        source = Terminal("a", i)
        first = grid_vertex_parts(g, i, 1, alpha[1], 1)[0]
        path = [source] + _fan_interior(g, source, first, outward=True)
        for j in range(1, k + 1):
            path += column_path(g, i, j, alpha[j])
            if j < k:
                path += [
                    VConnector(i, j, ell)
                    for ell in range(alpha[j], alpha[j + 1] + 1)
                ]
        sink = Terminal("b", i)
        path += _fan_interior(g, sink, path[-1], outward=False)
        path.append(sink)
        paths.append(path)
    for j in range(1, k + 1):
        beta = {i: asg.choice[(i, j)][1] for i in range(1, k + 1)}
        source = Terminal("c", j)
        first = grid_vertex_parts(g, 1, j, 1, beta[1])[0]
        path = [source] + _fan_interior(g, source, first, outward=True)
        for i in range(1, k + 1):
            path += row_path(g, i, j, beta[i])
            if i < k:
                path += [
                    HConnector(i, j, ell)
                    for ell in range(beta[i], beta[i + 1] + 1)
                ]
        sink = Terminal("d", j)
        path += _fan_interior(g, sink, path[-1], outward=False)
        path.append(sink)
        paths.append(path)
    return PathSet(paths)


def paths_to_gt_solution(out: ReductionOutput, ps: PathSet) -> GTAssignment:
    """Extract a grid tiling solution from an edge-disjoint path set.

    For each cell (i, j), the chosen pair is the (q, ell) of the first whole
    vertex of grid (i, j) along path i that path k+j also visits.  Such a
    vertex must exist whenever the paths are valid; its absence is reported
    as a gadget defect, never patched over.
    """
    violations = check_edp_solution(out.graph, out.terminals, ps)
    if violations:
        raise InvalidSolutionError("path set is not a solution: " + "; ".join(violations))
    k = out.provenance.k
    choice = {}
    for i in range(1, k + 1):
        column_route = ps.paths[i - 1]
        for j in range(1, k + 1):
            row_verts = set(ps.paths[k + j - 1])
            for v in column_route:
                if (
                    isinstance(v, GridVertex)
                    and v.part == WHOLE
                    and v.i == i
                    and v.j == j
                    and v in row_verts
                ):
                    choice[(i, j)] = (v.q, v.ell)
                    break
            else:
                raise ExtractionFailedError(
                    f"paths {i - 1} and {k + j - 1} share no whole vertex in cell ({i},{j})"
                )
    return GTAssignment(choice)


def check_level_confinement(out: ReductionOutput, ps: PathSet) -> bool:
    """True iff each path's edges stay inside its own row or column stratum.

    Path i must keep every edge within the vertical stratum of column i and
    path k+j within the horizontal stratum of row j.
    """
    g = out.graph
    k = out.provenance.k
    if len(ps.paths) != 2 * k:
        raise ValueError(f"expected {2 * k} paths, got {len(ps.paths)}")
    for idx, path in enumerate(ps.paths):
        if idx < k:
            stratum = level_set(g, "vertical", idx + 1)
        else:
            stratum = level_set(g, "horizontal", idx - k + 1)
        for u, v in zip(path, path[1:]):
            if u not in stratum or v not in stratum:
                return False
    return True
