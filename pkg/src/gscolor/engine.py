"""End-to-end coloring driver with verification.

Colors every edge using at most max(Delta+1, ceil(density)) colors: the lower
bound max(Delta, ceil(density)) is attempted first so class-1-like instances
come out optimal, and a proof of infeasibility (or budget exhaustion)
escalates once to the guaranteed bound. Per edge the driver tries a shared
missing color, then a two-colored chain swap between the ends' missing
colors, then tree-growth recoloring; at or below a configurable edge count an
exact backtracking fallback makes the contract unconditional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from . import _kernels
from .coloring import (PartialColoring, is_elementary, is_strongly_closed,
                       kempe_chain, kempe_swap, validate)
from .density import (DensityCertificate, bound_report, certificate_check,
                      enumerate_colorings)
from .graph import Multigraph
from .tashkinov import (SeriesInvariantError, SeriesState, SeriesStuck,
                        SeriesTuple, TreeSequence, elementary_audit,
                        series_step, taa_close)


@dataclass(frozen=True)
class FailureEvidence:
    """Why extension stopped at this k.

    kind "elementary_strongly_closed_tree" is a proof that k colors cannot
    suffice (the tree's vertex set is elementary, strongly closed, odd, and
    contains both ends of the uncolored edge); "budget_exhausted" claims
    nothing beyond the failed search.
    """
    kind: str
    tree: TreeSequence
    k: int


class ExtendOutcome(NamedTuple):
    status: str                    # "colored" | "evidence"
    coloring: PartialColoring | None
    evidence: FailureEvidence | None
    method: str | None


@dataclass
class ColoringResult:
    coloring: PartialColoring
    k_used: int
    certificates: list             # [(DensityCertificate, k it was emitted against)]
    trace: dict                    # edge id -> "direct" | "kempe" | "tashkinov" | "fallback"
    seed: int

    def to_json_obj(self) -> dict:
        return {
            "v": 1,
            "k_used": self.k_used,
            "seed": self.seed,
            "assignment": [[e, self.coloring.color_of(e)]
                           for e in sorted(self.coloring.graph.edge_ids)],
            "trace": [[e, self.trace[e]] for e in sorted(self.trace)],
            "certificates": [
                {"u": sorted(cert.u),
                 "value": {"num": cert.value.numerator, "den": cert.value.denominator},
                 "k": k}
                for cert, k in self.certificates],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), separators=(",", ":"))


def result_from_json(G: Multigraph, text: str) -> ColoringResult:
    obj = json.loads(text)
    ids = [e for e, _ in obj["assignment"]]
    if sorted(ids) != sorted(G.edge_ids):
        raise ValueError("result does not describe this graph's edges")
    # properness is verify_result's job, so tampered colorings stay loadable
    pc = PartialColoring.unchecked(G, obj["k_used"], dict(obj["assignment"]))
    certs = [(DensityCertificate(frozenset(c["u"]),
                                 Fraction(c["value"]["num"], c["value"]["den"])),
              c["k"])
             for c in obj["certificates"]]
    return ColoringResult(pc, obj["k_used"], certs, dict(obj["trace"]), obj["seed"])


class IncompleteColoringError(Exception):
    """Heuristic extension failed at the guaranteed bound above the exact
    fallback threshold; carries the partial coloring."""

    def __init__(self, partial: PartialColoring, k: int):
        super().__init__(f"incomplete (budget) at k={k}")
        self.partial = partial
        self.k = k


# -- per-edge extension -------------------------------------------------------


def _try_direct(pc: PartialColoring, eid: int):
    x, y = pc.graph.endpoints(eid)
    common = pc.missing(x) & pc.missing(y)
    if not common:
        return None
    out = pc.clone()
    out.assign(eid, min(common))
    return out


def _try_kempe(pc: PartialColoring, eid: int):
    """Swap a chain between the ends' missing colors when it misses the far end."""
    x, y = pc.graph.endpoints(eid)
    for start, far in ((x, y), (y, x)):
        for a in sorted(pc.missing(start)):
            for b in sorted(pc.missing(far)):
                if a == b:
                    continue
                ch = kempe_chain(pc, start, a, b)
                if not ch.edges or far in ch.vertices:
                    continue
                out = kempe_swap(pc, ch)
                common = out.missing(x) & out.missing(y)
                if common:
                    out.assign(eid, min(common))
                    return out
    return None


def _tree_evidence(G, pc, tree, k):
    """Validate and build infeasibility evidence from a strongly closed tree."""
    x, y = G.endpoints(tree.root_edge)
    members = tree.vertex_set
    if not (is_elementary(pc, members) and is_strongly_closed(pc, members)):
        return None
    if len(members) < 3 or len(members) % 2 == 0:
        return None
    if x not in members or y not in members:
        return None
    if not certificate_check(G, members, k):
        return None
    return FailureEvidence("elementary_strongly_closed_tree", tree, k)


def extend(G: Multigraph, pc: PartialColoring, eid: int, *, depth: int = 1,
           cap: int = 400, fallback_threshold: int = 25) -> ExtendOutcome:
    """Color one edge or report why k colors resist.

    Uncolored edges other than eid are invisible to the machinery, so this
    works midway through a coloring run. Within the fallback threshold the
    answer is exact: either the colored subgraph plus eid is recolored from
    scratch, or its infeasibility at k is established.
    """
    if pc.color_of(eid) is not None:
        raise ValueError("edge already colored")
    out = _try_direct(pc, eid)
    if out is not None:
        return ExtendOutcome("colored", out, None, "direct")
    out = _try_kempe(pc, eid)
    if out is not None:
        return ExtendOutcome("colored", out, None, "kempe")

    state = SeriesState(graph=G, root_edge=eid, k=pc.k)
    tree = taa_close(G, pc, TreeSequence.root(G, eid))
    state.tuples.append(SeriesTuple(
        tree=tree, coloring=pc, connecting_colors=frozenset(),
        connecting_edges=frozenset(), theta="none"))
    last_tree = tree
    steps = 0
    while steps <= G.vertex_count:
        phi = state.final_coloring
        tree = state.final_tree
        last_tree = tree
        witness = elementary_audit(phi, tree)
        if witness is not None and {witness.u, witness.v} == set(G.endpoints(eid)):
            out = phi.clone()
            out.assign(eid, witness.color)
            return ExtendOutcome("colored", out, None, "tashkinov")
        if is_strongly_closed(phi, tree.vertex_set):
            if witness is None:
                ev = _tree_evidence(G, phi, tree, pc.k)
                if ev is not None:
                    return ExtendOutcome("evidence", None, ev, None)
            break
        try:
            outcome = series_step(G, state, depth=depth, cap=cap)
        except (SeriesStuck, SeriesInvariantError):
            break
        if outcome.kind != "extended":
            break
        steps += 1
        phi = state.final_coloring
        for attempt in (_try_direct, _try_kempe):
            out = attempt(phi, eid)
            if out is not None:
                return ExtendOutcome("colored", out, None, "tashkinov")

    if G.m <= fallback_threshold:
        keep = sorted(set(e for e in G.edge_ids if pc.is_colored(e)) | {eid})
        H = G.subgraph_of_edges(keep)
        eu = [H.endpoints(e)[0] for e in keep]
        ev_ = [H.endpoints(e)[1] for e in keep]
        if _kernels.chromatic_feasible(eu, ev_, H.vertex_count, pc.k):
            solutions, _ = enumerate_colorings(H, pc.k, cap=1)
            fresh = PartialColoring(G, pc.k, solutions[0])
            return ExtendOutcome("colored", fresh, None, "fallback")
        return ExtendOutcome(
            "evidence", None,
            FailureEvidence("budget_exhausted", last_tree, pc.k), None)
    return ExtendOutcome(
        "evidence", None,
        FailureEvidence("budget_exhausted", last_tree, pc.k), None)


# -- the driver -----------------------------------------------------------------


def _edge_order(G: Multigraph):
    return sorted(G.edge_ids,
                  key=lambda e: (-(G.degree(G.endpoints(e)[0])
                                   + G.degree(G.endpoints(e)[1])), e))


def color_at_k(G: Multigraph, k: int, *, depth: int = 1, cap: int = 400,
               fallback_threshold: int = 25, keep_partial: bool = False):
    """Try to color every edge with k colors.

    Returns (coloring, trace, []) on success or (None, None, evidences) on
    the first edge whose extension produced evidence against k; with
    keep_partial=True the failure case returns the partial coloring in place
    of the first None.
    """
    pc = PartialColoring(G, k)
    trace = {}
    for eid in _edge_order(G):
        if pc.is_colored(eid):
            continue
        out = extend(G, pc, eid, depth=depth, cap=cap,
                     fallback_threshold=fallback_threshold)
        if out.status == "colored":
            pc = out.coloring
            trace[eid] = out.method
        else:
            return (pc if keep_partial else None), None, [out.evidence]
    return pc, trace, []


def color(G: Multigraph, *, seed: int = 0, depth: int = 1, cap: int = 400,
          fallback_threshold: int = 25) -> ColoringResult:
    """Color G with at most max(Delta+1, ceil(density)) colors.

    Starts at the certified lower bound and escalates once on failure; at
    desk scale (m within the fallback threshold) the escalated attempt cannot
    fail. Identical inputs give identical results, including the trace.
    """
    rep = bound_report(G)
    schedule = [rep.lower] if rep.lower == rep.gs_upper else [rep.lower, rep.gs_upper]
    certificates = []
    last_partial = None
    for k in schedule:
        pc, trace, evidences = color_at_k(
            G, k, depth=depth, cap=cap, fallback_threshold=fallback_threshold,
            keep_partial=True)
        if trace is not None:
            result = ColoringResult(pc, k, certificates, trace, seed)
            if not verify_result(G, result):
                raise AssertionError("engine produced a result that fails verification")
            return result
        for ev in evidences:
            if ev.kind == "elementary_strongly_closed_tree":
                u = ev.tree.vertex_set
                value = Fraction(2 * G.induced_edge_count(u), len(u) - 1)
                certificates.append((DensityCertificate(u, value), ev.k))
        last_partial = pc
    raise IncompleteColoringError(last_partial, schedule[-1])


def verify_result(G: Multigraph, result: ColoringResult) -> bool:
    """Re-validate properness, totality, the color bound, and all certificates."""
    pc = result.coloring
    if pc.graph is not G and pc.graph != G:
        return False
    if pc.k != result.k_used:
        return False
    if validate(G, pc):
        return False
    if pc.uncolored_edges:
        return False
    rep = bound_report(G)
    if result.k_used > rep.gs_upper:
        return False
    for cert, k in result.certificates:
        try:
            if not certificate_check(G, cert.u, k):
                return False
        except ValueError:
            return False
        if Fraction(2 * G.induced_edge_count(cert.u), len(cert.u) - 1) != cert.value:
            return False
    return True
