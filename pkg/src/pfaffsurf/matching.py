"""Bipartite face/edge graph, matching signs, and constructive Pfaffian orientations.

The graph has the surviving faces on one side and a row basis ``R`` of the
incidence matrix on the other, with an arc ``face -> edge`` whenever the
edge lies on the face.  For a perfect matching ``M`` the graph ``G_M``
reverses every matched arc, so each matched pair reads ``edge -> face``.
"""

from __future__ import annotations

from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from math import prod
from typing import Iterator, Sequence

from .complex import PuncturedComplex
from .enumeration import Orientation
from .errors import CapExceeded, NotCyclic, PeelingStuck, RankDeficient, ZeroIncidence
from .gf2 import Gf2Matrix, independent_rows
from .incidence import incidence_matrix

DEFAULT_CAP = 10**6


def select_row_basis(k: PuncturedComplex, order: Sequence[int] | None = None) -> list[int]:
    """Greedy GF(2) row basis of the incidence matrix.

    Edges are scanned in id order unless ``order`` gives another scan order;
    the result is sorted by edge id either way.
    """
    inc = incidence_matrix(k)
    scan = list(order) if order is not None else list(inc.edge_ids)
    mod2 = inc.mod2()
    rows = independent_rows(Gf2Matrix(len(scan), mod2.ncols, tuple(mod2.rows[e] for e in scan)))
    if len(rows) != len(k.faces):
        raise RankDeficient(f"{k.name}: incidence rank {len(rows)} != {len(k.faces)} faces")
    return sorted(scan[i] for i in rows)


@dataclass(frozen=True)
class MatchGraph:
    r_edges: tuple[int, ...]
    faces: tuple[int, ...]
    arcs: frozenset[tuple[int, int]]

    def faces_of(self, edge: int) -> list[int]:
        return [f for f in self.faces if (f, edge) in self.arcs]

    def edges_of(self, face: int) -> list[int]:
        return [e for e in self.r_edges if (face, e) in self.arcs]

    def to_dot(self, matching: "PerfectMatching | None" = None) -> str:
        """Graphviz rendering of ``G`` (or ``G_M`` when a matching is given)."""
        matched = set(matching.pairs) if matching else set()
        lines = ["digraph G {", "  rankdir=LR;"]
        lines += [f'  "f{f}" [shape=box];' for f in self.faces]
        lines += [f'  "e{e}" [shape=ellipse];' for e in self.r_edges]
        for f, e in sorted(self.arcs):
            if (f, e) in matched:
                lines.append(f'  "e{e}" -> "f{f}" [style=bold];')
            else:
                lines.append(f'  "f{f}" -> "e{e}";')
        lines.append("}")
        return "\n".join(lines)


def build_match_graph(k: PuncturedComplex, r: list[int]) -> MatchGraph:
    r_set = set(r)
    arcs = {
        (ref.face, ref.edge) for ref in k.surviving_slots() if ref.edge in r_set
    }
    return MatchGraph(tuple(r), k.faces, frozenset(arcs))


@dataclass(frozen=True)
class PerfectMatching:
    """``pairs[i]`` is ``(face, r_edges[i])``: the face matched to the i-th R-edge."""

    pairs: tuple[tuple[int, int], ...]

    def face_of(self) -> dict[int, int]:
        return {e: f for f, e in self.pairs}

    def edge_of(self) -> dict[int, int]:
        return {f: e for f, e in self.pairs}

    def permutation(self, faces: tuple[int, ...]) -> list[int]:
        """``pi[i] = j`` when the i-th R-edge is matched to the j-th face."""
        pos = {f: j for j, f in enumerate(faces)}
        return [pos[f] for f, _ in self.pairs]


def permutation_sign(perm: list[int]) -> int:
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = perm[i]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _matchings(g: MatchGraph) -> Iterator[PerfectMatching]:
    candidates = [g.faces_of(e) for e in g.r_edges]
    used: set[int] = set()
    chosen: list[tuple[int, int]] = []

    def extend(i: int) -> Iterator[PerfectMatching]:
        if i == len(g.r_edges):
            yield PerfectMatching(tuple(chosen))
            return
        for f in candidates[i]:
            if f not in used:
                used.add(f)
                chosen.append((f, g.r_edges[i]))
                yield from extend(i + 1)
                chosen.pop()
                used.remove(f)

    if len(g.r_edges) == len(g.faces):
        yield from extend(0)


def enumerate_matchings(g: MatchGraph, cap: int = DEFAULT_CAP) -> list[PerfectMatching]:
    """All perfect matchings by backtracking over R-edges, faces tried in id order."""
    out = []
    for m in _matchings(g):
        out.append(m)
        if len(out) > cap:
            raise CapExceeded(f"more than {cap} perfect matchings")
    return out


def matching_sign(m: PerfectMatching, k: PuncturedComplex) -> int:
    """``sgn(pi_M)`` times the product of the matched incidence numbers."""
    incidences = [k.base.incidence(f, e) for f, e in m.pairs]
    if 0 in incidences:
        f, e = m.pairs[incidences.index(0)]
        raise ZeroIncidence(f"face {f} meets edge {e} with incidence 0")
    return permutation_sign(m.permutation(k.faces)) * prod(incidences)


def _residual_arcs(g: MatchGraph, m: PerfectMatching) -> dict[str, set[str]]:
    """Adjacency of ``G_M`` with vertices named ``f<id>`` / ``e<id>``."""
    matched = set(m.pairs)
    succ: dict[str, set[str]] = {f"f{f}": set() for f in g.faces}
    succ.update({f"e{e}": set() for e in g.r_edges})
    for f, e in g.arcs:
        if (f, e) in matched:
            succ[f"e{e}"].add(f"f{f}")
        else:
            succ[f"f{f}"].add(f"e{e}")
    return succ


def residual_degrees(g: MatchGraph, m: PerfectMatching) -> dict[str, tuple[int, int]]:
    """``(in_degree, out_degree)`` of every vertex of ``G_M``."""
    succ = _residual_arcs(g, m)
    indeg = dict.fromkeys(succ, 0)
    for targets in succ.values():
        for t in targets:
            indeg[t] += 1
    return {v: (indeg[v], len(succ[v])) for v in succ}


def is_acyclic(g: MatchGraph, m: PerfectMatching) -> bool:
    succ = _residual_arcs(g, m)
    # TopologicalSorter takes predecessor maps; orientation does not matter for cycle detection.
    try:
        TopologicalSorter(succ).prepare()
    except CycleError:
        return False
    return True


def residual_cycles(g: MatchGraph, m: PerfectMatching) -> list[list[tuple[int, int]]]:
    """Directed cycles of ``G_M`` as lists of matched pairs ``(face, edge)``.

    In ``G_M`` every face has a single in-arc, from its matched edge, so a
    cycle is determined by walking backwards: from face ``f`` to its matched
    edge ``e`` and on to the other face containing ``e``.  Stepping back is a
    function on faces, hence the cycles are disjoint.
    """
    edge_of = m.edge_of()
    pred: dict[int, int] = {}
    for f in g.faces:
        others = [h for h in g.faces_of(edge_of[f]) if h != f]
        if others:
            pred[f] = others[0]
    cycles = []
    state: dict[int, int] = {}
    for start in g.faces:
        path = []
        f = start
        while f in pred and f not in state:
            state[f] = 1
            path.append(f)
            f = pred[f]
        if f in state and state[f] == 1 and f in path:
            loop = path[path.index(f):]
            # Reverse walk order so that face -> next face follows G_M.
            loop.reverse()
            cycles.append([(h, edge_of[h]) for h in loop])
        for h in path:
            state[h] = 2
    return cycles


def involution(g: MatchGraph, m: PerfectMatching) -> PerfectMatching:
    """Reverse the cycle of ``G_M`` whose sorted face tuple is lexicographically first."""
    cycles = residual_cycles(g, m)
    if not cycles:
        raise NotCyclic("matching is acyclic")
    chosen = min(cycles, key=lambda c: tuple(sorted(f for f, _ in c)))
    # Around the cycle face h_i -> edge of h_{i+1}; reversing rematches h_i with that edge.
    new_edge = {}
    for i, (h, _) in enumerate(chosen):
        new_edge[h] = chosen[(i + 1) % len(chosen)][1]
    face_of = m.face_of()
    for h, e in new_edge.items():
        face_of[e] = h
    return PerfectMatching(tuple((face_of[e], e) for e in g.r_edges))


def peel(g: MatchGraph) -> list[tuple[int, int]]:
    """Greedy peeling: repeatedly take the lowest face with exactly one live R-edge.

    Returns the matched pairs in peel order.  Each peeled face only meets
    R-edges that were peeled before it, which makes the matching acyclic.
    """
    live_faces = list(g.faces)
    live_edges = set(g.r_edges)
    face_edges = {f: set(g.edges_of(f)) for f in g.faces}
    order = []
    while live_faces:
        for f in live_faces:
            remaining = face_edges[f] & live_edges
            if len(remaining) == 1:
                (e,) = remaining
                break
        else:
            raise PeelingStuck(f"no face with exactly one live R-edge among {live_faces}")
        order.append((f, e))
        live_faces.remove(f)
        live_edges.discard(e)
    return order


def find_acyclic_matching(g: MatchGraph) -> PerfectMatching:
    face_of = {e: f for f, e in peel(g)}
    return PerfectMatching(tuple((face_of[e], e) for e in g.r_edges))


@dataclass(frozen=True)
class Construction:
    bits: tuple[int, ...]
    peel_order: tuple[tuple[int, int], ...]
    flipped: tuple[int, ...]


def _good_parity(k: PuncturedComplex, bits: list[int], face: int) -> int:
    return sum(bits[s.edge] ^ (s.sign == -1) for s in k.base.faces[face].boundary) & 1


def construct(k: PuncturedComplex) -> Construction:
    """Peel an acyclic matching and fix each face's parity with its matched edge."""
    g = build_match_graph(k, select_row_basis(k))
    order = peel(g)
    bits = [0] * k.d
    flipped = []
    done: list[int] = []
    for f, e in order:
        if not _good_parity(k, bits, f):
            if any(e in k.base.face_edges(h) for h in done):
                raise PeelingStuck(f"flipping edge {e} would disturb a processed face")
            bits[e] ^= 1
            flipped.append(e)
        done.append(f)
    return Construction(tuple(bits), tuple(order), tuple(flipped))


def construct_orientation(k: PuncturedComplex) -> Orientation:
    return Orientation(construct(k).bits)
