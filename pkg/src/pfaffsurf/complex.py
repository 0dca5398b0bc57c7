"""Closed and punctured polygonally cellulated orientable surfaces.

A surface is stored combinatorially: every edge carries a reference
direction, and every face lists its boundary as a cyclic sequence of
signed slots.  A slot sign of ``+1`` means the face traverses the edge along
its reference direction.  Edges are identified by id only, so loops,
parallel edges and self-glued polygons are all representable.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any, Iterable, Iterator

from .errors import InvalidComplex, NonOrientableOrInvalid, UnknownFace


@dataclass(frozen=True)
class Edge:
    id: int
    tail: int | None = None
    head: int | None = None


@dataclass(frozen=True)
class Slot:
    edge: int
    sign: int


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple[Slot, ...]


@dataclass(frozen=True)
class SlotRef:
    """Position of one boundary slot inside the complex."""

    face: int
    position: int
    edge: int
    sign: int


@dataclass(frozen=True)
class CellComplex:
    name: str
    vertex_count: int
    edges: tuple[Edge, ...]
    faces: tuple[Face, ...]

    @property
    def v(self) -> int:
        return self.vertex_count

    @property
    def d(self) -> int:
        return len(self.edges)

    @property
    def p(self) -> int:
        return len(self.faces)

    def slots(self) -> Iterator[SlotRef]:
        for face in self.faces:
            for pos, slot in enumerate(face.boundary):
                yield SlotRef(face.id, pos, slot.edge, slot.sign)

    @cached_property
    def edge_slots(self) -> dict[int, tuple[SlotRef, ...]]:
        """Map edge id to its boundary slots, in (face, position) order."""
        table: dict[int, list[SlotRef]] = defaultdict(list)
        for ref in self.slots():
            table[ref.edge].append(ref)
        return {e.id: tuple(table.get(e.id, ())) for e in self.edges}

    def incidence(self, face: int, edge: int) -> int:
        """Incidence number: sum of the slot signs of ``edge`` in ``face``."""
        return sum(s.sign for s in self.faces[face].boundary if s.edge == edge)

    def face_edges(self, face: int) -> list[int]:
        """Distinct edge ids on the boundary of ``face``, in first-visit order."""
        return list(dict.fromkeys(s.edge for s in self.faces[face].boundary))

    # -- serialization -------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "vertex_count": self.vertex_count,
            "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in self.edges],
            "faces": [
                {
                    "id": f.id,
                    "boundary": [{"edge": s.edge, "sign": s.sign} for s in f.boundary],
                }
                for f in self.faces
            ],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CellComplex":
        try:
            edges = tuple(
                Edge(int(e["id"]), _opt_int(e.get("tail")), _opt_int(e.get("head")))
                for e in data["edges"]
            )
            faces = tuple(
                Face(
                    int(f["id"]),
                    tuple(Slot(int(s["edge"]), int(s["sign"])) for s in f["boundary"]),
                )
                for f in data["faces"]
            )
            name = str(data.get("name", "complex"))
            vertex_count = int(data["vertex_count"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidComplex(f"malformed complex JSON: {exc!r}") from exc
        for i, e in enumerate(edges):
            if e.id != i:
                raise InvalidComplex(f"edge ids must be dense and in list order (position {i} has id {e.id})")
        for i, f in enumerate(faces):
            if f.id != i:
                raise InvalidComplex(f"face ids must be dense and in list order (position {i} has id {f.id})")
        return cls(name, vertex_count, edges, faces)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "CellComplex":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "CellComplex":
        return cls.from_json(Path(path).read_text())


def _opt_int(value: Any) -> int | None:
    return None if value is None else int(value)


# -- validation ----------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    ids: tuple[int, ...] = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def codes(self) -> set[str]:
        return {v.code for v in self.violations}

    def to_dict(self) -> dict[str, Any]:
        def dump(items: list[Violation]) -> list[dict[str, Any]]:
            return [{"code": x.code, "message": x.message, "ids": list(x.ids)} for x in items]

        return {"ok": self.ok, "violations": dump(self.violations), "warnings": dump(self.warnings)}


def validate(complex: CellComplex) -> ValidationReport:
    """Check the surface invariants; violations are collected, never raised."""
    report = ValidationReport()
    bad = report.violations.append
    d = complex.d

    if complex.vertex_count < 0:
        bad(Violation("vertex-count", "vertex_count is negative"))
    if not complex.faces:
        bad(Violation("no-faces", "complex has no faces"))

    structural_ok = True
    for f in complex.faces:
        if not f.boundary:
            bad(Violation("empty-face", f"face {f.id} has an empty boundary", (f.id,)))
            structural_ok = False
        for s in f.boundary:
            if not 0 <= s.edge < d:
                bad(Violation("unknown-edge", f"face {f.id} references edge {s.edge}", (f.id, s.edge)))
                structural_ok = False
            if s.sign not in (1, -1):
                bad(Violation("bad-sign", f"face {f.id} has slot sign {s.sign}", (f.id,)))
                structural_ok = False
    if not structural_ok:
        return report

    counts: dict[int, list[int]] = {}
    for e, refs in complex.edge_slots.items():
        if len(refs) != 2:
            counts.setdefault(len(refs), []).append(e)
        elif refs[0].sign == refs[1].sign:
            bad(Violation("orientation", f"edge {e} has two slots with the same sign", (e,)))
        elif refs[0].face == refs[1].face:
            report.warnings.append(
                Violation(
                    "zero-incidence",
                    f"edge {e} is visited twice by face {refs[0].face}; incidence number is 0",
                    (e, refs[0].face),
                )
            )
    for n, edges in sorted(counts.items()):
        bad(Violation("slot-count", f"edge in {n} slot{'s' if n != 1 else ''}", tuple(edges)))

    if complex.faces and not _faces_connected(complex):
        bad(Violation("disconnected", "face-adjacency graph is not connected"))

    if report.ok:
        _check_vertices(complex, report)
    return report


def _faces_connected(complex: CellComplex) -> bool:
    adjacency: dict[int, set[int]] = defaultdict(set)
    for refs in complex.edge_slots.values():
        for a in refs:
            for b in refs:
                if a.face != b.face:
                    adjacency[a.face].add(b.face)
    seen = {0}
    queue = deque([0])
    while queue:
        f = queue.popleft()
        for g in adjacency[f]:
            if g not in seen:
                seen.add(g)
                queue.append(g)
    return len(seen) == complex.p


def vertex_classes(complex: CellComplex) -> list[list[tuple[int, int]]]:
    """Corners of the polygons grouped into the vertices of the glued surface.

    Corner ``(f, i)`` is the point where slot ``i`` of face ``f`` starts.
    Requires every edge to have exactly two slots.
    """
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x: tuple[int, int]) -> tuple[int, int]:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a: tuple[int, int], b: tuple[int, int]) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    def ends(ref: SlotRef) -> tuple[tuple[int, int], tuple[int, int]]:
        n = len(complex.faces[ref.face].boundary)
        start = (ref.face, ref.position)
        end = (ref.face, (ref.position + 1) % n)
        return (start, end) if ref.sign == 1 else (end, start)

    for f in complex.faces:
        for i in range(len(f.boundary)):
            find((f.id, i))
    for refs in complex.edge_slots.values():
        if len(refs) == 2:
            (t0, h0), (t1, h1) = ends(refs[0]), ends(refs[1])
            union(t0, t1)
            union(h0, h1)
    groups: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for corner in list(parent):
        groups[find(corner)].append(corner)
    return sorted(sorted(g) for g in groups.values())


def _check_vertices(complex: CellComplex, report: ValidationReport) -> None:
    classes = vertex_classes(complex)
    if len(classes) != complex.vertex_count:
        report.violations.append(
            Violation(
                "vertex-count",
                f"vertex_count is {complex.vertex_count} but the gluing produces {len(classes)} vertices",
            )
        )
    if any(e.tail is None or e.head is None for e in complex.edges):
        return
    for f in complex.faces:
        n = len(f.boundary)
        for i, s in enumerate(f.boundary):
            nxt = f.boundary[(i + 1) % n]
            if _slot_end(complex, s) != _slot_start(complex, nxt):
                report.violations.append(
                    Violation("boundary-chain", f"face {f.id} boundary is not a closed walk at slot {i}", (f.id,))
                )
                return
    labels = []
    for cls in classes:
        f, i = cls[0]
        labels.append(_slot_start(complex, complex.faces[f].boundary[i]))
    if len(set(labels)) != len(labels) or any(not 0 <= x < complex.vertex_count for x in labels):
        report.violations.append(
            Violation("vertex-labels", "edge endpoint labels do not match the glued vertices")
        )


def _slot_start(complex: CellComplex, s: Slot) -> int | None:
    e = complex.edges[s.edge]
    return e.tail if s.sign == 1 else e.head


def _slot_end(complex: CellComplex, s: Slot) -> int | None:
    e = complex.edges[s.edge]
    return e.head if s.sign == 1 else e.tail


def require_valid(complex: CellComplex) -> None:
    report = validate(complex)
    if not report.ok:
        summary = "; ".join(f"{v.code}: {v.message}" for v in report.violations)
        raise InvalidComplex(f"{complex.name}: {summary}")


def euler_and_genus(complex: CellComplex) -> tuple[int, int]:
    """Return ``(chi, genus)`` with ``chi = v - d + p`` and ``chi = 2 - 2g``."""
    chi = complex.v - complex.d + complex.p
    if chi % 2 or chi > 2:
        raise NonOrientableOrInvalid(f"Euler characteristic {chi} is not that of a closed orientable surface")
    return chi, (2 - chi) // 2


# -- punctures -----------------------------------------------------------


@dataclass(frozen=True)
class PuncturedComplex:
    base: CellComplex
    removed_face: int
    internal_edges: frozenset[int]
    external_edges: frozenset[int]

    @property
    def name(self) -> str:
        return f"{self.base.name}/f{self.removed_face}"

    @cached_property
    def faces(self) -> tuple[int, ...]:
        """Surviving face ids in increasing order."""
        return tuple(f.id for f in self.base.faces if f.id != self.removed_face)

    @property
    def d(self) -> int:
        return self.base.d

    @property
    def p(self) -> int:
        """Face count of the closed surface (one more than the surviving faces)."""
        return self.base.p

    def surviving_slots(self) -> Iterator[SlotRef]:
        for ref in self.base.slots():
            if ref.face != self.removed_face:
                yield ref

    @cached_property
    def free_edges(self) -> tuple[int, ...]:
        """Edges with no slot on a surviving face (both slots on the removed face)."""
        return tuple(
            e for e, refs in self.base.edge_slots.items()
            if all(r.face == self.removed_face for r in refs)
        )


def puncture(complex: CellComplex, face: int) -> PuncturedComplex:
    if not 0 <= face < complex.p:
        raise UnknownFace(face)
    internal, external = set(), set()
    for e, refs in complex.edge_slots.items():
        if any(r.face == face for r in refs):
            external.add(e)
        else:
            internal.add(e)
    return PuncturedComplex(complex, face, frozenset(internal), frozenset(external))


def all_punctures(complex: CellComplex) -> Iterable[PuncturedComplex]:
    return (puncture(complex, f.id) for f in complex.faces)


def reorient(complex: CellComplex, bits: Iterable[int], name: str | None = None) -> CellComplex:
    """Reverse the reference direction of every edge whose bit is set."""
    flip = list(bits)
    edges = tuple(Edge(e.id, e.head, e.tail) if flip[e.id] else e for e in complex.edges)
    faces = tuple(
        Face(f.id, tuple(Slot(s.edge, -s.sign if flip[s.edge] else s.sign) for s in f.boundary))
        for f in complex.faces
    )
    return CellComplex(name or complex.name, complex.vertex_count, edges, faces)
