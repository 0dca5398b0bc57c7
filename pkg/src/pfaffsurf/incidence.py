"""Incidence matrices and the GF(2) parity system of a punctured surface.

The system has one variable per boundary slot of a surviving face.  A slot
variable is 1 when the edge arrow opposes the face's induced direction.
Face rows ask for an odd number of such slots per face; edge rows tie the
two slots of an internal edge together (exactly one of them is 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex import CellComplex, PuncturedComplex, SlotRef
from .errors import NullityMismatch, ReductionMismatch
from .gf2 import Gf2Matrix, IntMatrix, rank_gf2


@dataclass(frozen=True)
class IncidenceMatrix:
    """Rows are edges in id order, columns are (surviving) faces in id order."""

    entries: IntMatrix
    edge_ids: tuple[int, ...]
    face_ids: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.edge_ids), len(self.face_ids)

    def mod2(self) -> Gf2Matrix:
        return Gf2Matrix.from_lists([[x & 1 for x in row] for row in self.entries], len(self.face_ids))

    def rows_for(self, edges: list[int]) -> IntMatrix:
        pos = {e: i for i, e in enumerate(self.edge_ids)}
        return tuple(self.entries[pos[e]] for e in edges)


def incidence_matrix(k: PuncturedComplex | CellComplex) -> IncidenceMatrix:
    if isinstance(k, PuncturedComplex):
        base, faces = k.base, k.faces
    else:
        base, faces = k, tuple(f.id for f in k.faces)
    col = {f: j for j, f in enumerate(faces)}
    rows = [[0] * len(faces) for _ in base.edges]
    for ref in base.slots():
        if ref.face in col:
            rows[ref.edge][col[ref.face]] += ref.sign
    return IncidenceMatrix(
        tuple(tuple(r) for r in rows), tuple(e.id for e in base.edges), faces
    )


@dataclass(frozen=True)
class PfaffianSystem:
    """Slot-level system ``matrix @ x = rhs`` with labelled rows and columns.

    ``row_index`` entries are ``("face", face_id)`` followed by
    ``("edge", edge_id)``.  ``free_edges`` lists edges with no surviving slot;
    they carry no variable and are unconstrained.
    """

    matrix: Gf2Matrix
    rhs: int
    var_index: tuple[SlotRef, ...]
    row_index: tuple[tuple[str, int], ...]
    free_edges: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.nrows, self.matrix.ncols

    @property
    def face_rows(self) -> int:
        return sum(1 for kind, _ in self.row_index if kind == "face")


def build_system(k: PuncturedComplex) -> PfaffianSystem:
    var_index = tuple(k.surviving_slots())
    column = {(ref.face, ref.position): j for j, ref in enumerate(var_index)}
    rows: list[int] = []
    labels: list[tuple[str, int]] = []
    for f in k.faces:
        row = 0
        for pos in range(len(k.base.faces[f].boundary)):
            row |= 1 << column[(f, pos)]
        rows.append(row)
        labels.append(("face", f))
    for e in sorted(k.internal_edges):
        a, b = k.base.edge_slots[e]
        rows.append((1 << column[(a.face, a.position)]) | (1 << column[(b.face, b.position)]))
        labels.append(("edge", e))
    matrix = Gf2Matrix(len(rows), len(var_index), tuple(rows))
    return PfaffianSystem(matrix, (1 << len(rows)) - 1, var_index, tuple(labels), k.free_edges)


@dataclass(frozen=True)
class ReducedSystem:
    """Block form reached by the column/row schedule.

    ``matrix`` has the transposed mod-2 incidence block over ``edge_columns``
    in its top-left corner and an identity of order ``identity_order`` in its
    bottom-right corner; ``rhs`` is the right-hand side after the row moves.
    """

    matrix: Gf2Matrix
    rhs: int
    edge_columns: tuple[int, ...]
    identity_order: int
    nullity_before: int
    nullity_after: int


def reduce_system(sys: PfaffianSystem, k: PuncturedComplex) -> ReducedSystem:
    """Run the elimination schedule that exposes the incidence block and check it.

    Slots are visited in (face, position) order.  The first slot of an
    internal edge absorbs the column of the second one, which cancels the
    edge row and leaves the edge's mod-2 incidence column; the second slot
    is moved to the tail.  Tail columns are then sorted by edge and their
    face-row entries cleared with row operations against the edge rows.
    """
    nface = sys.face_rows
    nrows = sys.matrix.nrows
    cols = sys.matrix.columns()
    slot_col = {(ref.face, ref.position): j for j, ref in enumerate(sys.var_index)}

    head: dict[int, int] = {}
    tail: dict[int, int] = {}
    for j, ref in enumerate(sys.var_index):
        refs = k.base.edge_slots[ref.edge]
        if ref.edge not in k.internal_edges:
            head[ref.edge] = cols[j]
            continue
        first, second = refs
        if (ref.face, ref.position) == (first.face, first.position):
            head[ref.edge] = cols[j] ^ cols[slot_col[(second.face, second.position)]]
        else:
            tail[ref.edge] = cols[j]

    edge_columns = tuple(sorted(head))
    tail_edges = sorted(tail)
    columns = [head[e] for e in edge_columns] + [tail[e] for e in tail_edges]
    rhs = sys.rhs

    # Clear the face-row part of each tail column using its edge row.
    for t, e in enumerate(tail_edges):
        edge_row = nface + t
        for face_row in range(nface):
            if (columns[len(edge_columns) + t] >> face_row) & 1:
                columns = [c ^ (((c >> edge_row) & 1) << face_row) for c in columns]
                rhs ^= ((rhs >> edge_row) & 1) << face_row

    reduced = Gf2Matrix.from_columns(columns, nrows)
    expected = _expected_block_form(k, edge_columns, len(tail_edges), nface, nrows)
    if reduced != expected:
        raise ReductionMismatch(f"{k.name}: block form not reached")
    before = sys.matrix.ncols - rank_gf2(sys.matrix)
    after = reduced.ncols - rank_gf2(reduced)
    if before != after:
        raise ReductionMismatch(f"{k.name}: nullity changed from {before} to {after}")
    return ReducedSystem(reduced, rhs, edge_columns, len(tail_edges), before, after)


def _expected_block_form(
    k: PuncturedComplex, edge_columns: tuple[int, ...], order: int, nface: int, nrows: int
) -> Gf2Matrix:
    inc = incidence_matrix(k).mod2()
    boundary_t = inc.submatrix(edge_columns, range(nface)).transpose()
    rows = list(boundary_t.rows) + [0] * order
    shift = len(edge_columns)
    for t in range(order):
        rows[nface + t] = 1 << (shift + t)
    return Gf2Matrix(nrows, shift + order, tuple(rows))


def system_nullity(sys: PfaffianSystem, k: PuncturedComplex) -> int:
    """Dimension of the orientation solution space: slot nullity plus free edges."""
    nullity = sys.matrix.ncols - rank_gf2(sys.matrix) + len(sys.free_edges)
    expected = k.d - k.p + 1
    if nullity != expected:
        raise NullityMismatch(f"{k.name}: nullity {nullity} != d - p + 1 = {expected}")
    return nullity
