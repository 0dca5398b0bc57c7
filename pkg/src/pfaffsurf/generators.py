"""Builtin surfaces, parametric families and seeded random cellulations."""

from __future__ import annotations

import random
import re
from typing import Sequence

from .complex import CellComplex, Edge, Face, Slot
from .errors import InvalidParameter


def from_polygons(name: str, vertex_count: int, cycles: Sequence[Sequence[int]]) -> CellComplex:
    """Build a complex from coherently oriented vertex cycles.

    Each unordered vertex pair is one edge, so this only fits complexes
    without loops or parallel edges.  Edge ids follow first appearance and
    the reference direction is the direction of that first traversal.
    """
    index: dict[frozenset[int], int] = {}
    edges: list[Edge] = []
    faces: list[Face] = []
    for fid, cycle in enumerate(cycles):
        slots = []
        for i, a in enumerate(cycle):
            b = cycle[(i + 1) % len(cycle)]
            key = frozenset((a, b))
            if key not in index:
                index[key] = len(edges)
                edges.append(Edge(len(edges), a, b))
            e = edges[index[key]]
            slots.append(Slot(e.id, 1 if (e.tail, e.head) == (a, b) else -1))
        faces.append(Face(fid, tuple(slots)))
    return CellComplex(name, vertex_count, tuple(edges), tuple(faces))


def tetrahedron() -> CellComplex:
    return from_polygons("tetrahedron", 4, [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)])


def prism(n: int, name: str | None = None) -> CellComplex:
    if n < 3:
        raise InvalidParameter(f"prism needs n >= 3, got {n}")
    bottom = tuple(reversed(range(n)))
    top = tuple(range(n, 2 * n))
    sides = [(i, (i + 1) % n, n + (i + 1) % n, n + i) for i in range(n)]
    return from_polygons(name or f"prism_{n}", 2 * n, [bottom, top, *sides])


def cube() -> CellComplex:
    return prism(4, name="cube")


def torus_grid(m: int, n: int) -> CellComplex:
    """``m`` x ``n`` square grid with opposite sides identified; faces row-major."""
    if m < 1 or n < 1:
        raise InvalidParameter(f"torus_grid needs m, n >= 1, got {m}x{n}")

    def vert(i: int, j: int) -> int:
        return (i % m) * n + (j % n)

    def h(i: int, j: int) -> int:
        return (i % m) * n + (j % n)

    def v(i: int, j: int) -> int:
        return m * n + (i % m) * n + (j % n)

    edges = [Edge(h(i, j), vert(i, j), vert(i, j + 1)) for i in range(m) for j in range(n)]
    edges += [Edge(v(i, j), vert(i, j), vert(i + 1, j)) for i in range(m) for j in range(n)]
    faces = [
        Face(
            i * n + j,
            (Slot(h(i, j), 1), Slot(v(i, j + 1), 1), Slot(h(i + 1, j), -1), Slot(v(i, j), -1)),
        )
        for i in range(m)
        for j in range(n)
    ]
    return CellComplex(f"torus_grid_{m}x{n}", m * n, tuple(edges), tuple(faces))


def genus_polygon(g: int) -> CellComplex:
    """One 4g-gon glued by the word a1 b1 a1^-1 b1^-1 ... ag bg ag^-1 bg^-1."""
    if g < 1:
        raise InvalidParameter(f"genus_g_polygon needs g >= 1, got {g}")
    edges = tuple(Edge(i, 0, 0) for i in range(2 * g))
    slots: list[Slot] = []
    for k in range(g):
        a, b = 2 * k, 2 * k + 1
        slots += [Slot(a, 1), Slot(b, 1), Slot(a, -1), Slot(b, -1)]
    return CellComplex(f"genus_{g}_polygon", 1, edges, (Face(0, tuple(slots)),))


# Vertex labels and clockwise corner cycles of a hand-labelled 3x3 torus.
# The last face (id 8) is the centre square, the usual one to remove.
_LABELLED_TORUS_LABELS = (1, 2, 3, 4, 5, 7, 8, 9, 10)
_LABELLED_TORUS_FACES = (
    (1, 2, 7, 5),
    (7, 2, 3, 8),
    (3, 1, 5, 8),
    (8, 5, 4, 9),
    (9, 4, 1, 3),
    (10, 9, 3, 2),
    (4, 10, 2, 1),
    (5, 7, 10, 4),
    (7, 8, 9, 10),
)


def labelled_torus() -> CellComplex:
    """The labelled 3x3 torus; edges point from the smaller to the larger label."""
    vid = {label: i for i, label in enumerate(_LABELLED_TORUS_LABELS)}
    index: dict[tuple[int, int], int] = {}
    edges: list[Edge] = []
    faces: list[Face] = []
    for fid, cycle in enumerate(_LABELLED_TORUS_FACES):
        slots = []
        for i, a in enumerate(cycle):
            b = cycle[(i + 1) % 4]
            key = (min(a, b), max(a, b))
            if key not in index:
                index[key] = len(edges)
                edges.append(Edge(len(edges), vid[key[0]], vid[key[1]]))
            slots.append(Slot(index[key], 1 if a < b else -1))
        faces.append(Face(fid, tuple(slots)))
    return CellComplex("labelled_torus", len(_LABELLED_TORUS_LABELS), tuple(edges), tuple(faces))


def labelled_torus_edge_names() -> list[str]:
    """Edge names of ``labelled_torus`` in id order, e.g. ``"12"`` or ``"(7,10)"``."""
    names = {}
    for cycle in _LABELLED_TORUS_FACES:
        for i, a in enumerate(cycle):
            b = cycle[(i + 1) % 4]
            lo, hi = min(a, b), max(a, b)
            names.setdefault((lo, hi), f"{lo}{hi}" if hi < 10 else f"({lo},{hi})")
    return list(names.values())


def generate(kind: str, *args: int) -> CellComplex:
    """Parametric family by name: tetrahedron, cube, torus_grid, genus_g_polygon, prism."""
    try:
        if kind == "tetrahedron":
            return tetrahedron()
        if kind == "cube":
            return cube()
        if kind == "torus_grid":
            return torus_grid(*args)
        if kind == "genus_g_polygon":
            return genus_polygon(*args)
        if kind == "prism":
            return prism(*args)
    except TypeError as exc:
        raise InvalidParameter(f"bad arguments for {kind}: {args}") from exc
    raise InvalidParameter(f"unknown family {kind!r}")


# -- random cellulations ---------------------------------------------------


class _Builder:
    """Mutable edge/face lists for local surgery moves."""

    def __init__(self, complex: CellComplex):
        self.v = complex.vertex_count
        self.edges = [[e.tail, e.head] for e in complex.edges]
        self.faces = [[(s.edge, s.sign) for s in f.boundary] for f in complex.faces]

    def start(self, slot: tuple[int, int]) -> int:
        e, sign = slot
        return self.edges[e][0] if sign == 1 else self.edges[e][1]

    def new_vertex(self) -> int:
        self.v += 1
        return self.v - 1

    def new_edge(self, tail: int, head: int) -> int:
        self.edges.append([tail, head])
        return len(self.edges) - 1

    def subdivide_edge(self, e: int) -> None:
        w = self.new_vertex()
        tail, head = self.edges[e]
        self.edges[e] = [tail, w]
        e2 = self.new_edge(w, head)
        for face in self.faces:
            out = []
            for edge, sign in face:
                if edge != e:
                    out.append((edge, sign))
                elif sign == 1:
                    out += [(e, 1), (e2, 1)]
                else:
                    out += [(e2, -1), (e, -1)]
            face[:] = out

    def split_face(self, f: int, i: int, j: int) -> None:
        """Cut face ``f`` along a new edge from corner ``i`` to corner ``j``."""
        face = self.faces[f]
        n = len(face)
        vi, vj = self.start(face[i]), self.start(face[j])
        e = self.new_edge(vi, vj)
        part_a = [face[(i + k) % n] for k in range((j - i) % n)]
        part_b = [face[(j + k) % n] for k in range((i - j) % n)]
        self.faces[f] = part_a + [(e, -1)]
        self.faces.append(part_b + [(e, 1)])

    def cone_face(self, f: int) -> None:
        """Replace face ``f`` by a fan of triangles around a new interior vertex."""
        face = self.faces[f]
        n = len(face)
        w = self.new_vertex()
        spokes = [self.new_edge(self.start(face[k]), w) for k in range(n)]
        tris = [[face[k], (spokes[(k + 1) % n], 1), (spokes[k], -1)] for k in range(n)]
        self.faces[f] = tris[0]
        self.faces.extend(tris[1:])

    def freeze(self, name: str) -> CellComplex:
        edges = tuple(Edge(i, t, h) for i, (t, h) in enumerate(self.edges))
        faces = tuple(Face(i, tuple(Slot(e, s) for e, s in f)) for i, f in enumerate(self.faces))
        return CellComplex(name, self.v, edges, faces)


def _two_triangle_sphere() -> CellComplex:
    return from_polygons("sphere", 3, [(0, 1, 2), (2, 1, 0)])


def random_cellulation(genus: int, rng: random.Random, max_edges: int, name: str | None = None) -> CellComplex:
    """Random cellulation of the closed orientable genus-``genus`` surface.

    Starts from two glued triangles (sphere) or the standard 4g-gon, then
    applies random edge subdivisions, face splits and face cones while the
    edge count stays at most ``max_edges``.
    """
    if genus < 0:
        raise InvalidParameter("genus must be nonnegative")
    seed = _two_triangle_sphere() if genus == 0 else genus_polygon(genus)
    if max_edges < seed.d:
        raise InvalidParameter(f"max_edges={max_edges} is below the seed size {seed.d}")
    b = _Builder(seed)
    target = rng.randint(seed.d, max_edges)
    while len(b.edges) < target:
        room = target - len(b.edges)
        move = rng.random()
        splittable = [f for f, face in enumerate(b.faces) if len(face) >= 4]
        if move < 0.4 or (move < 0.8 and not splittable):
            b.subdivide_edge(rng.randrange(len(b.edges)))
        elif move < 0.8:
            f = rng.choice(splittable)
            n = len(b.faces[f])
            i = rng.randrange(n)
            j = (i + rng.randint(2, n - 2)) % n
            b.split_face(f, i, j)
        else:
            small = [f for f, face in enumerate(b.faces) if len(face) <= room]
            if not small:
                continue
            b.cone_face(rng.choice(small))
    return b.freeze(name or f"random_g{genus}")


def random_sphere(rng: random.Random, max_edges: int) -> CellComplex:
    return random_cellulation(0, rng, max_edges, name="random_sphere")


def random_torus(rng: random.Random, max_edges: int) -> CellComplex:
    return random_cellulation(1, rng, max_edges, name="random_torus")


# -- builtin fixtures ------------------------------------------------------

FIXTURE_NAMES = (
    "tetrahedron",
    "cube",
    "prism_3",
    "torus_grid_2x2",
    "torus_grid_3x3",
    "labelled_torus",
    "one_face_torus",
    "genus_2_polygon",
)

_PATTERNS = (
    (re.compile(r"prism_(\d+)$"), lambda m: prism(int(m[1]))),
    (re.compile(r"torus_grid_(\d+)x(\d+)$"), lambda m: torus_grid(int(m[1]), int(m[2]))),
    (re.compile(r"genus_(\d+)_polygon$"), lambda m: genus_polygon(int(m[1]))),
)


def fixture(name: str) -> CellComplex:
    """Look up a builtin complex by name (see ``FIXTURE_NAMES``; families accept any size)."""
    if name == "tetrahedron":
        return tetrahedron()
    if name == "cube":
        return cube()
    if name == "labelled_torus":
        return labelled_torus()
    if name == "one_face_torus":
        c = torus_grid(1, 1)
        return CellComplex("one_face_torus", c.vertex_count, c.edges, c.faces)
    for pattern, build in _PATTERNS:
        match = pattern.match(name)
        if match:
            return build(match)
    raise InvalidParameter(f"unknown fixture {name!r}")
