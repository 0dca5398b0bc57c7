"""Orientations: the Pfaffian predicate, slot encoding, counting and enumeration."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterator

import numpy as np

from .complex import PuncturedComplex, euler_and_genus
from .errors import FormulaMismatch, Inconsistent, Incoherent, LengthMismatch, TooLarge
from .gf2 import Gf2Matrix, Solution, from_bits, rank_gf2, solve_affine, to_bits
from .incidence import PfaffianSystem, build_system, system_nullity

BRUTE_FORCE_CAP = 24
UNLIMITED_ENUMERATION = 2**20


@dataclass(frozen=True)
class Orientation:
    """One bit per edge: 0 keeps the reference direction, 1 reverses it."""

    bits: tuple[int, ...]

    @classmethod
    def reference(cls, d: int) -> "Orientation":
        return cls((0,) * d)

    @classmethod
    def from_mask(cls, mask: int, d: int) -> "Orientation":
        return cls(tuple(to_bits(mask, d)))

    @property
    def mask(self) -> int:
        return from_bits(self.bits)

    def to_dict(self, complex_name: str) -> dict[str, Any]:
        return {"complex": complex_name, "bits": list(self.bits)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Orientation":
        bits = tuple(int(b) for b in data["bits"])
        if any(b not in (0, 1) for b in bits):
            raise ValueError("orientation bits must be 0 or 1")
        return cls(bits)

    @classmethod
    def from_json(cls, text: str) -> "Orientation":
        return cls.from_dict(json.loads(text))


def good_slots(k: PuncturedComplex, o: Orientation, face: int) -> int:
    """Number of slots of ``face`` whose arrow opposes the face's traversal."""
    return sum(o.bits[s.edge] ^ (s.sign == -1) for s in k.base.faces[face].boundary)


def is_pfaffian(k: PuncturedComplex, o: Orientation) -> bool:
    if len(o.bits) != k.d:
        raise LengthMismatch(f"orientation has {len(o.bits)} bits, complex has {k.d} edges")
    return all(good_slots(k, o, f) % 2 == 1 for f in k.faces)


def encode(k: PuncturedComplex, o: Orientation, sys: PfaffianSystem | None = None) -> int:
    sys = sys or build_system(k)
    x = 0
    for j, ref in enumerate(sys.var_index):
        if o.bits[ref.edge] ^ (ref.sign == -1):
            x |= 1 << j
    return x


def decode(k: PuncturedComplex, x: int, sys: PfaffianSystem | None = None, free: int = 0) -> Orientation:
    """Invert ``encode``; ``free`` supplies the bits of edges without surviving slots."""
    sys = sys or build_system(k)
    bits: list[int | None] = [None] * k.d
    for j, ref in enumerate(sys.var_index):
        b = ((x >> j) & 1) ^ (ref.sign == -1)
        if bits[ref.edge] is None:
            bits[ref.edge] = b
        elif bits[ref.edge] != b:
            raise Incoherent(f"slots of edge {ref.edge} disagree on its direction")
    for i, e in enumerate(sys.free_edges):
        bits[e] = (free >> i) & 1
    return Orientation(tuple(int(b) for b in bits))


def edge_system(k: PuncturedComplex) -> tuple[Gf2Matrix, int]:
    """Face parity conditions written directly over the edge bits.

    A face's good-slot count has the parity of the flipped edges it meets an
    odd number of times plus its reverse-traversed slots.
    """
    rows = []
    rhs = 0
    for i, f in enumerate(k.faces):
        row = 0
        reversed_slots = 0
        for s in k.base.faces[f].boundary:
            row ^= 1 << s.edge
            reversed_slots += s.sign == -1
        rows.append(row)
        if (reversed_slots & 1) == 0:
            rhs |= 1 << i
    return Gf2Matrix(len(rows), k.d, tuple(rows)), rhs


def count_pfaffian(k: PuncturedComplex) -> int:
    """Number of Pfaffian orientations, ``2 ** (v - 1 + 2g)``, with its bookkeeping checked."""
    sys = build_system(k)
    nullity = system_nullity(sys, k)
    _, genus = euler_and_genus(k.base)
    if nullity != k.base.v - 1 + 2 * genus:
        raise FormulaMismatch(f"{k.name}: nullity {nullity} != v - 1 + 2g = {k.base.v - 1 + 2 * genus}")
    try:
        solve_affine(sys.matrix, sys.rhs)
    except Inconsistent as exc:
        raise FormulaMismatch(f"{k.name}: parity system has no solution") from exc
    matrix, rhs = edge_system(k)
    if k.d - rank_gf2(matrix) != nullity:
        raise FormulaMismatch(f"{k.name}: edge-level and slot-level nullities differ")
    return 2**nullity


class OrientationStream:
    """Iterable over Pfaffian orientations, at most ``limit`` of them.

    ``total`` is the size of the full solution set and ``truncated`` tells
    whether the limit cut it short.  Orientations come in increasing order of
    the coefficient vector over the slot nullspace basis, then free edges.
    """

    def __init__(self, k: PuncturedComplex, limit: int | None = None):
        self.k = k
        self.system = build_system(k)
        self.solution: Solution = solve_affine(self.system.matrix, self.system.rhs)
        self.dimension = self.solution.dimension + len(self.system.free_edges)
        self.total = 2**self.dimension
        if limit is None and self.total > UNLIMITED_ENUMERATION:
            raise TooLarge(f"{self.total} orientations; pass an explicit limit")
        self.limit = self.total if limit is None else min(limit, self.total)

    @property
    def truncated(self) -> bool:
        return self.limit < self.total

    def __len__(self) -> int:
        return self.limit

    def __iter__(self) -> Iterator[Orientation]:
        inner = self.solution.dimension
        for c in range(self.limit):
            x = self.solution.combine(c & ((1 << inner) - 1))
            yield decode(self.k, x, self.system, free=c >> inner)


def enumerate_orientations(k: PuncturedComplex, limit: int | None = None) -> OrientationStream:
    return OrientationStream(k, limit)


def brute_force_count(k: PuncturedComplex, cap: int = BRUTE_FORCE_CAP, chunk: int = 1 << 20) -> int:
    """Count Pfaffian orientations by sweeping all ``2 ** d`` edge bit patterns.

    Works on orientation bits only and evaluates the good-slot parity of
    every face; it never touches the linear system.
    """
    if k.d > cap:
        raise TooLarge(f"{k.d} edges exceeds the brute-force cap of {cap}")
    faces = [
        [(s.edge, int(s.sign == -1)) for s in k.base.faces[f].boundary] for f in k.faces
    ]
    total = 0
    space = 1 << k.d
    for start in range(0, space, chunk):
        o = np.arange(start, min(start + chunk, space), dtype=np.uint32)
        ok = np.ones(o.shape, dtype=bool)
        for slots in faces:
            good = np.zeros(o.shape, dtype=np.uint8)
            for edge, reversed_slot in slots:
                good += ((o >> edge) & 1).astype(np.uint8) ^ reversed_slot
            ok &= (good & 1).astype(bool)
        total += int(ok.sum())
    return total


def brute_force_set(k: PuncturedComplex, cap: int = 20) -> set[Orientation]:
    """All Pfaffian orientations found by exhaustive sweep (small complexes only)."""
    if k.d > cap:
        raise TooLarge(f"{k.d} edges exceeds the cap of {cap}")
    found = set()
    for mask in range(1 << k.d):
        o = Orientation.from_mask(mask, k.d)
        if is_pfaffian(k, o):
            found.add(o)
    return found
