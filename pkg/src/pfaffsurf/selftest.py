"""Invariant suite over builtin fixtures and seeded random cellulations."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable

from .complex import CellComplex, PuncturedComplex, all_punctures, euler_and_genus, puncture, validate
from .enumeration import (
    Orientation,
    brute_force_count,
    brute_force_set,
    count_pfaffian,
    decode,
    encode,
    enumerate_orientations,
    is_pfaffian,
)
from .generators import FIXTURE_NAMES, fixture, random_sphere, random_torus
from .gf2 import det_int, rank_gf2, rank_rational
from .incidence import build_system, incidence_matrix, reduce_system, system_nullity
from .matching import (
    build_match_graph,
    construct,
    enumerate_matchings,
    find_acyclic_matching,
    involution,
    is_acyclic,
    matching_sign,
    select_row_basis,
)
from .oracles import ryser_permanent


@dataclass(frozen=True)
class CheckResult:
    key: str
    passed: bool
    cases: int
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = f"  {self.detail}" if self.detail else ""
        return f"{status}  {self.key:<22} cases={self.cases}{tail}"


def random_spheres(seed: int, count: int, max_edges: int = 18) -> list[CellComplex]:
    rng = random.Random(seed)
    return [random_sphere(rng, max_edges) for _ in range(count)]


def random_mixed(seed: int, count: int, max_edges: int = 24) -> list[CellComplex]:
    rng = random.Random(seed)
    return [(random_sphere if i % 2 == 0 else random_torus)(rng, max_edges) for i in range(count)]


def fixtures() -> list[CellComplex]:
    return [fixture(name) for name in FIXTURE_NAMES]


def _run(key: str, cases: Iterable, check: Callable[..., str | None]) -> CheckResult:
    """Apply ``check`` to every case; a returned string is a failure description."""
    n = 0
    for case in cases:
        n += 1
        try:
            problem = check(case)
        except Exception as exc:  # reported, not raised: the table must complete
            problem = f"{type(exc).__name__}: {exc}"
        if problem:
            return CheckResult(key, False, n, problem)
    return CheckResult(key, True, n)


def _first_punctures(complexes: Iterable[CellComplex]) -> Iterable[PuncturedComplex]:
    return (puncture(c, 0) for c in complexes)


def check_valid(c: CellComplex) -> str | None:
    report = validate(c)
    return None if report.ok else f"{c.name}: {sorted(report.codes())}"


def check_count_formula(k: PuncturedComplex) -> str | None:
    _, g = euler_and_genus(k.base)
    expected = 2 ** (k.base.v - 1 + 2 * g)
    got, brute = count_pfaffian(k), brute_force_count(k)
    if not got == brute == expected:
        return f"{k.name}: count={got} brute={brute} formula={expected}"
    return None


def check_sphere_count(c: CellComplex) -> str | None:
    k = puncture(c, 0)
    brute = brute_force_count(k)
    if brute != 2 ** (c.v - 1):
        return f"{c.name} v={c.v} d={c.d}: brute={brute}"
    return None


def check_puncture_invariance(c: CellComplex) -> str | None:
    counts = {count_pfaffian(k) for k in all_punctures(c)}
    return None if len(counts) == 1 else f"{c.name}: counts {sorted(counts)}"


def check_punctured_rank(c: CellComplex) -> str | None:
    for k in all_punctures(c):
        inc = incidence_matrix(k)
        target = len(k.faces)
        if rank_gf2(inc.mod2()) != target or rank_rational(inc.entries) != target:
            return f"{k.name}: rank differs from {target}"
        if det_int(inc.rows_for(select_row_basis(k))) == 0:
            return f"{k.name}: pivot submatrix is singular"
    return None


def check_reduction(c: CellComplex) -> str | None:
    for k in all_punctures(c):
        sys = build_system(k)
        red = reduce_system(sys, k)
        nullity = system_nullity(sys, k)
        if red.nullity_after + len(sys.free_edges) != nullity or nullity != k.d - k.p + 1:
            return f"{k.name}: nullity {nullity}"
    return None


def _sign_data(k: PuncturedComplex):
    r = select_row_basis(k)
    g = build_match_graph(k, r)
    return r, g, enumerate_matchings(g)


def check_sign_sum(k: PuncturedComplex) -> str | None:
    r, g, matchings = _sign_data(k)
    biadjacency = [[int((f, e) in g.arcs) for f in g.faces] for e in g.r_edges]
    if len(matchings) != ryser_permanent(biadjacency):
        return f"{k.name}: {len(matchings)} matchings vs permanent"
    total = sum(matching_sign(m, k) for m in matchings)
    det = det_int(incidence_matrix(k).rows_for(r))
    if total != det or det == 0:
        return f"{k.name}: sign sum {total}, det {det}"
    return None


def random_edge_sets(k: PuncturedComplex, rng: random.Random, count: int) -> list[list[int]]:
    """Seeded sets of ``p - 1`` edges, not necessarily a row basis.

    Edges that a single face visits twice are left out, since their
    incidence number is 0.
    """
    usable = [e for e, refs in k.base.edge_slots.items() if len({r.face for r in refs}) == 2]
    size = len(k.faces)
    if len(usable) < size:
        return []
    return [sorted(rng.sample(usable, size)) for _ in range(count)]


def check_involution(case: tuple[PuncturedComplex, list[int]]) -> str | None:
    """Involution on cyclic matchings for the edge set ``r``, plus the sign identities."""
    k, r = case
    g = build_match_graph(k, r)
    matchings = enumerate_matchings(g)
    cyclic = [m for m in matchings if not is_acyclic(g, m)]
    for m in cyclic:
        partner = involution(g, m)
        if partner == m or involution(g, partner) != m:
            return f"{k.name} R={r}: not a fixed-point-free involution"
        if is_acyclic(g, partner) or matching_sign(partner, k) != -matching_sign(m, k):
            return f"{k.name} R={r}: partner is acyclic or has the same sign"
    det = det_int(incidence_matrix(k).rows_for(r))
    if sum(matching_sign(m, k) for m in cyclic) != 0:
        return f"{k.name} R={r}: cyclic signs do not cancel"
    if sum(matching_sign(m, k) for m in matchings if m not in cyclic) != det:
        return f"{k.name} R={r}: acyclic sign sum differs from det {det}"
    return None


def involution_cases(complexes: Iterable[CellComplex], seed: int) -> list[tuple[PuncturedComplex, list[int]]]:
    rng = random.Random(seed)
    cases = []
    for c in complexes:
        k = puncture(c, 0)
        cases.append((k, select_row_basis(k)))
        cases += [(k, r) for r in random_edge_sets(k, rng, 30)]
    return cases


def count_cyclic(cases: list[tuple[PuncturedComplex, list[int]]]) -> int:
    total = 0
    for k, r in cases:
        g = build_match_graph(k, r)
        total += sum(not is_acyclic(g, m) for m in enumerate_matchings(g))
    return total


def check_acyclic(k: PuncturedComplex) -> str | None:
    g = build_match_graph(k, select_row_basis(k))
    return None if is_acyclic(g, find_acyclic_matching(g)) else f"{k.name}: peeled matching has a cycle"


def check_construction(c: CellComplex) -> str | None:
    for k in all_punctures(c):
        if not is_pfaffian(k, Orientation(construct(k).bits)):
            return f"{k.name}: constructed orientation is not Pfaffian"
    return None


def check_bijection(k: PuncturedComplex) -> str | None:
    stream = enumerate_orientations(k)
    emitted = list(stream)
    if len(set(emitted)) != len(emitted) or set(emitted) != brute_force_set(k):
        return f"{k.name}: enumerated set differs from brute force"
    sys = build_system(k)
    for o in emitted:
        if decode(k, encode(k, o, sys), sys, free=_free_bits(sys, o)) != o:
            return f"{k.name}: encode/decode round trip failed"
    return None


def _free_bits(sys, o: Orientation) -> int:
    return sum(o.bits[e] << i for i, e in enumerate(sys.free_edges))


def check_coset(k: PuncturedComplex) -> str | None:
    pf = sorted(brute_force_set(k, cap=12), key=lambda o: o.mask)
    masks = {o.mask for o in pf}
    for a in pf:
        for b in pf:
            for c in pf:
                if a.mask ^ b.mask ^ c.mask not in masks:
                    return f"{k.name}: XOR closure fails"
    return None


def _cyclic_check(complexes: list[CellComplex], seed: int) -> CheckResult:
    cases = involution_cases(complexes, seed)
    result = _run("cyclic-cancellation", cases, check_involution)
    cyclic = count_cyclic(cases)
    if result.passed and cyclic == 0:
        return CheckResult(result.key, False, result.cases, "no cyclic matchings exercised")
    return CheckResult(result.key, result.passed, result.cases, result.detail or f"cyclic matchings={cyclic}")


def system_shape_note() -> CheckResult:
    k = puncture(fixture("labelled_torus"), 8)
    sys = build_system(k)
    rows, cols = sys.shape
    edge_rows = rows - sys.face_rows
    ok = (rows, cols, edge_rows) == (22, 32, 14)
    detail = f"labelled_torus/f8 system {rows}x{cols}: {sys.face_rows} face rows + {edge_rows} edge rows"
    return CheckResult("system-shape", ok, 1, detail)


def run_selftest(seed: int = 7) -> list[CheckResult]:
    fx = fixtures()
    small = [c for c in fx if c.p <= 9]
    spheres = random_spheres(seed, 20)
    mixed = random_mixed(seed + 1, 50)
    return [
        _run("fixtures-valid", fx + spheres + mixed, check_valid),
        _run("punctured-rank", fx + mixed[:10], check_punctured_rank),
        _run("solution-bijection", [k for k in _first_punctures(fx) if k.d <= 14], check_bijection),
        _run("block-reduction", fx + mixed[:10], check_reduction),
        _run("matching-sign-sum", _first_punctures(small), check_sign_sum),
        _cyclic_check(small, seed),
        _run("acyclic-matching", _first_punctures(fx + mixed), check_acyclic),
        _run("construction", fx + mixed, check_construction),
        _run("count-formula", _first_punctures(fx), check_count_formula),
        _run("puncture-invariance", fx, check_puncture_invariance),
        _run("sphere-count", spheres, check_sphere_count),
        _run("coset-closure", [k for k in _first_punctures(fx) if k.d <= 12], check_coset),
        system_shape_note(),
    ]


def report(results: list[CheckResult], seed: int) -> str:
    lines = [f"selftest seed={seed}"]
    lines += [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines)
