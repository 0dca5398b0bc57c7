import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pfaffsurf.complex import all_punctures, euler_and_genus, puncture
from pfaffsurf.enumeration import (
    Orientation,
    brute_force_count,
    brute_force_set,
    count_pfaffian,
    decode,
    encode,
    enumerate_orientations,
    good_slots,
    is_pfaffian,
)
from pfaffsurf.errors import Incoherent, LengthMismatch, TooLarge
from pfaffsurf.generators import fixture, random_sphere, random_torus, torus_grid
from pfaffsurf.incidence import build_system
from pfaffsurf.matching import construct_orientation

from helpers import punctured

BRUTE_COUNTS = {
    "tetrahedron": 8,
    "cube": 128,
    "prism_3": 32,
    "torus_grid_2x2": 32,
    "one_face_torus": 4,
    "genus_2_polygon": 16,
}


def test_vacuous_when_no_faces_survive():
    k = punctured("one_face_torus")
    for mask in range(4):
        assert is_pfaffian(k, Orientation.from_mask(mask, 2))


def test_flipping_one_edge_toggles_its_faces():
    k = punctured("tetrahedron", 3)
    o = construct_orientation(k)
    flipped = Orientation(tuple(b ^ (i == 0) for i, b in enumerate(o.bits)))
    for f in k.faces:
        changed = good_slots(k, o, f) % 2 != good_slots(k, flipped, f) % 2
        assert changed == (0 in k.base.face_edges(f))


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        is_pfaffian(punctured("tetrahedron"), Orientation((0, 1)))


def test_orientation_json_round_trip():
    o = Orientation((1, 0, 1))
    data = o.to_dict("x")
    assert data == {"complex": "x", "bits": [1, 0, 1]}
    assert Orientation.from_json(json.dumps(data)) == o
    with pytest.raises(ValueError):
        Orientation.from_dict({"bits": [2]})


def test_encode_decode_round_trip(rng):
    k = punctured("cube", 1)
    sys = build_system(k)
    for _ in range(50):
        o = Orientation.from_mask(rng.getrandbits(k.d), k.d)
        assert decode(k, encode(k, o, sys), sys) == o


def test_decode_rejects_disagreeing_slots():
    k = punctured("tetrahedron")
    sys = build_system(k)
    x = encode(k, Orientation.reference(k.d), sys)
    internal = next(iter(k.internal_edges))
    j = next(i for i, ref in enumerate(sys.var_index) if ref.edge == internal)
    with pytest.raises(Incoherent):
        decode(k, x ^ (1 << j), sys)


@pytest.mark.parametrize("name,expected", sorted(BRUTE_COUNTS.items()))
def test_brute_force_counts(name, expected):
    assert brute_force_count(punctured(name)) == expected


@pytest.mark.parametrize("name", sorted(BRUTE_COUNTS) + ["torus_grid_3x3", "labelled_torus"])
def test_count_matches_closed_form(name):
    c = fixture(name)
    _, g = euler_and_genus(c)
    for k in all_punctures(c):
        assert count_pfaffian(k) == 2 ** (c.v - 1 + 2 * g)


def test_labelled_torus_count_against_brute_force():
    k = puncture(fixture("labelled_torus"), 8)
    assert count_pfaffian(k) == brute_force_count(k) == 1024


def test_brute_force_cap():
    with pytest.raises(TooLarge):
        brute_force_count(punctured("cube"), cap=10)


def test_enumeration_limit():
    stream = enumerate_orientations(punctured("labelled_torus", 8), limit=3)
    items = list(stream)
    assert len(items) == len(stream) == 3
    assert stream.total == 1024 and stream.truncated
    assert len(set(items)) == 3


def test_enumeration_refuses_huge_sets_without_limit():
    k = puncture(torus_grid(5, 5), 0)
    assert count_pfaffian(k) == 2**26
    with pytest.raises(TooLarge):
        enumerate_orientations(k)
    assert len(enumerate_orientations(k, limit=5)) == 5


@pytest.mark.parametrize("name", ["tetrahedron", "prism_3", "torus_grid_2x2", "one_face_torus", "genus_2_polygon", "cube"])
def test_enumeration_equals_brute_force_set(name):
    k = punctured(name)
    emitted = list(enumerate_orientations(k))
    assert len(emitted) == len(set(emitted)) == count_pfaffian(k)
    assert set(emitted) == brute_force_set(k)


@pytest.mark.parametrize("name", ["tetrahedron", "prism_3", "torus_grid_2x2", "cube"])
def test_pfaffian_set_is_a_coset(name):
    k = punctured(name)
    masks = {o.mask for o in brute_force_set(k)}
    base = next(iter(masks))
    differences = {m ^ base for m in masks}
    for a in differences:
        for b in differences:
            assert a ^ b in differences
    assert all(a ^ b ^ c in masks for a in masks for b in list(masks)[:8] for c in list(masks)[:8])


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_random_sphere_counts(seed):
    c = random_sphere(random.Random(seed), 18)
    k = puncture(c, 0)
    assert brute_force_count(k) == count_pfaffian(k) == 2 ** (c.v - 1)


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_random_torus_counts(seed):
    c = random_torus(random.Random(seed), 18)
    k = puncture(c, c.p - 1)
    assert brute_force_count(k) == count_pfaffian(k) == 2 ** (c.v + 1)
