from __future__ import annotations

import random

import pytest

from selfmaps.cm_elliptic import EndoMatrix
from selfmaps.ns_lattice import (
    EndoOnNS,
    NSClass,
    atiyah_deg2_search,
    intersect,
    ramification_class,
    relative_canonical_class,
    square_degree_certificate,
    toric_prime_candidates,
)


def test_intersection_form_frozen():
    for e in (-3, 0, 1, 5):
        H = NSClass(1, 0, e)
        F = NSClass(0, 1, e)
        assert intersect(H, H) == e
        assert intersect(H, F) == 1
        assert intersect(F, F) == 0
    assert intersect(NSClass(2, 3, 1), NSClass(1, -1, 1)) == 3


def test_intersect_symmetric():
    rng = random.Random(1)
    for _ in range(200):
        e = rng.randint(-10, 10)
        c1 = NSClass(rng.randint(-9, 9), rng.randint(-9, 9), e)
        c2 = NSClass(rng.randint(-9, 9), rng.randint(-9, 9), e)
        assert intersect(c1, c2) == intersect(c2, c1)


def test_mismatched_surfaces_rejected():
    with pytest.raises(ValueError):
        intersect(NSClass(1, 0, 1), NSClass(1, 0, 2))
    with pytest.raises(ValueError):
        NSClass(1, 0, 1) + NSClass(1, 0, 0)


def test_relative_canonical_square_vanishes():
    # K.K is linear in e; vanishing on two values proves the identity,
    # the wider grid is free
    for e in range(-50, 51):
        k = relative_canonical_class(e)
        assert intersect(k, k) == 0
        # adjunction data that pinned the class
        assert intersect(k, NSClass(0, 1, e)) == -2
        assert intersect(k, NSClass(1, 0, e)) == -e
        assert intersect(k, NSClass(1, -e, e)) == e


def test_other_section_self_intersection():
    for e in range(-20, 21):
        other = NSClass(1, -e, e)
        assert intersect(other, other) == -e


def test_ramification_class_values_and_isotropy():
    # e = 0: conventions cannot disagree
    rec = ramification_class(2, 0)
    assert (rec.ns_class.h, rec.ns_class.f) == (2, 0)
    assert rec.r2_zero
    rec = ramification_class(3, 1)
    assert (rec.ns_class.h, rec.ns_class.f) == (4, -2)
    assert intersect(rec.ns_class, rec.ns_class) == 0
    # R.R is polynomial of degree 2 in d and 1 in e; a 3 x 2 grid of
    # vanishing points forces the zero polynomial, the loop is larger
    for degree in range(2, 21):
        for e in range(-50, 51):
            assert ramification_class(degree, e).r2_zero


def test_ramification_rejects_degree_one():
    with pytest.raises(ValueError):
        ramification_class(1, 3)


def test_from_degrees_frozen():
    endo = EndoOnNS.from_degrees(4, 2, 1)
    assert endo.pullback == EndoMatrix(2, 0, 1, 4)
    assert endo.degree == 8
    assert endo.pushforward() == EndoMatrix(4, 0, -1, 2)
    equal = EndoOnNS.from_degrees(3, 3, 7)
    assert equal.pullback == EndoMatrix(3, 0, 0, 3)


def test_from_degrees_parity_rejection():
    with pytest.raises(ValueError):
        EndoOnNS.from_degrees(2, 1, 1)
    with pytest.raises(ValueError):
        EndoOnNS.from_degrees(1, 2, 3)
    # even product is fine
    EndoOnNS.from_degrees(2, 1, 2)
    EndoOnNS.from_degrees(3, 1, 5)


def test_construction_validation():
    with pytest.raises(ValueError):
        EndoOnNS(pullback=EndoMatrix(3, 0, 0, 1), degree=2, e=0)  # det != degree
    with pytest.raises(ValueError):
        EndoOnNS(pullback=EndoMatrix(2, 1, 0, 2), degree=4, e=0)  # moves fiber off itself
    with pytest.raises(ValueError):
        EndoOnNS(pullback=EndoMatrix(2, 0, 0, -2), degree=-4, e=0)


def test_push_pull_identity_random_triples():
    rng = random.Random(42)
    checked = 0
    while checked < 300:
        base = rng.randint(1, 30)
        fiber = rng.randint(1, 30)
        e = rng.randint(-10, 10)
        if (e * (base - fiber)) % 2 != 0:
            continue
        endo = EndoOnNS.from_degrees(base, fiber, e)
        composed = endo.pushforward() * endo.pullback
        assert composed == EndoMatrix(endo.degree, 0, 0, endo.degree)
        # and on sampled classes
        c = NSClass(rng.randint(-5, 5), rng.randint(-5, 5), e)
        back = endo.pushforward_class(endo.pullback_class(c))
        assert back == endo.degree * c
        checked += 1


def test_pullback_scales_intersections():
    rng = random.Random(7)
    for _ in range(200):
        base = rng.randint(1, 20)
        fiber = rng.randint(1, 20)
        e = rng.choice(range(-8, 9, 2)) if (base - fiber) % 2 else rng.randint(-8, 8)
        endo = EndoOnNS.from_degrees(base, fiber, e)
        c1 = NSClass(rng.randint(-5, 5), rng.randint(-5, 5), e)
        c2 = NSClass(rng.randint(-5, 5), rng.randint(-5, 5), e)
        lhs = intersect(endo.pullback_class(c1), endo.pullback_class(c2))
        assert lhs == endo.degree * intersect(c1, c2)


def test_pullback_class_surface_check():
    endo = EndoOnNS.from_degrees(2, 2, 3)
    with pytest.raises(ValueError):
        endo.pullback_class(NSClass(1, 0, 4))


def test_square_degree_certificate():
    cert = square_degree_certificate(-1)
    assert cert.a1_equals_a2 and cert.degree_is_square
    assert cert.c_squared == -1 and cert.pairs_bound == 100
    assert square_degree_certificate(-7, pairs_bound=50).a1_equals_a2
    with pytest.raises(ValueError):
        square_degree_certificate(0)
    with pytest.raises(ValueError):
        square_degree_certificate(2)


def test_atiyah_deg2_search_empty_with_parity_reason():
    assert atiyah_deg2_search() == ()
    assert atiyah_deg2_search(bound=500) == ()
    # the two parity classes that make the emptiness a proof
    for b in range(-100, 101):
        assert (1 + 2 * b) % 2 == 1
        assert (4 + 4 * b) % 4 == 0
    with pytest.raises(ValueError):
        atiyah_deg2_search(0)


def test_toric_prime_candidates():
    assert toric_prime_candidates([-1, -2, -1]) == frozenset({2})
    assert toric_prime_candidates([-4]) == frozenset()
    assert toric_prime_candidates([-2, -3, -5, -9]) == frozenset({2, 3, 5})
    with pytest.raises(ValueError):
        toric_prime_candidates([])
    with pytest.raises(ValueError):
        toric_prime_candidates([-1, 2])
