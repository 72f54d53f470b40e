import logging

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfmaps.toric import (
    PROJECTIVE_PLANE,
    DuplicateRayError,
    Fan,
    FanFileError,
    NotUnimodularError,
    RayNotPrimitiveError,
    TooFewRaysError,
    WindingError,
    blow_up,
    hirzebruch,
    load_fan,
    parse_fan_text,
    self_intersections,
    toric_verdict,
    validate_fan,
)
from selfmaps.verdicts import AllDegrees, FiniteCandidatePrimes, SquaresOnly


def test_plane_normalizes_and_has_unit_curves():
    fan = validate_fan(PROJECTIVE_PLANE)
    assert fan.rays == ((-1, -1), (1, 0), (0, 1))
    assert self_intersections(fan) == (1, 1, 1)


def test_hirzebruch_self_intersections():
    for n in range(6):
        fan = validate_fan(hirzebruch(n))
        assert sorted(self_intersections(fan)) == sorted([0, 0, n, -n])


def test_hirzebruch_rejects_negative_index():
    with pytest.raises(ValueError):
        hirzebruch(-1)


def test_clockwise_input_is_reversed(caplog):
    with caplog.at_level(logging.INFO, logger="selfmaps.toric"):
        fan = validate_fan(((0, 1), (1, 0), (-1, -1)))
    assert fan.rays == ((-1, -1), (1, 0), (0, 1))
    assert any("revers" in rec.message for rec in caplog.records)


def test_rotation_starts_at_smallest_ray():
    fan = validate_fan(((0, 1), (-1, 2), (-1, 1), (0, -1), (1, 0)))
    assert fan.rays[0] == min(fan.rays)
    assert set(fan.rays) == {(0, 1), (-1, 2), (-1, 1), (0, -1), (1, 0)}


def test_too_few_rays():
    with pytest.raises(TooFewRaysError):
        validate_fan(((1, 0), (0, 1)))


def test_non_primitive_ray():
    with pytest.raises(RayNotPrimitiveError):
        validate_fan(((2, 0), (0, 1), (-1, -1)))
    with pytest.raises(RayNotPrimitiveError):
        validate_fan(((0, 0), (0, 1), (-1, -1)))


def test_duplicate_ray():
    with pytest.raises(DuplicateRayError):
        validate_fan(((1, 0), (0, 1), (1, 0)))


def test_bad_determinant():
    with pytest.raises(NotUnimodularError):
        validate_fan(((1, 0), (1, 2), (-1, -1)))
    # mixed orientations are not fixable by reversal
    with pytest.raises(NotUnimodularError):
        validate_fan(((1, 0), (0, 1), (1, 1)))


def test_double_winding_rejected():
    # distinct primitive rays, every consecutive determinant +1, yet the
    # cycle wraps the origin twice: each step turns 135 degrees except the
    # last (45), totalling 720
    rays = ((1, 0), (-1, 1), (0, -1), (1, 1), (-1, 0), (1, -1))
    with pytest.raises(WindingError):
        validate_fan(rays)


def test_verdict_plane_squares_only():
    verdict = toric_verdict(validate_fan(PROJECTIVE_PLANE))
    assert isinstance(verdict, SquaresOnly)


def test_verdict_product_of_lines_all_degrees():
    verdict = toric_verdict(validate_fan(hirzebruch(0)))
    assert isinstance(verdict, AllDegrees)


def test_verdict_single_negative_squares_only():
    verdict = toric_verdict(validate_fan(hirzebruch(2)))
    assert isinstance(verdict, SquaresOnly)
    assert "-2" in verdict.reason


def test_verdict_two_negatives_candidates():
    fan = blow_up(validate_fan(hirzebruch(1)), 3)
    assert sorted(self_intersections(fan)) == [-2, -1, -1, 0, 1]
    verdict = toric_verdict(fan)
    assert isinstance(verdict, FiniteCandidatePrimes)
    assert verdict.candidates == frozenset({2})


def test_verdict_deeper_blowup_candidates():
    fan = validate_fan(((-1, -1), (1, 0), (1, 1), (2, 3), (1, 2), (0, 1)))
    assert self_intersections(fan) == (1, 0, -3, -1, -2, -1)
    verdict = toric_verdict(fan)
    assert isinstance(verdict, FiniteCandidatePrimes)
    assert verdict.candidates == frozenset({2, 3})


def test_blow_up_plane_gives_ruled_surface():
    fan = blow_up(validate_fan(PROJECTIVE_PLANE), 2)
    assert sorted(self_intersections(fan)) == [-1, 0, 0, 1]


def test_blow_up_index_range():
    fan = validate_fan(PROJECTIVE_PLANE)
    with pytest.raises(IndexError):
        blow_up(fan, 3)


@settings(max_examples=60, deadline=None)
@given(
    start=st.integers(min_value=0, max_value=4),
    corners=st.lists(st.integers(min_value=0, max_value=100), max_size=6),
)
def test_noether_sum_under_blow_ups(start, corners):
    fan = validate_fan(PROJECTIVE_PLANE if start == 0 else hirzebruch(start))
    for corner in corners:
        fan = blow_up(fan, corner % len(fan))
    selfs = self_intersections(fan)
    assert sum(selfs) == 12 - 3 * len(fan)


def test_wall_relation_guard_on_raw_fan():
    # bypassing validate_fan can break the wall relation; the guard fires
    broken = Fan(rays=((1, 0), (0, 1), (-1, -3)))
    with pytest.raises(ValueError):
        self_intersections(broken)


def test_parse_fan_text():
    text = "# plane\n1 0\n\n0 1\n-1 -1\n"
    assert parse_fan_text(text) == [(1, 0), (0, 1), (-1, -1)]


def test_parse_fan_text_errors():
    with pytest.raises(FanFileError):
        parse_fan_text("1 0 3\n")
    with pytest.raises(FanFileError):
        parse_fan_text("a b\n")
    with pytest.raises(FanFileError):
        parse_fan_text("# nothing here\n")


def test_load_fan(tmp_path):
    path = tmp_path / "fan.txt"
    path.write_text("1 0\n0 1\n-1 0\n0 -1\n")
    fan = load_fan(path)
    assert fan.rays == ((-1, 0), (0, -1), (1, 0), (0, 1))
