import pytest
from fractions import Fraction as Q

from twistblocks.errors import ValidationError
from twistblocks.verlinde import FusionRing, verlinde_untwisted


def test_sl2_fusion_closed_form():
    # N_{ab}^c = 1 iff |a-b| <= c <= min(a+b, 2k-a-b) and a+b+c even
    for k in (1, 2, 3, 4):
        ring = FusionRing("A", 1, k)
        for a in range(k + 1):
            for b in range(k + 1):
                for c in range(k + 1):
                    got = ring.three_point((Q(a),), (Q(b),), (Q(c),))
                    ok = (abs(a - b) <= c <= min(a + b, 2 * k - a - b)
                          and (a + b + c) % 2 == 0)
                    assert got == (1 if ok else 0), (k, a, b, c)


def test_genus_zero_values():
    assert verlinde_untwisted("A", 1, 1, 0, [(1,), (1,), (0,)]) == 1
    assert verlinde_untwisted("A", 1, 1, 0, [(1,), (1,), (1,)]) == 0
    assert verlinde_untwisted("A", 1, 3, 0, [(0,), (0,), (0,)]) == 1
    assert verlinde_untwisted("A", 2, 1, 0, [(1, 0), (0, 1), (0, 0)]) == 1
    assert verlinde_untwisted("A", 2, 1, 0, [(1, 0), (1, 0), (1, 0)]) == 1
    # two-point blocks pair dual weights
    assert verlinde_untwisted("A", 2, 2, 0, [(1, 0), (0, 1)]) == 1
    assert verlinde_untwisted("A", 2, 2, 0, [(1, 0), (1, 0)]) == 0


def test_genus_one_counts():
    # vacuumless torus blocks count the level weights
    for c in (1, 2, 3):
        assert verlinde_untwisted("A", 1, c, 1, [(0,)]) == c + 1
    assert verlinde_untwisted("A", 2, 1, 1, [(0, 0)]) == 3
    assert verlinde_untwisted("A", 2, 2, 1, [(0, 0)]) == 6


def test_sl2_higher_genus_closed_form():
    # level 1: 2^g blocks with vacuum insertions (Z/2 simple currents)
    for g in (1, 2, 3):
        assert verlinde_untwisted("A", 1, 1, g, [(0,)]) == 2 ** g


def test_triality_obstruction():
    # sl3 blocks vanish unless the total triality is divisible by 3
    assert verlinde_untwisted("A", 2, 2, 0, [(1, 0), (1, 0), (0, 0)]) == 0
    assert verlinde_untwisted("A", 2, 2, 1, [(1, 0)]) == 0
    assert verlinde_untwisted("A", 2, 2, 0, [(1, 0), (1, 0), (1, 0)]) == 1


def test_weight_validation():
    with pytest.raises(ValidationError):
        verlinde_untwisted("A", 1, 1, 0, [(2,), (0,), (0,)])
    with pytest.raises(ValidationError):
        verlinde_untwisted("A", 1, 1, 0, [(Q(1, 2),), (0,), (0,)])
    with pytest.raises(ValidationError):
        FusionRing("A", 1, 0)
