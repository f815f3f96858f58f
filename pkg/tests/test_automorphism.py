import numpy as np
import pytest

from bfree.automorphism import (FEll, PhasedWindow, PreconditionError, ShiftPower, apply_block_map,
                                verify_commutation, verify_order, verify_rotation,
                                verify_window_shift, window_shift_z)
from bfree.bset import OdometerVec, SpecError, eta_window
from bfree.specfile import load_spec


@pytest.fixture(scope="module")
def b1n():
    return load_spec("b1n")


def test_fell_parameters(b1n):
    F = FEll(b1n, 1)
    assert (F.c, F.p, F.q) == (3, 18, 6)
    with pytest.raises(SpecError):
        FEll(b1n, 2)  # needs l < N
    with pytest.raises(SpecError):
        FEll(load_spec("b1"), 1)


def test_apply_block_map_values(b1n):
    F = FEll(b1n, 1)
    eta = eta_window(b1n, 0, 13)
    out = apply_block_map(F, PhasedWindow.of(eta, 0, F.p))
    bits = out.bits.tolist()
    assert bits[0] == eta.at(6) == 0  # s = 0 lies in 3Z, read x_{s+6}
    assert bits[1] == eta.at(1) == 1
    assert bits[3] == eta.at(9) == 0  # 9 = 2^0 c_1^2 is a generator
    assert len(bits) == 14 - F.q


def test_shift_power():
    w = PhasedWindow(0, np.array([0, 1, 1, 0, 1], dtype=np.uint8), 0, 6)
    s = apply_block_map(ShiftPower(2), w)
    assert s.start == -2 and s.phase == 2
    assert s.segment(-2, 2).tolist() == w.bits.tolist()


def test_commutation(b1n):
    assert verify_commutation(FEll(b1n, 1), b1n, range(-20, 21), 200).ok
    assert verify_commutation(ShiftPower(3), b1n, range(-5, 6), 100).ok


def test_phase_blind_mutation_fails_commutation(b1n):
    v = verify_commutation(FEll(b1n, 1, phase_blind=True), b1n, range(-20, 21), 200)
    assert not v.ok and v.witness is not None


def test_q_plus_one_mutation_caught_by_order(b1n):
    bad = FEll(b1n, 1, q=7)
    assert not verify_order(bad, b1n, 3).ok


def test_order(b1n):
    F = FEll(b1n, 1)
    assert verify_order(F, b1n, 3).ok
    assert not verify_order(F, b1n, 1).ok
    v2 = verify_order(F, b1n, 2)
    assert not v2.ok and v2.status == "refuted"


def test_order_b1_three():
    spec = load_spec("b1n").__class__.build("b1n", c=(3, 5, 7), N=3)
    assert verify_order(FEll(spec, 2), spec, 5).ok


def test_rotation(b1n):
    F = FEll(b1n, 1)
    assert verify_rotation(F, b1n, 50).ok
    assert not verify_rotation(F, b1n, 50, OdometerVec.from_dict({9: 3})).ok


def test_window_shift(b1n):
    F = FEll(b1n, 1)
    v = verify_window_shift(F, b1n, 7, 3)
    assert v.ok and v.details["z"] == 1680
    v = verify_window_shift(F, b1n, 1, 1)
    assert v.ok and v.details["z"] == 6 == window_shift_z(b1n, F, 1)
    with pytest.raises(PreconditionError):
        verify_window_shift(F, b1n, 8, 3)
