import pytest

from bfree.bset import (BSetSpec, InsufficientHorizon, OdometerVec, SpecError, eta_segment,
                        eta_window, is_primitive, is_taut_truncation, phi_code)
from bfree.oracle import naive_eta
from bfree.specfile import bundled_names, load_spec


def test_eta_segment_b1():
    spec = BSetSpec.build("b1", c=(3, 5, 7, 11))
    assert eta_window(spec, 0, 7).text() == "01111101"


def test_eta_explicit_empty():
    spec = BSetSpec.build("explicit", elements=())
    assert eta_segment(spec, 0, 3).text() == "1111"


def test_eta_b2_single_bit():
    assert eta_window(BSetSpec.build("b2", c=(5, 7, 11)), 10, 10).text() == "0"


def test_eta_against_naive():
    spec = load_spec("b2")
    w = eta_window(spec, -300, 300)
    wide = spec.covering(300)
    assert w.text() == naive_eta(wide.realized(), -300, 300)


def test_insufficient_horizon():
    spec = BSetSpec.build("b1", c=(3, 5, 7), horizon=2)
    with pytest.raises(InsufficientHorizon):
        eta_segment(spec, 0, 1000)


def test_primitive_and_taut():
    assert is_primitive(BSetSpec.build("b1", c=(3, 5, 7), horizon=3)).ok
    bad = is_primitive(BSetSpec(family="explicit", elements=(6, 12), extend="none"))
    assert not bad.ok and bad.witness == (6, 12)
    assert is_primitive(BSetSpec.build("explicit", elements=(9, 6))).ok
    assert is_taut_truncation((6, 20, 56)).ok
    t = is_taut_truncation((2, 3, 6))
    assert not t.ok and t.witness == 6
    assert is_taut_truncation((2,)).ok


def test_phi_code_delta():
    spec = BSetSpec.build("b1", c=(3, 5, 7, 11))
    assert phi_code(spec.covering(10), OdometerVec.delta(0), 0, 7).bits == eta_window(spec, 0, 7).bits
    assert phi_code(spec.covering(10), OdometerVec.delta(3), 0, 4).bits == eta_window(spec, 3, 7).bits


def test_phi_code_override_bit_at_3():
    # 3 lies in 9Z - 6, so the coordinate y_9 = 6 forces bit 0 at s = 3.
    spec = load_spec("b1n").covering(40)
    w = phi_code(spec, OdometerVec.from_dict({9: 6}), 0, 5)
    assert w.text()[3] == "0"


def test_spec_validation():
    with pytest.raises(SpecError):
        BSetSpec.build("explicit", elements=(6, 12))
    with pytest.raises(SpecError):
        BSetSpec.build("b1", c=(3, 9))
    with pytest.raises(SpecError):
        BSetSpec.build("nonsense", c=(3,))


def test_bundled_specs_load():
    names = bundled_names()
    assert {"b1", "b1n", "b2", "gh", "not-all-holes", "two-filtrations"} <= set(names)
    for name in names:
        assert load_spec(name) is not None


def test_example_path_falls_back_to_bundled():
    assert load_spec("examples/b1.toml") == load_spec("b1")
