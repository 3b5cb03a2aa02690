from fractions import Fraction

import pytest

from effgen.basket import BasketPoint, w_resolve, xi
from effgen.instances import (ThresholdError, build_Fr, build_Xr, threefold_example_basket,
                              verify, xr_nef_threshold)
from effgen.toric import (curve_self_intersection, is_nef, is_smooth, numerically_equivalent)


def test_X2_self_intersections():
    X = build_Xr(2).surface
    assert curve_self_intersection(X, (1, 1)) == -2
    assert curve_self_intersection(X, (1, 2)) == -1
    assert is_smooth(X)


@pytest.mark.parametrize("r", [2, 3, 5])
def test_Xr_invariant_curve_classes(r):
    inst = build_Xr(r)
    X, h, G = inst.surface, inst.labels["h"], inst.labels["G"]
    total_first = X.zero()
    for i in range(1, r + 1):
        total_first = total_first + X.prime((1, i))
    assert numerically_equivalent(X.prime((-1, -1)), h)
    assert numerically_equivalent(X.prime((0, 1)), h - G * r)
    # strict transform of the line through the first centre: h minus the
    # total transform of the first exceptional curve
    assert numerically_equivalent(X.prime((1, 0)), h - total_first)
    assert len(X) == r + 3


@pytest.mark.parametrize("r", [2, 3, 5])
def test_Xr_threshold_is_exact(r):
    a = xr_nef_threshold(r)
    inst = build_Xr(r, a_nef=a)
    h, G = inst.labels["h"], inst.labels["G"]
    assert is_nef(h * a - G * (2 * r))
    assert not is_nef(h * (a - 1) - G * (2 * r))
    with pytest.raises(ThresholdError) as exc:
        build_Xr(r, a_nef=a - 1)
    assert exc.value.minimal == a
    assert str(a) in str(exc.value)


def test_Xr_rejects_small_r():
    with pytest.raises(ValueError):
        build_Xr(1)
    with pytest.raises(ValueError):
        build_Fr(2)


def test_Xr_expected_negative_part():
    inst = build_Xr(3)
    E = inst.expected["exceptional"]
    assert dict(E.items())[(1, 1)] == Fraction(2, 6)
    assert dict(E.items())[(1, 2)] == Fraction(1, 6)
    assert (1, 3) not in E.support


def test_Fr_data():
    inst = build_Fr(3)
    X = inst.surface
    assert curve_self_intersection(X, (0, 1)) == -3
    assert curve_self_intersection(X, (0, -1)) == 3
    assert inst.expected["fix"] == X.divisor({(0, 1): Fraction(2, 3)})
    assert inst.boundary_class == X.divisor({(0, 1): 1, (0, -1): 2})


@pytest.mark.parametrize("r", [2, 3, 5, 7])
def test_verify_Xr(r):
    rep = verify(build_Xr(r))
    assert rep.ok, rep.mismatches


@pytest.mark.parametrize("r", [3, 5, 7])
def test_verify_Fr(r):
    rep = verify(build_Fr(r))
    assert rep.ok, rep.mismatches


def test_verify_with_generation_check():
    rep = verify(build_Xr(3), generation=True)
    assert rep.ok
    assert any(name == "generation_degree" for name, _, _ in rep.checks)


def test_perturbed_expectation_is_reported():
    inst = build_Fr(5)
    X = inst.surface
    inst.expected["fix"] = X.divisor({(0, 1): Fraction(3, 5)})
    rep = verify(inst)
    assert not rep.ok
    assert any(m.startswith("zariski_negative") for m in rep.mismatches)


@pytest.mark.parametrize("r", [2, 3, 5, 7])
def test_threefold_example_basket(r):
    model = threefold_example_basket(r)
    assert model.points == (BasketPoint.cyclic(r),)
    assert xi(model) == r
    assert xi(model) <= 2 * w_resolve(model).length
