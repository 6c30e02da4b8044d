import math

import pytest
from hypothesis import given, settings, strategies as st

from seidelkit.kkt_opt import (
    LinearPremiseError,
    MaxPremiseError,
    PremiseError,
    ProductPremiseError,
    WeightPremiseError,
    bennett_check,
    check_premises,
    sample_bennett_premises,
)


def test_examples():
    assert bennett_check(1, 3, 1, 3, 9, 1, 9, 1, p_grid=[0, 0.3, 1])
    assert bennett_check(1, 1, 1, 1, 2, 2, 3, 1, p_grid=[0, 0.25, 0.5, 0.75, 1])
    with pytest.raises(LinearPremiseError):
        bennett_check(1, 1, 1, 1, 4, 2, 3, 1)


@pytest.mark.parametrize("args,exc", [
    ((1, 1, 1, 2, 2, 2, 3, 1), WeightPremiseError),
    ((1, 1, 1, 1, 4, 0, 3, 1), PremiseError),
    ((1, 1, 1, 1, 3.5, 0.5, 3, 1), MaxPremiseError),
    ((3, 1, 1, 3, 3, 2.7, 3, 2.9), ProductPremiseError),
])
def test_premise_errors(args, exc):
    with pytest.raises(exc):
        check_premises(*args)


def test_p_outside_unit_interval():
    with pytest.raises(ValueError):
        bennett_check(1, 1, 1, 1, 2, 2, 3, 1, p_grid=[1.5])


def test_sampler_is_deterministic():
    assert sample_bennett_premises(42) == sample_bennett_premises(42)
    assert sample_bennett_premises(42) != sample_bennett_premises(43)


@given(st.integers(0, 2 ** 32))
@settings(max_examples=300)
def test_sampled_tuples_satisfy_premises_and_claim(seed):
    t = sample_bennett_premises(seed)
    check_premises(*t)
    assert bennett_check(*t)


def test_endpoints_hold_with_equality():
    t = sample_bennett_premises(5)
    # p = 0 compares total weights, p = 1 the weighted sums
    assert t.al + t.be == pytest.approx(t.nu + t.om)
    assert t.al * t.a + t.be * t.b == pytest.approx(t.nu * t.c + t.om * t.d)
    assert math.isfinite(t.a) and t.b > 0
