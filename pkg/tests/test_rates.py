import pytest

from linproc.rates import RatePair, e2e_rate, sum_rate


def test_sum_rate():
    assert sum_rate([1.0, 3.0]) == pytest.approx(3.0)
    assert sum_rate([]) == 0.0
    with pytest.raises(ValueError):
        sum_rate([1.0, -0.5])


def test_e2e_rate_is_bottleneck_minus_overhead():
    assert e2e_rate(4.0, 6.0, 0, 200) == pytest.approx(4.0)
    assert e2e_rate(4.0, 6.0, 20, 200) == pytest.approx(3.6)
    assert e2e_rate(4.0, 6.0, 200, 200) == 0.0
    assert RatePair(5.0, 2.0).e2e(tau=1, coherence_slots=4) == pytest.approx(1.5)


@pytest.mark.parametrize("tau, slots", [(-1, 10), (11, 10), (0, 0)])
def test_e2e_rate_rejects_bad_overhead(tau, slots):
    with pytest.raises(ValueError):
        e2e_rate(1.0, 1.0, tau, slots)
