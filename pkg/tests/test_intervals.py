import math
from fractions import Fraction

import pytest

from l1cert import InputError
from l1cert.intervals import e_interval, ln2_interval, ln_interval

F = Fraction


class TestEnclosures:
    def test_e_bracketed(self):
        lo, hi = e_interval()
        assert lo < hi
        assert float(lo) <= math.e <= float(hi)
        assert hi - lo < F(1, 10**15)

    def test_ln2_bracketed(self):
        lo, hi = ln2_interval()
        assert float(lo) <= math.log(2) <= float(hi)
        assert hi - lo < F(1, 10**15)

    @pytest.mark.parametrize(
        "x",
        [F(1), F(2), F(1, 2), F(2, 3), F(4, 3), F(1, 1024), F(999, 7), F(1, 10**6), F(10**8)],
    )
    def test_ln_bracketed_everywhere(self, x):
        lo, hi = ln_interval(x)
        assert lo <= hi
        val = math.log(x)
        assert float(lo) - 1e-15 <= val <= float(hi) + 1e-15
        assert hi - lo < F(1, 10**12)

    def test_ln_of_one_is_tight(self):
        lo, hi = ln_interval(F(1))
        assert lo <= 0 <= hi
        assert hi - lo < F(1, 10**12)

    def test_directed_rounding_orders_correctly(self):
        # monotone inputs give monotone certified bounds
        lo1, hi1 = ln_interval(F(3, 2))
        lo2, hi2 = ln_interval(F(5, 2))
        assert hi1 < lo2

    def test_nonpositive_rejected(self):
        with pytest.raises(InputError):
            ln_interval(F(0))
        with pytest.raises(InputError):
            ln_interval(F(-3))
