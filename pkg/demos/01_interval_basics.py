"""
Outward-rounded intervals
=========================

Every operation returns an interval guaranteed to hold the exact result.
"""

from fractions import Fraction

from chebcert import CONST, Interval, matches_printed, working_precision
from chebcert.interval import to_fraction

# one third is not a double, so the enclosure has two distinct endpoints
third = Interval(1) / 3
print(third, to_fraction(third.lo) < Fraction(1, 3) < to_fraction(third.hi))

# decimal strings are taken literally, not via the nearest double
tenth = Interval("0.1")
print(tenth, tenth.is_point)

# transcendental functions and named constants
print((CONST.pi / 4).atan(), CONST.log10, Interval(2).sqrt())

# a wider mantissa narrows the same computation
with working_precision(120):
    print(Interval(1) / 3)

# comparing an enclosure against a printed figure with trailing dots
print(matches_printed(Interval("36.7595417"), "36.759⋯"))
print(matches_printed(Interval(1) / 92, "1/92"))
