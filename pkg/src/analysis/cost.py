"""
Exhaustive-search cost arithmetic

All values are exact ``Fraction``s; rendering goes through ``Decimal`` with
enough precision that the printed five significant digits are correct even
for 2^511.
"""

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from numbers import Real
from typing import Union

from ..errors import OutOfRangeError
from .bottleneck import BottleneckReport

MIN_BITS = 1
MAX_BITS = 512
SECONDS_PER_YEAR = 31_557_600  # Julian year

Rate = Union[int, float, str, Fraction, Decimal]


def _exact(value: Rate) -> Fraction:
    if isinstance(value, bool):
        raise OutOfRangeError("guess rate must be a number")
    if isinstance(value, float):
        if not math.isfinite(value):
            raise OutOfRangeError("guess rate must be finite")
        # 1e9 means 10^9, not the nearest binary double
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (TypeError, ValueError) as e:
        raise OutOfRangeError(f"not a number: {value!r}") from e


def format_scientific(value: Fraction, digits: int = 5) -> str:
    """``1.7014e29`` style: ``digits`` significant digits, no '+' in the exponent"""
    with localcontext() as ctx:
        ctx.prec = 200
        number = Decimal(value.numerator) / Decimal(value.denominator)
        text = f"{number:.{digits - 1}e}"
    return text.replace("+", "")


def render_duration(seconds: Fraction) -> str:
    """Years, rendered like guess costs: ``≈ 5.3915e21 years``"""
    return f"≈ {format_scientific(Fraction(seconds) / SECONDS_PER_YEAR)} years"


@dataclass(frozen=True)
class GuessCost:
    """Expected-case exhaustive search time over ``2^effective_bits`` candidates"""

    effective_bits: int
    guesses_per_second: Fraction
    seconds: Fraction

    def render(self) -> str:
        return format_scientific(self.seconds)

    @property
    def years(self) -> str:
        return render_duration(self.seconds)

    def __str__(self) -> str:
        return self.render()


def guess_cost_estimate(effective_bits: int, guesses_per_second: Rate) -> GuessCost:
    """
    Half the search space divided by the guess rate, exactly

    Args:
        effective_bits: Search space in bits, 1..512
        guesses_per_second: Positive rate; floats are taken at their decimal value

    Returns:
        GuessCost whose ``seconds`` is 2^(effective_bits-1) / guesses_per_second

    Raises:
        OutOfRangeError: bits outside 1..512 or rate not positive
    """
    if isinstance(effective_bits, bool) or not isinstance(effective_bits, int):
        raise OutOfRangeError("effective_bits must be an integer")
    if not MIN_BITS <= effective_bits <= MAX_BITS:
        raise OutOfRangeError(f"effective_bits must be in [{MIN_BITS}, {MAX_BITS}], got {effective_bits}")
    if not isinstance(guesses_per_second, (Real, str, Decimal)):
        raise OutOfRangeError("guess rate must be a number")
    rate = _exact(guesses_per_second)
    if rate <= 0:
        raise OutOfRangeError(f"guess rate must be positive, got {guesses_per_second}")
    seconds = Fraction(2 ** (effective_bits - 1)) / rate
    return GuessCost(effective_bits=effective_bits, guesses_per_second=rate, seconds=seconds)


def weakening_factor(report: BottleneckReport) -> Fraction:
    """How many times smaller the effective space is than the nominal one"""
    return Fraction(2) ** (report.nominal_bits - report.effective_bits)
