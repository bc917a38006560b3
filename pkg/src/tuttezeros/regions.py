"""Exact classification of rational points (q, v) into the density regions.

Region boundaries are lines, the parabola-free curve v^3 - 2qv - q^2 = 0 for
0 < q < 32/27, and its image under v -> q/v. Its middle branch is v_plus and
the partner branch v_minus = q / v_plus satisfies v^2 (v + 2) = q on
(-2, -4/3), where v^2 (v + 2) is increasing.  Every membership test below is
a finite number of exact rational comparisons.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Bracket, UniPoly, as_rational, isolate_real_roots, refine_bracket
from .errors import OutOfDomain

Q_DIAMOND = Fraction(32, 27)


class Region(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"
    VI = "VI"
    VII = "VII"
    VIII = "VIII"
    IX = "IX"
    ISTAR = "I*"
    IISTAR = "II*"
    IIISTAR = "III*"
    VSTAR = "V*"
    VIIISTAR = "VIII*"
    IXSTAR = "IX*"
    BOUNDARY = "Boundary"
    UNSUPPORTED = "Unsupported"
    NON_NEGATIVE_V = "NonNegativeV"

    def __str__(self) -> str:
        return self.value

    @property
    def is_starred(self) -> bool:
        return self in STAR_TO_PRIMAL

    @property
    def is_supported(self) -> bool:
        return self not in (Region.BOUNDARY, Region.UNSUPPORTED, Region.NON_NEGATIVE_V)

    @classmethod
    def parse(cls, text: str) -> "Region":
        for r in cls:
            if r.value == text:
                return r
        raise ValueError(f"unknown region {text!r}")


PRIMAL_REGIONS = (Region.I, Region.II, Region.III, Region.IV, Region.V,
                  Region.VI, Region.VII, Region.VIII, Region.IX)

STAR_TO_PRIMAL = {
    Region.ISTAR: Region.I,
    Region.IISTAR: Region.II,
    Region.IIISTAR: Region.III,
    Region.VSTAR: Region.V,
    Region.VIIISTAR: Region.VIII,
    Region.IXSTAR: Region.IX,
}

# regions whose complementary pairs are series-parallel, hence planar
PLANAR_REGIONS = frozenset({Region.I, Region.II, Region.III, Region.V, Region.VIII, Region.IX})


# ---------------------------------------------------------------------------
# the curve branches
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiamondBranches:
    v_plus: Bracket
    v_minus: Bracket
    width: Fraction


def _cubic(q: Fraction) -> UniPoly:
    # v^3 - 2 q v - q^2
    return UniPoly([-q * q, -2 * q, 0, 1])


def _minus_cubic(q: Fraction) -> UniPoly:
    # v^2 (v + 2) - q
    return UniPoly([-q, 0, 2, 1])


def v_diamond(q, width=Fraction(1, 10**9)) -> DiamondBranches:
    """Brackets of width <= ``width`` around v_plus(q) and v_minus(q), 0 < q < 32/27."""
    q, width = as_rational(q), as_rational(width)
    if not 0 < q < Q_DIAMOND:
        raise OutOfDomain(f"v_diamond needs 0 < q < 32/27, got {q}")
    cubic = _cubic(q)
    bound = 1 + 2 * q + q * q
    roots = isolate_real_roots(cubic, Bracket(-bound, bound))
    if len(roots) != 3:
        raise AssertionError(f"expected three real roots of the cubic at q = {q}")
    v_plus = refine_bracket(cubic, roots[1], width)
    v_minus = refine_bracket(_minus_cubic(q), Bracket(-2, Fraction(-4, 3)), width)
    return DiamondBranches(v_plus, v_minus, width)


def below_v_minus(q: Fraction, v: Fraction) -> bool:
    """v < v_minus(q), for 0 < q < 32/27."""
    if v <= -2:
        return True
    if v >= Fraction(-4, 3):
        return False
    return v * v * (v + 2) < q


def on_v_minus(q: Fraction, v: Fraction) -> bool:
    return -2 < v < Fraction(-4, 3) and v * v * (v + 2) == q


def above_v_plus(q: Fraction, v: Fraction) -> bool:
    """v > v_plus(q) for v < 0 and 0 < q < 32/27.

    v -> q/v is decreasing on v < 0, so v > v_plus exactly when q/v < q/v_plus = v_minus.
    """
    return below_v_minus(q, q / v)


def on_v_plus(q: Fraction, v: Fraction) -> bool:
    return on_v_minus(q, q / v)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _open_region(q: Fraction, v: Fraction) -> Region | None:
    if v > 0:
        return Region.ISTAR if q < 0 and v < -q / 2 else None
    if v == 0:
        return None
    if q < 0 and v < -2:
        return Region.I
    if 0 < q < 1 and v < -2:
        return Region.II
    if 1 < q < 2 and v < -2:
        return Region.III
    if 2 < q < 4 and q != 3 and v < -q:
        return Region.IV
    if q > 2 and -q < v < -2:
        return Region.V
    if 2 < q < 4 and -2 < v < -q / 2:
        return Region.VI
    if q > 2 and -1 < v < 0:
        return Region.VII
    if 0 < q < Q_DIAMOND and -2 < v and below_v_minus(q, v):
        return Region.VIII
    if Q_DIAMOND < q < 2 and -2 < v < -1:
        return Region.IX
    if 0 < q < 1 and -q / 2 < v < 0:
        return Region.IISTAR
    if 1 < q < 2 and -q / 2 < v < 0:
        return Region.IIISTAR
    if -2 < v < -1 and q > -2 * v:
        return Region.VSTAR
    if 0 < q < Q_DIAMOND and v < -q / 2 and above_v_plus(q, v):
        return Region.VIIISTAR
    if Q_DIAMOND < q < 2 and -1 < v < -q / 2:
        return Region.IXSTAR
    return None


def unsupported_reason(q, v) -> str | None:
    """Why an open neighbourhood of (q, v) is outside every supported region, if it is."""
    q, v = as_rational(q), as_rational(v)
    if q > 4 and v < -q:
        return "open: q>4, v<-q"
    if 0 < q < Q_DIAMOND and v < 0 and not below_v_minus(q, v) and not on_v_minus(q, v) \
            and not above_v_plus(q, v) and not on_v_plus(q, v):
        return "zero-free strip between v-diamond branches"
    if q < 0 and -2 < v < 0:
        return "q<0 with -2<v<0"
    return None


def classify_region(q, v) -> Region:
    q, v = as_rational(q), as_rational(v)
    region = _open_region(q, v)
    if region is not None:
        return region
    if v == 0:
        return Region.NON_NEGATIVE_V
    if v > 0:
        return Region.BOUNDARY if q < 0 and v == -q / 2 else Region.NON_NEGATIVE_V
    if unsupported_reason(q, v) is not None:
        return Region.UNSUPPORTED
    return Region.BOUNDARY


def dual_point(q, v) -> tuple[Fraction, Fraction]:
    """The image (q, q/v) of a point under planar duality."""
    q, v = as_rational(q), as_rational(v)
    if v == 0:
        raise ZeroDivisionError("dual point of v = 0")
    return q, q / v
