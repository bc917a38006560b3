"""Exact rationals, polynomials and rational functions in q, and real-root isolation.

Rationals are :class:`fractions.Fraction`. Polynomials are immutable
coefficient tuples (index i holds the coefficient of q**i). Root isolation
uses Sturm chains computed over the integers (primitive pseudo-remainder
sequences), so no floating point is involved anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import NoSignChange, PoleAt

Rational = Fraction
Scalar = Union[int, Fraction]


def as_rational(x) -> Fraction:
    """Coerce ``x`` to a Fraction; floats are refused so nothing inexact leaks in."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact or boolean value {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    return Fraction(x)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer or a terminating decimal (``"0.1"`` is exactly 1/10)."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    x = as_rational(x)
    return f"{x.numerator}/{x.denominator}"


def to_decimal(x: Fraction, places: int = 6) -> str:
    """Decimal rendering by exact scaling, rounded half-even at ``places`` digits."""
    x = as_rational(x)
    scaled = round(x * 10**places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    if places == 0:
        return sign + digits
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# integer coefficient helpers (used for gcd and Sturm chains)
# ---------------------------------------------------------------------------

def _trim(cs: list) -> list:
    while cs and cs[-1] == 0:
        cs.pop()
    return cs


def _int_primitive(cs: Sequence) -> list[int]:
    """Scale rational coefficients by a positive constant to coprime integers."""
    cs = [Fraction(c) for c in cs]
    if not cs:
        return []
    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in cs]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g > 1 else ints


def _int_content_free(cs: list[int]) -> list[int]:
    g = 0
    for c in cs:
        g = gcd(g, c)
    return [c // g for c in cs] if g > 1 else cs


def _prem_pos(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b, scaled by a *positive* constant."""
    r = list(a)
    lb = b[-1]
    db = len(b) - 1
    steps = 0
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, bc in enumerate(b):
            r[i + shift] -= c * bc
        _trim(r)
        steps += 1
    if lb < 0 and steps % 2 == 1:
        r = [-x for x in r]
    return r


def _int_sign_at(cs: Sequence[int], x: Fraction) -> int:
    """Exact sign of sum(cs[i] * x**i) using integer homogenised Horner."""
    if not cs:
        return 0
    n, d = x.numerator, x.denominator
    acc = cs[-1]
    dpow = 1
    for c in reversed(cs[:-1]):
        dpow *= d
        acc = acc * n + c * dpow
    return (acc > 0) - (acc < 0)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class UniPoly:
    """Univariate polynomial in q with exact rational coefficients."""

    __slots__ = ("coeffs", "_ints")

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        _trim(cs)
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._ints = None

    # constructors
    @classmethod
    def constant(cls, c) -> "UniPoly":
        return cls([c])

    @classmethod
    def q(cls) -> "UniPoly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, degree: int, c=1) -> "UniPoly":
        return cls([0] * degree + [c])

    @classmethod
    def interpolate(cls, points: Sequence[tuple]) -> "UniPoly":
        """Lagrange interpolation through ``(x, y)`` pairs with distinct x."""
        result = cls()
        for i, (xi, yi) in enumerate(points):
            basis = cls([1])
            denom = Fraction(1)
            for j, (xj, _) in enumerate(points):
                if j != i:
                    basis = basis * cls([-xj, 1])
                    denom *= xi - xj
            result = result + basis * (Fraction(yi) / denom)
        return result

    # basic queries
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def lowest_degree(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return -1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly([other]).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("q" if i == 1 else f"q^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{'*' + mono if mono else ''}"
            terms.append(("-" if c < 0 else "+", body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, body in terms[1:]:
            out += f" {s} {body}"
        return out

    # evaluation
    def _intform(self):
        if self._ints is None:
            den = 1
            for c in self.coeffs:
                den = den * c.denominator // gcd(den, c.denominator)
            self._ints = ([int(c * den) for c in self.coeffs], den)
        return self._ints

    def __call__(self, x) -> Fraction:
        """Exact value at a rational point (Horner over integers)."""
        if not self.coeffs:
            return Fraction(0)
        x = as_rational(x)
        ints, den = self._intform()
        n, d = x.numerator, x.denominator
        acc = ints[-1]
        dpow = 1
        for c in reversed(ints[:-1]):
            dpow *= d
            acc = acc * n + c * dpow
        return Fraction(acc, den * dpow)

    evaluate = __call__

    def sign_at(self, x) -> int:
        return _int_sign_at(self._intform()[0], as_rational(x))

    # arithmetic
    @staticmethod
    def _coerce(other) -> "UniPoly | None":
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return UniPoly([other])
        return None

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return UniPoly([c * other for c in self.coeffs])
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "UniPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = UniPoly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "UniPoly":
        """Multiply by q**k."""
        return UniPoly([0] * k + list(self.coeffs)) if self.coeffs else self

    def __divmod__(self, other: "UniPoly"):
        other = self._coerce(other)
        if other is None or other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        lc = other.lc
        quot = [Fraction(0)] * max(len(rem) - db, 0)
        while len(rem) - 1 >= db and rem:
            c = rem[-1] / lc
            shift = len(rem) - 1 - db
            quot[shift] = c
            for i, bc in enumerate(other.coeffs):
                rem[i + shift] -= c * bc
            _trim(rem)
        return UniPoly(quot), UniPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "UniPoly":
        quot, rem = divmod(self, other)
        if rem:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quot

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        return self * (1 / self.lc)

    def compose(self, other: "UniPoly") -> "UniPoly":
        result = UniPoly()
        for c in reversed(self.coeffs):
            result = result * other + c
        return result

    def int_primitive(self) -> list[int]:
        return _int_primitive(self.coeffs)


def poly_eval(p: UniPoly, q) -> Fraction:
    return p(q)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q, computed by a primitive pseudo-remainder sequence."""
    x, y = _int_primitive(a.coeffs), _int_primitive(b.coeffs)
    if not x:
        return UniPoly(y).monic()
    if not y:
        return UniPoly(x).monic()
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _prem_pos(x, y)
        x, y = y, _int_content_free(r)
    return UniPoly(x).monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g) if g.degree > 0 else p


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RatFn:
    """num/den in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, normalized: bool = False):
        num = num if isinstance(num, UniPoly) else UniPoly([num])
        den = UniPoly([1]) if den is None else (den if isinstance(den, UniPoly) else UniPoly([den]))
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not normalized:
            if num.is_zero():
                den = UniPoly([1])
            else:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num, den = num.exact_div(g), den.exact_div(g)
                lc = den.lc
                if lc != 1:
                    num, den = num * (1 / lc), den * (1 / lc)
        self.num: UniPoly = num
        self.den: UniPoly = den

    @classmethod
    def q(cls) -> "RatFn":
        return cls(UniPoly.q())

    @classmethod
    def constant(cls, c) -> "RatFn":
        return cls(UniPoly([c]), normalized=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant rational function")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def __call__(self, q) -> Fraction:
        q = as_rational(q)
        d = self.den(q)
        if d == 0:
            raise PoleAt(q)
        return self.num(q) / d

    evaluate = __call__

    def __eq__(self, other) -> bool:
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RatFn(({self.num}) / ({self.den}))"

    def __str__(self) -> str:
        if self.den == UniPoly([1]):
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __neg__(self) -> "RatFn":
        return RatFn(-self.num, self.den, normalized=True)

    def __add__(self, other):
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFn(self.num + o.num, self.den)
        return RatFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented
        return RatFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFn(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = _as_ratfn(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, k: int) -> "RatFn":
        if k < 0:
            return RatFn(1) / (self ** (-k))
        # gcd(num, den) = 1 is preserved by powers
        return RatFn(self.num ** k, self.den ** k, normalized=True)


def _as_ratfn(x) -> "RatFn | None":
    if isinstance(x, RatFn):
        return x
    if isinstance(x, UniPoly):
        return RatFn(x, normalized=True)
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return RatFn.constant(x)
    return None


def ratfn_eval(r: RatFn, q) -> Fraction:
    return r(q)


# ---------------------------------------------------------------------------
# brackets and root isolation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Bracket:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if not self.lo < self.hi:
            raise ValueError(f"empty bracket [{self.lo}, {self.hi}]")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


_INTERVAL_BITS = 256


def _down(x: Fraction) -> Fraction:
    if x.denominator.bit_length() <= _INTERVAL_BITS + 64:
        return x
    scale = 1 << _INTERVAL_BITS
    return Fraction((x.numerator * scale) // x.denominator, scale)


def _up(x: Fraction) -> Fraction:
    return -_down(-x)


@dataclass(frozen=True)
class Interval:
    """A closed interval [lo, hi] with rational ends, for enclosures of whole ranges of q.

    Results are rounded outward to dyadic ends once denominators grow large, so
    every operation returns a (possibly slightly wider) enclosure of the true range.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = as_rational(self.lo), as_rational(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", _down(lo))
        object.__setattr__(self, "hi", _up(hi))

    @classmethod
    def point(cls, x) -> "Interval":
        x = as_rational(x)
        return cls(x, x)

    @staticmethod
    def lift(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval.point(x)

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def inside(self, lo=None, hi=None) -> bool:
        """True when the interval lies strictly between ``lo`` and ``hi`` (None = unbounded)."""
        return (lo is None or self.lo > lo) and (hi is None or self.hi < hi)

    def __add__(self, other):
        o = Interval.lift(other)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-Interval.lift(other))

    def __rsub__(self, other):
        return Interval.lift(other) - self

    def __mul__(self, other):
        o = Interval.lift(other)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.contains_zero():
            raise PoleAt(self, "interval divisor containing 0")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * Interval.lift(other).reciprocal()

    def __rtruediv__(self, other):
        return Interval.lift(other) * self.reciprocal()

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        if n == 0:
            return Interval.point(1)
        a, b = self.lo ** n, self.hi ** n
        if n % 2 == 0 and self.contains_zero():
            return Interval(0, max(a, b))
        return Interval(min(a, b), max(a, b))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def poly_enclosure(p: "UniPoly", x: Interval) -> Interval:
    """Horner enclosure of p over x."""
    acc = Interval.point(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


class SturmChain:
    """Sturm chain of the square-free part of a nonzero polynomial."""

    def __init__(self, p: UniPoly):
        if p.is_zero():
            raise ValueError("Sturm chain of the zero polynomial")
        self.squarefree = squarefree_part(p)
        p0 = _int_primitive(self.squarefree.coeffs)
        chain = [p0]
        if len(p0) > 1:
            p1 = _int_primitive(UniPoly(p0).derivative().coeffs)
            chain.append(p1)
            while True:
                r = _prem_pos(chain[-2], chain[-1])
                if not r:
                    break
                chain.append([-c for c in _int_content_free(r)])
        self.chain = chain

    def variations(self, x: Fraction) -> int:
        count, last = 0, 0
        for cs in self.chain:
            s = _int_sign_at(cs, x)
            if s:
                if last and s != last:
                    count += 1
                last = s
        return count

    def sign(self, x: Fraction) -> int:
        return _int_sign_at(self.chain[0], x)

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Number of distinct real roots in the closed interval [lo, hi]."""
        return self.variations(lo) - self.variations(hi) + (self.sign(lo) == 0)


_SPLITS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(2, 5), Fraction(3, 5),
           Fraction(3, 7), Fraction(4, 7))


def _nonroot_split(chain: SturmChain, lo: Fraction, hi: Fraction) -> Fraction:
    for k in _SPLITS:
        m = lo + (hi - lo) * k
        if chain.sign(m):
            return m
    # a polynomial has finitely many roots, so some dyadic point works
    j = 3
    while True:
        m = lo + (hi - lo) * Fraction(2 * j + 1, 2 ** (j + 2))
        if chain.sign(m):
            return m
        j += 1


def count_real_roots(p: UniPoly, window: Bracket) -> int:
    """Distinct real roots of p in the closed window."""
    return SturmChain(p).count(window.lo, window.hi)


def isolate_real_roots(p: UniPoly, window: Bracket) -> list[Bracket]:
    """Disjoint brackets, in increasing order, each holding exactly one root of p in window."""
    chain = SturmChain(p)
    out: list[Bracket] = []
    stack = [(window.lo, window.hi, chain.count(window.lo, window.hi))]
    while stack:
        lo, hi, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            out.append(Bracket(lo, hi))
            continue
        m = _nonroot_split(chain, lo, hi)
        left = chain.count(lo, m)
        # push right first so brackets come out in increasing order
        stack.append((m, hi, n - left))
        stack.append((lo, m, left))
    return out


def real_root_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: every real root of p has absolute value below the result."""
    if p.degree < 1:
        return Fraction(1)
    lc = abs(p.lc)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lc


def _centered_sign_change(p: UniPoly, r: Fraction, width: Fraction) -> Bracket:
    delta = width / 2
    for _ in range(200):
        lo, hi = r - delta, r + delta
        slo, shi = p.sign_at(lo), p.sign_at(hi)
        if slo * shi < 0:
            return Bracket(lo, hi)
        delta /= 2
    raise NoSignChange(f"{p} does not change sign at its root {r}")


def refine_bracket(p: UniPoly, b: Bracket, width) -> Bracket:
    """Bisect b down to ``width`` keeping a strict sign change of p.

    If the root turns out to be an exact rational (an endpoint or a midpoint),
    the result is a bracket centred on it instead.
    """
    width = as_rational(width)
    if width <= 0:
        raise ValueError("width must be positive")
    lo, hi = b.lo, b.hi
    slo, shi = p.sign_at(lo), p.sign_at(hi)
    if slo == 0:
        return _centered_sign_change(p, lo, width)
    if shi == 0:
        return _centered_sign_change(p, hi, width)
    if slo == shi:
        raise NoSignChange(f"{p} has sign {slo} at both ends of {b}")
    while hi - lo > width:
        m = (lo + hi) / 2
        sm = p.sign_at(m)
        if sm == 0:
            return _centered_sign_change(p, m, width)
        if sm == slo:
            lo = m
        else:
            hi = m
    return Bracket(lo, hi)


def no_roots_in(p: UniPoly, window: Bracket) -> bool:
    if p.is_zero():
        return False
    if p.degree < 1:
        return True
    return count_real_roots(p, window) == 0
