"""Midpoint-radius arithmetic with certified outward rounding.

A `Ball` encloses an exact real number: every operation returns a ball that
contains the exact image of every point of its input balls.  Midpoints are
MPFR floats at a caller-chosen precision, radii are nonnegative MPFR floats,
and all radius computations round away from zero, so enclosure soundness
never depends on the working precision (only tightness does).

Complex values are rectangular pairs of real balls (`ComplexBall`); the
coarser enclosure of the rectangle is accepted.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpfr, mpq

DEFAULT_PRECISION = 256


class DenominatorMayVanish(ZeroDivisionError):
    """The divisor's enclosure contains zero, so no quotient ball exists."""


_CTX_CACHE: dict = {}


def _ctx(prec: int, mode):
    key = (prec, mode)
    ctx = _CTX_CACHE.get(key)
    if ctx is None:
        ctx = gmpy2.context(precision=prec, round=mode)
        _CTX_CACHE[key] = ctx
    return ctx


def _up(prec: int):
    return _ctx(prec, gmpy2.RoundUp)


def _down(prec: int):
    return _ctx(prec, gmpy2.RoundDown)


def _near(prec: int):
    return _ctx(prec, gmpy2.RoundToNearest)


def _round_err(mid, prec: int):
    # |mid| * 2^(1-prec) >= one ulp of mid >= the round-to-nearest error.
    # MPFR's exponent range is so large that a nonzero value never rounds
    # to zero at our magnitudes, so mid == 0 implies the operation was exact.
    if mid == 0:
        return mpfr(0)
    return _up(prec).mul_2exp(abs(mid), 1 - prec)


def _coerce_rational(x) -> mpq:
    if isinstance(x, mpq):
        return x
    return mpq(x)


class Ball:
    """Enclosure mid +/- rad of a real number at `prec` bits."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad, prec: int = DEFAULT_PRECISION):
        if prec < 2:
            raise ValueError("precision must be at least 2 bits")
        self.mid = mpfr(mid, prec) if not isinstance(mid, mpfr) else mid
        self.rad = mpfr(rad, prec) if not isinstance(rad, mpfr) else rad
        if self.rad < 0 or gmpy2.is_nan(self.rad) or gmpy2.is_nan(self.mid):
            raise ValueError("radius must be a nonnegative number")
        self.prec = prec

    # -- construction ------------------------------------------------------

    @classmethod
    def from_rational(cls, q, prec: int = DEFAULT_PRECISION) -> "Ball":
        q = _coerce_rational(q)
        mid = _near(prec).add(q, mpfr(0, prec))
        rad = mpfr(0) if gmpy2.is_finite(mid) and mpq(mid) == q else _round_err(mid, prec)
        return cls(mid, rad, prec)

    @classmethod
    def exact_int(cls, n: int, prec: int = DEFAULT_PRECISION) -> "Ball":
        return cls.from_rational(mpq(n), prec)

    @classmethod
    def from_endpoints(cls, lo, hi, prec: int = DEFAULT_PRECISION) -> "Ball":
        """Ball containing the interval [lo, hi] (mpfr or rational endpoints)."""
        lo_q, hi_q = mpq(lo), mpq(hi)
        if lo_q > hi_q:
            raise ValueError("lo > hi")
        near, up, down = _near(prec), _up(prec), _down(prec)
        lo_f = down.add(lo_q, mpfr(0, prec))
        hi_f = up.add(hi_q, mpfr(0, prec))
        mid = near.div(near.add(lo_f, hi_f), mpfr(2))
        rad = max(up.sub(hi_f, mid), up.sub(mid, lo_f), mpfr(0))
        return cls(mid, rad, prec)

    def with_precision(self, prec: int) -> "Ball":
        if prec == self.prec:
            return self
        mid = _near(prec).add(self.mid, mpfr(0, prec))
        rad = _up(prec).add(self.rad, _round_err(mid, prec))
        if mpq(mid) == mpq(self.mid):
            rad = _up(prec).add(self.rad, mpfr(0, prec))
        return Ball(mid, rad, prec)

    # -- exact endpoint views ----------------------------------------------

    def mid_rational(self) -> mpq:
        return mpq(self.mid)

    def rad_rational(self) -> mpq:
        return mpq(self.rad)

    def lower(self) -> mpq:
        return mpq(self.mid) - mpq(self.rad)

    def upper(self) -> mpq:
        return mpq(self.mid) + mpq(self.rad)

    def abs_upper(self) -> mpq:
        return abs(mpq(self.mid)) + mpq(self.rad)

    def abs_lower(self) -> mpq:
        lo = abs(mpq(self.mid)) - mpq(self.rad)
        return lo if lo > 0 else mpq(0)

    @property
    def is_exact(self) -> bool:
        return self.rad == 0

    def contains(self, q) -> bool:
        q = _coerce_rational(q)
        return abs(q - mpq(self.mid)) <= mpq(self.rad)

    def contains_zero(self) -> bool:
        return abs(mpq(self.mid)) <= mpq(self.rad)

    def overlaps(self, other: "Ball") -> bool:
        return abs(mpq(self.mid) - mpq(other.mid)) <= mpq(self.rad) + mpq(other.rad)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other, prec):
        if isinstance(other, Ball):
            return other
        return Ball.from_rational(other, prec)

    def __add__(self, other):
        if isinstance(other, ComplexBall):
            return ComplexBall(self, Ball.from_rational(0, self.prec)) + other
        other = self._coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        near, up = _near(prec), _up(prec)
        mid = near.add(self.mid, other.mid)
        if self.rad == 0 and other.rad == 0 and gmpy2.is_finite(mid) \
                and mpq(mid) == mpq(self.mid) + mpq(other.mid):
            return Ball(mid, mpfr(0), prec)
        rad = up.add(up.add(self.rad, other.rad), _round_err(mid, prec))
        return Ball(mid, rad, prec)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return Ball(-self.mid, self.rad, self.prec)

    def __sub__(self, other):
        if isinstance(other, Ball):
            return self.__add__(-other)
        return self.__add__(-_coerce_rational(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, ComplexBall):
            return other * self
        other = self._coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        near, up = _near(prec), _up(prec)
        mid = near.mul(self.mid, other.mid)
        if self.rad == 0 and other.rad == 0 and gmpy2.is_finite(mid) \
                and mpq(mid) == mpq(self.mid) * mpq(other.mid):
            return Ball(mid, mpfr(0), prec)
        ax, ay = abs(self.mid), abs(other.mid)
        rad = up.add(
            up.add(up.mul(ax, other.rad), up.mul(ay, self.rad)),
            up.add(up.mul(self.rad, other.rad), _round_err(mid, prec)),
        )
        return Ball(mid, rad, prec)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        other = self._coerce(other, self.prec)
        prec = max(self.prec, other.prec)
        ay = abs(mpq(other.mid))
        ry = mpq(other.rad)
        if ay <= ry:
            raise DenominatorMayVanish("divisor ball contains zero")
        near, up, down = _near(prec), _up(prec), _down(prec)
        mid = near.div(self.mid, other.mid)
        if self.rad == 0 and other.rad == 0 and gmpy2.is_finite(mid) \
                and mpq(mid) == mpq(self.mid) / mpq(other.mid):
            return Ball(mid, mpfr(0), prec)
        # |x/y - mx/my| <= (rx|my| + |mx|ry) / (|my| (|my| - ry))
        amy, amx = abs(other.mid), abs(self.mid)
        num = up.add(up.mul(self.rad, amy), up.mul(amx, other.rad))
        den = down.mul(down.sub(amy, other.rad), amy)
        if den <= 0:
            raise DenominatorMayVanish("divisor ball contains zero")
        rad = up.add(up.div(num, den), _round_err(mid, prec))
        return Ball(mid, rad, prec)

    def __rtruediv__(self, other):
        return Ball.from_rational(other, self.prec).__truediv__(self)

    def abs(self) -> "Ball":
        """Ball enclosing |x| for all x in self."""
        lo, hi = self.abs_lower(), self.abs_upper()
        return Ball.from_endpoints(lo, hi, self.prec)

    # -- elementary functions (monotone, via directed endpoint images) ------

    def log(self) -> "Ball":
        prec = self.prec
        lo, hi = self.lower(), self.upper()
        if lo <= 0:
            raise ValueError("log requires a strictly positive enclosure")
        down, up = _down(prec), _up(prec)
        llo = down.log(down.add(lo, mpfr(0, prec)))
        lhi = up.log(up.add(hi, mpfr(0, prec)))
        return Ball.from_endpoints(mpq(llo), mpq(lhi), prec)

    def exp(self) -> "Ball":
        prec = self.prec
        down, up = _down(prec), _up(prec)
        elo = down.exp(down.add(self.lower(), mpfr(0, prec)))
        ehi = up.exp(up.add(self.upper(), mpfr(0, prec)))
        return Ball.from_endpoints(mpq(elo), mpq(ehi), prec)

    def pow(self, exponent) -> "Ball":
        """x^e for strictly positive self; exponent a Ball or rational."""
        if not isinstance(exponent, Ball):
            exponent = Ball.from_rational(exponent, self.prec)
        return (self.log() * exponent).exp()

    # -- misc ----------------------------------------------------------------

    def scaled_mid_int(self, bits: int) -> int:
        """Nearest integer (half away from zero) to mid * 2^bits, exactly."""
        v = mpq(self.mid) * (mpq(2) ** bits)
        n, d = v.numerator, v.denominator
        q, r = divmod(abs(n), d)
        if 2 * r >= d:
            q += 1
        return int(q) if n >= 0 else -int(q)

    def to_decimal(self, digits: int = 30) -> str:
        return format(self.mid, f".{digits}e")

    def __repr__(self):
        return f"Ball({format(self.mid, '.12e')} +/- {format(self.rad, '.3e')}, prec={self.prec})"


class ComplexBall:
    """Rectangular complex enclosure: independent real and imaginary balls."""

    __slots__ = ("re", "im")

    def __init__(self, re: Ball, im: Ball):
        self.re = re
        self.im = im

    @classmethod
    def from_rationals(cls, re, im=0, prec: int = DEFAULT_PRECISION) -> "ComplexBall":
        return cls(Ball.from_rational(re, prec), Ball.from_rational(im, prec))

    @property
    def prec(self) -> int:
        return max(self.re.prec, self.im.prec)

    def _coerce(self, other) -> "ComplexBall":
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, Ball):
            return ComplexBall(other, Ball.from_rational(0, other.prec))
        return ComplexBall.from_rationals(other, 0, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        return ComplexBall(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexBall(-self.re, -self.im)

    def __sub__(self, other):
        return self.__add__(-self._coerce(other))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        other = self._coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        return ComplexBall(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm.lower() <= 0:
            raise DenominatorMayVanish("complex divisor enclosure may contain zero")
        conj = ComplexBall(other.re, -other.im)
        num = self * conj
        return ComplexBall(num.re / norm, num.im / norm)

    def contains_zero(self) -> bool:
        return self.re.contains_zero() and self.im.contains_zero()

    def abs_upper(self) -> mpq:
        prec = self.prec
        up = _up(prec)
        a = up.add(self.re.abs_upper(), mpfr(0, prec))
        b = up.add(self.im.abs_upper(), mpfr(0, prec))
        return mpq(up.sqrt(up.add(up.mul(a, a), up.mul(b, b))))

    def abs_lower(self) -> mpq:
        prec = self.prec
        down = _down(prec)
        a = down.add(self.re.abs_lower(), mpfr(0, prec))
        b = down.add(self.im.abs_lower(), mpfr(0, prec))
        s = down.add(down.mul(a, a), down.mul(b, b))
        return mpq(down.sqrt(s)) if s > 0 else mpq(0)

    def __repr__(self):
        return f"ComplexBall({self.re!r}, {self.im!r})"
