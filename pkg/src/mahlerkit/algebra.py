"""Exact univariate algebra over the rationals.

Dense polynomials, rational functions analytic at the origin, and truncated
power series, all with `gmpy2.mpq` coefficients.  These carry the iteration
map p, the inhomogeneous data of the functional-equation systems, and the
formal solutions; everything here is exact (no rounding anywhere).

Rational functions are normalized so that den(0) = 1, which both enforces
analyticity at 0 and makes degree/order well-defined on representatives.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Union

from gmpy2 import mpq

from .balls import Ball, ComplexBall, DenominatorMayVanish

Rational = mpq
RationalLike = Union[int, str, Fraction, mpq]


def to_rational(x: RationalLike) -> mpq:
    """Parse ints, fractions, and 'p/q' / decimal / scientific strings."""
    if isinstance(x, mpq):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass a string or Fraction")
    f = Fraction(x)
    return mpq(f.numerator, f.denominator)


def _coeff_list(coeffs: Iterable[RationalLike]) -> list:
    return [to_rational(c) for c in coeffs]


# ---------------------------------------------------------------------------
# truncated-list kernels shared by Polynomial / PowerSeries / the solvers
# ---------------------------------------------------------------------------

_Z0 = mpq(0)


def list_mul_trunc(f: list, g: list, n: int) -> list:
    """f*g keeping orders 0..n, skipping zero coefficients."""
    out = [_Z0] * min(len(f) + len(g) - 1, n + 1) if f and g else []
    for i, fi in enumerate(f):
        if not fi or i > n:
            continue
        lim = min(len(g), n + 1 - i)
        for j in range(lim):
            gj = g[j]
            if gj:
                out[i + j] += fi * gj
    return out


def list_div_poly(f: list, d: list, n: int) -> list:
    """f / d as a series through order n; requires d[0] != 0."""
    if not d or d[0] == 0:
        raise ZeroDivisionError("series division needs a unit constant term")
    inv0 = 1 / d[0]
    out = [_Z0] * (n + 1)
    dlen = len(d)
    for k in range(n + 1):
        acc = f[k] if k < len(f) else _Z0
        for j in range(1, min(k, dlen - 1) + 1):
            dj = d[j]
            if dj and out[k - j]:
                acc -= dj * out[k - j]
        out[k] = acc * inv0
    return out


def compose_with_map(fcoeffs: list, num: list, den: Optional[list], n: int, delta: int) -> list:
    """f(p(z)) mod z^{n+1} for p = num/den with ord(p) = delta >= 1.

    Horner over the coefficients of f that can contribute (index <= n//delta);
    each step multiplies by the sparse num and exactly divides by den, which
    keeps the cost linear in deg p instead of quadratic in n.
    """
    if delta < 1:
        raise ValueError("composition target must vanish at 0")
    top = min(len(fcoeffs) - 1, n // delta)
    out = [_Z0] * (n + 1)
    if top < 0:
        return out
    out[0] = fcoeffs[top]
    for m in range(top - 1, -1, -1):
        out = list_mul_trunc(out, num, n)
        if den is not None:
            out = list_div_poly(out, den, n)
        if len(out) <= n:
            out.extend([_Z0] * (n + 1 - len(out)))
        out[0] += fcoeffs[m]
    return out


# ---------------------------------------------------------------------------


class Polynomial:
    """Dense polynomial over Q, lowest degree first; () is the zero polynomial."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        c = _coeff_list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def z(cls) -> "Polynomial":
        return cls((0, 1))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        # zero polynomial reported as degree -1
        return len(self.coeffs) - 1

    @property
    def order(self) -> Optional[int]:
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def coeff(self, i: int) -> mpq:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else _Z0

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            if self.is_zero or other.is_zero:
                return Polynomial()
            n = self.degree + other.degree
            return Polynomial(list_mul_trunc(list(self.coeffs), list(other.coeffs), n))
        q = to_rational(other)
        return Polynomial(c * q for c in self.coeffs)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Polynomial.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial((to_rational(other),))

    def __call__(self, x):
        """Exact Horner evaluation at a rational point."""
        x = to_rational(x)
        acc = _Z0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def compose(self, other: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + Polynomial((c,))
        return acc

    def divmod(self, other: "Polynomial"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quot = [_Z0] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i]
            if not c:
                continue
            f = c / lead
            quot[i - dq] = f
            for j, oc in enumerate(other.coeffs):
                rem[i - dq + j] -= f * oc
        return Polynomial(quot), Polynomial(rem)

    @staticmethod
    def gcd(a: "Polynomial", b: "Polynomial") -> "Polynomial":
        """Monic gcd via the Euclidean algorithm."""
        while not b.is_zero:
            a, b = b, a.divmod(b)[1]
        if a.is_zero:
            return a
        return a * (1 / a.coeffs[-1])

    def max_abs_coeff(self) -> mpq:
        return max((abs(c) for c in self.coeffs), default=_Z0)

    def __str__(self):
        return format_poly(self.coeffs)

    def __repr__(self):
        return f"Polynomial({[str(c) for c in self.coeffs]})"


def format_poly(coeffs, var: str = "z") -> str:
    terms = []
    for i, c in enumerate(coeffs):
        if not c:
            continue
        if i == 0:
            terms.append(str(c))
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}*{mono}")
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return out


class RationalFunction:
    """Quotient num/den in lowest terms with den(0) = 1 (analytic at 0)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = num if isinstance(num, Polynomial) else Polynomial(num if isinstance(num, (list, tuple)) else (num,))
        den = den if isinstance(den, Polynomial) else Polynomial(den if isinstance(den, (list, tuple)) else (den,))
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        g = Polynomial.gcd(num, den)
        if not g.is_zero and g.degree >= 1:
            num = num.divmod(g)[0]
            den = den.divmod(g)[0]
        c0 = den.coeff(0)
        if c0 == 0:
            raise ValueError("pole at z = 0: rational maps here must be analytic at the origin")
        inv = 1 / c0
        self.num = num * inv
        self.den = den * inv

    @property
    def degree(self) -> int:
        return max(self.num.degree, self.den.degree)

    @property
    def ord_zero(self):
        """Order of vanishing at 0; +inf for the zero function."""
        o = self.num.order
        return math.inf if o is None else o

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial:
            raise ValueError("not a polynomial")
        return self.num

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        x = to_rational(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def compose(self, other: "RationalFunction") -> "RationalFunction":
        """self(other(z)) as a rational function (other analytic at 0)."""
        def poly_at(p: Polynomial, u: Polynomial, v: Polynomial, d: int):
            acc = Polynomial()
            vp = Polynomial.one()
            pows = [Polynomial.one()]
            for _ in range(d):
                pows.append(pows[-1] * u)
            for i in range(d, -1, -1):
                acc = acc + p.coeff(i) * pows[i] * vp
                if i > 0:
                    vp = vp * v
            return acc

        d = max(self.num.degree, self.den.degree, 0)
        top = poly_at(self.num, other.num, other.den, d)
        bot = poly_at(self.den, other.num, other.den, d)
        return RationalFunction(top, bot)

    def series(self, n: int) -> "PowerSeries":
        numl = list(self.num.coeffs)
        denl = list(self.den.coeffs)
        return PowerSeries(list_div_poly(numl, denl, n))

    def __str__(self):
        if self.is_polynomial:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"


class PowerSeries:
    """Coefficients 0..N of an element of Q[[z]] known modulo z^{N+1}."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike], order: Optional[int] = None):
        c = _coeff_list(coeffs)
        if order is not None:
            if len(c) > order + 1:
                c = c[: order + 1]
            else:
                c.extend([_Z0] * (order + 1 - len(c)))
        if not c:
            raise ValueError("a power series needs at least its constant term")
        self.coeffs = tuple(c)

    @classmethod
    def from_polynomial(cls, p: Polynomial, order: int) -> "PowerSeries":
        return cls(p.coeffs, order)

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def order(self) -> Optional[int]:
        """Order of vanishing within the known window, None if all zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return None

    def coeff(self, i: int) -> mpq:
        if i > self.truncation_order:
            raise IndexError(f"coefficient {i} beyond truncation order {self.truncation_order}")
        return self.coeffs[i]

    def truncate(self, n: int) -> "PowerSeries":
        if n > self.truncation_order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.coeffs[: n + 1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, PowerSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _bin(self, other, op):
        if isinstance(other, PowerSeries):
            n = min(self.truncation_order, other.truncation_order)
            return PowerSeries([op(self.coeffs[i], other.coeffs[i]) for i in range(n + 1)])
        q = to_rational(other)
        c = list(self.coeffs)
        c[0] = op(c[0], q)
        return PowerSeries(c)

    def __add__(self, other):
        return self._bin(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._bin(other, lambda a, b: a - b)

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            n = min(self.truncation_order, other.truncation_order)
            out = list_mul_trunc(list(self.coeffs), list(other.coeffs), n)
            out.extend([_Z0] * (n + 1 - len(out)))
            return PowerSeries(out)
        q = to_rational(other)
        return PowerSeries([c * q for c in self.coeffs])

    __rmul__ = __mul__

    def eval_ball(self, point: Ball):
        acc = Ball.from_rational(0, point.prec)
        for c in reversed(self.coeffs):
            acc = acc * point + Ball.from_rational(c, point.prec)
        return acc

    def __str__(self):
        return format_poly(self.coeffs) + f" + O(z^{self.truncation_order + 1})"

    def __repr__(self):
        return f"PowerSeries({[str(c) for c in self.coeffs]})"


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------


def degree(rf: RationalFunction) -> int:
    """max(deg num, deg den) — the degree of the map."""
    return rf.degree


def ord_zero(rf: RationalFunction):
    """Order of vanishing at z = 0 (the map must be analytic there)."""
    return rf.ord_zero


def series_expand(obj, n: int) -> PowerSeries:
    """Taylor coefficients of a polynomial or rational function through z^n."""
    if n < 0:
        raise ValueError("truncation order must be >= 0")
    if isinstance(obj, Polynomial):
        return PowerSeries.from_polynomial(obj, n)
    if isinstance(obj, RationalFunction):
        return obj.series(n)
    raise TypeError(f"cannot expand {type(obj).__name__}")


def series_compose(f: PowerSeries, g: PowerSeries, n: Optional[int] = None) -> PowerSeries:
    """f(g(z)) truncated at the largest order both operands determine.

    Requires g(0) = 0.  With delta = ord(g), the coefficient of z^k in f(g)
    only involves f's coefficients up to k//delta, so the result is reliable
    through min(order(g), delta*(order(f)+1) - 1).
    """
    if g.coeffs[0] != 0:
        raise ValueError("inner series must vanish at 0")
    go = g.order
    delta = go if go is not None else g.truncation_order + 1
    consistent = min(g.truncation_order, delta * (f.truncation_order + 1) - 1)
    if n is None:
        n = consistent
    elif n > consistent:
        raise ValueError(f"requested order {n} exceeds determined order {consistent}")
    # dense Horner over the contributing coefficients of f
    top = min(f.truncation_order, n // delta)
    out = [_Z0] * (n + 1)
    out[0] = f.coeffs[top]
    glist = list(g.coeffs[: n + 1])
    for m in range(top - 1, -1, -1):
        out = list_mul_trunc(out, glist, n)
        if len(out) <= n:
            out.extend([_Z0] * (n + 1 - len(out)))
        out[0] += f.coeffs[m]
    return PowerSeries(out)


def ball_eval(obj, point):
    """Certified evaluation of a Polynomial or RationalFunction at a ball."""
    if isinstance(point, (int, mpq, Fraction, str)):
        point = Ball.from_rational(to_rational(point))
    if isinstance(obj, Polynomial):
        return _poly_ball(obj, point)
    if isinstance(obj, RationalFunction):
        num = _poly_ball(obj.num, point)
        den = _poly_ball(obj.den, point)
        if isinstance(den, ComplexBall):
            return num / den
        if den.contains_zero():
            raise DenominatorMayVanish("denominator enclosure contains zero")
        return num / den
    raise TypeError(f"cannot ball-evaluate {type(obj).__name__}")


def _poly_ball(p: Polynomial, point):
    prec = point.prec
    if isinstance(point, ComplexBall):
        acc = ComplexBall.from_rationals(0, 0, prec)
    else:
        acc = Ball.from_rational(0, prec)
    for c in reversed(p.coeffs):
        acc = acc * point + Ball.from_rational(c, prec)
    if not p.coeffs:
        return acc
    return acc
