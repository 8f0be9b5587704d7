"""Exact rational arithmetic, polynomials, truncated Laurent series and Toeplitz helpers.

Everything here works over :class:`fractions.Fraction`.  A truncated Laurent
series is a formal sum of powers of ``z`` with finitely many nonnegative powers;
it remembers the lowest exponent down to which its coefficients are exact, and
every arithmetic operation recomputes that bound from its inputs.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from math import factorial
from numbers import Rational as _RationalABC

from .errors import SeriesDivisionError, SingularMatrix

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rational(value) -> Fraction:
    """Coerce ``value`` to an exact Fraction.

    Accepts integers, Fractions, other exact rationals, and strings such as
    ``"3/4"`` or ``"0.125"``.  Binary floats are refused because they almost
    never hold the number the caller meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not moment values")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational number: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(
            f"float {value!r} refused; pass an int, a Fraction or a string like '1/3'")
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational number")


def format_rational(value: Fraction) -> str:
    """Canonical ``"p/q"`` text with ``q > 0``; integers keep the ``/1``."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def multinomial(total: int, parts: Sequence[int]) -> int:
    """Multinomial coefficient ``total! / prod(part!)``.

    Computed as a product of binomial coefficients so intermediate values stay
    small.  ``sum(parts)`` must equal ``total``.
    """
    parts = [int(p) for p in parts]
    if any(p < 0 for p in parts):
        raise ValueError("multinomial parts must be nonnegative")
    if sum(parts) != total:
        raise ValueError(f"parts {parts} do not sum to {total}")
    result = 1
    running = 0
    for p in parts:
        running += p
        # binom(running, p), built incrementally and kept integral
        num = 1
        for i in range(p):
            num = num * (running - i) // (i + 1)
        result *= num
    return result


def multinomial_by_factorials(total: int, parts: Sequence[int]) -> int:
    """Reference formula ``k! / prod(parts!)`` used to cross-check :func:`multinomial`."""
    if sum(parts) != total:
        raise ValueError(f"parts {list(parts)} do not sum to {total}")
    denom = 1
    for p in parts:
        denom *= factorial(p)
    return factorial(total) // denom


class Polynomial:
    """Univariate polynomial with Fraction coefficients, lowest degree first.

    The zero polynomial has no coefficients and degree ``-1``.
    """

    __slots__ = ("_coeffs",)

    ZERO_DEGREE = -1

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self._coeffs = tuple(cs)

    @classmethod
    def constant(cls, value) -> Polynomial:
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, coeff=1) -> Polynomial:
        return cls([0] * degree + [coeff])

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        return len(self._coeffs) - 1

    def is_zero(self) -> bool:
        return not self._coeffs

    def coefficient(self, k: int) -> Fraction:
        return self._coeffs[k] if 0 <= k < len(self._coeffs) else ZERO

    @property
    def leading_coefficient(self) -> Fraction:
        return self._coeffs[-1] if self._coeffs else ZERO

    def constant_term(self) -> Fraction:
        return self.coefficient(0)

    def __call__(self, x) -> Fraction:
        acc = ZERO
        for c in reversed(self._coeffs):
            acc = acc * x + c
        return acc

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        n = max(len(self._coeffs), len(other._coeffs))
        return Polynomial(self.coefficient(k) + other.coefficient(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self._coeffs)

    def __sub__(self, other) -> Polynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> Polynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        if not isinstance(other, Polynomial):
            c = to_rational(other)
            return Polynomial(c * a for a in self._coeffs)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [ZERO] * (len(self._coeffs) + len(other._coeffs) - 1)
        for i, a in enumerate(self._coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other._coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Euclidean division: ``self = q * other + r`` with ``deg r < deg other``."""
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self._coeffs)
        d = other.degree
        lead = other.leading_coefficient
        quot = [ZERO] * max(len(rem) - d, 0)
        for k in range(len(rem) - 1 - d, -1, -1):
            c = rem[k + d] / lead
            quot[k] = c
            if c:
                for i, b in enumerate(other._coeffs):
                    rem[k + i] -= c * b
        return Polynomial(quot), Polynomial(rem[:d])

    def shift(self, k: int) -> Polynomial:
        """Multiply by ``z**k`` (``k >= 0``)."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        if self.is_zero():
            return self
        return Polynomial([0] * k + list(self._coeffs))

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._coeffs == other._coeffs
        if isinstance(other, (int, Fraction)):
            return self._coeffs == Polynomial.constant(other)._coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        if not self._coeffs:
            return "Polynomial(0)"
        terms = []
        for k, c in enumerate(self._coeffs):
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            elif k == 1:
                terms.append(f"{c}*z")
            else:
                terms.append(f"{c}*z^{k}")
        return "Polynomial(" + " + ".join(terms) + ")"

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self._coeffs]


class TruncatedLaurentSeries:
    """Formal series ``sum_k c_k z**k`` with finitely many nonnegative powers.

    ``low`` is the lowest exponent whose coefficient is known exactly; every
    coefficient below it is unknown.  ``low=None`` marks an exact finite sum
    (a Laurent polynomial), for which all unlisted coefficients are zero.

    In the moment-problem reading, the coefficient of ``z**-(j+1)`` in
    ``-sum s_j / z**(j+1)`` is ``-s_j`` and ``order = -low`` counts the trusted
    negative powers.
    """

    __slots__ = ("_terms", "_low")

    def __init__(self, terms: Mapping[int, object] | None = None, low: int | None = None):
        clean = {}
        for exp, c in (terms or {}).items():
            c = to_rational(c)
            if c != 0 and (low is None or exp >= low):
                clean[int(exp)] = c
        self._terms = clean
        self._low = None if low is None else int(low)

    # construction -------------------------------------------------------
    @classmethod
    def from_coefficients(cls, coeffs: Sequence, polynomial: Polynomial | None = None,
                          order: int | None = None) -> TruncatedLaurentSeries:
        """Series with ``coeffs[k]`` at ``z**-(k+1)`` plus an optional polynomial part."""
        terms = {-(k + 1): c for k, c in enumerate(coeffs)}
        if polynomial is not None:
            for k, c in enumerate(polynomial.coeffs):
                terms[k] = c
        return cls(terms, -len(coeffs) if order is None else -order)

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> TruncatedLaurentSeries:
        return cls(dict(enumerate(poly.coeffs)), None)

    @classmethod
    def constant(cls, value) -> TruncatedLaurentSeries:
        return cls({0: value}, None)

    @classmethod
    def zero(cls, low: int | None = None) -> TruncatedLaurentSeries:
        return cls({}, low)

    # inspection ----------------------------------------------------------
    @property
    def low(self) -> int | None:
        return self._low

    @property
    def is_exact(self) -> bool:
        return self._low is None

    @property
    def order(self) -> int | None:
        """Number of trusted negative powers; ``None`` for an exact series.

        Can be zero or negative when even some nonnegative powers are untrusted.
        """
        return None if self._low is None else -self._low

    def coefficient(self, exp: int) -> Fraction:
        if self._low is not None and exp < self._low:
            raise ValueError(f"coefficient of z^{exp} lies below the trusted order")
        return self._terms.get(exp, ZERO)

    @property
    def coeffs(self) -> list[Fraction]:
        """Coefficients of ``z**-1 ... z**-order``."""
        if self._low is None:
            raise ValueError("exact series has no finite order; truncate it first")
        return [self._terms.get(-k, ZERO) for k in range(1, -self._low + 1)]

    @property
    def top_exponent(self) -> int | None:
        """Highest exponent with a nonzero known coefficient, or None."""
        return max(self._terms) if self._terms else None

    def is_zero(self) -> bool:
        """True when every trusted coefficient vanishes."""
        return not self._terms

    def polynomial_part(self) -> Polynomial:
        if self._low is not None and self._low > 0:
            raise ValueError("the polynomial part is not fully trusted")
        top = self.top_exponent
        if top is None or top < 0:
            return Polynomial()
        return Polynomial(self._terms.get(k, ZERO) for k in range(top + 1))

    def negative_part(self) -> TruncatedLaurentSeries:
        return TruncatedLaurentSeries({e: c for e, c in self._terms.items() if e < 0},
                                      self._low)

    def truncate(self, order: int) -> TruncatedLaurentSeries:
        """Drop everything below ``z**-order``."""
        new_low = -order if self._low is None else max(self._low, -order)
        return TruncatedLaurentSeries(self._terms, new_low)

    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    # arithmetic ----------------------------------------------------------
    def _bound(self) -> int | None:
        """Upper bound on the exponents that may carry a nonzero coefficient."""
        top = self.top_exponent
        if top is not None:
            return top
        return None if self._low is None else self._low - 1

    @staticmethod
    def _coerce(other) -> TruncatedLaurentSeries:
        if isinstance(other, TruncatedLaurentSeries):
            return other
        if isinstance(other, Polynomial):
            return TruncatedLaurentSeries.from_polynomial(other)
        return TruncatedLaurentSeries.constant(other)

    def __add__(self, other) -> TruncatedLaurentSeries:
        other = self._coerce(other)
        lows = [x for x in (self._low, other._low) if x is not None]
        low = max(lows) if lows else None
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, ZERO) + c
        return TruncatedLaurentSeries(terms, low)

    __radd__ = __add__

    def __neg__(self) -> TruncatedLaurentSeries:
        return TruncatedLaurentSeries({e: -c for e, c in self._terms.items()}, self._low)

    def __sub__(self, other) -> TruncatedLaurentSeries:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> TruncatedLaurentSeries:
        return self._coerce(other) - self

    def __mul__(self, other) -> TruncatedLaurentSeries:
        other = self._coerce(other)
        if (self._low is None and not self._terms) or (other._low is None and not other._terms):
            return TruncatedLaurentSeries.zero()
        candidates = []
        if other._low is not None:
            candidates.append(self._bound() + other._low)
        if self._low is not None:
            candidates.append(other._bound() + self._low)
        low = max(candidates) if candidates else None
        terms: dict[int, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                if low is None or e >= low:
                    terms[e] = terms.get(e, ZERO) + c1 * c2
        return TruncatedLaurentSeries(terms, low)

    __rmul__ = __mul__

    def reciprocal(self, floor: int | None = None) -> TruncatedLaurentSeries:
        """Formal ``1/self``.

        The result is exact to as many terms as ``self`` has trusted terms
        below its leading one.  For an exact non-monomial input the expansion
        never ends, so ``floor`` (lowest exponent wanted) is required.
        """
        top = self.top_exponent
        if top is None:
            raise SeriesDivisionError("division by a series that vanishes to its trusted order")
        lead = self._terms[top]
        if self._low is None and len(self._terms) == 1:
            return TruncatedLaurentSeries({-top: 1 / lead}, None)
        if self._low is None:
            if floor is None:
                raise ValueError("reciprocal of an exact series needs an explicit floor")
            count = -top - floor + 1
        else:
            count = top - self._low + 1
            if floor is not None:
                count = min(count, -top - floor + 1)
        count = max(count, 0)
        c = [self._terms.get(top - k, ZERO) for k in range(count)]
        d: list[Fraction] = []
        for k in range(count):
            if k == 0:
                d.append(1 / lead)
                continue
            acc = ZERO
            for i in range(1, k + 1):
                if c[i]:
                    acc += c[i] * d[k - i]
            d.append(-acc / lead)
        return TruncatedLaurentSeries({-top - k: v for k, v in enumerate(d)}, -top - count + 1)

    def __truediv__(self, other) -> TruncatedLaurentSeries:
        return series_div(self, self._coerce(other))

    def __rtruediv__(self, other) -> TruncatedLaurentSeries:
        return series_div(self._coerce(other), self)

    # comparison ----------------------------------------------------------
    def agrees_with(self, other: TruncatedLaurentSeries, order: int) -> bool:
        """Coefficient-wise equality for every exponent ``>= -order``.

        Both series must be trusted that far down.
        """
        for s in (self, other):
            if s._low is not None and s._low > -order:
                raise ValueError(f"series trusted only down to z^{s._low}, asked for z^{-order}")
        keys = {e for e in self._terms if e >= -order} | {e for e in other._terms if e >= -order}
        return all(self._terms.get(e, ZERO) == other._terms.get(e, ZERO) for e in keys)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return self._low == other._low and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self._low, tuple(sorted(self._terms.items()))))

    def __repr__(self) -> str:
        body = ", ".join(f"z^{e}: {c}" for e, c in sorted(self._terms.items(), reverse=True))
        return f"TruncatedLaurentSeries({{{body}}}, low={self._low})"

    def to_json(self) -> dict:
        out = {"coeffs": [format_rational(c) for c in self.coeffs], "order": self.order}
        poly = self.polynomial_part() if (self._low is None or self._low <= 0) else Polynomial()
        if not poly.is_zero():
            out["poly"] = poly.to_json()
        return out


def series_from_moments(moments: Sequence) -> TruncatedLaurentSeries:
    """The formal series ``-sum_j s_j / z**(j+1)`` with ``order = len(moments)``."""
    values = [to_rational(v) for v in moments]
    if not values:
        raise ValueError("a moment sequence needs at least one value")
    return TruncatedLaurentSeries.from_coefficients([-v for v in values])


def series_mul(a: TruncatedLaurentSeries, b: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
    return a * b


def series_div(num: TruncatedLaurentSeries, den: TruncatedLaurentSeries,
               floor: int | None = None) -> TruncatedLaurentSeries:
    """Formal quotient ``num / den`` with its derived trusted order.

    ``floor`` is only needed when both inputs are exact and the quotient has
    an infinite expansion; the result is then computed down to ``z**floor``.
    """
    if den.is_zero():
        raise SeriesDivisionError("division by a series that vanishes to its trusted order")
    if num.is_exact and num.is_zero():
        return TruncatedLaurentSeries.zero()
    rec_floor = None
    if floor is not None:
        num_top = num.top_exponent
        rec_floor = floor - (num_top if num_top is not None else 0)
    quotient = num * den.reciprocal(rec_floor)
    if floor is not None:
        quotient = quotient.truncate(-floor)
    return quotient


class LowerToeplitz:
    """Square lower-triangular Toeplitz matrix given by its first column."""

    __slots__ = ("first_column",)

    def __init__(self, first_column: Sequence):
        self.first_column = tuple(to_rational(c) for c in first_column)
        if not self.first_column:
            raise ValueError("a Toeplitz matrix needs at least one entry")

    @property
    def size(self) -> int:
        return len(self.first_column)

    def entry(self, i: int, j: int) -> Fraction:
        return self.first_column[i - j] if i >= j else ZERO

    def is_invertible(self) -> bool:
        return self.first_column[0] != 0

    def rows(self) -> list[list[Fraction]]:
        n = self.size
        return [[self.entry(i, j) for j in range(n)] for i in range(n)]

    def __matmul__(self, other: LowerToeplitz) -> LowerToeplitz:
        if other.size != self.size:
            raise ValueError("Toeplitz sizes differ")
        return LowerToeplitz(toeplitz_multiply(self.first_column, other.first_column))

    def inverse(self) -> LowerToeplitz:
        return LowerToeplitz(toeplitz_solve(self.first_column))


def toeplitz_multiply(a: Sequence, b: Sequence) -> list[Fraction]:
    """First column of ``T(a) @ T(b)`` for equal-length first columns."""
    if len(a) != len(b):
        raise ValueError("Toeplitz sizes differ")
    n = len(a)
    return [sum((to_rational(a[i - j]) * to_rational(b[j]) for j in range(i + 1)), ZERO)
            for i in range(n)]


def toeplitz_solve(known: Sequence) -> list[Fraction]:
    """First column of ``T(known)**-1`` by forward substitution on ``T(known) x = e_0``."""
    col = [to_rational(c) for c in known]
    if not col:
        return []
    if col[0] == 0:
        raise SingularMatrix("lower Toeplitz matrix with zero diagonal is singular")
    x: list[Fraction] = []
    for i in range(len(col)):
        rhs = ONE if i == 0 else ZERO
        for j in range(i):
            rhs -= col[i - j] * x[j]
        x.append(rhs / col[0])
    return x
