"""Exact arithmetic: Laurent polynomials in a half-character variable, their
quotients in canonical form, and truncated power series in ``q``.

All characters live in a single variable ``mu`` with ``lambda = mu**2``.  The
character ``t**m`` of weight ``m`` is stored as ``mu**(2*m)``, so integral
objects in ``lambda`` have even support, while the half-integral terms that
appear in the A-hat fixed-point formula may have odd support.

Rationals are :class:`fractions.Fraction` throughout.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Optional, Sequence, Union

Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"``; no decimals, no floats."""
    if not isinstance(text, str) or not _RATIONAL_RE.match(text.strip()):
        raise ValueError(f"malformed rational {text!r}")
    return Fraction(text.strip())


def format_rational(x: Scalar) -> str:
    return str(Fraction(x))


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficient lists, lowest degree first)


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_divmod(a: Sequence[Fraction], b: Sequence[Fraction]):
    a = list(a)
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    for k in range(len(a) - len(b), -1, -1):
        c = a[k + len(b) - 1] / lead
        q[k] = c
        if c:
            for i, bi in enumerate(b):
                a[k + i] -= c * bi
    return _trim(q), _trim(a[: len(b) - 1])


def _poly_monic_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Finite-support Laurent polynomial in ``mu`` with rational coefficients.

    Immutable and hashable.  Arithmetic accepts ints and Fractions on either
    side, so ``0`` and ``1`` act as the additive and multiplicative units of
    every coefficient domain used by :class:`QSeries`.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, Scalar]] = None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                if v:
                    c[int(e)] = Fraction(v)
        self._c = c
        self._hash = None

    @classmethod
    def const(cls, v: Scalar) -> "LaurentPoly":
        return cls({0: v})

    @classmethod
    def monomial(cls, e: int, v: Scalar = 1) -> "LaurentPoly":
        return cls({e: v})

    @classmethod
    def character(cls, m: int, v: Scalar = 1) -> "LaurentPoly":
        """``v * t**m`` written in ``mu`` (``t = mu**2``)."""
        return cls({2 * m: v})

    @classmethod
    def from_dense(cls, coeffs: Iterable[Scalar], shift: int = 0) -> "LaurentPoly":
        return cls({i + shift: v for i, v in enumerate(coeffs)})

    # -- inspection -------------------------------------------------------

    def items(self):
        return sorted(self._c.items())

    def coeff(self, e: int) -> Fraction:
        return self._c.get(e, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    @property
    def low(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no low degree")
        return min(self._c)

    @property
    def high(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no degree")
        return max(self._c)

    def leading_coeff(self) -> Fraction:
        return self._c[self.high]

    def is_polynomial(self) -> bool:
        return not self._c or self.low >= 0

    def is_even(self) -> bool:
        return all(e % 2 == 0 for e in self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def constant_value(self) -> Optional[Fraction]:
        if not self._c:
            return Fraction(0)
        if list(self._c) == [0]:
            return self._c[0]
        return None

    def to_dense(self) -> list:
        """Coefficients from ``low`` to ``high``."""
        lo, hi = self.low, self.high
        return [self.coeff(e) for e in range(lo, hi + 1)]

    # -- transforms -------------------------------------------------------

    def shifted(self, k: int) -> "LaurentPoly":
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def inverted(self) -> "LaurentPoly":
        """Substitute ``mu -> 1/mu``."""
        return LaurentPoly({-e: v for e, v in self._c.items()})

    def is_symmetric(self) -> bool:
        return self == self.inverted()

    def __call__(self, mu: Scalar) -> Fraction:
        mu = Fraction(mu)
        if not mu and any(e < 0 for e in self._c):
            raise ZeroDivisionError("negative power evaluated at 0")
        return sum((v * mu**e for e, v in self._c.items()), Fraction(0))

    def at_lambda(self, lam: Scalar) -> Fraction:
        """Evaluate at ``lambda = mu**2``; only defined for even support."""
        if not self.is_even():
            raise ValueError("odd powers of mu have no value at a lambda point")
        lam = Fraction(lam)
        return sum((v * lam ** (e // 2) for e, v in self._c.items()), Fraction(0))

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _lift(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, (int, Fraction)):
            return LaurentPoly({0: x})
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPoly({e: v * other for e, v in self._c.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        c: dict = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials have Laurent inverses")
            (e, v), = self._c.items()
            return LaurentPoly({e * k: Fraction(v) ** k})
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # -- display ----------------------------------------------------------

    def to_str(self, var: str = "mu", step: int = 1) -> str:
        """Render highest power first; ``step=2`` renders in ``var = mu**2``."""
        if not self._c:
            return "0"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            p = e // step
            sign = "-" if v < 0 else "+"
            a = abs(v)
            if p == 0:
                body = str(a)
            else:
                mono = var if p == 1 else f"{var}^{p}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        if self.is_even():
            return self.to_str("lambda", 2)
        return self.to_str()

    def __repr__(self):
        return f"LaurentPoly({self.to_str()})"


MU = LaurentPoly.monomial(1)
ONE = LaurentPoly.const(1)


class RationalFunc:
    """Quotient of Laurent polynomials, always held in canonical form.

    Canonical form: ``num`` and ``den`` are ordinary polynomials in ``mu`` with
    no common factor and ``den`` is monic.  Negative powers are cleared into
    the denominator, so ``mu**-1`` is stored as ``1 / mu``.  Equality is
    equality of canonical forms.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = LaurentPoly._lift(num)
        den = LaurentPoly._lift(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RationalFunc needs Laurent polynomial parts")
        self.num, self.den = _canonical_pair(num, den)

    @staticmethod
    def _lift(x):
        if isinstance(x, RationalFunc):
            return x
        if isinstance(x, (int, Fraction, LaurentPoly)):
            return RationalFunc(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return RationalFunc(self.num + other.num, self.den)
        return RationalFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return RationalFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __eq__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_even(self) -> bool:
        return self.num.is_even() and self.den.is_even()

    def is_laurent(self) -> bool:
        """True when the denominator is a power of ``mu`` (no poles off 0)."""
        return self.den.is_monomial()

    def degree_gap(self) -> Optional[int]:
        """``deg(num) - deg(den)``, or None for the zero function."""
        if self.num.is_zero():
            return None
        return self.num.high - self.den.high

    def __call__(self, mu: Scalar) -> Fraction:
        d = self.den(mu)
        if not d:
            raise ZeroDivisionError(f"pole at mu={mu}")
        return self.num(mu) / d

    def at_lambda(self, lam: Scalar) -> Fraction:
        d = self.den.at_lambda(lam)
        if not d:
            raise ZeroDivisionError(f"pole at lambda={lam}")
        return self.num.at_lambda(lam) / d

    def __str__(self):
        even = self.is_even()
        var, step = ("lambda", 2) if even else ("mu", 1)
        n = self.num.to_str(var, step)
        if self.den == ONE:
            return n
        return f"({n}) / ({self.den.to_str(var, step)})"

    def __repr__(self):
        return f"RationalFunc({self.num.to_str()} / {self.den.to_str()})"


def _canonical_pair(num: LaurentPoly, den: LaurentPoly):
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return LaurentPoly(), ONE
    a, b = num.low, den.low
    n = num.shifted(-a).to_dense()
    d = den.shifted(-b).to_dense()
    # both have nonzero constant terms, so their gcd is prime to mu
    g = _poly_monic_gcd(n, d)
    if len(g) > 1:
        n, r1 = _poly_divmod(n, g)
        d, r2 = _poly_divmod(d, g)
        assert not r1 and not r2
    lead = d[-1]
    n = [c / lead for c in n]
    d = [c / lead for c in d]
    shift = a - b
    return LaurentPoly.from_dense(n, max(shift, 0)), LaurentPoly.from_dense(d, max(-shift, 0))


def rf_canonical(r: RationalFunc) -> RationalFunc:
    """Canonical form of ``r``; idempotent.  Instances are canonical on
    construction, so this re-normalizes the stored pair."""
    return RationalFunc(r.num, r.den)


def rf_is_constant(r: RationalFunc) -> Optional[Fraction]:
    """The constant value of ``r`` when it does not depend on ``mu``, else None.

    A None result means ``r`` itself, in canonical form, is the witness.
    """
    if r.den != ONE:
        return None
    return r.num.constant_value()


# ---------------------------------------------------------------------------


class NonInvertibleSeriesError(ValueError):
    pass


class QSeries:
    """Power series in ``q`` truncated after ``q**order``.

    Coefficients may be ints, Fractions, LaurentPoly, RationalFunc, or any
    type closed under ``+``/``*`` with ints.  Binary operations on series of
    different orders keep the smaller order.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs: Iterable, order: Optional[int] = None):
        coeffs = list(coeffs)
        if order is None:
            order = len(coeffs) - 1
        if order < 0:
            raise ValueError("series order must be non-negative")
        coeffs = coeffs[: order + 1]
        coeffs += [0] * (order + 1 - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls([1], order)

    def __getitem__(self, i: int):
        return self.coeffs[i]

    def __iter__(self) -> Iterator:
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return QSeries(self.coeffs[: order + 1], order)

    def map(self, f: Callable) -> "QSeries":
        return QSeries([f(c) for c in self.coeffs], self.order)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries([other], self.order)
        n = min(self.order, other.order)
        return QSeries([self[i] + other[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return self.map(lambda c: -c)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.map(lambda c: c * other)
        n = min(self.order, other.order)
        out = [0] * (n + 1)
        for i in range(n + 1):
            a = self[i]
            if isinstance(a, int) and a == 0:
                continue
            for j in range(n + 1 - i):
                b = other[j]
                if isinstance(b, int) and b == 0:
                    continue
                out[i + j] = out[i + j] + a * b
        return QSeries(out, n)

    def __rmul__(self, other):
        return self.map(lambda c: other * c)

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; needs an invertible constant coefficient."""
        c0 = self[0]
        if not c0:
            raise NonInvertibleSeriesError("constant term is zero")
        inv0 = Fraction(1, c0) if isinstance(c0, int) else 1 / c0
        out = [inv0]
        for k in range(1, self.order + 1):
            acc = sum((self[i] * out[k - i] for i in range(1, k + 1)), 0)
            out.append(-acc * inv0)
        return QSeries(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.inverse()
        return self.map(lambda c: c / other)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self, other))

    def __repr__(self):
        return f"QSeries({list(self.coeffs)!r}, order={self.order})"

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            s = str(c)
            if i == 0:
                terms.append(s)
            else:
                s = f"({s})" if (" " in s) else s
                terms.append(f"{s}*q" if i == 1 else f"{s}*q^{i}")
        return " + ".join(terms) + f" + O(q^{self.order + 1})"


def expand_geometric(
    q_power: int, mu_power: int, sign: int = -1, inverse: bool = False, order: int = 3
) -> QSeries:
    """Expand ``(1 + sign * q**q_power * mu**mu_power) ** (-1 if inverse else 1)``.

    The result is a :class:`QSeries` over :class:`LaurentPoly` truncated after
    ``q**order``.  Inverted factors need ``q_power >= 1``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if q_power < 0:
        raise ValueError("negative q power")
    if not inverse:
        coeffs: list = [ONE] + [0] * order
        if q_power <= order:
            coeffs[q_power] = coeffs[q_power] + LaurentPoly.monomial(mu_power, sign)
        return QSeries(coeffs, order)
    if q_power == 0:
        raise NonInvertibleSeriesError("(1 +/- mu^b)^-1 has no expansion in q")
    coeffs = [0] * (order + 1)
    k = 0
    while k * q_power <= order:
        coeffs[k * q_power] = LaurentPoly.monomial(k * mu_power, (-sign) ** k)
        k += 1
    return QSeries(coeffs, order)
