"""Genera from Pontryagin numbers.

Polynomials in the Pontryagin classes are dictionaries keyed by partitions:
the partition ``(2, 1, 1)`` stands for the monomial ``p2 * p1**2``.  All
computations happen in the ring of such polynomials truncated above a fixed
weight, which is exact as long as the weight cap does not exceed the number
of formal roots (no relations among ``p_1..p_cap`` appear below that).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exact import QSeries, Scalar, format_rational
from .rseries import BundleExpr, expand_R

Partition = Tuple[int, ...]


def partition(parts: Iterable[int]) -> Partition:
    p = tuple(sorted((int(i) for i in parts), reverse=True))
    if any(i <= 0 for i in p):
        raise ValueError(f"partition parts must be positive: {list(parts)}")
    return p


def partition_key(p: Partition) -> str:
    return "[" + ",".join(str(i) for i in p) + "]"


def parse_partition_key(key: str) -> Partition:
    try:
        parts = json.loads(key)
    except json.JSONDecodeError:
        raise ValueError(f"malformed partition key {key!r}") from None
    if not isinstance(parts, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in parts):
        raise ValueError(f"malformed partition key {key!r}")
    if any(i <= 0 for i in parts) or list(parts) != sorted(parts, reverse=True):
        raise ValueError(f"partition key {key!r} must list positive parts in non-increasing order")
    return tuple(parts)


def partitions_of(n: int, largest: Optional[int] = None) -> List[Partition]:
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in partitions_of(n - first, first):
            out.append((first,) + rest)
    return out


class PPoly:
    """Polynomial in ``p_1, p_2, ...`` with rational coefficients, truncated
    above weight ``cap`` (weight of ``p_i`` is ``i``)."""

    __slots__ = ("cap", "terms")

    def __init__(self, terms: Optional[Mapping[Partition, Scalar]] = None, cap: int = 0):
        self.cap = cap
        self.terms: Dict[Partition, Fraction] = {}
        for p, c in (terms or {}).items():
            if c and sum(p) <= cap:
                self.terms[p] = self.terms.get(p, Fraction(0)) + Fraction(c)
        self.terms = {p: c for p, c in self.terms.items() if c}

    @classmethod
    def const(cls, c: Scalar, cap: int) -> "PPoly":
        return cls({(): c}, cap)

    @classmethod
    def gen(cls, i: int, cap: int) -> "PPoly":
        return cls({(i,): 1}, cap)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PPoly.const(other, self.cap)
        t = dict(self.terms)
        for p, c in other.terms.items():
            t[p] = t.get(p, 0) + c
        return PPoly(t, min(self.cap, other.cap))

    __radd__ = __add__

    def __neg__(self):
        return PPoly({p: -c for p, c in self.terms.items()}, self.cap)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PPoly({p: c * other for p, c in self.terms.items()}, self.cap)
        cap = min(self.cap, other.cap)
        t: Dict[Partition, Fraction] = {}
        for p1, c1 in self.terms.items():
            w1 = sum(p1)
            for p2, c2 in other.terms.items():
                if w1 + sum(p2) > cap:
                    continue
                p = tuple(sorted(p1 + p2, reverse=True))
                t[p] = t.get(p, 0) + c1 * c2
        return PPoly(t, cap)

    __rmul__ = __mul__

    def homogeneous(self, w: int) -> Dict[Partition, Fraction]:
        return {p: c for p, c in self.terms.items() if sum(p) == w}

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, PPoly):
            return NotImplemented
        return self.terms == other.terms


def power_sums(cap: int) -> List[PPoly]:
    """``s_r = sum_j z_j**r`` for ``r = 0..cap`` as polynomials in the
    elementary symmetric functions ``p_i = e_i(z)`` (Newton's identities).
    ``s_0`` is returned as 0; callers add the root count themselves."""
    s = [PPoly(cap=cap)]
    for r in range(1, cap + 1):
        acc = PPoly.gen(r, cap) * ((-1) ** (r - 1) * r)
        for i in range(1, r):
            acc = acc + PPoly.gen(i, cap) * s[r - i] * ((-1) ** (i - 1))
        s.append(acc)
    return s


# ---------------------------------------------------------------------------
# one-variable series with rational coefficients, as coefficient lists


def _series_log(c: Sequence[Fraction], n: int) -> List[Fraction]:
    """log of ``sum c_k z^k`` with ``c_0 = 1``, through ``z**n``."""
    # (log f)' = f'/f  =>  k a_k = k c_k - sum_{i=1}^{k-1} i a_i c_{k-i}
    a = [Fraction(0)] * (n + 1)
    for k in range(1, n + 1):
        acc = k * c[k]
        for i in range(1, k):
            acc -= i * a[i] * c[k - i]
        a[k] = acc / k
    return a


def a_hat_series(order: int) -> List[Fraction]:
    """Coefficients of ``(x/2) / sinh(x/2)`` through ``x**order``."""
    sinhc = [Fraction(0)] * (order + 1)
    for k in range(0, order // 2 + 1):
        sinhc[2 * k] = Fraction(1, 4**k * factorial(2 * k + 1))
    return list(QSeries(sinhc, order).inverse())


def l_series(order: int) -> List[Fraction]:
    """Coefficients of ``x / tanh(x)`` through ``x**order``."""
    cosh = [Fraction(0)] * (order + 1)
    sinhc = [Fraction(0)] * (order + 1)
    for k in range(0, order // 2 + 1):
        cosh[2 * k] = Fraction(1, factorial(2 * k))
        sinhc[2 * k] = Fraction(1, factorial(2 * k + 1))
    return list(QSeries(cosh, order) / QSeries(sinhc, order))


def half_coth_series(order: int) -> List[Fraction]:
    """Coefficients of ``(x/2) * coth(x/2)`` through ``x**order``."""
    return [c / 2**i for i, c in enumerate(l_series(order))]


@dataclass(frozen=True)
class GenusPolynomial:
    """Weight-``degree`` polynomial in the Pontryagin classes."""

    degree: int
    coeffs: Mapping[Partition, Fraction]

    def __post_init__(self):
        for p in self.coeffs:
            if sum(p) != self.degree:
                raise ValueError(f"monomial {p} is not of weight {self.degree}")

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for p, c in sorted(self.coeffs.items()):
            mono = "*".join(f"p{i}" if e == 1 else f"p{i}^{e}" for i, e in _exponents(p))
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _exponents(p: Partition):
    seen: Dict[int, int] = {}
    for i in p:
        seen[i] = seen.get(i, 0) + 1
    return sorted(seen.items(), reverse=True)


def _total_class(Q: Sequence[Scalar], cap: int) -> PPoly:
    """``prod_j Q(x_j)`` through weight ``cap`` in ``z_j = x_j**2``."""
    if len(Q) < 2 * cap + 1:
        raise ValueError(f"series given to order {len(Q) - 1}, need at least {2 * cap}")
    Q = [Fraction(c) for c in Q]
    if Q[0] != 1:
        raise ValueError("characteristic series must have constant term 1")
    if any(Q[k] for k in range(1, 2 * cap + 1, 2)):
        raise ValueError("characteristic series must be even in x")
    z_coeffs = [Q[2 * k] for k in range(cap + 1)]
    log_q = _series_log(z_coeffs, cap)
    s = power_sums(cap)
    # log prod_j q(z_j) = sum_r a_r s_r
    arg = PPoly(cap=cap)
    for r in range(1, cap + 1):
        if log_q[r]:
            arg = arg + s[r] * log_q[r]
    # arg has no constant term, so exp(arg) terminates at arg**cap
    out = PPoly.const(1, cap)
    term = PPoly.const(1, cap)
    for k in range(1, cap + 1):
        term = term * arg * Fraction(1, k)
        out = out + term
    return out


def multiplicative_sequence(Q: Sequence[Scalar], n: int) -> GenusPolynomial:
    """The weight-``n`` part ``K_n(p_1..p_n)`` of ``prod_j Q(x_j)``.

    ``Q`` is a list of coefficients of an even series in ``x`` with
    ``Q(0) = 1``, given through at least ``x**(2n)``.
    """
    if n < 0:
        raise ValueError("negative degree")
    return GenusPolynomial(n, _total_class(Q, n).homogeneous(n))


def a_hat_polynomial(n: int) -> GenusPolynomial:
    return multiplicative_sequence(a_hat_series(2 * n), n)


def l_polynomial(n: int) -> GenusPolynomial:
    return multiplicative_sequence(l_series(2 * n), n)


@dataclass(frozen=True)
class PontryaginData:
    """Pontryagin numbers of a closed oriented ``dim``-manifold.

    ``numbers[I]`` is ``<p_{i1} p_{i2} ..., [M]>``; absent keys are zero.  A
    point (``dim = 0``) carries ``numbers[()] = 1``.
    """

    dim: int
    numbers: Mapping[Partition, Fraction] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        if self.dim < 0 or self.dim % 2:
            raise ValueError(f"dimension must be even and non-negative, got {self.dim}")
        clean = {}
        for p, v in self.numbers.items():
            p = tuple(p)
            if 4 * sum(p) != self.dim:
                raise ValueError(f"partition {list(p)} has 4*weight != {self.dim}")
            if v:
                clean[p] = Fraction(v)
        object.__setattr__(self, "numbers", clean)

    def pair(self, p: Partition) -> Fraction:
        return self.numbers.get(p, Fraction(0))


def evaluate_genus(M: PontryaginData, g: GenusPolynomial) -> Fraction:
    if 4 * g.degree != M.dim:
        return Fraction(0)
    return sum((c * M.pair(p) for p, c in g.coeffs.items()), Fraction(0))


def a_hat_genus(M: PontryaginData) -> Fraction:
    if M.dim % 4:
        return Fraction(0)
    return evaluate_genus(M, a_hat_polynomial(M.dim // 4))


def l_genus(M: PontryaginData) -> Fraction:
    if M.dim % 4:
        return Fraction(0)
    return evaluate_genus(M, l_polynomial(M.dim // 4))


def _adams_characters(n_roots: int, cap: int, kmax: int) -> List[PPoly]:
    """``ch(psi^k T) = sum_j 2 cosh(k x_j)`` for ``k = 0..kmax``, as p-polynomials."""
    s = power_sums(cap)
    out = []
    for k in range(kmax + 1):
        acc = PPoly.const(2 * n_roots, cap)
        for r in range(1, cap + 1):
            acc = acc + s[r] * Fraction(2 * k ** (2 * r), factorial(2 * r))
        out.append(acc)
    return out


def _newton_powers(P: List[PPoly], kmax: int, cap: int, elementary: bool) -> List[PPoly]:
    """Chern characters of Lambda^k or Sym^k from Adams power sums ``P``."""
    out = [PPoly.const(1, cap)]
    for k in range(1, kmax + 1):
        acc = PPoly(cap=cap)
        for i in range(1, k + 1):
            sign = (-1) ** (i - 1) if elementary else 1
            acc = acc + out[k - i] * P[i] * sign
        out.append(acc * Fraction(1, k))
    return out


def chern_character(W: BundleExpr, dim: int, cap: int) -> PPoly:
    """``ch(W)`` through weight ``cap`` for ``T`` the complexified tangent
    bundle of a ``dim``-manifold (roots ``+-x_1..+-x_n``, ``n = dim/2``)."""
    n_roots = dim // 2
    kmax = max((k for mono in W.terms for _, k in mono), default=1)
    P = _adams_characters(n_roots, cap, kmax)
    lam = _newton_powers(P, kmax, cap, elementary=True)
    sym = _newton_powers(P, kmax, cap, elementary=False)
    total = PPoly(cap=cap)
    for mono, c in W.terms.items():
        term = PPoly.const(c, cap)
        for kind, k in mono:
            term = term * (P[1] if kind == "T" else lam[k] if kind == "L" else sym[k])
        total = total + term
    return total


def twisted_signature(M: PontryaginData, W: BundleExpr) -> Fraction:
    """Index of the signature operator twisted by ``W``:
    ``<ch(W) prod_j x_j coth(x_j/2), [M]>``.

    ``prod_j x_j coth(x_j/2) = 2**n prod_j (x_j/2) coth(x_j/2)`` with
    ``n = dim/2``; the factor is fixed by ``W = 1`` reproducing the L-genus.
    """
    if M.dim % 4:
        return Fraction(0)
    cap = M.dim // 4
    n = M.dim // 2
    total = chern_character(W, M.dim, cap) * _total_class(half_coth_series(2 * cap), cap)
    top = total.homogeneous(cap)
    return 2**n * sum((c * M.pair(p) for p, c in top.items()), Fraction(0))


def elliptic_genus(M: PontryaginData, order: int = 3) -> QSeries:
    """``sum_i sign(M, R_i) q**i`` through ``q**order``."""
    return QSeries([twisted_signature(M, R) for R in expand_R(order)], order)


def pontryagin_to_json(M: PontryaginData) -> Dict[str, str]:
    return {partition_key(p): format_rational(v) for p, v in sorted(M.numbers.items())}
