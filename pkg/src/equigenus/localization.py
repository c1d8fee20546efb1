"""Equivariant genera of circle actions with isolated fixed points.

Every equivariant quantity here is a finite sum of fixed-point contributions,
each a rational function of the character variable.  Exact arithmetic makes
the sum order-independent, so a constant result is a proof of constancy for
the given data, not a numerical observation.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .exact import ONE, LaurentPoly, QSeries, RationalFunc, _poly_divmod, rf_is_constant
from .genus import Partition, PontryaginData, partitions_of, twisted_signature
from .rseries import BundleExpr, expand_R, r_character_series, restrict_character


class NonPrimitiveActionWarning(UserWarning):
    """All weights share a common factor, so the action is not effective."""


class Lemma2ConsistencyError(AssertionError):
    """Divisibility and symmetry held but the weight-sum parity did not vanish."""


@dataclass(frozen=True)
class FixedPoint:
    weights: Tuple[int, ...]
    sign: int = 1

    def __post_init__(self):
        w = tuple(int(m) for m in self.weights)
        if any(m == 0 for m in w):
            raise ValueError("zero weight: the fixed point would not be isolated")
        if self.sign not in (1, -1):
            raise ValueError("orientation sign must be +1 or -1")
        object.__setattr__(self, "weights", w)


@dataclass(frozen=True)
class S1ManifoldData:
    dim: int
    fixed_points: Tuple[FixedPoint, ...]
    pontryagin: Optional[PontryaginData] = None
    name: str = ""

    def __post_init__(self):
        if self.dim < 0 or self.dim % 2:
            raise ValueError(f"dimension must be even and non-negative, got {self.dim}")
        fps = tuple(self.fixed_points)
        if not fps:
            raise ValueError("at least one fixed point is required")
        for fp in fps:
            if len(fp.weights) != self.dim // 2:
                raise ValueError(
                    f"weight-list length {len(fp.weights)} does not match dimension {self.dim}"
                )
        if self.pontryagin is not None and self.pontryagin.dim != self.dim:
            raise ValueError("Pontryagin data has a different dimension")
        object.__setattr__(self, "fixed_points", fps)

    @property
    def n(self) -> int:
        return self.dim // 2


def point() -> S1ManifoldData:
    return S1ManifoldData(0, (FixedPoint(()),), PontryaginData(0, {(): 1}, "point"), "point")


# ---------------------------------------------------------------------------
# per-point contributions


def signature_factor(fp: FixedPoint) -> RationalFunc:
    """``sign * prod_j (lambda^m + 1) / (lambda^m - 1)``."""
    num, den = LaurentPoly.const(fp.sign), ONE
    for m in fp.weights:
        num = num * (LaurentPoly.character(m) + 1)
        den = den * (LaurentPoly.character(m) - 1)
    return RationalFunc(num, den)


def a_hat_factor(fp: FixedPoint) -> RationalFunc:
    """``sign * prod_j 1 / (mu^m - mu^-m)``."""
    den = ONE
    for m in fp.weights:
        den = den * (LaurentPoly.monomial(m) - LaurentPoly.monomial(-m))
    return RationalFunc(LaurentPoly.const(fp.sign), den)


def equivariant_twisted_signature(M: S1ManifoldData, W: BundleExpr) -> RationalFunc:
    total = RationalFunc(0)
    for fp in M.fixed_points:
        total = total + signature_factor(fp) * restrict_character(W, fp.weights)
    return total


def equivariant_signature(M: S1ManifoldData) -> RationalFunc:
    return equivariant_twisted_signature(M, BundleExpr.one())


def equivariant_elliptic_genus(M: S1ManifoldData, order: int = 3) -> QSeries:
    """Coefficient ``i`` is the equivariant twisted signature with ``R_i``."""
    coeffs: List[RationalFunc] = [RationalFunc(0)] * (order + 1)
    for fp in M.fixed_points:
        chars = r_character_series(fp.weights, order)
        f = signature_factor(fp)
        for i in range(order + 1):
            coeffs[i] = coeffs[i] + f * chars[i]
    return QSeries(coeffs, order)


def equivariant_a_hat(M: S1ManifoldData) -> RationalFunc:
    total = RationalFunc(0)
    for fp in M.fixed_points:
        total = total + a_hat_factor(fp)
    return total


def vanishes_at_infinity(r: RationalFunc) -> bool:
    gap = r.degree_gap()
    return gap is None or gap < 0


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BalanceReport:
    parities: Tuple[int, ...]
    balanced: bool
    weight_gcd: int
    primitive: bool


def is_two_balanced(M: S1ManifoldData) -> BalanceReport:
    parities = tuple(sum(abs(m) for m in fp.weights) % 2 for fp in M.fixed_points)
    g = 0
    for fp in M.fixed_points:
        for m in fp.weights:
            g = gcd(g, m)
    # a point has no weights; treat the trivial action as primitive
    primitive = g in (0, 1)
    if not primitive:
        warnings.warn(
            f"{M.name or 'manifold'}: all weights divisible by {g}; the action is not effective",
            NonPrimitiveActionWarning,
            stacklevel=2,
        )
    return BalanceReport(parities, len(set(parities)) <= 1, g, primitive)


@dataclass(frozen=True)
class Witness:
    """Two sample points where a coefficient takes different values."""

    function: RationalFunc
    samples: Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]


@dataclass(frozen=True)
class RigidityVerdict:
    order: int
    coefficients: Tuple[RationalFunc, ...]
    constants: Tuple[Optional[Fraction], ...]
    witnesses: Dict[int, Witness]
    rigid_through: int
    pontryagin_agrees: Tuple[Optional[bool], ...]
    balance: BalanceReport
    flags: Tuple[str, ...] = field(default=())

    @property
    def rigid(self) -> bool:
        return self.rigid_through == self.order

    @property
    def consistent(self) -> bool:
        return all(a is not False for a in self.pontryagin_agrees)


def _sample_values(r: RationalFunc, start: int = 2):
    """Values at ``lambda = start, start+1, ...`` skipping poles."""
    lam = start
    while True:
        try:
            yield Fraction(lam), r.at_lambda(lam)
        except ZeroDivisionError:
            pass
        lam += 1


def _witness(r: RationalFunc) -> Witness:
    it = _sample_values(r)
    first = next(it)
    for s in it:
        if s[1] != first[1]:
            return Witness(r, (first, s))
    raise AssertionError("unreachable")  # pragma: no cover


def check_rigidity(M: S1ManifoldData, order: int = 3) -> RigidityVerdict:
    """Constancy of each q-coefficient of the equivariant elliptic genus.

    Constants are cross-checked against the Pontryagin numbers when present.
    The 2-balanced condition is reported alongside; the implication
    "balanced => rigid" is checked on the data, never assumed.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonPrimitiveActionWarning)
        balance = is_two_balanced(M)
    phi = equivariant_elliptic_genus(M, order)
    constants = tuple(rf_is_constant(c) for c in phi)
    witnesses = {i: _witness(c) for i, c in enumerate(phi) if constants[i] is None}
    rigid_through = -1
    for c in constants:
        if c is None:
            break
        rigid_through += 1

    agrees: List[Optional[bool]] = [None] * (order + 1)
    if M.pontryagin is not None:
        for i, R in enumerate(expand_R(order)):
            if constants[i] is not None:
                agrees[i] = constants[i] == twisted_signature(M.pontryagin, R)

    flags = []
    if balance.balanced and balance.primitive and rigid_through < order:
        flags.append("balanced and primitive but not rigid")
    if balance.balanced and not balance.primitive:
        flags.append(f"balanced only after a weight gcd of {balance.weight_gcd}")
    for i, a in enumerate(agrees):
        if a is False:
            flags.append(f"Pontryagin mismatch at q^{i}")
    return RigidityVerdict(
        order,
        tuple(phi),
        constants,
        witnesses,
        rigid_through,
        tuple(agrees),
        balance,
        tuple(flags),
    )


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Lemma2Report:
    symmetric: bool
    divisible: bool
    quotient: Optional[LaurentPoly]
    parity_difference: int
    difference: LaurentPoly


def weight_sum(char: LaurentPoly) -> int:
    """Sum of the positive weights ``m`` of a real character, with multiplicity."""
    total = Fraction(0)
    for e, c in char.items():
        if e > 0:
            total += c * (e // 2)
    return int(total)


def _check_character(char: LaurentPoly, label: str):
    if not char.is_even():
        raise ValueError(f"{label}: odd power of mu is not a character in t")
    if not char.is_symmetric():
        raise ValueError(f"{label}: not invariant under t -> 1/t")
    for e, c in char.items():
        if c < 0 or c.denominator != 1:
            raise ValueError(f"{label}: coefficients must be non-negative integers")


_ONE_MINUS_T_CUBED = [Fraction(1), Fraction(-3), Fraction(3), Fraction(-1)]


def lemma2_verify(charA: LaurentPoly, charB: LaurentPoly) -> Lemma2Report:
    """Difference of two real S^1-characters: symmetry, divisibility by
    ``(1 - t)**3`` with the quotient, and the parity of the weight-sum
    difference.  Divisible and symmetric with odd parity raises
    :class:`Lemma2ConsistencyError`."""
    _check_character(charA, "char-a")
    _check_character(charB, "char-b")
    f = charA - charB
    symmetric = f.is_symmetric()
    parity = (weight_sum(charA) - weight_sum(charB)) % 2
    if f.is_zero():
        return Lemma2Report(symmetric, True, LaurentPoly(), parity, f)

    # f as a Laurent polynomial in t
    low_t = f.low // 2
    dense_t = [f.coeff(2 * e) for e in range(low_t, f.high // 2 + 1)]
    q, r = _poly_divmod(dense_t, _ONE_MINUS_T_CUBED)
    divisible = not r
    quotient = None
    if divisible:
        quotient = LaurentPoly({2 * (i + low_t): c for i, c in enumerate(q)})
    if divisible and symmetric and parity != 0:
        raise Lemma2ConsistencyError(
            f"(1-t)^3 divides the symmetric difference {f} but the weight sums differ by an odd number"
        )
    return Lemma2Report(symmetric, divisible, quotient, parity, f)


# ---------------------------------------------------------------------------


def _product_numbers(A: PontryaginData, B: PontryaginData) -> Dict[Partition, Fraction]:
    """Pontryagin numbers of ``A x B`` from ``p(A x B) = p(A) p(B)``."""
    if (A.dim + B.dim) % 4 or A.dim % 4 or B.dim % 4:
        return {}
    wa = A.dim // 4
    out: Dict[Partition, Fraction] = {}
    for I in partitions_of(wa + B.dim // 4):
        total = Fraction(0)
        for split in product(*[range(i + 1) for i in I]):
            J = tuple(sorted((a for a in split if a), reverse=True))
            if sum(J) != wa:
                continue
            K = tuple(sorted((i - a for i, a in zip(I, split) if i - a), reverse=True))
            total += A.pair(J) * B.pair(K)
        if total:
            out[I] = total
    return out


def product_manifold(M1: S1ManifoldData, M2: S1ManifoldData) -> S1ManifoldData:
    fps = tuple(
        FixedPoint(a.weights + b.weights, a.sign * b.sign)
        for a in M1.fixed_points
        for b in M2.fixed_points
    )
    pont = None
    name = f"{M1.name}x{M2.name}" if M1.name and M2.name else ""
    if M1.pontryagin is not None and M2.pontryagin is not None:
        pont = PontryaginData(M1.dim + M2.dim, _product_numbers(M1.pontryagin, M2.pontryagin), name)
    return S1ManifoldData(M1.dim + M2.dim, fps, pont, name)
