"""Bundle expressions in the complexified tangent symbol ``T`` and the series
``R(q, T) = prod_i Lambda_{q^i} T (x) prod_j Sym_{q^j} T``.

Two routes reach the character of ``R_i`` at a fixed point: expanding ``R_i``
symbolically then restricting (:func:`expand_R` + :func:`restrict_character`),
or multiplying the generating functions on characters directly
(:func:`r_character_series`).  They are kept independent on purpose.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Sequence, Tuple

from .exact import ONE, LaurentPoly, QSeries, expand_geometric

# An atom is ("S", a) for Sym^a T, ("L", b) for Lambda^b T, or ("T", 1).
Atom = Tuple[str, int]
Monomial = Tuple[Atom, ...]

_KIND_RANK = {"S": 0, "L": 1, "T": 2}
T_ATOM: Atom = ("T", 1)


def _atom_key(a: Atom):
    return (_KIND_RANK[a[0]], -a[1])


def _normal_atom(kind: str, k: int):
    if k < 0:
        raise ValueError("negative power of T")
    if k == 0:
        return None
    if k == 1:
        return T_ATOM
    if kind not in ("S", "L"):
        raise ValueError(f"unknown atom kind {kind!r}")
    return (kind, k)


def _mono_degree(m: Monomial) -> int:
    return sum(k for _, k in m)


def _mono_key(m: Monomial):
    return (-_mono_degree(m), tuple(_atom_key(a) for a in m))


def _normalize(mono: Iterable[Atom]) -> Dict[Monomial, int]:
    """Rewrite a product of atoms so at most one bare T remains.

    ``T (x) T = Lambda^2 T + Sym^2 T`` is applied until no pair of T's is left.
    """
    atoms = sorted(mono, key=_atom_key)
    n_t = sum(1 for a in atoms if a == T_ATOM)
    if n_t < 2:
        return {tuple(atoms): 1}
    rest = list(atoms)
    rest.remove(T_ATOM)
    rest.remove(T_ATOM)
    out: Dict[Monomial, int] = {}
    for extra in (("L", 2), ("S", 2)):
        for m, c in _normalize(rest + [extra]).items():
            out[m] = out.get(m, 0) + c
    return out


class BundleExpr:
    """Integer combination of products of ``Sym^a T`` and ``Lambda^b T``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: Dict[Monomial, int] = {}
        for mono, c in (terms or {}).items():
            if not c:
                continue
            for m, k in _normalize(mono).items():
                clean[m] = clean.get(m, 0) + c * k
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def one(cls) -> "BundleExpr":
        return cls({(): 1})

    @classmethod
    def tangent(cls) -> "BundleExpr":
        return cls({(T_ATOM,): 1})

    @classmethod
    def sym(cls, a: int) -> "BundleExpr":
        atom = _normal_atom("S", a)
        return cls({(atom,) if atom else (): 1})

    @classmethod
    def ext(cls, b: int) -> "BundleExpr":
        atom = _normal_atom("L", b)
        return cls({(atom,) if atom else (): 1})

    def __add__(self, other):
        if isinstance(other, int):
            other = BundleExpr.one() * other
        if not isinstance(other, BundleExpr):
            return NotImplemented
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return BundleExpr(t)

    __radd__ = __add__

    def __neg__(self):
        return BundleExpr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BundleExpr({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, BundleExpr):
            return NotImplemented
        t: Dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                for m, k in _normalize(m1 + m2).items():
                    t[m] = t.get(m, 0) + c1 * c2 * k
        return BundleExpr(t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BundleExpr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self.terms.items(), key=lambda mc: _mono_key(mc[0]))

    def rank(self, dim: int) -> int:
        """Rank once ``T`` has rank ``dim``."""
        total = 0
        for mono, c in self.terms.items():
            r = 1
            for kind, k in mono:
                if kind == "T":
                    r *= dim
                elif kind == "S":
                    r *= comb(dim + k - 1, k)
                else:
                    r *= comb(dim, k)
            total += c * r
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            body = "*".join(_atom_str(a) for a in mono)
            a = abs(c)
            if not body:
                s = str(a)
            elif a == 1:
                s = body
            else:
                s = f"{a}*{body}"
            pieces.append(("-" if c < 0 else "+", s))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, s in pieces[1:]:
            out += f" {sign} {s}"
        return out

    def __repr__(self):
        return f"BundleExpr({self})"


def _atom_str(a: Atom) -> str:
    kind, k = a
    if kind == "T":
        return "T"
    return f"Sym{k}(T)" if kind == "S" else f"L{k}(T)"


def expand_R(order: int) -> List[BundleExpr]:
    """``[R_0, ..., R_order]`` in normal form."""
    if order < 0:
        raise ValueError("order must be non-negative")
    # series in q with BundleExpr coefficients, as plain lists
    acc: List[BundleExpr] = [BundleExpr.one()] + [BundleExpr()] * order

    def times(factor: List[BundleExpr]):
        out = [BundleExpr()] * (order + 1)
        for i, a in enumerate(acc):
            if a.is_zero():
                continue
            for j in range(order + 1 - i):
                if not factor[j].is_zero():
                    out[i + j] = out[i + j] + a * factor[j]
        return out

    for i in range(1, order + 1):
        for make in (BundleExpr.ext, BundleExpr.sym):
            factor = [BundleExpr()] * (order + 1)
            k = 0
            while i * k <= order:
                factor[i * k] = make(k)
                k += 1
            acc = times(factor)
    return acc


def _check_weights(weights: Sequence[int]) -> Tuple[int, ...]:
    w = tuple(int(m) for m in weights)
    if any(m == 0 for m in w):
        raise ValueError("zero weight: the fixed point would not be isolated")
    return w


def tangent_character(weights: Sequence[int]) -> LaurentPoly:
    w = _check_weights(weights)
    return sum((LaurentPoly.character(m) + LaurentPoly.character(-m) for m in w), LaurentPoly())


@lru_cache(maxsize=4096)
def _atom_character(weights: Tuple[int, ...], kind: str, k: int) -> LaurentPoly:
    if kind == "T":
        return tangent_character(weights)
    gen = QSeries.one(k)
    for m in weights:
        for e in (2 * m, -2 * m):
            if kind == "L":
                gen = gen * expand_geometric(1, e, sign=+1, order=k)
            else:
                gen = gen * expand_geometric(1, e, sign=-1, inverse=True, order=k)
    return LaurentPoly._lift(gen[k])


def restrict_character(W: BundleExpr, weights: Sequence[int]) -> LaurentPoly:
    """Character of ``W`` at a fixed point where ``T`` restricts to
    ``sum_j (t**m_j + t**-m_j)``."""
    w = _check_weights(weights)
    total = LaurentPoly()
    for mono, c in W.terms.items():
        term = ONE
        for kind, k in mono:
            term = term * _atom_character(w, kind, k)
        total = total + term * c
    return total


def r_character_series(weights: Sequence[int], order: int) -> QSeries:
    """Characters of ``R_0..R_order`` at a fixed point, by direct expansion of
    ``prod_i prod_c (1 + q^i c) / prod_j prod_c (1 - q^j c)`` over the
    characters ``c`` of ``T``."""
    w = _check_weights(weights)
    out = QSeries.one(order)
    for i in range(1, order + 1):
        for m in w:
            for e in (2 * m, -2 * m):
                out = out * expand_geometric(i, e, sign=+1, order=order)
                out = out * expand_geometric(i, e, sign=-1, inverse=True, order=order)
    return out.map(LaurentPoly._lift)
