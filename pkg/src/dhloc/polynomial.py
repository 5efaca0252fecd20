"""Small exact multivariate polynomials used for Lebesgue-factor moments."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Dict, Mapping, Sequence, Tuple

Exponent = Tuple[int, ...]


@dataclass(frozen=True)
class Poly:
    """Polynomial with rational coefficients; ``arity`` variables.

    A constant polynomial may have arity 0 and multiplies polynomials of any
    arity.  Terms are stored as a canonical sorted tuple of (exponent, coeff).
    """

    arity: int
    terms: Tuple[Tuple[Exponent, Q], ...]

    @staticmethod
    def const(c: Q) -> "Poly":
        return Poly.make(0, {(): Q(c)})

    @staticmethod
    def monomial(exponent: Sequence[int], c: Q = Q(1)) -> "Poly":
        return Poly.make(len(exponent), {tuple(exponent): Q(c)})

    @staticmethod
    def make(arity: int, coeffs: Mapping[Exponent, Q]) -> "Poly":
        cleaned: Dict[Exponent, Q] = {}
        for e, c in coeffs.items():
            if c != 0:
                cleaned[tuple(e)] = cleaned.get(tuple(e), Q(0)) + Q(c)
        items = tuple(sorted((e, c) for e, c in cleaned.items() if c != 0))
        return Poly(arity, items)

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(all(k == 0 for k in e) for e, _ in self.terms)

    def const_value(self) -> Q:
        if not self.is_const():
            raise ValueError("not a constant polynomial")
        return self.terms[0][1] if self.terms else Q(0)

    def add(self, other: "Poly") -> "Poly":
        arity = self._joint_arity(other)
        coeffs: Dict[Exponent, Q] = {}
        for p in (self, other):
            for e, c in p.terms:
                key = self._pad(e, arity)
                coeffs[key] = coeffs.get(key, Q(0)) + c
        return Poly.make(arity, coeffs)

    def mul(self, other: "Poly") -> "Poly":
        arity = self._joint_arity(other)
        coeffs: Dict[Exponent, Q] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                key = tuple(a + b for a, b in zip(self._pad(e1, arity), self._pad(e2, arity)))
                coeffs[key] = coeffs.get(key, Q(0)) + c1 * c2
        return Poly.make(arity, coeffs)

    def scale(self, c: Q) -> "Poly":
        return Poly.make(self.arity, {e: c * v for e, v in self.terms})

    def eval(self, xs: Sequence[Q]) -> Q:
        if self.arity and len(xs) != self.arity:
            raise ValueError("arity mismatch")
        total = Q(0)
        for e, c in self.terms:
            term = c
            for x, k in zip(xs, self._pad(e, len(xs))):
                term *= x ** k
            total += term
        return total

    def _joint_arity(self, other: "Poly") -> int:
        if self.arity and other.arity and self.arity != other.arity:
            raise ValueError("arity mismatch")
        return max(self.arity, other.arity)

    @staticmethod
    def _pad(e: Exponent, arity: int) -> Exponent:
        return tuple(e) + (0,) * (arity - len(e))


ONE = Poly.const(Q(1))
