"""Algebra of polarized cone distributions.

A term is c * p(xi) * delta_base (*) H_{a_1} (*) ... (*) H_{a_m} (*) Leb_S:
a point mass translated by an iterated ray convolution and an optional
Lebesgue factor on a subspace S with a polynomial moment p in the
S-coordinates xi.  Distributions are finite normalized sums of terms.
Densities are taken with respect to coordinate Lebesgue measure; ray factors
are normalized so that pairing H_a against f integrates f(t*a) dt over t >= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction as Q
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import (DirectionOutsideSpan, IncompatibleSubspaces,
                     LowerDimensionalTerm, NonGenericPoint)
from .linalg import (Vector, det, independent_subset, is_zero, lp_feasible,
                     mat_vec, rank_of, solve, vadd, vsub)
from .polynomial import ONE, Poly
from .rootdata import DiffOp, RootDatum
from .truncpow import VectorConfig, trunc_power_derivative, trunc_power_eval


@dataclass(frozen=True)
class ConeTerm:
    coef: Q
    base: Vector
    gens: VectorConfig
    leb_basis: Tuple[Vector, ...]
    xi_poly: Poly

    def __post_init__(self):
        n = len(self.base)
        if self.gens.ambient_dim != n:
            raise ValueError("generator dimension mismatch")
        if any(len(u) != n for u in self.leb_basis):
            raise ValueError("Lebesgue basis dimension mismatch")
        if self.leb_basis and rank_of(self.leb_basis) != len(self.leb_basis):
            raise ValueError("dependent Lebesgue basis")
        if self.leb_basis and self.xi_poly.arity not in (0, len(self.leb_basis)):
            raise ValueError("moment polynomial arity mismatch")

    def signature(self):
        return (self.base, self.gens.vectors, self.leb_basis)

    def is_full_dimensional(self) -> bool:
        n = len(self.base)
        return rank_of(list(self.leb_basis) + list(self.gens.vectors)) == n

    def support_columns(self) -> List[Vector]:
        return list(self.gens.vectors) + list(self.leb_basis)


@dataclass(frozen=True)
class ConeDistribution:
    rank: int
    terms: Tuple[ConeTerm, ...]

    def is_zero(self) -> bool:
        return not self.terms


def _normalize(rank: int, terms: Iterable[ConeTerm]) -> ConeDistribution:
    merged: Dict[tuple, Tuple[ConeTerm, Poly]] = {}
    for t in terms:
        if t.coef == 0 or t.xi_poly.is_zero():
            continue
        key = t.signature()
        poly = t.xi_poly.scale(t.coef)
        if key in merged:
            prev_term, prev_poly = merged[key]
            merged[key] = (prev_term, prev_poly.add(poly))
        else:
            merged[key] = (t, poly)
    out = []
    for key in sorted(merged):
        t, poly = merged[key]
        if poly.is_zero():
            continue
        if poly.is_const():
            out.append(replace(t, coef=poly.const_value(), xi_poly=ONE))
        else:
            out.append(replace(t, coef=Q(1), xi_poly=poly))
    return ConeDistribution(rank, tuple(out))


normalize = _normalize


def zero(rank: int) -> ConeDistribution:
    return ConeDistribution(rank, ())


def delta(beta: Sequence[Q]) -> ConeDistribution:
    base = tuple(Q(c) for c in beta)
    n = len(base)
    return ConeDistribution(n, (ConeTerm(Q(1), base, VectorConfig(n, ()), (), ONE),))


def heaviside(alpha: Sequence[Q], n_copies: int = 1) -> ConeDistribution:
    a = tuple(Q(c) for c in alpha)
    if is_zero(a):
        raise ValueError("zero Heaviside direction")
    if n_copies < 1:
        raise ValueError("multiplicity must be positive")
    n = len(a)
    cfg = VectorConfig.make(n, [a] * n_copies)
    return ConeDistribution(n, (ConeTerm(Q(1), (Q(0),) * n, cfg, (), ONE),))


def lebesgue(basis: Sequence[Sequence[Q]], normalization: Q = Q(1),
             rank: Optional[int] = None, xi_poly: Optional[Poly] = None) -> ConeDistribution:
    vs = tuple(tuple(Q(c) for c in u) for u in basis)
    if vs:
        rank = len(vs[0])
    elif rank is None:
        raise ValueError("ambient rank required for an empty basis")
    if vs and rank_of(vs) != len(vs):
        raise ValueError("dependent Lebesgue basis")
    poly = xi_poly if xi_poly is not None else ONE
    term = ConeTerm(Q(normalization), (Q(0),) * rank, VectorConfig(rank, ()), vs, poly)
    return _normalize(rank, [term])


def add(d1: ConeDistribution, d2: ConeDistribution) -> ConeDistribution:
    if d1.rank != d2.rank:
        raise ValueError("rank mismatch")
    return _normalize(d1.rank, d1.terms + d2.terms)


def scale(c: Q, d: ConeDistribution) -> ConeDistribution:
    c = Q(c)
    return _normalize(d.rank, [replace(t, coef=t.coef * c) for t in d.terms])


def translate(beta: Sequence[Q], d: ConeDistribution) -> ConeDistribution:
    shift = tuple(Q(c) for c in beta)
    return _normalize(d.rank, [replace(t, base=vadd(t.base, shift)) for t in d.terms])


def convolve(d1: ConeDistribution, d2: ConeDistribution) -> ConeDistribution:
    if d1.rank != d2.rank:
        raise ValueError("rank mismatch")
    out = []
    for t1 in d1.terms:
        for t2 in d2.terms:
            if t1.leb_basis and t2.leb_basis:
                raise IncompatibleSubspaces(
                    "convolution of two Lebesgue factors diverges")
            leb = t1.leb_basis or t2.leb_basis
            gens = VectorConfig(d1.rank, tuple(sorted(t1.gens.vectors + t2.gens.vectors)))
            out.append(ConeTerm(t1.coef * t2.coef, vadd(t1.base, t2.base), gens, leb,
                                t1.xi_poly.mul(t2.xi_poly)))
    return _normalize(d1.rank, out)


def apply_diff_op(op: DiffOp, d: ConeDistribution) -> ConeDistribution:
    terms = list(d.terms)
    for direction in op.directions:
        next_terms: List[ConeTerm] = []
        for t in terms:
            try:
                pieces = trunc_power_derivative(t.gens, direction)
            except DirectionOutsideSpan as exc:
                raise DirectionOutsideSpan(
                    f"Euler direction {direction} outside span of generators "
                    f"{t.gens.vectors}") from exc
            for c, cfg in pieces:
                next_terms.append(replace(t, coef=t.coef * c, gens=cfg))
        terms = next_terms
    terms = [replace(t, coef=t.coef * op.coefficient) for t in terms]
    return _normalize(d.rank, terms)


def density_at(d: ConeDistribution, x: Sequence[Q]) -> Q:
    """Exact density at a generic point with respect to coordinate Lebesgue measure."""
    x = tuple(Q(c) for c in x)
    if len(x) != d.rank:
        raise ValueError("dimension mismatch")
    total = Q(0)
    for t in d.terms:
        total += _term_density(t, x)
    return total


def _term_density(t: ConeTerm, x: Vector) -> Q:
    n = len(t.base)
    if not t.is_full_dimensional():
        raise LowerDimensionalTerm(
            f"term with base {t.base} has lower-dimensional support")
    y = vsub(x, t.base)
    span_idx = independent_subset(t.gens.vectors)
    w_cols = [t.gens.vectors[i] for i in span_idx]
    columns = list(t.leb_basis) + w_cols
    coords = solve(columns, y)
    if coords is None:
        raise LowerDimensionalTerm("support columns do not span")  # unreachable
    xi = coords[:len(t.leb_basis)]
    eta = coords[len(t.leb_basis):]
    jac = abs(det(columns))
    if w_cols:
        cfg_w = VectorConfig.make(len(w_cols),
                                  [solve(w_cols, g) for g in t.gens.vectors])
        try:
            density_w = trunc_power_eval(cfg_w, eta)
        except NonGenericPoint as exc:
            raise NonGenericPoint(
                f"point {x} lies on a wall of the term based at {t.base}") from exc
    else:
        density_w = Q(1)
    return t.coef * t.xi_poly.eval(xi) * density_w / jac


def support_contains(d: ConeDistribution, x: Sequence[Q]) -> bool:
    x = tuple(Q(c) for c in x)
    for t in d.terms:
        y = vsub(x, t.base)
        cols = t.support_columns()
        # Columns: gens (t >= 0), then leb as s+ - s- (free sign).
        rows = [[c[i] for c in cols] + [-u[i] for u in t.leb_basis]
                for i in range(len(y))]
        if lp_feasible(rows, list(y)) is not None:
            return True
    return False


def weyl_pushforward(rd: RootDatum, w_index: int, d: ConeDistribution) -> ConeDistribution:
    """Pushforward under a Weyl element; coefficients are kept unchanged."""
    m = rd.weyl_elements[w_index].matrix
    out = []
    for t in d.terms:
        gens = VectorConfig.make(d.rank, [mat_vec(m, g) for g in t.gens.vectors]) \
            if t.gens.vectors else VectorConfig(d.rank, ())
        leb = tuple(mat_vec(m, u) for u in t.leb_basis)
        out.append(ConeTerm(t.coef, mat_vec(m, t.base), gens, leb, t.xi_poly))
    return _normalize(d.rank, out)


def equal_on_samples(d1: ConeDistribution, d2: ConeDistribution,
                     points: Iterable[Sequence[Q]]) -> bool:
    return all(density_at(d1, p) == density_at(d2, p) for p in points)


def format_term(t: ConeTerm) -> str:
    parts = [str(t.coef)]
    parts.append("delta(" + ",".join(str(c) for c in t.base) + ")")
    mults: Dict[Vector, int] = {}
    for g in t.gens.vectors:
        mults[g] = mults.get(g, 0) + 1
    for g in sorted(mults):
        vec_str = ",".join(str(c) for c in g)
        if mults[g] == 1:
            parts.append(f"H({vec_str})")
        else:
            parts.append(f"H({vec_str})^{mults[g]}")
    if t.leb_basis:
        basis_str = ";".join(",".join(str(c) for c in u) for u in t.leb_basis)
        parts.append(f"Leb[{basis_str}]")
    if not t.xi_poly.is_const():
        poly_str = " + ".join(
            f"{c}*xi^({','.join(map(str, e))})" for e, c in t.xi_poly.terms)
        parts.append(f"poly({poly_str})")
    return " * ".join(parts)


def format_distribution(d: ConeDistribution) -> List[str]:
    return [format_term(t) for t in d.terms]


def serialize(d: ConeDistribution) -> dict:
    return {
        "schema_version": 1,
        "rank": d.rank,
        "terms": [
            {
                "coef": str(t.coef),
                "base": [str(c) for c in t.base],
                "gens": [[str(c) for c in g] for g in t.gens.vectors],
                "leb_basis": [[str(c) for c in u] for u in t.leb_basis],
                "xi_poly": [[list(e), str(c)] for e, c in t.xi_poly.terms],
            }
            for t in d.terms
        ],
    }


def deserialize(doc: dict) -> ConeDistribution:
    if doc.get("schema_version") != 1:
        raise ValueError("unsupported distribution schema version")
    rank = int(doc["rank"])
    terms = []
    for td in doc["terms"]:
        base = tuple(Q(c) for c in td["base"])
        gens = VectorConfig.make(rank, [[Q(c) for c in g] for g in td["gens"]]) \
            if td["gens"] else VectorConfig(rank, ())
        leb = tuple(tuple(Q(c) for c in u) for u in td["leb_basis"])
        poly_terms = {tuple(e): Q(c) for e, c in td["xi_poly"]}
        arity = len(leb) if leb else 0
        poly = Poly.make(arity, poly_terms) if poly_terms else ONE
        terms.append(ConeTerm(Q(td["coef"]), base, gens, leb, poly))
    return _normalize(rank, terms)
