"""Assembly of localized contributions and locally finite partial sums.

A model carries a root datum, a perturbation center gamma, a fundamental set
of affine walls with fixed-point data, and a generation lattice.  Wall
instances are produced by lattice translation (the contribution is recomputed
because the polarization direction beta - gamma changes) followed by the Weyl
action, which transports whole distributions with the alternating sign of the
element.  A Weyl route is only taken when it maps the critical value of the
source wall to the critical value of the image wall; this keeps the
gamma-centered contribution out of spurious reflected routes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from fractions import Fraction as Q
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import conedist
from .conedist import ConeDistribution, ConeTerm
from .errors import MissingChernEntry, NonGenericPoint, ZeroPairing
from .linalg import (Matrix, Vector, gram_pairing, is_zero, isqrt_upper,
                     lattice_basis, lp_feasible, mat_vec, projection_matrix,
                     orthogonal_complement_basis, rank_of, row_space_key,
                     solve, vadd, vscale, vsub, vzero)
from .polynomial import ONE, Poly
from .rootdata import RootDatum, euler_operator, stabilizer_roots
from .truncpow import VectorConfig

ChernMonomial = Tuple[Tuple[Tuple[int, int], int], ...]  # sorted ((k, m), exponent)
XiExponent = Tuple[int, ...]


@dataclass(frozen=True)
class Wall:
    """Affine subspace: basepoint + span(directions); normal_space is the
    orthogonal direction space for the ambient inner product."""

    basepoint: Vector
    directions: Tuple[Vector, ...]
    normal_space: Tuple[Vector, ...]

    def is_full_space(self) -> bool:
        return not self.normal_space


def make_wall(rd: RootDatum, basepoint: Sequence[Q], directions: Sequence[Sequence[Q]]) -> Wall:
    base = tuple(Q(c) for c in basepoint)
    dirs = tuple(tuple(Q(c) for c in u) for u in directions)
    if dirs and rank_of(dirs) != len(dirs):
        raise ValueError("dependent wall directions")
    normal = tuple(orthogonal_complement_basis(dirs, rd.dual_gram)) if dirs else \
        tuple(tuple(Q(1) if i == j else Q(0) for j in range(rd.rank)) for i in range(rd.rank))
    return Wall(base, dirs, normal)


@dataclass(frozen=True)
class FixedPointDatum:
    wall: Wall
    beta: Vector
    weights: Tuple[Tuple[Vector, int], ...]  # (covector in the normal directions, complex rank)
    chern_table: Tuple[Tuple[ChernMonomial, XiExponent, Q], ...]
    chern_degree_cap: int
    sgn_g: int
    base_orientation: int

    def table_lookup(self) -> Dict[Tuple[ChernMonomial, XiExponent], Q]:
        return {(mono, xi): value for mono, xi, value in self.chern_table}


@dataclass(frozen=True)
class Model:
    root_datum: RootDatum
    gamma: Vector
    walls: Tuple[Wall, ...]
    data: Tuple[FixedPointDatum, ...]
    lattice_basis: Tuple[Vector, ...]
    generation_bound: int
    window_default: Tuple[Vector, Vector]
    allow_gamma_zero: bool = False
    name: str = ""


@dataclass(frozen=True)
class WallInstance:
    """One generated wall with its critical value and generation route."""

    wall: Wall
    beta: Vector
    datum: FixedPointDatum  # lattice-translated datum (before the Weyl action)
    w_index: int            # Weyl element applied after translation


def project_onto_wall(rd: RootDatum, wall: Wall, x: Vector) -> Vector:
    """Orthogonal projection of x onto the affine wall."""
    if not wall.directions:
        return wall.basepoint
    proj = projection_matrix(wall.directions, rd.dual_gram)
    return vadd(wall.basepoint, mat_vec(proj, vsub(x, wall.basepoint)))


def normal_component(rd: RootDatum, wall: Wall, x: Vector) -> Vector:
    """Component of x orthogonal to the wall directions."""
    if not wall.directions:
        return x
    proj = projection_matrix(wall.directions, rd.dual_gram)
    return vsub(x, mat_vec(proj, x))


def polarize(rd: RootDatum, weights: Sequence[Tuple[Vector, int]], beta_bar: Vector,
             base_orientation: int = 1) -> Tuple[List[Tuple[Vector, int]], Tuple[bool, ...], int]:
    """Flip weights to pair negatively with beta_bar; track the orientation sign.

    Returns (polarized weights, flip mask, epsilon) with epsilon equal to
    base_orientation times (-1) to the total flipped complex rank.
    """
    polarized = []
    flips = []
    flipped_rank = 0
    for alpha, r in weights:
        p = rd.pairing(alpha, beta_bar)
        if p == 0:
            raise ZeroPairing(f"weight {alpha} pairs to zero with {beta_bar}")
        if p > 0:
            polarized.append((vscale(Q(-1), alpha), r))
            flips.append(True)
            flipped_rank += r
        else:
            polarized.append((alpha, r))
            flips.append(False)
    epsilon = base_orientation * (-1) ** flipped_rank
    return polarized, tuple(flips), epsilon


def _series_monomials(ranks: Sequence[int], cap: int) -> Dict[ChernMonomial, Q]:
    """Coefficients of the truncated inverse-Euler series by Chern monomial.

    The series is the product over weight indices k of the geometric series in
    u_k = sum_m c_m(V_k) h_k^m; the coefficient of a monomial is the product
    of signed multinomials, and each factor c_m(V_k)^e adds m*e extra ray
    copies for weight k (handled by the caller).
    """
    per_k_options: List[List[Tuple[Tuple[Tuple[int, int], int], ...]]] = []
    for k, r in enumerate(ranks):
        options = []
        # Exponent patterns e_{k,m}, m = 1..r, with total degree <= cap.
        ms = list(range(1, r + 1))

        def rec(idx: int, remaining: int, acc: List[Tuple[Tuple[int, int], int]]):
            if idx == len(ms):
                options.append(tuple(acc))
                return
            m = ms[idx]
            e = 0
            while m * e <= remaining:
                if e:
                    acc.append(((k, m), e))
                    rec(idx + 1, remaining - m * e, acc)
                    acc.pop()
                else:
                    rec(idx + 1, remaining, acc)
                e += 1

        rec(0, cap, [])
        per_k_options.append(options)

    out: Dict[ChernMonomial, Q] = {}
    for combo in itertools.product(*per_k_options):
        mono: List[Tuple[Tuple[int, int], int]] = []
        degree = 0
        coeff = Q(1)
        for k_part in combo:
            total_e = sum(e for _, e in k_part)
            degree += sum(km[1] * e for km, e in k_part)
            multinomial = math.factorial(total_e)
            for _, e in k_part:
                multinomial //= math.factorial(e)
            coeff *= Q(-1) ** total_e * multinomial
            mono.extend(k_part)
        if degree > cap:
            continue
        key = tuple(sorted(mono))
        out[key] = out.get(key, Q(0)) + coeff
    return out


def euler_inverse_fourier(rd: RootDatum, datum: FixedPointDatum,
                          beta_bar: Vector) -> ConeDistribution:
    """Inverse transform of the polarized inverse Euler class of the normal bundle.

    Includes the wall's Lebesgue factor and the moment polynomial read from
    the Chern table, so the result convolves directly with the base point mass.
    """
    n = rd.rank
    if not datum.weights:
        # No normal bundle: the table contributes a bare moment polynomial.
        terms = _table_terms(rd, datum, {(): Q(1)}, {(): ()}, datum.base_orientation)
        return conedist.normalize(n, terms)
    polarized, _, epsilon = polarize(rd, datum.weights, beta_bar, datum.base_orientation)
    plus = [vscale(Q(-1), a) for a, _ in polarized]
    ranks = [r for _, r in datum.weights]
    series = _series_monomials(ranks, datum.chern_degree_cap)
    gens_for: Dict[ChernMonomial, tuple] = {}
    for mono in series:
        extra = [0] * len(ranks)
        for (k, m), e in mono:
            extra[k] += m * e
        vectors = []
        for k, (a_plus, r) in enumerate(zip(plus, ranks)):
            vectors.extend([a_plus] * (r + extra[k]))
        gens_for[mono] = tuple(vectors)
    terms = _table_terms(rd, datum, series, gens_for, epsilon)
    return conedist.normalize(n, terms)


def _table_terms(rd: RootDatum, datum: FixedPointDatum, series: Dict[ChernMonomial, Q],
                 gens_for: Dict[ChernMonomial, tuple], sign: int) -> List[ConeTerm]:
    n = rd.rank
    table = datum.table_lookup()
    dirs = datum.wall.directions
    monos_in_table = {mono for mono, _ in table}
    terms: List[ConeTerm] = []
    for mono, series_coeff in sorted(series.items()):
        if mono not in monos_in_table:
            raise MissingChernEntry(
                f"Chern table lacks entries for required monomial {mono}")
        for (t_mono, xi), value in sorted(table.items()):
            if t_mono != mono:
                continue
            if len(xi) != len(dirs):
                raise ValueError("xi exponent length does not match wall directions")
            coef = Q(sign) * series_coeff * value
            if coef == 0:
                continue
            gens = VectorConfig.make(n, list(gens_for[mono])) if gens_for[mono] \
                else VectorConfig(n, ())
            poly = Poly.monomial(xi) if dirs else ONE
            terms.append(ConeTerm(coef, vzero(n), gens, dirs, poly))
    return terms


def eul_series_check(datum: FixedPointDatum) -> bool:
    """Verify symbolically that the truncated series inverts the Euler class.

    Works in the free graded-commutative ring on the c_m(V_k) truncated above
    the degree cap, with one Laurent variable per weight.
    """
    ranks = [r for _, r in datum.weights]
    cap = datum.chern_degree_cap
    series = _series_monomials(ranks, cap)
    return _series_product_is_one(ranks, cap, series)


def _series_product_is_one(ranks: Sequence[int], cap: int,
                           series: Dict[ChernMonomial, Q]) -> bool:
    # Elements: {(mono, z-exponents): coeff}; z_k exponents are integers.
    inverse: Dict[Tuple[ChernMonomial, Tuple[int, ...]], Q] = {}
    nk = len(ranks)
    for mono, coeff in series.items():
        zexp = [-r for r in ranks]
        for (k, m), e in mono:
            zexp[k] -= m * e
        inverse[(mono, tuple(zexp))] = inverse.get((mono, tuple(zexp)), Q(0)) + coeff
    # Euler class: product over k of z_k^{r_k} (1 + sum_m c_{k,m} z_k^{-m}).
    euler: Dict[Tuple[ChernMonomial, Tuple[int, ...]], Q] = {((), tuple(ranks)): Q(1)}
    for k, r in enumerate(ranks):
        new: Dict[Tuple[ChernMonomial, Tuple[int, ...]], Q] = {}
        for (mono, zexp), coeff in euler.items():
            new[(mono, zexp)] = new.get((mono, zexp), Q(0)) + coeff
            for m in range(1, r + 1):
                mono_d = dict(mono)
                mono_d[(k, m)] = mono_d.get((k, m), 0) + 1
                mono2 = tuple(sorted(mono_d.items()))
                z2 = list(zexp)
                z2[k] -= m
                key = (mono2, tuple(z2))
                new[key] = new.get(key, Q(0)) + coeff
        euler = new
    product: Dict[Tuple[ChernMonomial, Tuple[int, ...]], Q] = {}
    for (m1, z1), c1 in euler.items():
        for (m2, z2), c2 in inverse.items():
            mono_d = dict(m1)
            for km, e in m2:
                mono_d[km] = mono_d.get(km, 0) + e
            degree = sum(km[1] * e for km, e in mono_d.items())
            if degree > cap:
                continue  # nilpotent above the cap
            key = (tuple(sorted(mono_d.items())), tuple(a + b for a, b in zip(z1, z2)))
            product[key] = product.get(key, Q(0)) + c1 * c2
    product = {k: v for k, v in product.items() if v != 0}
    return product == {((), (0,) * nk): Q(1)}


def contribution(model: Model, datum: FixedPointDatum) -> ConeDistribution:
    """Explicit localized contribution of one fixed-point datum."""
    rd = model.root_datum
    beta = datum.beta
    beta_bar = vsub(beta, model.gamma)
    if is_zero(beta_bar) and not datum.wall.is_full_space():
        raise ZeroPairing(
            f"critical value {beta} coincides with gamma on a proper wall")
    inner = euler_inverse_fourier(rd, datum, beta_bar)
    shifted = conedist.convolve(conedist.delta(beta), inner)
    op = euler_operator(rd, beta, datum.sgn_g)
    return conedist.apply_diff_op(op, shifted)


def _translate_wall(wall: Wall, shift: Vector) -> Wall:
    return Wall(vadd(wall.basepoint, shift), wall.directions, wall.normal_space)


def _weyl_wall(rd: RootDatum, w_index: int, wall: Wall) -> Wall:
    m = rd.weyl_elements[w_index].matrix
    return Wall(mat_vec(m, wall.basepoint),
                tuple(mat_vec(m, u) for u in wall.directions),
                tuple(mat_vec(m, u) for u in wall.normal_space))


def _wall_key(rd: RootDatum, wall: Wall):
    dir_key = row_space_key(wall.directions) if wall.directions else ()
    base_normal = normal_component(rd, wall, wall.basepoint)
    return (dir_key, base_normal)


def _window_norm_bound(rd: RootDatum, window: Tuple[Vector, Vector]) -> Q:
    """Rational upper bound for |x| over the window plus |gamma|-style slack."""
    lo, hi = window
    best = Q(0)
    for corner in itertools.product(*zip(lo, hi)):
        best = max(best, rd.norm_sq(tuple(corner)))
    return isqrt_upper(best)


def generate_instances(model: Model, window: Tuple[Vector, Vector]) -> List[WallInstance]:
    """All wall instances whose contribution can meet the window, deduplicated.

    A contribution at beta is supported in the half-space
    {<x - beta, beta - gamma> >= 0}; Cauchy-Schwarz turns that into the exact
    enumeration cutoff |beta - gamma| <= bound(window) + |gamma|.
    """
    rd = model.root_datum
    gamma_norm = isqrt_upper(rd.norm_sq(model.gamma))
    bound = _window_norm_bound(rd, window) + gamma_norm
    # A Weyl image moves the critical value by at most 2|gamma| relative to
    # its translated source, so the translation pre-filter gets that slack.
    pre_bound = bound + 2 * gamma_norm
    instances: List[WallInstance] = []
    seen = set()
    for datum_index, datum in enumerate(model.data):
        wall = datum.wall
        # The projected generation lattice acting transversally to this wall.
        normal_shifts = [normal_component(rd, wall, v) for v in model.lattice_basis]
        proj_basis = lattice_basis(normal_shifts)
        offset = normal_component(rd, wall, vsub(wall.basepoint, model.gamma))
        shifts = _enumerate_lattice(rd, proj_basis, offset, pre_bound,
                                    model.generation_bound)
        for shift in shifts:
            translated = _translate_wall(wall, shift)
            beta_t = project_onto_wall(rd, translated, model.gamma)
            beta_bar = vsub(beta_t, model.gamma)
            if not is_zero(beta_bar) and rd.norm_sq(beta_bar) > pre_bound * pre_bound:
                continue
            datum_t = replace(datum, wall=translated, beta=beta_t)
            for w_index, w in enumerate(rd.weyl_elements):
                wall_w = _weyl_wall(rd, w_index, translated)
                beta_w = project_onto_wall(rd, wall_w, model.gamma)
                if beta_w != mat_vec(w.matrix, beta_t):
                    continue  # route does not transport the critical value
                # Dedupe per fundamental datum: one contribution per generated
                # wall, but distinct data on the same wall both contribute.
                key = (datum_index, _wall_key(rd, wall_w))
                if key in seen:
                    continue
                seen.add(key)
                instances.append(WallInstance(wall_w, beta_w, datum_t, w_index))
    instances.sort(key=lambda inst: (inst.beta, _wall_key(rd, inst.wall)))
    return instances


def _enumerate_lattice(rd: RootDatum, basis: List[Vector], offset: Vector, bound: Q,
                       hard_cap: int) -> List[Vector]:
    """Lattice points v with |v + offset| <= bound, via exact dual-basis box bounds."""
    if not basis:
        return [vzero(rd.rank)]
    r = len(basis)
    gram = [[rd.pairing(basis[i], basis[j]) for j in range(r)] for i in range(r)]
    # k_i = sum_j (G^-1)_ij <v, b_j>; |k_i| <= |v| * sqrt((G^-1)_ii).
    ginv_cols = []
    for j in range(r):
        e = tuple(Q(1) if i == j else Q(0) for i in range(r))
        col = solve(tuple(tuple(gram[i][j] for j in range(r)) for i in range(r)), e)
        ginv_cols.append(col)
    reach = bound + isqrt_upper(rd.norm_sq(offset))
    out = []
    ranges = []
    for i in range(r):
        kmax_q = isqrt_upper(reach * reach * ginv_cols[i][i])
        kmax = int(kmax_q) + 1
        if kmax > hard_cap:
            raise RuntimeError(
                f"lattice enumeration bound {kmax} exceeds generation cap {hard_cap}")
        ranges.append(range(-kmax, kmax + 1))
    for ks in itertools.product(*ranges):
        v = vzero(rd.rank)
        for k, b in zip(ks, basis):
            v = vadd(v, vscale(Q(k), b))
        out.append(v)
    return out


def critical_values(model: Model, search_box: Tuple[Vector, Vector]) -> List[Tuple[Wall, Vector]]:
    """Walls meeting the box with the projection of gamma onto each, deduplicated."""
    rd = model.root_datum
    out = []
    seen = set()
    for inst in generate_instances(model, search_box):
        if not _wall_meets_box(inst.wall, search_box):
            continue
        key = (_wall_key(rd, inst.wall),)
        if key in seen:
            continue
        seen.add(key)
        out.append((inst.wall, inst.beta))
    out.sort(key=lambda pair: pair[1])
    return out


def _wall_meets_box(wall: Wall, box: Tuple[Vector, Vector]) -> bool:
    lo, hi = box
    n = len(lo)
    # basepoint + dirs*(s+ - s-) = lo + y, y + z = hi - lo; all vars >= 0.
    k = len(wall.directions)
    rows = []
    rhs = []
    for i in range(n):
        row = [wall.directions[j][i] for j in range(k)]
        row += [-wall.directions[j][i] for j in range(k)]
        row += [Q(-1) if t == i else Q(0) for t in range(n)]
        row += [Q(0)] * n
        rows.append(row)
        rhs.append(lo[i] - wall.basepoint[i])
    for i in range(n):
        row = [Q(0)] * (2 * k)
        row += [Q(1) if t == i else Q(0) for t in range(n)]
        row += [Q(1) if t == i else Q(0) for t in range(n)]
        rows.append(row)
        rhs.append(hi[i] - lo[i])
    return lp_feasible(rows, rhs) is not None


def _support_meets_box(dist: ConeDistribution, box: Tuple[Vector, Vector]) -> bool:
    lo, hi = box
    n = len(lo)
    for t in dist.terms:
        k = len(t.leb_basis)
        m = len(t.gens.vectors)
        rows = []
        rhs = []
        for i in range(n):
            row = [g[i] for g in t.gens.vectors]
            row += [u[i] for u in t.leb_basis]
            row += [-u[i] for u in t.leb_basis]
            row += [Q(-1) if s == i else Q(0) for s in range(n)]
            row += [Q(0)] * n
            rows.append(row)
            rhs.append(lo[i] - t.base[i])
        for i in range(n):
            row = [Q(0)] * (m + 2 * k)
            row += [Q(1) if s == i else Q(0) for s in range(n)]
            row += [Q(1) if s == i else Q(0) for s in range(n)]
            rows.append(row)
            rhs.append(hi[i] - lo[i])
        if lp_feasible(rows, rhs) is not None:
            return True
    return False


def instance_contribution(model: Model, inst: WallInstance) -> ConeDistribution:
    """Contribution of a generated instance: translate, recompute, then push by Weyl."""
    rd = model.root_datum
    base = contribution(model, inst.datum)
    if inst.w_index == 0:
        return base
    length = rd.weyl_elements[inst.w_index].length
    pushed = conedist.weyl_pushforward(rd, inst.w_index, base)
    return conedist.scale(Q(-1) ** length, pushed)


def contributions_at(model: Model, beta: Vector) -> List[ConeDistribution]:
    """All contributions whose critical value equals beta (sorted, deduplicated)."""
    margin = tuple(Q(1) for _ in range(model.root_datum.rank))
    box = (vsub(beta, margin), vadd(beta, margin))
    out = []
    for inst in generate_instances(model, box):
        if inst.beta == beta:
            out.append(instance_contribution(model, inst))
    return out


def weyl_orbit_contributions(model: Model, datum: FixedPointDatum
                             ) -> List[Tuple[Vector, ConeDistribution]]:
    """Weyl images of one contribution with the alternating sign, one per orbit point."""
    rd = model.root_datum
    base = contribution(model, datum)
    seen = set()
    out = []
    for w_index, w in enumerate(rd.weyl_elements):
        beta_w = mat_vec(w.matrix, datum.beta)
        wall_w = _weyl_wall(rd, w_index, datum.wall)
        if project_onto_wall(rd, wall_w, model.gamma) != beta_w:
            continue
        key = (beta_w, _wall_key(rd, wall_w))
        if key in seen:
            continue
        seen.add(key)
        pushed = conedist.scale(Q(-1) ** w.length,
                                conedist.weyl_pushforward(rd, w_index, base))
        out.append((beta_w, pushed))
    out.sort(key=lambda pair: pair[0])
    return out


def partial_sum(model: Model, window: Tuple[Vector, Vector]) -> ConeDistribution:
    """Exact sum of every contribution whose support meets the bounded window."""
    lo, hi = window
    if len(lo) != model.root_datum.rank or len(hi) != len(lo):
        raise ValueError("window dimension mismatch")
    if any(a > b for a, b in zip(lo, hi)):
        raise ValueError("empty window")
    total = conedist.zero(model.root_datum.rank)
    for inst in generate_instances(model, window):
        dist = instance_contribution(model, inst)
        if dist.is_zero():
            continue
        if _support_meets_box(dist, window):
            total = conedist.add(total, dist)
    return total


def genericity_check(model: Model) -> Tuple[bool, List[str]]:
    """Projection-disjointness and face-alignment checks for the center gamma."""
    rd = model.root_datum
    gamma = model.gamma
    diagnostics: List[str] = []
    insts = generate_instances(model, model.window_default)
    walls = []
    seen = set()
    for inst in insts:
        key = _wall_key(rd, inst.wall)
        if key not in seen:
            seen.add(key)
            walls.append(inst.wall)
    for w1 in walls:
        for w2 in walls:
            if w1 is w2:
                continue
            if _wall_strictly_contains(rd, w1, w2):
                p1 = project_onto_wall(rd, w1, gamma)
                p2 = project_onto_wall(rd, w2, gamma)
                if p1 == p2:
                    diagnostics.append(
                        f"projections onto nested walls coincide at {p1}")
    for wall in walls:
        beta = project_onto_wall(rd, wall, gamma)
        stab = stabilizer_roots(rd, beta)
        for u in wall.directions:
            for alpha in stab:
                if rd.pairing(alpha, u) != 0:
                    diagnostics.append(
                        f"projection {beta} lies on a Stiefel face not containing "
                        f"its wall (root {alpha})")
    ok = not diagnostics
    if not ok and model.allow_gamma_zero and is_zero(gamma):
        diagnostics = [f"waived under the gamma=0 allowance: {d}" for d in diagnostics]
        ok = True
    return ok, diagnostics


def _wall_strictly_contains(rd: RootDatum, big: Wall, small: Wall) -> bool:
    if len(small.directions) >= len(big.directions):
        return False
    for u in small.directions:
        if solve(big.directions, u) is None:
            return False
    return solve(big.directions, vsub(small.basepoint, big.basepoint)) is not None
