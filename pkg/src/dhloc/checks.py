"""Named invariant and golden-value suites, shared by the CLI and the tests."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import conedist
from .conedist import ConeDistribution, density_at
from .errors import NonGenericPoint
from .linalg import Vector, vadd, vec, vsub
from .localize import (FixedPointDatum, contributions_at, eul_series_check,
                       generate_instances, instance_contribution, make_wall,
                       partial_sum, _series_monomials, _series_product_is_one)
from .models import builtin_s4, builtin_woodward_su3
from .rootdata import build_root_datum, weyl_apply
from .truncpow import (VectorConfig, cone_contains, mc_fiber_volume,
                       trunc_power_derivative, trunc_power_eval)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _check(results: List[CheckResult], name: str, ok: bool, detail: str = ""):
    results.append(CheckResult(name, bool(ok), detail if not ok else ""))


def _generic_points(rng: random.Random, dist: ConeDistribution, count: int,
                    box: Tuple[Vector, Vector]) -> List[Vector]:
    lo, hi = box
    out: List[Vector] = []
    attempts = 0
    while len(out) < count and attempts < 1000 * count:
        attempts += 1
        p = tuple(Q(rng.randint(int(a * 64), int(b * 64)), 64) + Q(1, 1021 + 2 * attempts)
                  for a, b in zip(lo, hi))
        try:
            density_at(dist, p)
        except NonGenericPoint:
            continue
        out.append(p)
    if len(out) < count:
        raise RuntimeError("could not find enough generic sample points")
    return out


# ---------------------------------------------------------------- golden: S4

S4_POINTS = [Q(-5, 2), Q(-3, 2), Q(-1, 2), Q(1, 2), Q(3, 2), Q(5, 2), Q(7, 2)]
S4_VALUES = [Q(-1), Q(1), Q(-1), Q(1), Q(-1), Q(1), Q(-1)]


def suite_s4_golden() -> List[CheckResult]:
    results: List[CheckResult] = []
    model = builtin_s4()
    window = ((Q(-13, 5),), (Q(18, 5),))
    total = partial_sum(model, window)
    got = [density_at(total, (p,)) for p in S4_POINTS]
    _check(results, "s4 seven-point golden series", got == S4_VALUES,
           f"got {[str(v) for v in got]}")

    def single(beta):
        cs = contributions_at(model, (Q(beta),))
        assert len(cs) == 1, f"expected one contribution at {beta}"
        return cs[0]

    c0 = single(0)
    _check(results, "s4 contribution at 0 is -2 on the negative axis",
           density_at(c0, (Q(-7, 3),)) == -2 and density_at(c0, (Q(5, 7),)) == 0)
    central = single(Q(1, 4))
    _check(results, "s4 central contribution is unit Lebesgue",
           all(density_at(central, (x,)) == 1 for x in (Q(-9, 4), Q(1, 3), Q(13, 5))))
    c1 = single(1)
    _check(results, "s4 contribution at 1 is -2 beyond 1",
           density_at(c1, (Q(8, 5),)) == -2 and density_at(c1, (Q(2, 5),)) == 0)
    cm1 = single(-1)
    _check(results, "s4 contribution at -1 is +2 below -1",
           density_at(cm1, (Q(-8, 5),)) == 2 and density_at(cm1, (Q(-2, 5),)) == 0)
    return results


# ----------------------------------------------------------- golden: SU(3)

THETA = vec(1, 1)
ALPHA1 = vec(2, -1)
ALPHA2 = vec(-1, 2)


def woodward_fold_oracle(x: Vector) -> int:
    """Independent sign oracle: fold into the alcove by affine reflections and
    test the half-scaled moment polytope; derived from the rank-2 geometry."""
    rd = build_root_datum("A2")
    sign = 1
    y = tuple(x)
    for _ in range(10000):
        c1 = rd.pairing(ALPHA1, y)
        c2 = rd.pairing(ALPHA2, y)
        ct = rd.pairing(THETA, y)
        if c1 < 0:
            y = vsub(y, tuple(c1 * a for a in ALPHA1))
            sign = -sign
        elif c2 < 0:
            y = vsub(y, tuple(c2 * a for a in ALPHA2))
            sign = -sign
        elif ct > 1:
            y = vsub(y, tuple((ct - 1) * t for t in THETA))
            sign = -sign
        else:
            inside = (rd.pairing(ALPHA1, y) < Q(1, 2)
                      and rd.pairing(ALPHA2, y) < Q(1, 2)
                      and rd.pairing(THETA, y) > Q(1, 2))
            return sign if inside else 0
    raise RuntimeError("fold did not terminate")


def woodward_ring_sum(model, n_rings: int) -> Tuple[int, ConeDistribution]:
    """Sum of the contributions from the n_rings families of critical values
    closest to the origin; returns (contribution count, distribution)."""
    box = ((Q(-4), Q(-4)), (Q(4), Q(4)))
    insts = [inst for inst in generate_instances(model, box)
             if not inst.wall.is_full_space()]
    norms = sorted({model.root_datum.norm_sq(inst.beta) for inst in insts})
    keep = set(norms[:n_rings])
    total = conedist.zero(model.root_datum.rank)
    count = 0
    for inst in insts:
        if model.root_datum.norm_sq(inst.beta) in keep:
            total = conedist.add(total, instance_contribution(model, inst))
            count += 1
    return count, total


WOODWARD_RING1_POINTS = [
    # (point, valid for 6-contribution sum): all root pairings below 3/2.
    (Q(1, 3), Q(1, 3)), (Q(3, 5), Q(-3, 10)), (Q(-3, 10), Q(3, 5)),
    (Q(11, 20), Q(11, 20)), (Q(1, 10), Q(1, 10)), (Q(-1, 3), Q(-1, 3)),
    (Q(-3, 5), Q(3, 10)), (Q(3, 10), Q(-3, 5)), (Q(-11, 20), Q(-11, 20)),
    (Q(2, 5), Q(1, 5)), (Q(-2, 3), Q(1, 3)), (Q(1, 3), Q(-2, 3)),
]

WOODWARD_RING2_POINTS = WOODWARD_RING1_POINTS + [
    # additionally valid for 12 contributions: all root pairings below 5/2.
    (Q(9, 10), Q(7, 10)), (Q(4, 5), Q(4, 5)), (Q(17, 10), Q(3, 10)),
    (Q(3, 10), Q(17, 10)), (Q(-9, 10), Q(-9, 10)), (Q(11, 10), Q(11, 10)),
]


def suite_woodward_golden() -> List[CheckResult]:
    results: List[CheckResult] = []
    model = builtin_woodward_su3()
    a = (Q(1, 4), Q(1, 4))
    b = (Q(1, 2), Q(-1, 4))
    c = (Q(-1, 4), Q(1, 2))
    abc = conedist.zero(2)
    for beta in (a, b, c):
        cs = contributions_at(model, beta)
        _check(results, f"woodward single contribution at {beta}", len(cs) == 1)
        abc = conedist.add(abc, cs[0])
    samples = [
        ((Q(1, 3), Q(1, 3)), Q(1)),      # interior of the moment polytope
        ((Q(5, 8), Q(-1, 4)), Q(-1)),    # wedge past the b-facet
        ((Q(-1, 4), Q(5, 8)), Q(-1)),    # wedge past the c-facet
        ((Q(5, 8), Q(5, 8)), Q(-1)),     # wedge past both b- and c-facets
        ((Q(-1, 8), Q(-1, 8)), Q(0)),    # outside the union
    ]
    ok = all(density_at(abc, p) == v for p, v in samples)
    _check(results, "woodward a+b+c sign pattern", ok)

    count6, sum6 = woodward_ring_sum(model, 1)
    _check(results, "woodward first ring has 6 contributions", count6 == 6)
    ok6 = all(density_at(sum6, p) == woodward_fold_oracle(p)
              for p in WOODWARD_RING1_POINTS)
    _check(results, "woodward 6-contribution sum matches the fold oracle", ok6)

    count12, sum12 = woodward_ring_sum(model, 2)
    _check(results, "woodward two rings have 12 contributions", count12 == 12)
    ok12 = all(density_at(sum12, p) == woodward_fold_oracle(p)
               for p in WOODWARD_RING2_POINTS)
    _check(results, "woodward 12-contribution sum matches the fold oracle", ok12)
    return results


# ------------------------------------------------------------- truncpow suite

def random_config_and_points(rng: random.Random, n_points: int
                             ) -> Tuple[VectorConfig, List[Vector]]:
    """Random pointed spanning plane configuration with generic interior points."""
    while True:
        m = rng.randint(3, 5)
        vecs = []
        for _ in range(m):
            v = (Q(rng.randint(0, 4)), Q(rng.randint(0, 4)))
            if v == (0, 0):
                v = (Q(1), Q(1))
            vecs.append((v[0] + Q(rng.randint(0, 3), 4), v[1] + Q(rng.randint(0, 3), 4)))
        try:
            cfg = VectorConfig.make(2, vecs)
        except ValueError:
            continue
        if not cfg.spans() or not cfg.is_pointed():
            continue
        points = []
        attempts = 0
        while len(points) < n_points and attempts < 400:
            attempts += 1
            x = (Q(0), Q(0))
            for v in cfg.vectors:
                u = Q(rng.randint(1, 6), 4)
                x = vadd(x, tuple(u * c for c in v))
            x = vadd(x, (Q(1, 997 + attempts), Q(1, 1009 + attempts)))
            try:
                if trunc_power_eval(cfg, x) > 0:
                    points.append(x)
            except NonGenericPoint:
                continue
        if len(points) == n_points:
            return cfg, points


def suite_truncpow(n_samples: int = 100_000) -> List[CheckResult]:
    results: List[CheckResult] = []
    rng = random.Random(20260810)
    worst = 0.0
    ok_mc = True
    for i in range(20):
        cfg, points = random_config_and_points(rng, 10)
        for x in points:
            exact = trunc_power_eval(cfg, x)
            approx = mc_fiber_volume(cfg, x, n_samples, seed=1000 + i)
            rel = abs(float(exact) - approx) / max(float(exact), 1.0)
            worst = max(worst, rel)
            if rel > 0.01:
                ok_mc = False
    _check(results, "truncpow exact vs Monte Carlo within 1%", ok_mc,
           f"worst relative error {worst:.4f}")

    rng = random.Random(7)
    ok_hom = True
    ok_perm = True
    for _ in range(10):
        cfg, points = random_config_and_points(rng, 3)
        m, n = len(cfg.vectors), cfg.ambient_dim
        shuffled = list(cfg.vectors)
        rng.shuffle(shuffled)
        cfg_perm = VectorConfig(2, tuple(shuffled))
        for x in points:
            val = trunc_power_eval(cfg, x)
            for lam in (Q(2), Q(3, 2)):
                scaled = trunc_power_eval(cfg, tuple(lam * c for c in x))
                if scaled != lam ** (m - n) * val:
                    ok_hom = False
            if trunc_power_eval(cfg_perm, x) != val:
                ok_perm = False
    _check(results, "truncpow homogeneity of degree m-n", ok_hom)
    _check(results, "truncpow permutation invariance", ok_perm)

    rng = random.Random(11)
    ok_fd = True
    h = Q(1, 2048)
    for _ in range(10):
        cfg, points = random_config_and_points(rng, 3)
        v = cfg.vectors[rng.randrange(len(cfg.vectors))]
        pieces = trunc_power_derivative(cfg, v)
        for x in points:
            exact = sum((c * trunc_power_eval(sub, x) for c, sub in pieces), Q(0))
            try:
                fd = (trunc_power_eval(cfg, vadd(x, tuple(h * c for c in v)))
                      - trunc_power_eval(cfg, vsub(x, tuple(h * c for c in v)))) / (2 * h)
            except NonGenericPoint:
                continue
            if abs(fd - exact) > Q(1, 10 ** 6) * max(abs(exact), 1):
                ok_fd = False
    _check(results, "truncpow derivative matches central differences", ok_fd)

    rng = random.Random(13)
    ok_support = True
    for _ in range(10):
        cfg, _ = random_config_and_points(rng, 1)
        for _ in range(10):
            x = (Q(rng.randint(-40, 40), 7), Q(rng.randint(-40, 40), 11))
            try:
                val = trunc_power_eval(cfg, x)
            except NonGenericPoint:
                continue
            if not cone_contains(cfg, x) and val != 0:
                ok_support = False
    _check(results, "truncpow vanishes outside the support cone", ok_support)
    return results


# -------------------------------------------------------------- algebra suite

def suite_algebra() -> List[CheckResult]:
    results: List[CheckResult] = []
    rng = random.Random(2718)
    rd = build_root_datum("A2")

    d1 = conedist.convolve(conedist.delta((Q(1, 3), Q(0))),
                           conedist.heaviside((Q(1), Q(0)), 1))
    d2 = conedist.heaviside((Q(0), Q(1)), 2)
    d3 = conedist.convolve(conedist.heaviside((Q(1), Q(1)), 1),
                           conedist.delta((Q(0), Q(-1, 2))))
    box = ((Q(-3), Q(-3)), (Q(4), Q(4)))

    comm_lhs = conedist.convolve(d1, d2)
    comm_rhs = conedist.convolve(d2, d1)
    pts = _generic_points(rng, comm_lhs, 10, box)
    _check(results, "convolution commutativity",
           conedist.equal_on_samples(comm_lhs, comm_rhs, pts))

    assoc_lhs = conedist.convolve(conedist.convolve(d1, d2), d3)
    assoc_rhs = conedist.convolve(d1, conedist.convolve(d2, d3))
    pts = _generic_points(rng, assoc_lhs, 10, box)
    _check(results, "convolution associativity",
           conedist.equal_on_samples(assoc_lhs, assoc_rhs, pts))

    ident = conedist.convolve(conedist.delta((Q(0), Q(0))), assoc_lhs)
    pts = _generic_points(rng, assoc_lhs, 10, box)
    _check(results, "delta at zero is a convolution identity",
           conedist.equal_on_samples(ident, assoc_lhs, pts))

    shift = (Q(5, 7), Q(-2, 3))
    t_lhs = conedist.translate(shift, assoc_lhs)
    t_rhs = conedist.convolve(conedist.delta(shift), assoc_lhs)
    pts = _generic_points(rng, t_lhs, 10, box)
    _check(results, "translate agrees with convolution by a point mass",
           conedist.equal_on_samples(t_lhs, t_rhs, pts))

    from .rootdata import DiffOp
    op = DiffOp(Q(-2), ((Q(1), Q(1)),))
    big = conedist.convolve(d2, conedist.convolve(d1, d1))
    dt_lhs = conedist.apply_diff_op(op, conedist.translate(shift, big))
    dt_rhs = conedist.translate(shift, conedist.apply_diff_op(op, big))
    pts = _generic_points(rng, dt_lhs, 10, box)
    _check(results, "differentiation commutes with translation",
           conedist.equal_on_samples(dt_lhs, dt_rhs, pts))

    w_index = 2  # a nontrivial element
    w_lhs = conedist.weyl_pushforward(rd, w_index, conedist.convolve(d1, d2))
    w_rhs = conedist.convolve(conedist.weyl_pushforward(rd, w_index, d1),
                              conedist.weyl_pushforward(rd, w_index, d2))
    pts = _generic_points(rng, w_lhs, 10, box)
    _check(results, "Weyl pushforward is a convolution algebra map",
           conedist.equal_on_samples(w_lhs, w_rhs, pts))

    ok_density = True
    for wi in range(len(rd.weyl_elements)):
        pushed = conedist.weyl_pushforward(rd, wi, comm_lhs)
        for p in _generic_points(rng, comm_lhs, 5, box):
            if density_at(pushed, weyl_apply(rd, wi, p)) != density_at(comm_lhs, p):
                ok_density = False
    _check(results, "Weyl pushforward preserves densities", ok_density)
    return results


# --------------------------------------------------------------- series suite

def suite_series() -> List[CheckResult]:
    results: List[CheckResult] = []
    for name, builder in (("s4", builtin_s4), ("woodward_su3", builtin_woodward_su3)):
        model = builder()
        ok = all(eul_series_check(d) for d in model.data)
        _check(results, f"inverse Euler series identity for builtin {name}", ok)

    rng = random.Random(31)
    ok_random = True
    for _ in range(10):
        n_weights = rng.randint(1, 2)
        ranks = [rng.randint(1, 3) for _ in range(n_weights)]
        cap = rng.randint(0, 3)
        series = _series_monomials(ranks, cap)
        if not _series_product_is_one(ranks, cap, series):
            ok_random = False
    _check(results, "inverse Euler series identity for random synthetic data", ok_random)

    ranks, cap = [2], 3
    series = _series_monomials(ranks, cap)
    corrupted = {mono: c for mono, c in series.items()
                 if sum(e for _, e in mono) != 2}
    _check(results, "corrupted series is rejected",
           not _series_product_is_one(ranks, cap, corrupted))
    return results


# ------------------------------------------------------------- symmetry suite

def suite_symmetry() -> List[CheckResult]:
    results: List[CheckResult] = []
    model = builtin_s4()
    window = ((Q(-18, 5),), (Q(18, 5),))
    total = partial_sum(model, window)
    xs = [Q(1, 2), Q(3, 2), Q(5, 2), Q(7, 2), Q(1, 5), Q(9, 7), Q(16, 9)]
    ok_odd = all(density_at(total, (-x,)) == -density_at(total, (x,)) for x in xs)
    _check(results, "s4 densities are odd", ok_odd)
    xs_per = [Q(-5, 2), Q(-3, 2), Q(-1, 2), Q(1, 2), Q(3, 2), Q(-9, 7), Q(2, 7)]
    ok_per = all(density_at(total, (x + 2,)) == density_at(total, (x,)) for x in xs_per)
    _check(results, "s4 densities have period two", ok_per)

    wood = builtin_woodward_su3()
    rd = wood.root_datum
    win = ((Q(-11, 10), Q(-11, 10)), (Q(11, 10), Q(11, 10)))
    total2 = partial_sum(wood, win)
    base_pts = [(Q(1, 3), Q(1, 3)), (Q(3, 20), Q(1, 4)), (Q(2, 5), Q(1, 5)),
                (Q(3, 10), Q(2, 5))]
    ok_w = True
    for p in base_pts:
        dp = density_at(total2, p)
        for wi, w in enumerate(rd.weyl_elements):
            if density_at(total2, weyl_apply(rd, wi, p)) != (-1) ** w.length * dp:
                ok_w = False
    _check(results, "woodward densities are Weyl anti-symmetric", ok_w)
    return results


SUITES: Dict[str, Callable[[], List[CheckResult]]] = {
    "s4-golden": suite_s4_golden,
    "woodward-golden": suite_woodward_golden,
    "truncpow": suite_truncpow,
    "algebra": suite_algebra,
    "series": suite_series,
    "symmetry": suite_symmetry,
}


def run_suite(tag: str) -> List[CheckResult]:
    if tag == "all":
        out: List[CheckResult] = []
        for name in SUITES:
            out.extend(SUITES[name]())
        return out
    if tag not in SUITES:
        raise KeyError(tag)
    return SUITES[tag]()
