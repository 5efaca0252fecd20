"""Exact multivariate truncated powers: densities of iterated ray convolutions.

A configuration of nonzero rational covectors a_1..a_m determines the measure
pushed forward from Lebesgue measure on the positive orthant under
t -> sum_i t_i a_i.  When the vectors span, the measure has a piecewise
polynomial density; this module evaluates it exactly at generic rational
points, differentiates configurations, and provides a Monte Carlo
fiber-volume oracle for testing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as Q
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DirectionOutsideSpan, NonGenericPoint, NotAbsolutelyContinuous
from .linalg import (Vector, det, dot, independent_subset, is_zero, lp_feasible,
                     rank_of, row_space_key, solve, vsub)


@dataclass(frozen=True)
class VectorConfig:
    """Multiset of nonzero covectors, stored multiplicity-expanded and sorted."""

    ambient_dim: int
    vectors: Tuple[Vector, ...]

    @staticmethod
    def make(ambient_dim: int, vectors: Sequence[Sequence]) -> "VectorConfig":
        vs = tuple(sorted(tuple(Q(c) for c in v) for v in vectors))
        for v in vs:
            if len(v) != ambient_dim:
                raise ValueError("vector dimension mismatch")
            if is_zero(v):
                raise ValueError("zero vector in configuration")
        return VectorConfig(ambient_dim, vs)

    def remove_one(self, v: Vector) -> "VectorConfig":
        vs = list(self.vectors)
        vs.remove(v)
        return VectorConfig(self.ambient_dim, tuple(vs))

    def spans(self) -> bool:
        return rank_of(self.vectors) == self.ambient_dim

    def is_pointed(self) -> bool:
        """No nonzero nonnegative combination of the vectors vanishes."""
        if not self.vectors:
            return True
        n, m = self.ambient_dim, len(self.vectors)
        rows = [[self.vectors[j][i] for j in range(m)] for i in range(n)]
        rows.append([Q(1)] * m)
        rhs = [Q(0)] * n + [Q(1)]
        return lp_feasible(rows, rhs) is None


def cone_contains(cfg: VectorConfig, x: Sequence[Q]) -> bool:
    """Exact membership of x in the closed nonnegative span of the vectors."""
    x = tuple(Q(c) for c in x)
    if is_zero(x):
        return True
    if not cfg.vectors:
        return False
    rows = [[v[i] for v in cfg.vectors] for i in range(cfg.ambient_dim)]
    return lp_feasible(rows, list(x)) is not None


def _wall_subsets(cfg: VectorConfig) -> List[Tuple[Vector, ...]]:
    """Distinct independent (n-1)-subsets spanning the wall hyperplanes."""
    n = cfg.ambient_dim
    seen = set()
    out = []
    for subset in itertools.combinations(sorted(set(cfg.vectors)), n - 1):
        if rank_of(subset) == n - 1:
            key = row_space_key(subset)
            if key not in seen:
                seen.add(key)
                out.append(subset)
    return out


def _on_wall(cfg: VectorConfig, x: Vector) -> Optional[Tuple[Vector, ...]]:
    for subset in _wall_subsets(cfg):
        if rank_of(list(subset) + [x]) == cfg.ambient_dim - 1:
            return subset
    return None


def trunc_power_eval(cfg: VectorConfig, x: Sequence[Q]) -> Q:
    """Exact density at a generic point, by peel-and-integrate recursion."""
    x = tuple(Q(c) for c in x)
    if len(x) != cfg.ambient_dim:
        raise ValueError("dimension mismatch")
    if not cfg.spans():
        raise NotAbsolutelyContinuous(
            f"configuration of rank {rank_of(cfg.vectors)} in dimension {cfg.ambient_dim}")
    if not cfg.is_pointed():
        raise NotAbsolutelyContinuous("configuration has a lineality direction")
    wall = _on_wall(cfg, x)
    if wall is not None:
        raise NonGenericPoint(f"point {x} lies on the wall spanned by {wall}")
    return _eval(cfg, x)


def _eval(cfg: VectorConfig, x: Vector) -> Q:
    # Preconditions: cfg spans and is pointed, x off all walls of cfg.
    if not cone_contains(cfg, x):
        return Q(0)
    n, m = cfg.ambient_dim, len(cfg.vectors)
    if m == n:
        return Q(1) / abs(det(cfg.vectors))
    basis = independent_subset(cfg.vectors)
    peel_idx = next(i for i in range(m) if i not in basis)
    a = cfg.vectors[peel_idx]
    rest = VectorConfig(n, cfg.vectors[:peel_idx] + cfg.vectors[peel_idx + 1:])
    # Crossing times of the ray x - t*a with the walls of the remaining config.
    crossings = set()
    for subset in _wall_subsets(rest):
        d_x = det(list(subset) + [x])
        d_a = det(list(subset) + [a])
        if d_a != 0:
            t = d_x / d_a
            if t > 0:
                crossings.add(t)
    ts = sorted(crossings)
    degree = len(rest.vectors) - n
    total = Q(0)
    bounds = [Q(0)] + ts
    for lo, hi in zip(bounds, bounds[1:]):
        mid = (lo + hi) / 2
        if not cone_contains(rest, vsub(x, tuple(mid * c for c in a))):
            continue
        nodes = [lo + (hi - lo) * Q(k + 1, degree + 2) for k in range(degree + 1)]
        values = [_eval(rest, vsub(x, tuple(node * c for c in a))) for node in nodes]
        total += _integrate_poly(nodes, values, lo, hi)
    # Pointedness guarantees the ray eventually leaves the support cone.
    tail = (ts[-1] if ts else Q(0)) + 1
    assert not cone_contains(rest, vsub(x, tuple(tail * c for c in a)))
    return total


def _integrate_poly(nodes: Sequence[Q], values: Sequence[Q], lo: Q, hi: Q) -> Q:
    """Integrate the interpolating polynomial of (nodes, values) over [lo, hi]."""
    d = len(nodes) - 1
    rows = [tuple(node ** k for k in range(d + 1)) for node in nodes]
    cols = [tuple(rows[i][k] for i in range(d + 1)) for k in range(d + 1)]
    coeffs = solve(cols, tuple(values))
    assert coeffs is not None
    return sum((c * (hi ** (k + 1) - lo ** (k + 1)) / (k + 1) for k, c in enumerate(coeffs)),
               Q(0))


def trunc_power_derivative(cfg: VectorConfig, v: Sequence[Q]) -> List[Tuple[Q, VectorConfig]]:
    """Directional derivative: write v over the first independent subset and peel.

    Returns pairs (c_i, cfg minus one copy of a_i); an empty configuration
    marks a point mass at the origin for the caller to consume.
    """
    v = tuple(Q(c) for c in v)
    basis_idx = independent_subset(cfg.vectors)
    basis = [cfg.vectors[i] for i in basis_idx]
    coeffs = solve(basis, v) if basis else None
    if coeffs is None:
        raise DirectionOutsideSpan(f"direction {v} outside the span of the configuration")
    out = []
    for c, b in zip(coeffs, basis):
        if c != 0:
            out.append((c, cfg.remove_one(b)))
    return out


def _positive_functional(cfg: VectorConfig) -> Vector:
    """Rational c with <c, a_i> >= 1 for every vector (exists iff pointed)."""
    n, m = cfg.ambient_dim, len(cfg.vectors)
    # Variables: c = u - w with u, w >= 0, plus slacks s_i >= 0.
    rows = []
    for i, a in enumerate(cfg.vectors):
        row = list(a) + [-q for q in a] + [Q(-1) if j == i else Q(0) for j in range(m)]
        rows.append(row)
    sol = lp_feasible(rows, [Q(1)] * m)
    if sol is None:
        raise NotAbsolutelyContinuous("configuration has a lineality direction")
    return tuple(sol[i] - sol[n + i] for i in range(n))


def mc_fiber_volume(cfg: VectorConfig, x: Sequence[Q], n_samples: int, seed: int) -> float:
    """Monte Carlo estimate of the density via the fiber polytope volume.

    Deterministic for a fixed seed; normalized so that the two-fold ray
    convolution in one dimension has density x at x > 0.
    """
    x = tuple(Q(c) for c in x)
    if not cfg.spans():
        raise NotAbsolutelyContinuous(
            f"configuration of rank {rank_of(cfg.vectors)} in dimension {cfg.ambient_dim}")
    if not cfg.is_pointed():
        raise NotAbsolutelyContinuous("configuration has a lineality direction")
    if _on_wall(cfg, x) is not None:
        raise NonGenericPoint(f"point {x} lies on a wall")
    if not cone_contains(cfg, x):
        return 0.0
    n, m = cfg.ambient_dim, len(cfg.vectors)
    basis_idx = independent_subset(cfg.vectors)
    free_idx = [i for i in range(m) if i not in basis_idx]
    basis = [cfg.vectors[i] for i in basis_idx]
    det_b = abs(det(basis))
    if not free_idx:
        return float(Q(1) / det_b)
    c = _positive_functional(cfg)
    cx = dot(c, x)
    # Per-coordinate caps: t_i <c, a_i> <= <c, x> on the fiber polytope.
    caps = [cx / dot(c, cfg.vectors[i]) for i in free_idx]
    if any(cap <= 0 for cap in caps):
        return 0.0
    # Integrate the widest free coordinate exactly per sample (its feasible
    # set is an interval); sample the remaining free coordinates uniformly.
    last_pos = max(range(len(free_idx)), key=lambda i: caps[i])
    last = free_idx[last_pos]
    others = [i for i in free_idx if i != last]
    other_caps = [cap for i, cap in zip(free_idx, caps) if i != last]
    # Exact interval data: t_basis = B^{-1}(x - A_other t - a_last s) >= 0.
    w = solve(basis, cfg.vectors[last])
    assert w is not None
    pos_rows = [i for i, wi in enumerate(w) if wi > 0]
    neg_rows = [i for i, wi in enumerate(w) if wi < 0]
    zero_rows = [i for i, wi in enumerate(w) if wi == 0]
    b_mat = np.array([[float(q) for q in b] for b in basis]).T
    b_inv = np.linalg.inv(b_mat)
    w_f = np.array([float(q) for q in w])
    cap_last = float(caps[last_pos])
    if not others:
        # One free coordinate: the estimate is an exact interval length.
        v = b_inv @ np.array([float(q) for q in x])
        lo, hi = 0.0, cap_last
        for i in pos_rows:
            hi = min(hi, v[i] / w_f[i])
        for i in neg_rows:
            lo = max(lo, v[i] / w_f[i])
        if any(v[i] < 0 for i in zero_rows):
            return 0.0
        return max(hi - lo, 0.0) / float(det_b)
    rng = np.random.default_rng(seed)
    t_free = rng.random((n_samples, len(others))) * np.array(
        [float(cap) for cap in other_caps])
    a_free = np.array([[float(q) for q in cfg.vectors[i]] for i in others])
    v = (np.array([float(q) for q in x])[None, :] - t_free @ a_free) @ b_inv.T
    hi = np.full(n_samples, cap_last)
    lo = np.zeros(n_samples)
    feasible = np.ones(n_samples, dtype=bool)
    for i in pos_rows:
        hi = np.minimum(hi, v[:, i] / w_f[i])
    for i in neg_rows:
        lo = np.maximum(lo, v[:, i] / w_f[i])
    for i in zero_rows:
        feasible &= v[:, i] >= 0.0
    lengths = np.clip(hi - lo, 0.0, None) * feasible
    box_volume = 1.0
    for cap in other_caps:
        box_volume *= float(cap)
    return box_volume * float(lengths.mean()) / float(det_b)
