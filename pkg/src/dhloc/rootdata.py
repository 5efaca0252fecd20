"""Root systems, Weyl groups, and lattices for the rank <= 2 Cartan algebras.

Everything lives in dual coordinates: points and covectors are tuples of
rationals expressed in the weight basis, and the basic inner product is the
rational Gram matrix ``dual_gram``.  The identification of the algebra with
its dual is baked in, so ``pairing`` is always the dual basic inner product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from typing import List, Sequence, Tuple

from .linalg import Matrix, Vector, gram_pairing, is_zero, mat_vec, vec


@dataclass(frozen=True)
class WeylElement:
    matrix: Matrix  # acts on coordinate column vectors
    length: int


@dataclass(frozen=True)
class RootDatum:
    rank: int
    roots: Tuple[Vector, ...]
    positive_roots: Tuple[Vector, ...]
    dual_gram: Matrix
    weight_lattice_basis: Tuple[Vector, ...]
    integral_lattice_basis: Tuple[Vector, ...]
    weyl_elements: Tuple[WeylElement, ...]
    type_tag: str

    def pairing(self, lam: Vector, x: Vector) -> Q:
        """Dual basic inner product of two covectors."""
        if len(lam) != self.rank or len(x) != self.rank:
            raise ValueError("dimension mismatch")
        return gram_pairing(self.dual_gram, lam, x)

    def norm_sq(self, x: Vector) -> Q:
        return self.pairing(x, x)


@dataclass(frozen=True)
class DiffOp:
    """Constant-coefficient operator c * prod_k (directional derivative along alpha_k)."""

    coefficient: Q
    directions: Tuple[Vector, ...]

    def is_identity(self) -> bool:
        return not self.directions and self.coefficient == 1

    def __post_init__(self):
        if any(is_zero(d) for d in self.directions):
            raise ValueError("zero derivative direction")


def _weyl_closure(rank: int, generators: Sequence[Matrix], roots: Sequence[Vector],
                  positive: Sequence[Vector]) -> Tuple[WeylElement, ...]:
    identity = tuple(tuple(Q(1) if i == j else Q(0) for j in range(rank)) for i in range(rank))
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for m in frontier:
            for g in generators:
                prod = tuple(tuple(sum((g[i][k] * m[k][j] for k in range(rank)), Q(0))
                                   for j in range(rank)) for i in range(rank))
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    pos_set = set(positive)
    elements = []
    for m in seen:
        length = sum(1 for a in positive if mat_vec(m, a) not in pos_set)
        elements.append(WeylElement(m, length))
    elements.sort(key=lambda w: (w.length, w.matrix))
    return tuple(elements)


def build_root_datum(type_tag: str) -> RootDatum:
    """Construct the A1 or A2 root datum in weight-basis coordinates.

    A1 is normalized so the positive root is (2), the alcove is [0,1], and the
    integral lattice is generated by (2).  A2 uses fundamental-weight
    coordinates; the alcove is the triangle with vertices 0, (1,0), (0,1).
    """
    if type_tag == "A1":
        alpha = vec(2)
        gram = (vec(Q(1, 2)),)
        gens = ((vec(-1),),)
        roots = (alpha, vec(-2))
        positive = (alpha,)
        weyl = _weyl_closure(1, gens, roots, positive)
        return RootDatum(
            rank=1,
            roots=roots,
            positive_roots=positive,
            dual_gram=gram,
            weight_lattice_basis=(vec(1),),
            integral_lattice_basis=(vec(2),),
            weyl_elements=weyl,
            type_tag="A1",
        )
    if type_tag == "A2":
        a1 = vec(2, -1)
        a2 = vec(-1, 2)
        theta = vec(1, 1)
        positive = (a1, a2, theta)
        roots = positive + tuple(vec(-x, -y) for x, y in positive)
        gram = (vec(Q(2, 3), Q(1, 3)), vec(Q(1, 3), Q(2, 3)))
        s1 = (vec(-1, 0), vec(1, 1))
        s2 = (vec(1, 1), vec(0, -1))
        weyl = _weyl_closure(2, (s1, s2), roots, positive)
        return RootDatum(
            rank=2,
            roots=roots,
            positive_roots=positive,
            dual_gram=gram,
            weight_lattice_basis=(vec(1, 0), vec(0, 1)),
            integral_lattice_basis=(a1, a2),
            weyl_elements=weyl,
            type_tag="A2",
        )
    raise ValueError(f"unsupported root datum type: {type_tag!r}")


def pairing(rd: RootDatum, lam: Vector, x: Vector) -> Q:
    return rd.pairing(lam, x)


def stabilizer_roots(rd: RootDatum, beta: Vector) -> List[Vector]:
    """Roots alpha with integral pairing against beta (stabilizer of exp(beta))."""
    if len(beta) != rd.rank:
        raise ValueError("dimension mismatch")
    return [a for a in rd.roots if rd.pairing(a, beta).denominator == 1]


def euler_operator(rd: RootDatum, beta: Vector, sgn_g: int) -> DiffOp:
    """Signed product of derivatives along the positive stabilizer roots."""
    if sgn_g not in (1, -1):
        raise ValueError("sgn_g must be +1 or -1")
    pos = tuple(a for a in rd.positive_roots if rd.pairing(a, beta).denominator == 1)
    return DiffOp(Q(sgn_g) * Q(-1) ** len(pos), pos)


def weyl_apply(rd: RootDatum, w_index: int, x: Vector) -> Vector:
    if not 0 <= w_index < len(rd.weyl_elements):
        raise IndexError("Weyl element index out of range")
    return mat_vec(rd.weyl_elements[w_index].matrix, x)


def stiefel_face_hyperplanes(rd: RootDatum, beta: Vector) -> List[Tuple[Vector, int]]:
    """All integer-level root hyperplanes through beta, as (root, level) pairs."""
    out = []
    for a in rd.roots:
        p = rd.pairing(a, beta)
        if p.denominator == 1:
            out.append((a, int(p)))
    return out


def alcove_contains(rd: RootDatum, x: Vector, strict: bool = False) -> bool:
    """Membership in the fundamental alcove (simple-root and highest-root walls)."""
    if rd.type_tag == "A1":
        t = x[0]
        return (0 < t < 1) if strict else (0 <= t <= 1)
    simples = [vec(2, -1), vec(-1, 2)]
    theta = vec(1, 1)
    vals = [rd.pairing(a, x) for a in simples] + [1 - rd.pairing(theta, x)]
    return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)
