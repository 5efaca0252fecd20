"""Model file schema, loader, validator, and the builtin example spaces."""

from __future__ import annotations

import json
from fractions import Fraction as Q
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import ModelError
from .linalg import Vector, gram_pairing, is_zero, rank_of, vec
from .localize import (FixedPointDatum, Model, Wall, genericity_check, make_wall,
                       project_onto_wall)
from .rootdata import RootDatum, build_root_datum

SCHEMA_VERSION = 1


def _rat(s) -> Q:
    try:
        return Q(s)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ModelError(f"bad rational {s!r}") from exc


def _vec(xs) -> Vector:
    return tuple(_rat(c) for c in xs)


def model_to_doc(model: Model) -> dict:
    """Serialize a model to its JSON document form (rationals as 'p/q' strings)."""
    walls_list = list(model.walls)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": model.name,
        "root_datum": model.root_datum.type_tag,
        "gamma": [str(c) for c in model.gamma],
        "allow_gamma_zero": model.allow_gamma_zero,
        "lattice_basis": [[str(c) for c in v] for v in model.lattice_basis],
        "generation_bound": model.generation_bound,
        "window_default": {
            "lo": [str(c) for c in model.window_default[0]],
            "hi": [str(c) for c in model.window_default[1]],
        },
        "walls": [
            {
                "basepoint": [str(c) for c in w.basepoint],
                "directions": [[str(c) for c in u] for u in w.directions],
            }
            for w in walls_list
        ],
        "data": [
            {
                "wall": walls_list.index(d.wall),
                "weights": [
                    {"vector": [str(c) for c in a], "rank": r} for a, r in d.weights
                ],
                "chern_table": [
                    {
                        "chern": [[k, m, e] for (k, m), e in mono],
                        "xi": list(xi),
                        "value": str(value),
                    }
                    for mono, xi, value in d.chern_table
                ],
                "chern_degree_cap": d.chern_degree_cap,
                "sgn_g": d.sgn_g,
                "base_orientation": d.base_orientation,
            }
            for d in model.data
        ],
    }
    return doc


def doc_to_model(doc: dict) -> Model:
    diagnostics = validate(doc)
    if diagnostics:
        raise ModelError("invalid model: " + "; ".join(diagnostics))
    rd = build_root_datum(doc["root_datum"])
    gamma = _vec(doc["gamma"])
    walls = tuple(
        make_wall(rd, _vec(w["basepoint"]), [_vec(u) for u in w["directions"]])
        for w in doc["walls"]
    )
    data = []
    for entry in doc["data"]:
        wall = walls[entry["wall"]]
        weights = tuple(
            (_vec(w["vector"]), int(w["rank"])) for w in entry["weights"]
        )
        table = tuple(
            (
                tuple(sorted(((int(k), int(m)), int(e)) for k, m, e in row["chern"])),
                tuple(int(j) for j in row["xi"]),
                _rat(row["value"]),
            )
            for row in entry["chern_table"]
        )
        beta = project_onto_wall(rd, wall, gamma)
        data.append(FixedPointDatum(
            wall=wall,
            beta=beta,
            weights=weights,
            chern_table=table,
            chern_degree_cap=int(entry["chern_degree_cap"]),
            sgn_g=int(entry["sgn_g"]),
            base_orientation=int(entry["base_orientation"]),
        ))
    window = (_vec(doc["window_default"]["lo"]), _vec(doc["window_default"]["hi"]))
    return Model(
        root_datum=rd,
        gamma=gamma,
        walls=walls,
        data=tuple(data),
        lattice_basis=tuple(_vec(v) for v in doc["lattice_basis"]),
        generation_bound=int(doc["generation_bound"]),
        window_default=window,
        allow_gamma_zero=bool(doc.get("allow_gamma_zero", False)),
        name=str(doc.get("name", "")),
    )


def validate(doc: dict) -> List[str]:
    """Full diagnostic pass over a model document; empty list means valid."""
    out: List[str] = []
    if doc.get("schema_version") != SCHEMA_VERSION:
        return [f"schema_version must be {SCHEMA_VERSION}"]
    tag = doc.get("root_datum")
    try:
        rd = build_root_datum(tag)
    except ValueError as exc:
        return [str(exc)]
    n = rd.rank

    def check_vec(xs, path) -> Optional[Vector]:
        try:
            v = _vec(xs)
        except ModelError as exc:
            out.append(f"{path}: {exc}")
            return None
        if len(v) != n:
            out.append(f"{path}: expected {n} coordinates")
            return None
        return v

    gamma = check_vec(doc.get("gamma", []), "gamma")
    for i, row in enumerate(doc.get("lattice_basis", [])):
        check_vec(row, f"lattice_basis[{i}]")
    if not doc.get("lattice_basis"):
        out.append("lattice_basis: at least one generator required")
    if not isinstance(doc.get("generation_bound"), int) or doc["generation_bound"] < 1:
        out.append("generation_bound: positive integer required")
    win = doc.get("window_default", {})
    check_vec(win.get("lo", []), "window_default.lo")
    check_vec(win.get("hi", []), "window_default.hi")

    walls = doc.get("walls", [])
    parsed_walls = []
    for i, w in enumerate(walls):
        base = check_vec(w.get("basepoint", []), f"walls[{i}].basepoint")
        dirs = []
        for j, u in enumerate(w.get("directions", [])):
            vu = check_vec(u, f"walls[{i}].directions[{j}]")
            if vu is not None:
                dirs.append(vu)
        if dirs and rank_of(dirs) != len(dirs):
            out.append(f"walls[{i}]: dependent directions")
        parsed_walls.append((base, tuple(dirs)))

    for i, entry in enumerate(doc.get("data", [])):
        widx = entry.get("wall")
        if not isinstance(widx, int) or not 0 <= widx < len(walls):
            out.append(f"data[{i}].wall: index out of range")
            continue
        base, dirs = parsed_walls[widx]
        ranks = []
        for j, wrow in enumerate(entry.get("weights", [])):
            a = check_vec(wrow.get("vector", []), f"data[{i}].weights[{j}]")
            r = wrow.get("rank")
            if not isinstance(r, int) or r < 1:
                out.append(f"data[{i}].weights[{j}].rank: positive integer required")
                r = 1
            ranks.append(r)
            if a is None:
                continue
            if is_zero(a):
                out.append(f"data[{i}].weights[{j}]: weight is zero")
            for u in dirs:
                if gram_pairing(rd.dual_gram, a, u) != 0:
                    out.append(
                        f"data[{i}].weights[{j}]: weight {tuple(map(str, a))} not "
                        f"orthogonal to wall direction {tuple(map(str, u))}")
        cap = entry.get("chern_degree_cap")
        if not isinstance(cap, int) or cap < 0:
            out.append(f"data[{i}].chern_degree_cap: nonnegative integer required")
            cap = 0
        if entry.get("sgn_g") not in (1, -1):
            out.append(f"data[{i}].sgn_g: must be +1 or -1")
        if entry.get("base_orientation") not in (1, -1):
            out.append(f"data[{i}].base_orientation: must be +1 or -1")
        for j, row in enumerate(entry.get("chern_table", [])):
            degree = 0
            for item in row.get("chern", []):
                if len(item) != 3:
                    out.append(f"data[{i}].chern_table[{j}]: bad chern index")
                    continue
                k, m, e = item
                if not 0 <= k < len(ranks):
                    out.append(f"data[{i}].chern_table[{j}]: weight index {k} out of range")
                elif not 1 <= m <= ranks[k]:
                    out.append(
                        f"data[{i}].chern_table[{j}]: Chern degree {m} exceeds rank {ranks[k]}")
                degree += int(m) * int(e)
            if degree > cap:
                out.append(
                    f"data[{i}].chern_table[{j}]: total Chern degree {degree} above cap {cap}")
            if len(row.get("xi", [])) != len(dirs):
                out.append(
                    f"data[{i}].chern_table[{j}]: xi exponent length must be {len(dirs)}")
            try:
                _rat(row.get("value"))
            except ModelError:
                out.append(f"data[{i}].chern_table[{j}].value: bad rational")
    return out


def load_model(path: Union[str, Path]) -> Model:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelError(f"cannot parse model file {path}: {exc}") from exc
    model = doc_to_model(doc)
    ok, diagnostics = genericity_check(model)
    if not ok:
        raise ModelError("model fails genericity: " + "; ".join(diagnostics))
    return model


def save_model(model: Model, path: Union[str, Path]) -> None:
    Path(path).write_text(
        json.dumps(model_to_doc(model), indent=2, sort_keys=True) + "\n",
        encoding="utf-8")


def builtin_s4() -> Model:
    """Four-sphere model: rank 1, alternating point data on the integers.

    The two point walls in the fundamental domain carry opposite signs for the
    Euler factor; their lattice translates reproduce the alternating step
    series, and the full-space wall carries the unit central contribution.
    """
    rd = build_root_datum("A1")
    gamma = vec(Q(1, 4))
    wall0 = make_wall(rd, vec(0), [])
    wall1 = make_wall(rd, vec(1), [])
    central = make_wall(rd, vec(0), [vec(1)])
    weights = ((vec(1), 1), (vec(-1), 1))
    point_table = (((), (), Q(1)),)
    central_table = (((), (0,), Q(1)),)

    def datum(wall, beta, sgn):
        return FixedPointDatum(wall=wall, beta=beta, weights=weights,
                               chern_table=point_table, chern_degree_cap=0,
                               sgn_g=sgn, base_orientation=1)

    central_datum = FixedPointDatum(wall=central, beta=gamma, weights=(),
                                    chern_table=central_table, chern_degree_cap=0,
                                    sgn_g=1, base_orientation=1)
    return Model(
        root_datum=rd,
        gamma=gamma,
        walls=(wall0, wall1, central),
        data=(datum(wall0, vec(0), 1), datum(wall1, vec(1), -1), central_datum),
        lattice_basis=(vec(2),),
        generation_bound=4096,
        window_default=(vec(Q(-13, 5)), vec(Q(18, 5))),
        allow_gamma_zero=False,
        name="s4",
    )


def builtin_woodward_su3() -> Model:
    """Multiplicity-free rank-2 model with three torus-fixed 2-tori and no fixed points.

    One fundamental line wall at pairing 1/2 against the highest root carries a
    rank-one weight; lattice translates and signed Weyl images generate the
    hexagonal family.  The central contribution is identically zero.
    """
    rd = build_root_datum("A2")
    gamma = vec(0, 0)
    # Wall {x : <theta, x> = 1/2} with direction orthogonal to theta = (1,1).
    wall_a = make_wall(rd, vec(Q(1, 4), Q(1, 4)), [vec(1, -1)])
    central = make_wall(rd, vec(0, 0), [vec(1, 0), vec(0, 1)])
    datum_a = FixedPointDatum(
        wall=wall_a,
        beta=vec(Q(1, 4), Q(1, 4)),
        weights=((vec(Q(1, 2), Q(1, 2)), 1),),
        chern_table=(((), (0,), Q(1)),),
        chern_degree_cap=0,
        sgn_g=1,
        base_orientation=-1,
    )
    central_datum = FixedPointDatum(
        wall=central,
        beta=gamma,
        weights=(),
        chern_table=(((), (0, 0), Q(0)),),
        chern_degree_cap=0,
        sgn_g=1,
        base_orientation=1,
    )
    return Model(
        root_datum=rd,
        gamma=gamma,
        walls=(wall_a, central),
        data=(datum_a, central_datum),
        lattice_basis=(vec(2, -1), vec(-1, 2)),
        generation_bound=4096,
        window_default=(vec(Q(-11, 10), Q(-11, 10)), vec(Q(11, 10), Q(11, 10))),
        allow_gamma_zero=True,
        name="woodward_su3",
    )


BUILTINS = {
    "s4": builtin_s4,
    "woodward": builtin_woodward_su3,
    "woodward_su3": builtin_woodward_su3,
}


def resolve_model(spec: str) -> Model:
    """Resolve a builtin name or a model file path."""
    if spec in BUILTINS:
        return BUILTINS[spec]()
    return load_model(spec)
