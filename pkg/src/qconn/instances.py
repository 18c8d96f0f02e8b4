"""JSON instance files: parsing with full validation, and serialization.

All numbers travel as rational strings ("0", "3/2", "inf"); indices refer
to the declared point order.  Parsing validates the kind-specific schema
and the semantic invariants (triangle inequality, coherence, ...) before
any computation, so a loaded instance is always usable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .bitopology import AlexandrovTopology, BitopSpace
from .completion import EventuallyPeriodicSeq
from .errors import ParseError, QconnError, QpmValidationError, SchemaError
from .gauges import AsymNormSample, QuasiPseudoMetric, WeightedDigraph, validate_qpm
from .modular import (
    HOMOGENEOUS,
    POWER,
    STEP,
    OrliczSpec,
    PiecewiseConvex,
    QuasiModularFamily,
    ScaleGauge,
)
from .morphisms import PointMap
from .numbers import ExtNonNeg

KINDS = ("quasi_metric", "digraph", "bitopology", "modular_family", "orlicz",
         "asym_norm_sample", "map", "sequence")


def _need(obj: dict, key: str, typ=None):
    if key not in obj:
        raise SchemaError(f"missing field {key!r}")
    val = obj[key]
    if typ is not None and not isinstance(val, typ):
        raise SchemaError(f"field {key!r} has wrong type {type(val).__name__}")
    return val


def _rational(text, field: str) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"field {field!r}: bad rational {text!r}") from exc


def _extnonneg(text, field: str) -> ExtNonNeg:
    try:
        return ExtNonNeg(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"field {field!r}: bad value {text!r}") from exc


def _labels(obj: dict, key: str) -> tuple[str, ...]:
    raw = _need(obj, key, list)
    labels = tuple(str(p) for p in raw)
    if len(set(labels)) != len(labels):
        raise SchemaError(f"field {key!r}: duplicate labels")
    return labels


def _index_list(raw, n: int, field: str) -> list[int]:
    if not isinstance(raw, list):
        raise SchemaError(f"field {field!r} must be a list")
    out = []
    for v in raw:
        if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
            raise SchemaError(f"field {field!r}: index {v!r} out of range")
        out.append(v)
    return out


def parse_instance(obj: Any):
    """Dispatch on the "kind" tag; returns (kind, value)."""
    if not isinstance(obj, dict):
        raise SchemaError("instance must be a JSON object")
    kind = _need(obj, "kind", str)
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}")
    try:
        return kind, _PARSERS[kind](obj)
    except (ParseError, SchemaError):
        raise
    except QpmValidationError as exc:
        raise SchemaError(f"invalid quasi_metric: {exc}") from exc
    except QconnError as exc:
        raise SchemaError(f"invalid {kind}: {exc}") from exc
    except (ValueError, TypeError, KeyError, AssertionError) as exc:
        raise SchemaError(str(exc)) from exc


def load_instance_text(text: str):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    return parse_instance(obj)


def load_instance(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return load_instance_text(text)


# -- per-kind parsers -------------------------------------------------------


def _parse_quasi_metric(obj: dict) -> QuasiPseudoMetric:
    points = _labels(obj, "points")
    dist = _need(obj, "dist", list)
    if len(dist) != len(points):
        raise SchemaError("dist must have one row per point")
    matrix = []
    for r, row in enumerate(dist):
        if not isinstance(row, list) or len(row) != len(points):
            raise SchemaError(f"dist row {r} has wrong length")
        matrix.append([_extnonneg(v, f"dist[{r}]") for v in row])
    tol = None
    if obj.get("tol") is not None:
        tol = _rational(obj["tol"], "tol")
        if tol < 0:
            raise SchemaError("tol must be nonnegative")
    return validate_qpm(matrix, points=points, tol=tol)


def _parse_digraph(obj: dict) -> WeightedDigraph:
    vertices = _labels(obj, "vertices")
    edges_raw = _need(obj, "edges", list)
    edges = []
    for e, item in enumerate(edges_raw):
        if not isinstance(item, list) or len(item) != 3:
            raise SchemaError(f"edge {e} must be [from, to, weight]")
        u, v, w = str(item[0]), str(item[1]), _extnonneg(item[2], f"edges[{e}]")
        if w.is_inf:
            raise SchemaError(f"edge {e} has infinite weight")
        edges.append((u, v, w))
    return WeightedDigraph(vertices=vertices, edges=tuple(edges))


def _parse_bitopology(obj: dict) -> BitopSpace:
    points = _labels(obj, "points")
    n = len(points)
    fwd_raw = _need(obj, "forward_min_nbhd", list)
    bwd_raw = _need(obj, "backward_min_nbhd", list)
    if len(fwd_raw) != n or len(bwd_raw) != n:
        raise SchemaError("need one neighborhood per point on both sides")
    fwd = [_index_list(s, n, "forward_min_nbhd") for s in fwd_raw]
    bwd = [_index_list(s, n, "backward_min_nbhd") for s in bwd_raw]
    return BitopSpace(forward=AlexandrovTopology.from_sets(points, fwd),
                      backward=AlexandrovTopology.from_sets(points, bwd))


def _parse_gauge(obj: dict, field: str) -> ScaleGauge:
    if not isinstance(obj, dict):
        raise SchemaError(f"{field}: gauge must be an object")
    kind = _need(obj, "kind", str)
    if kind == STEP:
        bps = [_rational(b, f"{field}.breakpoints") for b in _need(obj, "breakpoints", list)]
        values = [_extnonneg(v, f"{field}.values") for v in _need(obj, "values", list)]
        return ScaleGauge.step(bps, values)
    if kind == HOMOGENEOUS:
        return ScaleGauge.homogeneous(_extnonneg(_need(obj, "coeff"), f"{field}.coeff"))
    if kind == POWER:
        return ScaleGauge.power(_extnonneg(_need(obj, "coeff"), f"{field}.coeff"),
                                _rational(_need(obj, "exponent"), f"{field}.exponent"))
    raise SchemaError(f"{field}: unknown gauge kind {kind!r}")


def _parse_modular_family(obj: dict) -> QuasiModularFamily:
    points = _labels(obj, "points")
    n = len(points)
    rows_raw = _need(obj, "gauges", list)
    if len(rows_raw) != n:
        raise SchemaError("gauges must have one row per point")
    rows = []
    for r, row in enumerate(rows_raw):
        if not isinstance(row, list) or len(row) != n:
            raise SchemaError(f"gauges row {r} has wrong length")
        rows.append(tuple(_parse_gauge(g, f"gauges[{r}][{c}]")
                          for c, g in enumerate(row)))
    return QuasiModularFamily(points=points, gauges=tuple(rows))


def _parse_phi(obj: dict, field: str) -> PiecewiseConvex:
    if not isinstance(obj, dict):
        raise SchemaError(f"{field}: phi must be an object")

    def frs(key):
        return tuple(_rational(v, f"{field}.{key}") for v in obj.get(key, []))

    pos_slopes = frs("pos_slopes") or (Fraction(1),)
    return PiecewiseConvex(pos_breaks=frs("pos_breakpoints"),
                           pos_slopes=pos_slopes,
                           neg_breaks=frs("neg_breakpoints"),
                           neg_slopes=frs("neg_slopes"))


def _parse_orlicz(obj: dict) -> OrliczSpec:
    atoms_raw = _need(obj, "atoms", list)
    atoms = []
    for a, item in enumerate(atoms_raw):
        if not isinstance(item, list) or len(item) != 2:
            raise SchemaError(f"atom {a} must be [label, weight]")
        weight = _rational(item[1], f"atoms[{a}]")
        if weight <= 0:
            raise SchemaError(f"atom {a} weight must be positive")
        atoms.append((str(item[0]), weight))
    phi = tuple(_parse_phi(p, f"phi[{t}]") for t, p in enumerate(_need(obj, "phi", list)))
    functions = tuple(
        tuple(_rational(v, f"functions[{r}]") for v in row)
        for r, row in enumerate(_need(obj, "functions", list))
    )
    scaling_raw = _need(obj, "scaling", dict)
    skind = _need(scaling_raw, "kind", str)
    if skind == HOMOGENEOUS:
        scaling: tuple = (HOMOGENEOUS,)
    elif skind == POWER:
        scaling = (POWER, _rational(_need(scaling_raw, "p"), "scaling.p"))
    else:
        raise SchemaError(f"unknown scaling kind {skind!r}")
    return OrliczSpec(atoms=tuple(atoms), phi=phi, functions=functions,
                      scaling=scaling)


def _parse_asym_norm_sample(obj: dict) -> AsymNormSample:
    dim = _need(obj, "dimension", int)
    p = _rational(_need(obj, "p"), "p")
    points = tuple(
        tuple(_rational(v, f"points[{r}]") for v in row)
        for r, row in enumerate(_need(obj, "points", list))
    )
    return AsymNormSample(dimension=dim, p=p, points=points)


def _parse_map(obj: dict) -> PointMap:
    src = _labels(obj, "source_points")
    tgt = _labels(obj, "target_points")
    assignment = tuple(_index_list(_need(obj, "assignment", list), len(tgt),
                                   "assignment"))
    if len(assignment) != len(src):
        raise SchemaError("assignment must be total on the source")
    return PointMap(source_points=src, target_points=tgt, assignment=assignment)


def _parse_sequence(obj: dict) -> EventuallyPeriodicSeq:
    pre = _need(obj, "preperiod", list)
    per = _need(obj, "period", list)
    for v in pre + per:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise SchemaError(f"sequence index {v!r} must be a nonnegative integer")
    if not per:
        raise SchemaError("period must be nonempty")
    return EventuallyPeriodicSeq(preperiod=tuple(pre), period=tuple(per))


_PARSERS = {
    "quasi_metric": _parse_quasi_metric,
    "digraph": _parse_digraph,
    "bitopology": _parse_bitopology,
    "modular_family": _parse_modular_family,
    "orlicz": _parse_orlicz,
    "asym_norm_sample": _parse_asym_norm_sample,
    "map": _parse_map,
    "sequence": _parse_sequence,
}


# -- serialization ----------------------------------------------------------


def dump_instance(value) -> dict:
    if isinstance(value, QuasiPseudoMetric):
        doc = {
            "kind": "quasi_metric",
            "points": list(value.points),
            "dist": [[str(v) for v in row] for row in value.dist],
        }
        if value.tol is not None:
            doc["tol"] = str(value.tol)
        return doc
    if isinstance(value, WeightedDigraph):
        return {
            "kind": "digraph",
            "vertices": list(value.vertices),
            "edges": [[u, v, str(w)] for u, v, w in value.edges],
        }
    if isinstance(value, BitopSpace):
        return {
            "kind": "bitopology",
            "points": list(value.points),
            "forward_min_nbhd": [sorted(value.forward.min_nbhd(x))
                                 for x in range(value.n)],
            "backward_min_nbhd": [sorted(value.backward.min_nbhd(x))
                                  for x in range(value.n)],
        }
    if isinstance(value, QuasiModularFamily):
        return {
            "kind": "modular_family",
            "points": list(value.points),
            "gauges": [[_dump_gauge(g) for g in row] for row in value.gauges],
        }
    if isinstance(value, OrliczSpec):
        return {
            "kind": "orlicz",
            "atoms": [[label, str(w)] for label, w in value.atoms],
            "phi": [_dump_phi(p) for p in value.phi],
            "functions": [[str(v) for v in row] for row in value.functions],
            "scaling": ({"kind": HOMOGENEOUS} if value.scaling[0] == HOMOGENEOUS
                        else {"kind": POWER, "p": str(value.scaling[1])}),
        }
    if isinstance(value, AsymNormSample):
        return {
            "kind": "asym_norm_sample",
            "dimension": value.dimension,
            "p": str(value.p),
            "points": [[str(v) for v in row] for row in value.points],
        }
    if isinstance(value, PointMap):
        return {
            "kind": "map",
            "source_points": list(value.source_points),
            "target_points": list(value.target_points),
            "assignment": list(value.assignment),
        }
    if isinstance(value, EventuallyPeriodicSeq):
        return {
            "kind": "sequence",
            "preperiod": list(value.preperiod),
            "period": list(value.period),
        }
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _dump_gauge(g: ScaleGauge) -> dict:
    if g.kind == STEP:
        return {"kind": STEP,
                "breakpoints": [str(b) for b in g.breakpoints],
                "values": [str(v) for v in g.values]}
    if g.kind == HOMOGENEOUS:
        return {"kind": HOMOGENEOUS, "coeff": str(g.coeff)}
    return {"kind": POWER, "coeff": str(g.coeff), "exponent": str(g.exponent)}


def _dump_phi(p: PiecewiseConvex) -> dict:
    doc = {"pos_breakpoints": [str(b) for b in p.pos_breaks],
           "pos_slopes": [str(s) for s in p.pos_slopes]}
    if p.neg_slopes:
        doc["neg_breakpoints"] = [str(b) for b in p.neg_breaks]
        doc["neg_slopes"] = [str(s) for s in p.neg_slopes]
    return doc


def canonical_json(doc) -> str:
    """Stable rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"
