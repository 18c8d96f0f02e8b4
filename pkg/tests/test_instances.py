import json
import random
from fractions import Fraction

import pytest

from gen import rng_bitop, rng_family, rng_qpm, rng_vectors
from qconn import EventuallyPeriodicSeq, OrliczSpec, PointMap, WeightedDigraph
from qconn.errors import ParseError, SchemaError
from qconn.instances import (
    canonical_json,
    dump_instance,
    load_instance_text,
    parse_instance,
)
from qconn.modular import POSITIVE_PART, PiecewiseConvex
from qconn.numbers import enn


def roundtrip(value):
    doc = dump_instance(value)
    kind, parsed = parse_instance(json.loads(canonical_json(doc)))
    assert dump_instance(parsed) == doc
    return kind, parsed


def test_quasi_metric_roundtrip():
    d = rng_qpm(random.Random(0), 4)
    kind, parsed = roundtrip(d)
    assert kind == "quasi_metric"
    assert parsed.dist == d.dist


def test_digraph_roundtrip():
    g = WeightedDigraph(vertices=("a", "b"), edges=(("a", "b", enn("3/2")),))
    kind, parsed = roundtrip(g)
    assert kind == "digraph" and parsed.edges == g.edges


def test_bitopology_roundtrip():
    b = rng_bitop(random.Random(1), 5)
    kind, parsed = roundtrip(b)
    assert kind == "bitopology"
    assert parsed.forward.nbhd == b.forward.nbhd
    assert parsed.backward.nbhd == b.backward.nbhd


def test_modular_family_roundtrip():
    fam = rng_family(random.Random(2), 4)
    kind, parsed = roundtrip(fam)
    assert kind == "modular_family" and parsed.gauges == fam.gauges


def test_orlicz_roundtrip():
    spec = OrliczSpec(
        atoms=(("w0", Fraction(1)), ("w1", Fraction(2))),
        phi=(POSITIVE_PART,
             PiecewiseConvex(pos_breaks=(Fraction(1),),
                             pos_slopes=(Fraction(1), Fraction(3)),
                             neg_breaks=(Fraction(-2),),
                             neg_slopes=(Fraction(0), Fraction(-1)))),
        functions=((Fraction(0), Fraction(1)), (Fraction(2), Fraction(-1))),
        scaling=("power", Fraction(2)),
    )
    kind, parsed = roundtrip(spec)
    assert kind == "orlicz" and parsed.phi == spec.phi


def test_asym_norm_roundtrip():
    s = rng_vectors(random.Random(3), 3, 2)
    kind, parsed = roundtrip(s)
    assert kind == "asym_norm_sample" and parsed.points == s.points


def test_map_roundtrip():
    f = PointMap(source_points=("a", "b"), target_points=("x",),
                 assignment=(0, 0))
    kind, parsed = roundtrip(f)
    assert kind == "map" and parsed.assignment == (0, 0)


def test_sequence_roundtrip():
    s = EventuallyPeriodicSeq(preperiod=(0, 1), period=(2,))
    kind, parsed = roundtrip(s)
    assert kind == "sequence" and parsed.period == (2,)


# -- rejection paths --------------------------------------------------------


def test_bad_json_is_parse_error():
    with pytest.raises(ParseError):
        load_instance_text("not json at all {{{")


def test_unknown_kind():
    with pytest.raises(SchemaError):
        parse_instance({"kind": "mystery"})


def test_missing_field():
    with pytest.raises(SchemaError):
        parse_instance({"kind": "quasi_metric", "points": ["a"]})


def test_bad_rational():
    with pytest.raises(SchemaError):
        parse_instance({"kind": "quasi_metric", "points": ["a"],
                        "dist": [["zero"]]})


def test_triangle_violation_is_schema_error():
    with pytest.raises(SchemaError) as err:
        parse_instance({
            "kind": "quasi_metric",
            "points": ["a", "b", "c"],
            "dist": [["0", "1", "5"], ["inf", "0", "1"], ["inf", "inf", "0"]],
        })
    assert "TriangleViolation" in str(err.value)


def test_incoherent_bitopology_rejected():
    with pytest.raises(SchemaError):
        parse_instance({
            "kind": "bitopology",
            "points": ["a", "b", "c"],
            "forward_min_nbhd": [[0, 1], [1, 2], [2]],
            "backward_min_nbhd": [[0], [1], [2]],
        })


def test_out_of_range_index():
    with pytest.raises(SchemaError):
        parse_instance({
            "kind": "bitopology",
            "points": ["a"],
            "forward_min_nbhd": [[0, 3]],
            "backward_min_nbhd": [[0]],
        })


def test_infinite_edge_weight_rejected():
    with pytest.raises(SchemaError):
        parse_instance({"kind": "digraph", "vertices": ["a", "b"],
                        "edges": [["a", "b", "inf"]]})


def test_duplicate_labels_rejected():
    with pytest.raises(SchemaError):
        parse_instance({"kind": "quasi_metric", "points": ["a", "a"],
                        "dist": [["0", "0"], ["0", "0"]]})


def test_canonical_json_is_stable():
    doc = {"b": 1, "a": [2, {"z": "3/2", "y": None}]}
    assert canonical_json(doc) == canonical_json(json.loads(canonical_json(doc)))
    assert canonical_json(doc).endswith("\n")
