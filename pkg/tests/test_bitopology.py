import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gen import rng_bitop, rng_family, rng_qpm
from qconn import (
    ScaleGauge,
    is_open,
    is_T0,
    join,
    join_matches_symmetrization,
    modular_bitop,
    specialization_bitop,
    subspace,
    symmetrize,
    validate_qpm,
)
from qconn.bitopology import AlexandrovTopology, BitopSpace
from qconn.errors import CoherenceError, EmptySubset
from qconn.modular import QuasiModularFamily


def topo(points, *sets) -> AlexandrovTopology:
    return AlexandrovTopology.from_sets(points, sets)


def test_coherence_enforced():
    with pytest.raises(CoherenceError):
        # 1 in N(0) but N(1) = {1,2} escapes N(0) = {0,1}
        topo(("a", "b", "c"), {0, 1}, {1, 2}, {2})
    with pytest.raises(CoherenceError):
        topo(("a",), set())  # point missing from its own neighborhood


def test_specialization_genuine_metric_is_discrete():
    d = validate_qpm([[0, 1], [2, 0]])
    b = specialization_bitop(d)
    assert b.forward.min_nbhd(0) == {0}
    assert b.backward.min_nbhd(1) == {1}


def test_specialization_zero_metric_is_indiscrete():
    d = validate_qpm([[0, 0], [0, 0]])
    b = specialization_bitop(d)
    assert b.forward.min_nbhd(0) == {0, 1}
    assert b.backward.min_nbhd(1) == {0, 1}


def test_specialization_asymmetric_zero():
    d = validate_qpm([[0, 0], [1, 0]])
    b = specialization_bitop(d)
    assert b.forward.min_nbhd(0) == {0, 1}
    assert b.forward.min_nbhd(1) == {1}
    assert b.backward.min_nbhd(0) == {0}
    assert b.backward.min_nbhd(1) == {0, 1}


def test_join_examples(indiscrete_split_space):
    j = join(indiscrete_split_space)
    assert j.min_nbhd(0) == {0, 1}
    assert j.min_nbhd(1) == {0, 1}
    assert j.min_nbhd(2) == {2}
    # forward indiscrete: join equals the backward topology
    assert j.nbhd == indiscrete_split_space.backward.nbhd


def test_join_of_equal_topologies_is_identity():
    t = topo(("a", "b"), {0, 1}, {1})
    b = BitopSpace(forward=t, backward=t)
    assert join(b).nbhd == t.nbhd


@settings(max_examples=40, derandomize=True)
@given(st.integers(0, 10**9), st.integers(1, 6))
def test_join_matches_symmetrized_metric(seed, n):
    d = rng_qpm(random.Random(seed), n)
    assert join_matches_symmetrization(d)
    b = specialization_bitop(d)
    assert specialization_bitop(symmetrize(d)).forward.nbhd == join(b).nbhd


def test_subspace_examples(indiscrete_split_space):
    whole = subspace(indiscrete_split_space, [0, 1, 2])
    assert whole.forward.nbhd == indiscrete_split_space.forward.nbhd
    single = subspace(indiscrete_split_space, [1])
    assert single.forward.min_nbhd(0) == {0}
    trace = subspace(indiscrete_split_space, [0, 1])
    assert trace.forward.min_nbhd(0) == {0, 1}
    assert trace.backward.min_nbhd(0) == {0, 1}
    assert trace.backward.min_nbhd(1) == {0, 1}
    with pytest.raises(EmptySubset):
        subspace(indiscrete_split_space, [])


def test_is_open(indiscrete_split_space):
    fwd = indiscrete_split_space.forward
    bwd = indiscrete_split_space.backward
    assert is_open(fwd, [])
    assert is_open(fwd, [0, 1, 2])
    assert not is_open(fwd, [2])
    assert is_open(bwd, [2])
    assert is_open(bwd, [0, 1])


def test_open_sets_enumeration_matches_example(indiscrete_split_space):
    fwd_opens = set(indiscrete_split_space.forward.open_sets())
    assert fwd_opens == {0, 0b111}
    bwd_opens = set(indiscrete_split_space.backward.open_sets())
    assert bwd_opens == {0, 0b100, 0b011, 0b111}


@settings(max_examples=30, derandomize=True)
@given(st.integers(0, 10**9), st.integers(1, 4))
def test_open_family_closed_under_union_intersection(seed, n):
    b = rng_bitop(random.Random(seed), n)
    for t in (b.forward, b.backward, join(b)):
        opens = set(t.open_sets())
        for u, v in itertools.product(opens, repeat=2):
            assert (u | v) in opens
            assert (u & v) in opens
        assert 0 in opens and (1 << n) - 1 in opens


def test_t0():
    d0 = validate_qpm([[0, 0], [0, 0]])
    assert not is_T0(specialization_bitop(d0))
    d1 = validate_qpm([[0, 1], [1, 0]])
    assert is_T0(specialization_bitop(d1))
    # one-sided zero alone does not break T0
    d2 = validate_qpm([[0, 0], [1, 0]])
    assert is_T0(specialization_bitop(d2))


def test_modular_bitop_zero_sets():
    fam = QuasiModularFamily(
        points=("a", "b"),
        gauges=(
            (ScaleGauge.constant(0), ScaleGauge.constant(0)),
            (ScaleGauge.homogeneous(1), ScaleGauge.constant(0)),
        ),
    )
    b = modular_bitop(fam)
    assert b.forward.min_nbhd(0) == {0, 1}
    assert b.forward.min_nbhd(1) == {1}
    assert b.backward.min_nbhd(0) == {0}
    assert b.backward.min_nbhd(1) == {0, 1}


def test_modular_bitop_discrete_and_indiscrete():
    inj = QuasiModularFamily(
        points=("a", "b"),
        gauges=(
            (ScaleGauge.constant(0), ScaleGauge.homogeneous(1)),
            (ScaleGauge.homogeneous(2), ScaleGauge.constant(0)),
        ),
    )
    b = modular_bitop(inj)
    assert b.forward.min_nbhd(0) == {0} and b.backward.min_nbhd(1) == {1}
    flat = QuasiModularFamily(
        points=("a", "b"),
        gauges=(
            (ScaleGauge.constant(0), ScaleGauge.constant(0)),
            (ScaleGauge.constant(0), ScaleGauge.constant(0)),
        ),
    )
    f = modular_bitop(flat)
    assert f.forward.min_nbhd(0) == {0, 1}


@settings(max_examples=20, derandomize=True)
@given(st.integers(0, 10**9), st.integers(2, 4))
def test_modular_join_identity(seed, n):
    from qconn import symmetrize_family
    fam = rng_family(random.Random(seed), n)
    lhs = modular_bitop(symmetrize_family(fam)).forward.nbhd
    rhs = join(modular_bitop(fam)).nbhd
    assert lhs == rhs


def test_float_tolerance_zero_relation():
    d = validate_qpm([[0, Fraction(1, 10**12)], [1, 0]], tol=Fraction(1, 10**9))
    b = specialization_bitop(d)
    assert b.forward.min_nbhd(0) == {0, 1}  # below tolerance counts as zero
