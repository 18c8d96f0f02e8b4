"""Maps between finite asymmetric spaces: continuity notions, image
preservation of directional connectedness, and halfspace separation at a
fixed resolution."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .bitopology import BitopSpace, indices_of, subspace
from .connectivity import (
    antisym_components,
    is_antisym_connected,
    is_locally_antisym_connected,
    scale_connectivity,
)
from .errors import (
    CarrierMismatch,
    NonPositiveEpsilon,
    PreconditionFailed,
    SampleOnHyperplane,
)
from .gauges import AsymNormSample, QuasiPseudoMetric, from_asym_norm


@dataclass(frozen=True)
class PointMap:
    source_points: tuple[str, ...]
    target_points: tuple[str, ...]
    assignment: tuple[int, ...]  # target index per source point

    def __post_init__(self):
        if len(self.assignment) != len(self.source_points):
            raise ValueError("assignment must be total on the source")
        for t in self.assignment:
            if not 0 <= t < len(self.target_points):
                raise ValueError(f"target index {t} out of range")

    def __call__(self, i: int) -> int:
        return self.assignment[i]


@dataclass(frozen=True)
class LinearFunctionalSpec:
    coefficients: tuple[Fraction, ...]
    threshold: Fraction

    def __call__(self, vector) -> Fraction:
        if len(vector) != len(self.coefficients):
            raise CarrierMismatch("functional dimension does not match vector")
        return sum((c * v for c, v in zip(self.coefficients, vector)), Fraction(0))


def _check_carriers(f: PointMap, dX: QuasiPseudoMetric, dY: QuasiPseudoMetric):
    if f.source_points != dX.points or f.target_points != dY.points:
        raise CarrierMismatch("map carriers do not match the metrics")


def is_nonexpansive(f: PointMap, dX: QuasiPseudoMetric, dY: QuasiPseudoMetric) -> bool:
    _check_carriers(f, dX, dY)
    n = dX.n
    for x in range(n):
        for y in range(n):
            if not dY.d(f(x), f(y)) <= dX.d(x, y):
                return False
    return True


def is_uniformly_continuous(f: PointMap, dX: QuasiPseudoMetric,
                            dY: QuasiPseudoMetric) -> bool:
    """Finite criterion: for every eps in the target's positive spectrum
    there is a delta in the source's spectrum with d_X < delta forcing
    d_Y < eps.

    Testing spectrum values is exhaustive: the sets {d_X < delta} and
    {d_Y < eps} change only as the thresholds cross spectrum values, and
    shrinking delta only helps, so the least positive source distance
    realizes the strongest available delta.  A fallback threshold of 1
    covers spectra that are empty (all distances zero or infinite).
    """
    _check_carriers(f, dX, dY)
    n = dX.n
    eps_candidates = dY.positive_spectrum() or [Fraction(1)]
    delta_candidates = dX.positive_spectrum() or [Fraction(1)]
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    for eps in eps_candidates:
        ok = False
        for delta in delta_candidates:
            if all(dY.d(f(x), f(y)) < eps
                   for (x, y) in pairs
                   if dX.d(x, y) < delta):
                ok = True
                break
        if not ok:
            return False
    return True


def specialization_preserving(f: PointMap, bX: BitopSpace,
                              bY: BitopSpace) -> tuple[int, int] | None:
    """First violating pair of the condition y in N+(x) => f(y) in
    N+(f(x)) (and the backward analogue), or None when the map preserves
    both specializations.  This is the finite rendering of uniform
    continuity for minimal-neighborhood spaces."""
    if f.source_points != bX.points or f.target_points != bY.points:
        raise CarrierMismatch("map carriers do not match the bitopologies")
    for x in range(bX.n):
        for y in indices_of(bX.forward.nbhd[x]):
            if not bY.forward.nbhd[f(x)] >> f(y) & 1:
                return (x, y)
        for y in indices_of(bX.backward.nbhd[x]):
            if not bY.backward.nbhd[f(x)] >> f(y) & 1:
                return (x, y)
    return None


def check_image_preservation(f: PointMap, bX: BitopSpace, bY: BitopSpace,
                             subset_samples: int = 8, seed: int = 0) -> dict:
    """Verify that images of inseparable subsets stay inseparable inside
    the image's trace bitopology, and that the per-point local property
    transfers to image points.

    Sampled subsets are drawn from the source's antisymmetric components
    (with a seeded generator) and filtered to the inseparable ones;
    components themselves are always included.  Failures are returned as
    counterexample records rather than raised.
    """
    bad = specialization_preserving(f, bX, bY)
    if bad is not None:
        raise PreconditionFailed(
            f"map does not preserve specialization at pair {bad}", witness=bad)
    rng = random.Random(seed)
    image_points = sorted(set(f.assignment))
    image_sub = subspace(bY, image_points)
    reindex = {p: t for t, p in enumerate(image_points)}
    failures = []
    checked = 0
    subsets = [tuple(blk) for blk in antisym_components(bX)]
    for blk in list(subsets):
        for _ in range(subset_samples):
            if len(blk) < 2:
                continue
            size = rng.randint(1, len(blk))
            cand = tuple(sorted(rng.sample(blk, size)))
            if cand not in subsets:
                subsets.append(cand)
    for subset_pts in subsets:
        src = subspace(bX, subset_pts)
        if not is_antisym_connected(src):
            continue
        checked += 1
        img_pts = sorted({reindex[f(p)] for p in subset_pts})
        img = subspace(image_sub, img_pts)
        if not is_antisym_connected(img):
            failures.append({"subset": list(subset_pts),
                             "image": [image_points[t] for t in img_pts]})
    local_src = is_locally_antisym_connected(bX)
    local_img = is_locally_antisym_connected(image_sub)
    local_transfer = (all(st.connected for st in local_src)
                      <= all(st.connected for st in local_img))
    return {
        "continuity_rendering": "specialization-preservation",
        "subsets_checked": checked,
        "failures": failures,
        "image_preserved": not failures,
        "local_source_all": all(st.connected for st in local_src),
        "local_image_all": all(st.connected for st in local_img),
        "local_transferred": bool(local_transfer),
    }


def halfspace_separation(s: AsymNormSample, functional: LinearFunctionalSpec,
                         eps) -> dict:
    """At resolution eps under the p=1 positive-part gauge, report every
    antisymmetric component whose samples meet both open halfspaces of the
    functional.

    An empty report is consistent with the separation principle that a
    halfspace-separating functional rules out inseparable sets meeting
    both sides; nonempty reports are findings about this eps-scale
    rendering, which is a resolution choice, not the topologies
    themselves.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise NonPositiveEpsilon("eps must be positive")
    values = [functional(v) for v in s.points]
    for t, val in enumerate(values):
        if val == functional.threshold:
            raise SampleOnHyperplane(f"sample {t} lies on the threshold hyperplane")
    lower = {t for t, val in enumerate(values) if val < functional.threshold}
    upper = {t for t, val in enumerate(values) if val > functional.threshold}
    gauge_sample = AsymNormSample(dimension=s.dimension, p=Fraction(1),
                                  points=s.points)
    d = from_asym_norm(gauge_sample)
    anti, _ = scale_connectivity(d, eps)
    straddling = [blk for blk in anti
                  if set(blk) & lower and set(blk) & upper]
    return {
        "continuity_rendering": "eps-scale under the p=1 positive-part gauge",
        "eps": str(eps),
        "lower": sorted(lower),
        "upper": sorted(upper),
        "antisym_components": anti,
        "straddling_components": straddling,
        "consistent_with_separation": not straddling,
    }


def bicompletion_invariance_check(b: BitopSpace) -> dict:
    """Documented no-op: a finite space is already bicomplete, so the
    stability of local inseparability under bicompletion has no finite
    test content beyond the space itself."""
    local = is_locally_antisym_connected(b)
    return {
        "finite_carrier": True,
        "already_bicomplete": True,
        "locally_antisym_connected": all(st.connected for st in local),
        "note": "bicompletion adds no points to a finite carrier; the "
                "property is compared against the space itself",
    }
