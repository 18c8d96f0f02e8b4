"""Finite quasi-pseudometrics: construction, validation, and transforms.

A quasi-pseudometric keeps zero self-distance and the triangle inequality
but drops symmetry, so every instance carries three faces: the matrix d
itself, its conjugate d(y,x), and the pointwise-max symmetrization.
Sources supported here: explicit matrices, weighted digraphs (min-plus
path closure), and one-sided positive-part lp gauges on sampled vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CarrierMismatch, NonRepresentable, QpmValidationError
from .numbers import INF, ZERO, ExtNonNeg, enn, enn_max, enn_min, exact_root


@dataclass(frozen=True)
class NonZeroDiagonal:
    i: int
    value: ExtNonNeg

    def __str__(self):
        return f"NonZeroDiagonal(i={self.i}, value={self.value})"


@dataclass(frozen=True)
class TriangleViolation:
    i: int
    j: int
    k: int
    lhs: ExtNonNeg
    rhs: ExtNonNeg

    def __str__(self):
        return f"TriangleViolation(i={self.i}, j={self.j}, k={self.k}, {self.lhs} > {self.rhs})"


@dataclass(frozen=True)
class QuasiPseudoMetric:
    """Validated n x n distance matrix over labelled points.

    ``tol`` is None in exact mode; in float mode it is the absolute
    tolerance applied to every comparison, recorded so reports can state
    which regime produced them.
    """

    points: tuple[str, ...]
    dist: tuple[tuple[ExtNonNeg, ...], ...]
    tol: Fraction | None = None

    @property
    def n(self) -> int:
        return len(self.points)

    def d(self, i: int, j: int) -> ExtNonNeg:
        return self.dist[i][j]

    def is_zero(self, value: ExtNonNeg) -> bool:
        """Zero test under the metric's numeric mode."""
        if self.tol is None:
            return value == ZERO
        return (not value.is_inf) and value.frac <= self.tol

    def zero_mask_rows(self) -> list[int]:
        """Row bitmasks of the specialization relation {(i,j): d(i,j)=0}."""
        rows = []
        for i in range(self.n):
            m = 0
            for j in range(self.n):
                if self.is_zero(self.dist[i][j]):
                    m |= 1 << j
            rows.append(m)
        return rows

    def positive_spectrum(self) -> list[Fraction]:
        """Sorted distinct positive finite distances."""
        vals = {
            v.frac
            for row in self.dist
            for v in row
            if not v.is_inf and not self.is_zero(v)
        }
        return sorted(vals)

    def index(self, label: str) -> int:
        return self.points.index(label)


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed graph with finite nonnegative weights; parallel edges are
    resolved by minimum weight before any closure."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, ExtNonNeg], ...]

    def __post_init__(self):
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        for u, v, w in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge ({u},{v}) references unknown vertex")
            if w.is_inf:
                raise ValueError(f"edge ({u},{v}) has infinite weight")


@dataclass(frozen=True)
class AsymNormSample:
    """Finite sample of rational vectors analysed under the positive-part
    lp gauge ``(sum_k max(y_k - x_k, 0)^p)^(1/p)``."""

    dimension: int
    p: Fraction
    points: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.p < 1:
            raise ValueError("exponent p must be >= 1")
        for v in self.points:
            if len(v) != self.dimension:
                raise ValueError("vector length does not match dimension")


def qpm_violations(matrix, tol: Fraction | None = None) -> list:
    """All diagonal and triangle violations of the candidate matrix."""
    n = len(matrix)
    bad = []
    eps = ZERO if tol is None else ExtNonNeg(tol)
    for i in range(n):
        if len(matrix[i]) != n:
            raise ValueError("matrix is not square")
        if not matrix[i][i] <= eps:
            bad.append(NonZeroDiagonal(i, matrix[i][i]))
    for i in range(n):
        row_i = matrix[i]
        for j in range(n):
            dij = row_i[j]
            row_j = matrix[j]
            for k in range(n):
                lhs = row_i[k]
                if not lhs <= dij + row_j[k] + eps:
                    bad.append(TriangleViolation(i, j, k, lhs, dij + row_j[k]))
    return bad


def validate_qpm(matrix, points=None, tol: Fraction | None = None) -> QuasiPseudoMetric:
    """Validate a square ExtNonNeg matrix against the axioms.

    Returns the immutable structure, or raises QpmValidationError carrying
    every violated triple and diagonal entry.
    """
    rows = tuple(tuple(enn(v) for v in row) for row in matrix)
    n = len(rows)
    if points is None:
        points = tuple(str(i) for i in range(n))
    else:
        points = tuple(points)
    if len(points) != n:
        raise ValueError("point labels do not match matrix size")
    bad = qpm_violations(rows, tol=tol)
    if bad:
        raise QpmValidationError(bad)
    return QuasiPseudoMetric(points=points, dist=rows, tol=tol)


def conjugate(d: QuasiPseudoMetric) -> QuasiPseudoMetric:
    """Transpose: swap the roles of source and target."""
    n = d.n
    rows = tuple(tuple(d.dist[j][i] for j in range(n)) for i in range(n))
    return QuasiPseudoMetric(points=d.points, dist=rows, tol=d.tol)


def symmetrize(d: QuasiPseudoMetric) -> QuasiPseudoMetric:
    """Pointwise max of d and its conjugate; always a pseudometric."""
    n = d.n
    rows = tuple(
        tuple(enn_max(d.dist[i][j], d.dist[j][i]) for j in range(n)) for i in range(n)
    )
    return QuasiPseudoMetric(points=d.points, dist=rows, tol=d.tol)


def from_digraph(g: WeightedDigraph) -> QuasiPseudoMetric:
    """Min-plus path closure of a weighted digraph.

    dist[i][j] = infimum of path weights i -> j (inf over the empty path
    set is infinity).  Self-distance is pinned to 0 regardless of cycles.
    The output is transitively closed, hence triangle-valid; this is
    asserted on every construction.
    """
    n = len(g.vertices)
    idx = {v: i for i, v in enumerate(g.vertices)}
    dist = [[INF] * n for _ in range(n)]
    for i in range(n):
        dist[i][i] = ZERO
    for u, v, w in g.edges:
        i, j = idx[u], idx[v]
        if i != j:
            dist[i][j] = enn_min(dist[i][j], w)
    for k in range(n):
        row_k = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik.is_inf:
                continue
            row_i = dist[i]
            for j in range(n):
                via = dik + row_k[j]
                if via < row_i[j]:
                    row_i[j] = via
    return validate_qpm(dist, points=g.vertices)


def _pos_part(x: Fraction) -> Fraction:
    return x if x > 0 else Fraction(0)


def one_sided_lp(x: tuple[Fraction, ...], y: tuple[Fraction, ...], p: Fraction,
                 mode: str = "exact") -> ExtNonNeg | float:
    """Forward gauge from x to y: (sum_k max(y_k - x_k, 0)^p)^(1/p)."""
    deltas = [_pos_part(b - a) for a, b in zip(x, y)]
    if p == 1:
        return ExtNonNeg(sum(deltas, Fraction(0)))
    if mode == "float":
        return sum(float(t) ** float(p) for t in deltas) ** (1.0 / float(p))
    if p.denominator != 1:
        if all(t == 0 for t in deltas):
            return ZERO
        raise NonRepresentable(p, "non-integer exponent in exact mode")
    power = int(p)
    s = sum((t**power for t in deltas), Fraction(0))
    root = exact_root(s, power)
    if root is None:
        raise NonRepresentable(p, f"{s} has no exact {power}-th root")
    return ExtNonNeg(root)


def from_asym_norm(s: AsymNormSample, mode: str = "exact",
                   tol: float = 1e-9) -> QuasiPseudoMetric:
    """Quasi-pseudometric of the positive-part lp gauge on the sample.

    Exact for p = 1 (and for integer p when every root is rational);
    otherwise requires mode="float", whose absolute tolerance is recorded
    on the result and applied to every downstream comparison.
    """
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    n = len(s.points)
    dist = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = one_sided_lp(s.points[i], s.points[j], s.p, mode=mode)
            dist[i][j] = ExtNonNeg(v) if isinstance(v, float) else v
    labels = tuple(f"v{i}" for i in range(n))
    return validate_qpm(dist, points=labels,
                        tol=None if mode == "exact" else Fraction(tol))


def symmetrization_gap_report(s: AsymNormSample) -> dict:
    """Compare max{forward, backward} gauges with the full lp norm, pair
    by pair, at p = 1.

    The symmetrized gauge max(d+, d-) is equivalent to the full norm with
    constants [1, 2] but equality can fail (mixed-sign differences), so
    the report records the constants and flags each failing pair instead
    of asserting equality.
    """
    if s.p != 1:
        raise NonRepresentable(s.p, "gap report is exact only for p = 1")
    n = len(s.points)
    pairs = []
    equality_holds = True
    worst_ratio = Fraction(1)
    for i in range(n):
        for j in range(i + 1, n):
            fwd = one_sided_lp(s.points[i], s.points[j], s.p).frac
            bwd = one_sided_lp(s.points[j], s.points[i], s.p).frac
            full = sum((abs(b - a) for a, b in zip(s.points[i], s.points[j])),
                       Fraction(0))
            m = max(fwd, bwd)
            entry = {
                "i": i,
                "j": j,
                "max_one_sided": str(m),
                "sum_one_sided": str(fwd + bwd),
                "full_norm": str(full),
                "equality": m == full,
            }
            if m != full:
                equality_holds = False
            if m > 0:
                worst_ratio = max(worst_ratio, Fraction(full, 1) / m)
            pairs.append(entry)
    return {
        "p": str(s.p),
        "pairs": pairs,
        "equality_claim_holds": equality_holds,
        "equivalence_constants": ["1", str(worst_ratio)],
        "note": "max(forward, backward) <= full norm <= forward + backward "
                "holds on every pair; pointwise equality of max and full "
                "norm is flagged, not asserted",
    }


def require_same_carrier(a: QuasiPseudoMetric, b: QuasiPseudoMetric) -> None:
    if a.points != b.points:
        raise CarrierMismatch("metrics live on different carriers")
