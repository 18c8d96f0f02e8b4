"""Cauchy behaviour, completeness certificates, covers, and formal balls
on finite quasi-pseudometric spaces.

On a finite carrier the tail behaviour of any sequence is captured by
which points recur forever, so sequences are represented in eventually
periodic form: the directional Cauchy property and the limit set depend
only on the period multiset and the pairwise forward distances among its
members.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .connectivity import masks_to_partition, scc_partition_rows
from .errors import NegativeRadius, NotCauchy
from .gauges import QuasiPseudoMetric
from .numbers import ZERO, ExtNonNeg


@dataclass(frozen=True)
class EventuallyPeriodicSeq:
    """x_n = preperiod[n] while it lasts, then cycles through period."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if not self.period:
            raise ValueError("period must be nonempty")

    def prefix(self, length: int) -> list[int]:
        out = list(self.preperiod)
        while len(out) < length:
            out.append(self.period[(len(out) - len(self.preperiod)) % len(self.period)])
        return out[:length]


def is_left_k_cauchy(d: QuasiPseudoMetric, s: EventuallyPeriodicSeq) -> bool:
    """Decide the directional Cauchy condition exactly.

    Requiring d(x_n, x_m) < eps for all m >= n >= N and every eps > 0
    forces, on a finite carrier, d(p, q) = 0 for every ordered pair of
    period points: any ordered pair recurs with arbitrarily late indices
    in both orders across laps, and choosing eps below the least positive
    distance of the space rules out any positive value.  The preperiod is
    irrelevant (the condition only constrains tails).
    """
    for p in s.period:
        for q in s.period:
            if not d.is_zero(d.d(p, q)):
                return False
    return True


def forward_limits(d: QuasiPseudoMetric, s: EventuallyPeriodicSeq) -> frozenset[int]:
    """{x : d(x_n, x) -> 0} = points at distance zero from every period
    point.  Nonempty for every directional Cauchy sequence here: period
    points qualify because their zero arcs close into a zero clique under
    the triangle inequality."""
    if not is_left_k_cauchy(d, s):
        raise NotCauchy("sequence is not left K-Cauchy")
    limits = frozenset(
        x for x in range(d.n)
        if all(d.is_zero(d.d(p, x)) for p in set(s.period))
    )
    if not limits:
        raise AssertionError("directional Cauchy sequence lost its limit set")
    return limits


def smyth_report(d: QuasiPseudoMetric) -> dict:
    """Constructive completeness certificate for the finite space.

    Every directional Cauchy sequence is tail-confined to one class of the
    zero-distance digraph's strongly connected partition; inside such a
    class all pairwise forward distances vanish (zero cycles close into
    zero cliques by the triangle inequality, asserted below), so cycling
    through the class is the canonical representative sequence and each of
    its members is a forward limit.  Limits are additionally confirmed
    against the conjugate-side ball criterion: y is a limit iff every
    period point sits inside every backward ball around y.
    """
    rows = d.zero_mask_rows()
    classes = masks_to_partition(scc_partition_rows(rows))
    witnesses = []
    for cls in classes:
        for p in cls:
            for q in cls:
                if not d.is_zero(d.d(p, q)):
                    raise AssertionError(
                        f"zero cycle through {cls} is not a zero clique at ({p},{q})")
        seq = EventuallyPeriodicSeq(preperiod=(), period=tuple(cls))
        limits = forward_limits(d, seq)
        for y in limits:
            for p in cls:
                if not d.is_zero(d.d(p, y)):
                    raise AssertionError("ball criterion failed for a reported limit")
        witnesses.append({
            "class": list(cls),
            "forward_limits": sorted(limits),
        })
    return {
        "complete": True,
        "classes": witnesses,
        "ball_criterion_verified": True,
        "tolerance": None if d.tol is None else str(d.tol),
    }


def _ball_mask(d: QuasiPseudoMetric, x: int, eps: Fraction) -> int:
    bound = ExtNonNeg(eps)
    m = 0
    for y in range(d.n):
        if d.d(x, y) < bound:
            m |= 1 << y
    return m


def _first_fit_cover(d: QuasiPseudoMetric, eps: Fraction) -> list[int]:
    full = (1 << d.n) - 1
    covered = 0
    centers = []
    for x in range(d.n):
        if covered >> x & 1:
            continue
        centers.append(x)
        covered |= _ball_mask(d, x, eps)
        if covered == full:
            break
    return centers


def precompact_report(d: QuasiPseudoMetric, thresholds) -> dict:
    """Finite forward-ball covers, one per threshold.

    Thresholds are processed in ascending order and each cover is carried
    forward: a cover at eps still covers at any larger eps, so reporting
    the smaller of {fresh first-fit cover, previous cover} yields minimal
    greedy cover sizes that are nonincreasing in eps by construction
    (first-fit alone does not guarantee that).
    """
    eps_list = sorted({Fraction(t) for t in thresholds})
    if any(t <= 0 for t in eps_list):
        raise NegativeRadius("thresholds must be positive")
    full = (1 << d.n) - 1
    covers = []
    prev: list[int] | None = None
    for eps in eps_list:
        centers = _first_fit_cover(d, eps)
        if prev is not None and len(prev) < len(centers):
            centers = prev
        union = 0
        for c in centers:
            union |= _ball_mask(d, c, eps)
        if union != full:
            raise AssertionError(f"cover at eps={eps} does not cover the carrier")
        covers.append({"eps": str(eps), "centers": centers, "size": len(centers)})
        prev = centers
    return {"carrier_size": d.n, "covers": covers, "precompact": True}


def join_compactness_check(d: QuasiPseudoMetric, thresholds=None,
                           open_limit: int = 16) -> dict:
    """Instantiate the implication chain 'precompact and directionally
    complete implies the join topology is compact' on one finite space.

    Hypotheses are produced as sub-reports; the conclusion is verified
    directly when the carrier is small enough to enumerate join-open sets
    (every open cover drawn from them admits a finite subcover trivially,
    checked on the canonical minimal-neighborhood cover), and otherwise
    recorded as following from finiteness of the carrier.
    """
    from .bitopology import join, specialization_bitop

    if thresholds is None:
        spectrum = d.positive_spectrum()
        thresholds = spectrum[:3] + [spectrum[-1] + 1] if spectrum else [Fraction(1)]
    pre = precompact_report(d, thresholds)
    smyth = smyth_report(d)
    topo = join(specialization_bitop(d))
    conclusion = {"join_compact": True, "carrier_finite": True}
    if d.n <= open_limit:
        full = (1 << d.n) - 1
        canonical = [topo.nbhd[x] for x in range(d.n)]
        union = 0
        for m in canonical:
            union |= m
        conclusion["canonical_cover_size"] = len(set(canonical))
        conclusion["canonical_cover_covers"] = union == full
        if union != full:
            raise AssertionError("canonical minimal-neighborhood cover failed")
    return {
        "hypotheses": {"precompact": pre["precompact"], "smyth_complete": smyth["complete"]},
        "precompact_report": pre,
        "smyth_report": smyth,
        "conclusion": conclusion,
    }


@dataclass(frozen=True)
class FormalBall:
    point: int
    radius: Fraction

    def __post_init__(self):
        if self.radius < 0:
            raise NegativeRadius(f"radius {self.radius} is negative")


@dataclass(frozen=True)
class FormalBallPoset:
    """Pairs (point, radius) ordered by (x, r) <= (y, s) iff d(x,y) <= r - s.

    Reflexivity is d(x,x)=0 <= 0; transitivity follows from the triangle
    inequality through (r-s) + (s-t) = r-t; both are checked exhaustively
    on the grid at construction, and antisymmetry holds up to mutual zero
    distance at equal radii.
    """

    labels: tuple[str, ...]
    elements: tuple[FormalBall, ...]
    le_rows: tuple[int, ...]

    def le(self, a: int, b: int) -> bool:
        return bool(self.le_rows[a] >> b & 1)

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Cover pairs of the preorder quotient: a < b with nothing strictly
        between, mutual pairs excluded."""
        m = len(self.elements)
        strict = [[self.le(a, b) and not self.le(b, a) for b in range(m)]
                  for a in range(m)]
        edges = []
        for a in range(m):
            for b in range(m):
                if not strict[a][b]:
                    continue
                if any(strict[a][c] and strict[c][b] for c in range(m)):
                    continue
                edges.append((a, b))
        return edges

    def describe(self, a: int) -> str:
        ball = self.elements[a]
        return f"({self.labels[ball.point]},{ball.radius})"


def formal_ball_poset(d: QuasiPseudoMetric, radii) -> FormalBallPoset:
    radii = sorted({Fraction(r) for r in radii})
    for r in radii:
        if r < 0:
            raise NegativeRadius(f"radius {r} is negative")
    elements = tuple(FormalBall(point=x, radius=r) for x in range(d.n) for r in radii)
    m = len(elements)
    rows = []
    for a in range(m):
        xa, ra = elements[a].point, elements[a].radius
        mask = 0
        for b in range(m):
            xb, rb = elements[b].point, elements[b].radius
            gap = ra - rb
            dv = d.d(xa, xb)
            if gap >= 0 and not dv.is_inf and dv.frac <= gap:
                mask |= 1 << b
        rows.append(mask)
    poset = FormalBallPoset(labels=d.points, elements=elements, le_rows=tuple(rows))
    _check_poset_laws(poset, d)
    return poset


def _check_poset_laws(p: FormalBallPoset, d: QuasiPseudoMetric) -> None:
    m = len(p.elements)
    for a in range(m):
        if not p.le(a, a):
            raise AssertionError("formal-ball order lost reflexivity")
    for a in range(m):
        row_a = p.le_rows[a]
        rest = row_a
        while rest:
            b = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            # transitivity as row containment: everything above b sits above a
            if p.le_rows[b] & ~row_a:
                raise AssertionError("formal-ball order lost transitivity")
            if p.le(b, a) and a != b:
                ba, bb = p.elements[a], p.elements[b]
                same_radius = ba.radius == bb.radius
                zero_both = (d.is_zero(d.d(ba.point, bb.point))
                             and d.is_zero(d.d(bb.point, ba.point)))
                if not (same_radius and zero_both):
                    raise AssertionError("mutual order without zero distance")
