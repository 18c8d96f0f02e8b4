"""Directional connectedness decisions on finite bitopological spaces.

The decision engine rests on one reduction.  A subset A is forward-open
with backward-open complement exactly when A is closed under the arcs

    x -> y   iff   y in N+(x)  or  x in N-(y):

closure under the first clause is forward-openness of A, and closure
under the second is, after taking contrapositives, backward-openness of
the complement.  Hence the space admits no such separation iff this
"combined digraph" has no proper nonempty out-closed vertex set, i.e. is
strongly connected, and the maximal subsets whose traces are inseparable
are exactly its strongly connected components (paths between two vertices
of an SCC never leave it, and mutual reachability inside an induced
subgraph implies it in the full graph).  The reduction is never trusted
alone: brute_force_antisym enumerates subsets directly and serves as the
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bitopology import AlexandrovTopology, BitopSpace, indices_of, join, subspace
from .errors import CarrierTooLarge, NonPositiveEpsilon
from .gauges import QuasiPseudoMetric
from .numbers import ExtNonNeg


@dataclass(frozen=True)
class CombinedDigraph:
    """Reflexive digraph encoding all candidate separations of a bitop."""

    carrier: tuple[str, ...]
    out_rows: tuple[int, ...]  # bitmask of arc targets per vertex

    @property
    def n(self) -> int:
        return len(self.carrier)

    def arcs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.n) for y in indices_of(self.out_rows[x])]


@dataclass(frozen=True)
class SeparationCertificate:
    """Witness of a separation: A forward-open, B its backward-open
    complement, both nonempty."""

    A: frozenset[int]
    B: frozenset[int]

    def check(self, b: BitopSpace) -> bool:
        n = b.n
        full = (1 << n) - 1
        a_mask = sum(1 << i for i in self.A)
        b_mask = sum(1 << i for i in self.B)
        return (self.A and self.B
                and a_mask & b_mask == 0
                and a_mask | b_mask == full
                and b.forward.is_open_mask(a_mask)
                and b.backward.is_open_mask(b_mask))


def combined_out_rows(fwd_nbhd, bwd_nbhd, n: int) -> list[int]:
    """Arc rows of the combined digraph from neighborhood bitmask rows."""
    rows = list(fwd_nbhd)
    for y in range(n):
        col = bwd_nbhd[y]
        rest = col
        while rest:
            x = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            rows[x] |= 1 << y
    return rows


def combined_digraph(b: BitopSpace) -> CombinedDigraph:
    rows = combined_out_rows(b.forward.nbhd, b.backward.nbhd, b.n)
    return CombinedDigraph(carrier=b.points, out_rows=tuple(rows))


def reach_closure(rows) -> list[int]:
    """Reachability rows by iterated bitmask expansion."""
    n = len(rows)
    reach = list(rows)
    changed = True
    while changed:
        changed = False
        for x in range(n):
            acc = reach[x]
            rest = acc
            while rest:
                y = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                acc |= reach[y]
            if acc != reach[x]:
                reach[x] = acc
                changed = True
    return reach


def is_strongly_connected_rows(rows) -> bool:
    """Strong connectivity via forward and backward reach from vertex 0."""
    n = len(rows)
    if n <= 1:
        return True
    full = (1 << n) - 1
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        rest = frontier
        while rest:
            x = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            nxt |= rows[x]
        frontier = nxt & ~seen
        seen |= nxt
    if seen != full:
        return False
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for x in range(n):
            if rows[x] & frontier:
                nxt |= 1 << x
        frontier = nxt & ~seen
        seen |= nxt
    return seen == full


def scc_partition_rows(rows) -> list[int]:
    """Strongly connected components as bitmasks, via Tarjan's algorithm
    (iterative), returned in canonical order by least member."""
    n = len(rows)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[int] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(indices_of(rows[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(indices_of(rows[w]))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                pv = work[-1][0]
                low[pv] = min(low[pv], low[v])
            if low[v] == index[v]:
                mask = 0
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    mask |= 1 << w
                    if w == v:
                        break
                comps.append(mask)
    comps.sort(key=lambda m: (m & -m).bit_length())
    return comps


def masks_to_partition(masks) -> list[list[int]]:
    blocks = [indices_of(m) for m in masks]
    blocks.sort(key=lambda blk: blk[0])
    return blocks


def is_antisym_connected(b: BitopSpace) -> bool:
    """True iff no forward-open set has a nonempty backward-open complement,
    decided through strong connectivity of the combined digraph."""
    return is_strongly_connected_rows(combined_digraph(b).out_rows)


def antisym_certificate(b: BitopSpace) -> SeparationCertificate | None:
    """On a disconnected space, the lexicographically least proper nonempty
    out-closed set (by point order) and its complement; None when connected.

    Lex order on sorted index tuples: out-closed sets are unions of reach
    closures, so scan indices upward and include each one whose closure
    keeps the set proper.  Inserting an index below the current maximum
    always wins the tuple comparison, while extending past the maximum
    always loses to stopping, hence the break.
    """
    g = combined_digraph(b)
    if is_strongly_connected_rows(g.out_rows):
        return None
    reach = reach_closure(g.out_rows)
    full = (1 << b.n) - 1
    acc = 0
    for i in range(b.n):
        if acc >> i & 1:
            continue
        if acc and i > acc.bit_length() - 1:
            break
        cand = acc | reach[i]
        if cand != full:
            acc = cand
    cert = SeparationCertificate(A=frozenset(indices_of(acc)),
                                 B=frozenset(indices_of(full & ~acc)))
    if not cert.check(b):
        raise AssertionError("constructed certificate failed its own invariants")
    return cert


def brute_force_antisym(b: BitopSpace) -> bool:
    """Independent oracle: enumerate every nonempty proper subset A and
    test A forward-open with backward-open complement.  Exponential, so
    the carrier is capped."""
    if b.n > 20:
        raise CarrierTooLarge(f"brute force capped at 20 points, got {b.n}")
    full = (1 << b.n) - 1
    for a_mask in range(1, full):
        if b.forward.is_open_mask(a_mask) and b.backward.is_open_mask(full & ~a_mask):
            return False
    return True


def antisym_components(b: BitopSpace) -> list[list[int]]:
    """Maximal inseparable subsets = SCCs of the combined digraph."""
    return masks_to_partition(scc_partition_rows(combined_digraph(b).out_rows))


def symmetric_components(b: BitopSpace) -> list[list[int]]:
    """Connected components of the join topology, via the undirected
    reachability graph x -- y iff either join neighborhood contains the
    other point."""
    jn = join(b).nbhd
    n = b.n
    rows = list(jn)
    for x in range(n):
        rest = jn[x]
        while rest:
            y = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            rows[y] |= 1 << x
    reach = reach_closure(rows)
    seen = 0
    masks = []
    for x in range(n):
        if seen >> x & 1:
            continue
        masks.append(reach[x])
        seen |= reach[x]
    return masks_to_partition(masks)


@dataclass(frozen=True)
class LocalStatus:
    point: int
    connected: bool
    witness: tuple[int, ...]  # the minimal join neighborhood checked


@dataclass(frozen=True)
class ComponentReport:
    symmetric: tuple[tuple[int, ...], ...]
    antisymmetric: tuple[tuple[int, ...], ...]
    local: tuple[LocalStatus, ...]

    def __post_init__(self):
        for block in self.symmetric:
            s = set(block)
            if not any(s <= set(a) for a in self.antisymmetric):
                raise AssertionError(
                    f"symmetric component {block} not inside any antisymmetric one")


def is_locally_antisym_connected(b: BitopSpace) -> list[LocalStatus]:
    """Per point: is the subspace on the minimal join neighborhood
    inseparable?

    Exact on finite carriers because N_join(x) is the smallest join
    neighborhood of x: any qualifying neighborhood both contains it and is
    contained in every candidate, so the quantifier over neighborhoods
    collapses to this single check.
    """
    jn = join(b).nbhd
    out = []
    for x in range(b.n):
        members = indices_of(jn[x])
        sub = subspace(b, members)
        out.append(LocalStatus(point=x,
                               connected=is_antisym_connected(sub),
                               witness=tuple(members)))
    return out


def component_report(b: BitopSpace) -> ComponentReport:
    return ComponentReport(
        symmetric=tuple(tuple(blk) for blk in symmetric_components(b)),
        antisymmetric=tuple(tuple(blk) for blk in antisym_components(b)),
        local=tuple(is_locally_antisym_connected(b)),
    )


def scale_connectivity(d: QuasiPseudoMetric, eps) -> tuple[list[list[int]], list[list[int]]]:
    """Components at a positive resolution eps.

    Antisymmetric partition: SCCs of the digraph with arcs x -> y iff
    d(x,y) < eps.  The eps-scale separation criterion (A closed under
    forward eps-balls, complement closed under backward eps-balls)
    collapses to out-closure in this single digraph: the complement
    condition says no z in A has d(z,y) < eps with y outside A, which is
    the same forward-arc closure read contrapositively.  Symmetric
    partition: components of the undirected graph with edges where
    max(d(x,y), d(y,x)) < eps.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise NonPositiveEpsilon(f"eps must be positive, got {eps}")
    bound = ExtNonNeg(eps)
    n = d.n
    rows = []
    for x in range(n):
        m = 0
        for y in range(n):
            if d.d(x, y) < bound:
                m |= 1 << y
        rows.append(m | (1 << x))
    anti = masks_to_partition(scc_partition_rows(rows))
    sym_rows = []
    for x in range(n):
        m = 1 << x
        for y in range(n):
            if d.d(x, y) < bound and d.d(y, x) < bound:
                m |= 1 << y
        sym_rows.append(m)
    reach = reach_closure(sym_rows)
    seen = 0
    masks = []
    for x in range(n):
        if seen >> x & 1:
            continue
        masks.append(reach[x])
        seen |= reach[x]
    return anti, masks_to_partition(masks)
