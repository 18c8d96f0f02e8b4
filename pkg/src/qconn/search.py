"""Counterexample search over small bitopological spaces.

Instances are ordered pairs of preorders (equivalently, pairs of minimal
neighborhood maps).  Exhaustive mode enumerates every pair up to a
carrier size; random mode samples DAG-plus-equivalence preorders from a
seed.  Every search stream is prefixed with fixed regression instances,
and results are deterministic for a fixed (target, mode, n, seed,
budget) no matter how many worker threads evaluate the stream.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple

from .bitopology import indices_of
from .connectivity import (
    is_strongly_connected_rows,
    masks_to_partition,
    reach_closure,
    scc_partition_rows,
)
from .errors import UnknownProperty

DEFAULT_SEED = 20240801
OPEN_ENUM_LIMIT = 14

# count of reflexive transitive relations per labelled carrier size,
# used as an enumeration self-check
PREORDER_COUNTS = {1: 1, 2: 4, 3: 29, 4: 355, 5: 6942}


class PreorderData(NamedTuple):
    rows: tuple[int, ...]
    transpose: tuple[int, ...]
    opens: tuple[int, ...] | None      # all open masks, or None past the cap
    opens_set: frozenset | None


class BitopCase(NamedTuple):
    fwd: PreorderData
    bwd: PreorderData
    source: str  # "seeded" | "enumerated" | "random"


class MapCase(NamedTuple):
    src: BitopCase
    assignment: tuple[int, ...]
    tgt: BitopCase
    source: str


def _transpose(rows) -> tuple[int, ...]:
    n = len(rows)
    cols = [0] * n
    for i, row in enumerate(rows):
        rest = row
        while rest:
            j = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            cols[j] |= 1 << i
    return tuple(cols)


def _open_masks(rows) -> tuple[int, ...] | None:
    n = len(rows)
    if n > OPEN_ENUM_LIMIT:
        return None
    out = []
    for mask in range(1 << n):
        rest = mask
        ok = True
        while rest:
            x = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if rows[x] & ~mask:
                ok = False
                break
        if ok:
            out.append(mask)
    return tuple(out)


def preorder_data(rows) -> PreorderData:
    rows = tuple(rows)
    opens = _open_masks(rows)
    return PreorderData(rows=rows, transpose=_transpose(rows), opens=opens,
                        opens_set=None if opens is None else frozenset(opens))


def _row_closed(rows, x: int) -> bool:
    acc = rows[x]
    rest = acc
    while rest:
        y = (rest & -rest).bit_length() - 1
        rest &= rest - 1
        if rows[y] & ~acc:
            return False
    return True


def _generate_preorders(n: int):
    """All reflexive transitive relations on n labelled points, lazily,
    in a fixed order (off-diagonal bit patterns ascending)."""
    diag = [1 << i for i in range(n)]
    offdiag = [(i, j) for i in range(n) for j in range(n) if i != j]
    for bits in range(1 << len(offdiag)):
        rows = list(diag)
        b = bits
        pos = 0
        while b:
            if b & 1:
                i, j = offdiag[pos]
                rows[i] |= 1 << j
            b >>= 1
            pos += 1
        if all(_row_closed(rows, x) for x in range(n)):
            yield preorder_data(rows)


@lru_cache(maxsize=None)
def all_preorders(n: int) -> tuple[PreorderData, ...]:
    """Full preorder table; feasible through n = 5 (6942 relations)."""
    if n > 5:
        raise ValueError("full preorder table capped at 5 points; "
                         "larger sizes stream lazily")
    return tuple(_generate_preorders(n))


def _diagonal_pairs(factory):
    """All ordered pairs from a possibly huge stream, touching only the
    prefix a budget-capped consumer actually demands."""
    cache: list = []
    gen = factory()
    exhausted = False
    diag = 0
    while True:
        while not exhausted and len(cache) <= diag:
            try:
                cache.append(next(gen))
            except StopIteration:
                exhausted = True
        if exhausted and cache and diag > 2 * (len(cache) - 1):
            return
        if exhausted and not cache:
            return
        for a in range(diag + 1):
            b = diag - a
            if a < len(cache) and b < len(cache):
                yield cache[a], cache[b]
        diag += 1


def random_preorder(rng: random.Random, n: int) -> PreorderData:
    """Random equivalence classes glued along a random DAG, transitively
    closed by construction."""
    k = rng.randint(1, n)
    assignment = [rng.randrange(k) for _ in range(n)]
    used = sorted(set(assignment))
    relabel = {c: t for t, c in enumerate(used)}
    assignment = [relabel[c] for c in assignment]
    k = len(used)
    order = list(range(k))
    rng.shuffle(order)
    class_rows = [1 << c for c in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            if rng.random() < 0.35:
                class_rows[order[a]] |= 1 << order[b]
    class_reach = reach_closure(class_rows)
    class_members = [0] * k
    for x, c in enumerate(assignment):
        class_members[c] |= 1 << x
    rows = []
    for x in range(n):
        m = 0
        rest = class_reach[assignment[x]]
        while rest:
            c = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            m |= class_members[c]
        rows.append(m)
    return preorder_data(rows)


# -- fixed regression instances -------------------------------------------

# forward topology indiscrete, backward splits {0,1} from {2}
REGRESSION_INDISCRETE_SPLIT = BitopCase(
    fwd=preorder_data((0b111, 0b111, 0b111)),
    bwd=preorder_data((0b011, 0b011, 0b100)),
    source="seeded",
)

# three-point space whose combined digraph is a cycle while the join
# topology splits {0} from {1,2}: inseparable yet join-disconnected
REGRESSION_CYCLE_SPLIT = BitopCase(
    fwd=preorder_data((0b011, 0b010, 0b111)),
    bwd=preorder_data((0b001, 0b010, 0b110)),
    source="seeded",
)

REGRESSION_CASES = (REGRESSION_INDISCRETE_SPLIT, REGRESSION_CYCLE_SPLIT)


# -- row-level property checks --------------------------------------------


def _combined_rows(case: BitopCase) -> list[int]:
    """Arc rows x -> {y : y in N+(x) or x in N-(y)} via the precomputed
    backward transpose."""
    return [f | t for f, t in zip(case.fwd.rows, case.bwd.transpose)]


def _join_rows(case: BitopCase) -> list[int]:
    return [f & g for f, g in zip(case.fwd.rows, case.bwd.rows)]


def _sym_component_masks(case: BitopCase) -> list[int]:
    jrows = _join_rows(case)
    n = len(jrows)
    rows = list(jrows)
    for x in range(n):
        rest = jrows[x]
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
    return masks


def _restrict_rows(rows, members) -> list[int]:
    pos = {p: t for t, p in enumerate(members)}
    mask = 0
    for p in members:
        mask |= 1 << p
    out = []
    for p in members:
        m = 0
        rest = rows[p] & mask
        while rest:
            q = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            m |= 1 << pos[q]
        out.append(m)
    return out


def _mask_strongly_connected(rows, sub: int) -> bool:
    """Strong connectivity of the induced subgraph on the mask ``sub``
    without reindexing."""
    if sub == 0 or sub & (sub - 1) == 0:
        return True
    seed = sub & -sub
    seen = seed
    front = seed
    while front:
        nxt = 0
        rest = front
        while rest:
            z = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            nxt |= rows[z] & sub
        front = nxt & ~seen
        seen |= nxt
    if seen != sub:
        return False
    seen = seed
    front = seed
    while front:
        nxt = 0
        rest = sub & ~seen
        while rest:
            z = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if rows[z] & front:
                nxt |= 1 << z
        front = nxt & ~seen
        seen |= nxt
    return seen == sub


def _brute_antisym(case: BitopCase) -> bool:
    n = len(case.fwd.rows)
    full = (1 << n) - 1
    bwd_opens = case.bwd.opens_set
    for a_mask in case.fwd.opens:
        if a_mask in (0, full):
            continue
        if (full & ~a_mask) in bwd_opens:
            return False
    return True


def _bitop_json(case: BitopCase) -> dict:
    n = len(case.fwd.rows)
    return {
        "kind": "bitopology",
        "points": [str(i) for i in range(n)],
        "forward_min_nbhd": [indices_of(m) for m in case.fwd.rows],
        "backward_min_nbhd": [indices_of(m) for m in case.bwd.rows],
    }


def check_antisym_oracle(case: BitopCase, rng) -> dict | None:
    fast = is_strongly_connected_rows(_combined_rows(case))
    slow = _brute_antisym(case)
    if fast != slow:
        return {"scc_decision": fast, "brute_force": slow}
    return None


def check_prop53_equivalence(case: BitopCase, rng) -> dict | None:
    """The three separation formulations must agree: the digraph decision,
    the partition enumeration, and the disjoint-open-pair scan."""
    n = len(case.fwd.rows)
    full = (1 << n) - 1
    f1 = is_strongly_connected_rows(_combined_rows(case))
    f2 = _brute_antisym(case)
    f3 = True
    for u in case.fwd.opens:
        if u == 0:
            continue
        for v in case.bwd.opens:
            if v == 0 or u & v:
                continue
            if (u | v) == full:
                f3 = False
                break
        if not f3:
            break
    if f1 == f2 == f3:
        return None
    return {"digraph": f1, "partition_enumeration": f2, "pair_scan": f3}


def check_prop54_inclusion(case: BitopCase, rng) -> dict | None:
    anti = scc_partition_rows(_combined_rows(case))
    for sym in _sym_component_masks(case):
        if not any(sym & ~a == 0 for a in anti):
            return {"symmetric_component": indices_of(sym),
                    "antisymmetric_components": [indices_of(a) for a in anti]}
    return None


def check_thm54_coincidence(case: BitopCase, rng) -> dict | None:
    anti = masks_to_partition(scc_partition_rows(_combined_rows(case)))
    sym = masks_to_partition(_sym_component_masks(case))
    if anti != sym:
        return {"antisymmetric": anti, "symmetric": sym}
    return None


def check_prop61_union(case: BitopCase, rng) -> dict | None:
    """Two inseparable subsets with a common point must have an
    inseparable union; sampled inside strongly connected blocks."""
    rows = _combined_rows(case)
    blocks = [indices_of(m) for m in scc_partition_rows(rows)
              if m & (m - 1)]
    for blk in blocks:
        for _ in range(6):
            s = rng.sample(blk, rng.randint(1, len(blk)))
            t = rng.sample(blk, rng.randint(1, len(blk)))
            if not set(s) & set(t):
                continue
            s_mask = sum(1 << p for p in s)
            t_mask = sum(1 << p for p in t)
            if not _mask_strongly_connected(rows, s_mask):
                continue
            if not _mask_strongly_connected(rows, t_mask):
                continue
            if not _mask_strongly_connected(rows, s_mask | t_mask):
                return {"S": sorted(s), "T": sorted(t),
                        "union": indices_of(s_mask | t_mask)}
    return None


def _local_fail_point(fwd_rows, bwd_rows, bwd_transpose=None) -> int | None:
    """First point whose minimal join neighborhood is separable, or None."""
    if bwd_transpose is None:
        bwd_transpose = _transpose(bwd_rows)
    rows = [f | t for f, t in zip(fwd_rows, bwd_transpose)]
    for x in range(len(fwd_rows)):
        if not _mask_strongly_connected(rows, fwd_rows[x] & bwd_rows[x]):
            return x
    return None


def check_prop61_subspace(case: BitopCase, rng) -> dict | None:
    """Local inseparability must survive passage to join-open subspaces."""
    if _local_fail_point(case.fwd.rows, case.bwd.rows, case.bwd.transpose) is not None:
        return None  # hypothesis fails, nothing to test
    jrows = _join_rows(case)
    n = len(jrows)
    join_opens = _open_masks(jrows)
    if join_opens is None:
        join_opens = tuple(rng.randrange(1, 1 << n) for _ in range(8))
    for mask in join_opens:
        if mask == 0:
            continue
        ok = True
        rest = mask
        while rest:
            x = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if jrows[x] & ~mask:
                ok = False
                break
        if not ok:
            continue  # only genuinely join-open traces are in scope
        members = indices_of(mask)
        sub_f = _restrict_rows(case.fwd.rows, members)
        sub_b = _restrict_rows(case.bwd.rows, members)
        bad = _local_fail_point(sub_f, sub_b)
        if bad is not None:
            return {"subspace": members, "failing_point": members[bad]}
    return None


def check_cor61_join_local(case: BitopCase, rng) -> dict | None:
    """Searches the global claim 'inseparable implies join-connected',
    which is where the local corollary would need a converse; every
    inseparable but join-disconnected space is a finding."""
    if not is_strongly_connected_rows(_combined_rows(case)):
        return None
    sym = _sym_component_masks(case)
    if len(sym) > 1:
        return {"antisym_connected": True,
                "symmetric_components": masks_to_partition(sym)}
    return None


def _map_preserves(assignment, src: BitopCase, tgt: BitopCase) -> bool:
    for x in range(len(src.fwd.rows)):
        fx = assignment[x]
        rest = src.fwd.rows[x]
        while rest:
            y = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if not tgt.fwd.rows[fx] >> assignment[y] & 1:
                return False
        rest = src.bwd.rows[x]
        while rest:
            y = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if not tgt.bwd.rows[fx] >> assignment[y] & 1:
                return False
    return True


def check_prop62_image(case: MapCase, rng) -> dict | None:
    """Images of inseparable sets under specialization-preserving maps
    must be inseparable in the image trace."""
    src_rows = _combined_rows(case.src)
    tgt_rows = _combined_rows(case.tgt)
    for blk_mask in scc_partition_rows(src_rows):
        blk = indices_of(blk_mask)
        image_mask = 0
        for p in blk:
            image_mask |= 1 << case.assignment[p]
        if not _mask_strongly_connected(tgt_rows, image_mask):
            return {"block": blk, "image": indices_of(image_mask)}
    return None


def check_thm74_local_image(case: MapCase, rng) -> dict | None:
    """A locally inseparable source must map onto a locally inseparable
    image subspace."""
    if _local_fail_point(case.src.fwd.rows, case.src.bwd.rows,
                         case.src.bwd.transpose) is not None:
        return None
    image = sorted(set(case.assignment))
    sub_f = _restrict_rows(case.tgt.fwd.rows, image)
    sub_b = _restrict_rows(case.tgt.bwd.rows, image)
    bad = _local_fail_point(sub_f, sub_b)
    if bad is not None:
        return {"image": image, "failing_point": image[bad]}
    return None


@dataclass(frozen=True)
class Target:
    id: str
    description: str
    case_kind: str  # "bitop" | "bitop_equal" | "map"
    check: Callable

    def expects_findings(self) -> bool:
        return self.id == "cor61_join_local"


TARGETS: dict[str, Target] = {
    t.id: t
    for t in (
        Target("antisym_oracle",
               "digraph decision agrees with subset enumeration",
               "bitop", check_antisym_oracle),
        Target("prop53_equivalence",
               "three separation formulations agree",
               "bitop", check_prop53_equivalence),
        Target("prop54_inclusion",
               "symmetric components refine antisymmetric components",
               "bitop", check_prop54_inclusion),
        Target("thm54_coincidence",
               "partitions coincide when the two topologies are equal",
               "bitop_equal", check_thm54_coincidence),
        Target("prop61_union",
               "overlapping inseparable subsets have inseparable union",
               "bitop", check_prop61_union),
        Target("prop61_subspace",
               "local inseparability survives join-open subspaces",
               "bitop", check_prop61_subspace),
        Target("cor61_join_local",
               "inseparable spaces that are join-disconnected (expected findings)",
               "bitop", check_cor61_join_local),
        Target("prop62_image",
               "specialization-preserving maps keep images inseparable",
               "map", check_prop62_image),
        Target("thm74_local_image",
               "locally inseparable sources have locally inseparable images",
               "map", check_thm74_local_image),
    )
}


# -- case streams ----------------------------------------------------------


def _bitop_stream(mode: str, n: int, seed: int, equal: bool) -> Iterable[BitopCase]:
    if not equal:
        yield from REGRESSION_CASES
    if mode == "exhaustive":
        if n > 6:
            raise ValueError("exhaustive mode capped at 6 points")
        for size in range(1, n + 1):
            if size <= 5:
                table = all_preorders(size)
                if equal:
                    for p in table:
                        yield BitopCase(fwd=p, bwd=p, source="enumerated")
                else:
                    for p, q in itertools.product(table, table):
                        yield BitopCase(fwd=p, bwd=q, source="enumerated")
            else:
                if equal:
                    for p in _generate_preorders(size):
                        yield BitopCase(fwd=p, bwd=p, source="enumerated")
                else:
                    for p, q in _diagonal_pairs(lambda s=size: _generate_preorders(s)):
                        yield BitopCase(fwd=p, bwd=q, source="enumerated")
    elif mode == "random":
        rng = random.Random(seed)
        while True:
            size = rng.randint(2, max(2, n))
            p = random_preorder(rng, size)
            q = p if equal else random_preorder(rng, size)
            yield BitopCase(fwd=p, bwd=q, source="random")
    else:
        raise ValueError(f"unknown mode {mode!r}")


def _map_stream(mode: str, n: int, seed: int) -> Iterable[MapCase]:
    rng = random.Random(seed ^ 0x5EED)
    for case in _bitop_stream(mode, n, seed, equal=False):
        size = len(case.fwd.rows)
        ident = tuple(range(size))
        yield MapCase(src=case, assignment=ident, tgt=case, source=case.source)
        point = preorder_data((1,))
        target1 = BitopCase(fwd=point, bwd=point, source=case.source)
        yield MapCase(src=case, assignment=(0,) * size, tgt=target1,
                      source=case.source)
        tgt_size = rng.randint(1, max(2, size))
        tgt = BitopCase(fwd=random_preorder(rng, tgt_size),
                        bwd=random_preorder(rng, tgt_size), source=case.source)
        for _ in range(6):
            assignment = tuple(rng.randrange(tgt_size) for _ in range(size))
            if _map_preserves(assignment, case, tgt):
                yield MapCase(src=case, assignment=assignment, tgt=tgt,
                              source=case.source)
                break


def _case_json(case) -> dict:
    if isinstance(case, BitopCase):
        return _bitop_json(case)
    return {
        "kind": "map-case",
        "source_space": _bitop_json(case.src),
        "map": {"kind": "map",
                "source_points": _bitop_json(case.src)["points"],
                "target_points": _bitop_json(case.tgt)["points"],
                "assignment": list(case.assignment)},
        "target_space": _bitop_json(case.tgt),
    }


@dataclass
class SearchResult:
    target: str
    mode: str
    n: int
    seed: int
    budget: int | None
    instances_tested: int
    findings: list[dict]
    wall_time: float

    def findings_document(self) -> dict:
        """Deterministic content for the findings file (wall time excluded
        on purpose: byte-identical output across runs is contractual)."""
        return {
            "target": self.target,
            "mode": self.mode,
            "n": self.n,
            "seed": self.seed,
            "budget": self.budget,
            "stats": {
                "instances_tested": self.instances_tested,
                "failures_found": len(self.findings),
            },
            "findings": self.findings,
        }


def _worker_count() -> int:
    # QCONN_THREADS caps the evaluation pool; unset means sequential, since
    # pooled threads only add overhead for this CPU-bound pure-Python work
    # and the output contract is identical either way.
    raw = os.environ.get("QCONN_THREADS", "")
    if raw.strip():
        try:
            return max(1, min(int(raw), os.cpu_count() or 1))
        except ValueError:
            return 1
    return 1


def search_counterexamples(target: str, n: int, mode: str = "exhaustive",
                           seed: int = DEFAULT_SEED,
                           budget: int | None = None) -> SearchResult:
    """Run one property target over the instance stream.

    Deterministic for fixed arguments: the stream order is fixed, each
    case gets a generator seeded from (seed, position), and evaluation
    results are buffered in stream order even when QCONN_THREADS enables a
    worker pool.
    """
    if target not in TARGETS:
        raise UnknownProperty(f"unknown target {target!r}; known: "
                              + ", ".join(sorted(TARGETS)))
    tgt = TARGETS[target]
    if tgt.case_kind == "map":
        stream = _map_stream(mode, n, seed)
    else:
        stream = _bitop_stream(mode, n, seed, equal=tgt.case_kind == "bitop_equal")
    if budget is not None:
        stream = itertools.islice(stream, budget)
    elif mode == "random":
        raise ValueError("random mode requires a budget")

    check = tgt.check

    def evaluate(item):
        idx, case = item
        rng = random.Random(seed * 1_000_003 + idx)
        return idx, case, check(case, rng)

    start = time.perf_counter()
    tested = 0
    findings = []
    workers = _worker_count()
    items = enumerate(stream)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(evaluate, items, chunksize=64)
            for idx, case, detail in results:
                tested += 1
                if detail is not None:
                    findings.append({"index": idx, "source": case.source,
                                     "instance": _case_json(case),
                                     "detail": detail})
    else:
        for item in items:
            idx, case, detail = evaluate(item)
            tested += 1
            if detail is not None:
                findings.append({"index": idx, "source": case.source,
                                 "instance": _case_json(case),
                                 "detail": detail})
    return SearchResult(target=target, mode=mode, n=n, seed=seed, budget=budget,
                        instances_tested=tested, findings=findings,
                        wall_time=time.perf_counter() - start)
