"""Asymmetric distances from three sources.

Builds quasi-pseudometrics from an explicit matrix, a weighted digraph,
and a one-sided lp gauge on sampled vectors, then shows the three faces
every such structure carries: the distance itself, its conjugate, and the
symmetrization.
"""

from fractions import Fraction

from qconn import (
    AsymNormSample,
    WeightedDigraph,
    conjugate,
    enn,
    from_asym_norm,
    from_digraph,
    symmetrization_gap_report,
    symmetrize,
    validate_qpm,
)


def show(d, title):
    print(f"\n{title}")
    width = max(len(str(v)) for row in d.dist for v in row)
    for i, row in enumerate(d.dist):
        cells = "  ".join(str(v).rjust(width) for v in row)
        print(f"  {d.points[i]:>4} | {cells}")


print("== explicit matrix ==")
d = validate_qpm([["0", "1"], ["inf", "0"]], points=("up", "down"))
show(d, "d (one-way step: up -> down costs 1, the reverse is unreachable)")
show(conjugate(d), "conjugate (swap the direction of every query)")
show(symmetrize(d), "symmetrization (worst case of both directions)")

print("\n== weighted digraph, min-plus path closure ==")
g = WeightedDigraph(
    vertices=("depot", "hub", "port"),
    edges=(
        ("depot", "hub", enn(1)),
        ("hub", "port", enn(2)),
        ("port", "hub", enn("1/2")),
    ),
)
costs = from_digraph(g)
show(costs, "least path cost (inf where no directed path exists)")
print("  depot -> port:", costs.d(0, 2), "   port -> depot:", costs.d(2, 0))

print("\n== one-sided l1 gauge on sampled vectors ==")
sample = AsymNormSample(
    dimension=2,
    p=Fraction(1),
    points=((Fraction(0), Fraction(0)), (Fraction(2), Fraction(-1)),
            (Fraction(1), Fraction(-1))),
)
gauge = from_asym_norm(sample)
show(gauge, "positive-part gauge: only increases count")

print("\nThe max of the two one-sided gauges is equivalent to the full l1")
print("norm with constants [1, 2], but pointwise equality fails; the pair")
print("(1,-1) vs the origin realizes the worst ratio:")
report = symmetrization_gap_report(sample)
for pair in report["pairs"]:
    print(f"  pair {pair['i']}-{pair['j']}: max one-sided = {pair['max_one_sided']}, "
          f"full norm = {pair['full_norm']}, equal = {pair['equality']}")
print("equivalence constants:", report["equivalence_constants"])
