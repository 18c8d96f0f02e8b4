"""Scale-indexed gauge families and what they induce.

A finite weighted-atom modular with a positive-part integrand produces an
asymmetric family w_lambda(f, g) = rho((g - f)/lambda).  From it we read
off unit-level distances, scale-indexed balls and entourage relations,
and the bitopology of all-scale zero sets.
"""

from fractions import Fraction

from qconn import (
    OrliczSpec,
    ScaleGauge,
    conjugate_family,
    entourages,
    from_orlicz,
    luxemburg_gauge,
    luxemburg_symmetrization_gap,
    modular_balls,
    modular_bitop,
    symmetrize_family,
    validate_family,
)
from qconn.modular import ABSOLUTE_VALUE, POSITIVE_PART, QuasiModularFamily

print("== a two-atom modular with positive-part integrand ==")
spec = OrliczSpec(
    atoms=(("w0", Fraction(1)), ("w1", Fraction(1))),
    phi=(POSITIVE_PART, POSITIVE_PART),
    functions=((Fraction(0), Fraction(0)),      # f
               (Fraction(2), Fraction(-1)),     # g
               (Fraction(1), Fraction(1))),     # h
    scaling=("homogeneous",),
)
fam = from_orlicz(spec)
print("gauge kinds are homogeneous c/lambda; coefficient matrix:")
for i in range(3):
    print("  ", [str(fam.gauge(i, j).coeff) for j in range(3)])

grid = [Fraction(1, 2), Fraction(1), Fraction(2)]
print("axioms on the validation grid:", validate_family(fam, grid).ok)

d = luxemburg_gauge(fam)
print("\nunit-level (threshold) distances d+(x,y) = inf{l : w_l(x,y) <= 1}:")
for i in range(3):
    print("  ", [str(d.d(i, j)) for j in range(3)])

print("\nballs at lambda=1, eps=3/2 around f:")
fwd, bwd = modular_balls(fam, 0, Fraction(1), Fraction(3, 2))
print("  forward ", sorted(fwd), " (g is excluded: w_1(f,g) = 2)")
print("  backward", sorted(bwd), " (g is included: w_1(g,f) = 1)")

E, Einv = entourages(fam, Fraction(3, 2), Fraction(1))
print("entourage at r=3/2, lambda=1:", sorted(E))

print("\n== symmetrization ==")
sym = symmetrize_family(fam)
print("symmetrized coefficients:")
for i in range(3):
    print("  ", [str(sym.gauge(i, j).coeff) for j in range(3)])
gap = luxemburg_symmetrization_gap(fam)
print("threshold distance of the symmetrized family vs max of one-sided:")
for row in gap["pairs"]:
    print(f"  ({row['i']},{row['j']}): {row['luxemburg_of_symmetrized']} vs "
          f"{row['max_of_one_sided']} (equal: {row['equal']})")

print("\n== an even integrand erases direction ==")
even = from_orlicz(OrliczSpec(
    atoms=(("w0", Fraction(1)), ("w1", Fraction(1))),
    phi=(ABSOLUTE_VALUE, ABSOLUTE_VALUE),
    functions=((Fraction(0), Fraction(0)), (Fraction(2), Fraction(-1))),
    scaling=("homogeneous",),
))
print("w(f,g) coeff:", even.gauge(0, 1).coeff, " w(g,f) coeff:", even.gauge(1, 0).coeff)

print("\n== step gauges and the induced bitopology ==")
fam2 = QuasiModularFamily(
    points=("p", "q"),
    gauges=(
        (ScaleGauge.constant(0), ScaleGauge.constant(0)),
        (ScaleGauge.step([3], [2, Fraction(1, 2)]), ScaleGauge.constant(0)),
    ),
)
print("axioms:", validate_family(fam2, grid).ok)
b = modular_bitop(fam2)
print("forward zero-set neighborhoods :",
      [sorted(b.forward.min_nbhd(x)) for x in range(2)])
print("backward zero-set neighborhoods:",
      [sorted(b.backward.min_nbhd(x)) for x in range(2)])
dd = luxemburg_gauge(fam2)
print("threshold distances:", [[str(dd.d(i, j)) for j in range(2)] for i in range(2)])
print("(conjugating twice is the identity:",
      conjugate_family(conjugate_family(fam2)).gauges == fam2.gauges, ")")
