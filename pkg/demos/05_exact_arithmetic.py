# Exact mode: matrices over Gaussian rationals decide with no tolerance at
# all.  Useful when the inputs are exactly representable and a float verdict
# at 1e-8 would be a judgment call.

from fractions import Fraction

from unieq import GaussianRational as GR
from unieq import Matrix, ProblemInstance, solve_general, unitarily_similar

# A rational unitary: a rotation built from the 3-4-5 triangle
U = Matrix.from_rational(
    [
        [GR(Fraction(3, 5)), GR(Fraction(4, 5))],
        [GR(Fraction(-4, 5)), GR(Fraction(3, 5))],
    ]
)
print("U U* = I exactly:", (U @ U.adjoint()) == Matrix.from_rational([[GR(1), GR(0)], [GR(0), GR(1)]]))

B = Matrix.from_rational([[GR(1, Fraction(1, 2)), GR(Fraction(2, 3))], [GR(0), GR(-1)]])
A = U @ B @ U.adjoint()

v = unitarily_similar(A, B)
print("similar:", v.result, "| tolerance recorded:", v.tolerance)

# Congruence via the conjugated relations, exactly
i_unit = Matrix.from_rational([[GR(0, 1)]])
a = Matrix.from_rational([[GR(Fraction(3, 4), Fraction(1, 2))]])
b = a.scale(GR(0, -1))  # a = u^2 b for u = i, so |a| = |b| exactly
inst = ProblemInstance(1, S2=[(a, b)])
print("scalar congruence:", solve_general(inst).result)

# The same instance moved to floats gives the same verdict, now with a
# tolerance in play
inst_float = ProblemInstance(1, S2=[(a.to_float(), b.to_float())])
vf = solve_general(inst_float)
print("float verdict:", vf.result, "| tolerance:", vf.tolerance)

# Exact verdicts distinguish what floats cannot: perturb by 1e-30
tiny = GR(Fraction(1, 10**30))
a2 = a + Matrix.from_rational([[tiny]])
inst2 = ProblemInstance(1, S2=[(a2, b)])
print("after a 1e-30 rational bump:", solve_general(inst2).result)
