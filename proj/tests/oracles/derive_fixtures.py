"""Independent oracle for frozen test fixtures.

Everything here goes through sympy series expansion and symbolic algebra,
never through the library's jet / Hankel / Pick code paths.  Run with
`python3 tests/oracles/derive_fixtures.py`; the printed values are the ones
frozen into tests/unit/*.cpp and tests/acceptance/acceptance.cpp.
"""
import sympy as sp
from sympy import Rational as R

z, w = sp.symbols("z w")


def taylor(expr, var, at, n):
    s = sp.series(expr, var, at, n + 1).removeO()
    s = sp.expand(s.subs(var, var + at)) if at != 0 else sp.expand(s)
    return [sp.nsimplify(s.coeff(var, k)) for k in range(n + 1)]


def hankel(coeffs, d):
    return sp.Matrix(d, d, lambda i, j: coeffs[i + j + 1])


def schwarzian_by_inverse_pade(expr, at, d):
    """S_d(f)(x) = D^{2d+1}(R^{-1} o f)(x): Pade by sympy's linear solve, inverse by solve."""
    F = taylor(expr, z, at, 2 * d + 1)
    Q = sp.symbols("q1:%d" % (d + 1))
    P = sp.symbols("p0:%d" % (d + 1))
    q = 1 + sum(Q[i] * w ** (i + 1) for i in range(d))
    p = sum(P[i] * w ** i for i in range(d + 1))
    fser = sum(F[k] * w ** k for k in range(2 * d + 1))
    eqs = sp.Poly(sp.expand(fser * q - p), w).all_coeffs()[::-1][: 2 * d + 1]
    sol = sp.solve(eqs, list(Q) + list(P), dict=True)[0]
    Rw = sp.simplify((p / q).subs(sol))
    # defect route via D^{2d+1}(f - R)/Df
    Rser = taylor(Rw, w, 0, 2 * d + 1)
    return sp.factorial(2 * d + 1) * (F[2 * d + 1] - Rser[2 * d + 1]) / F[1]


print("== jets ==")
e3 = taylor(sp.exp(z), z, 0, 3)
print("exp+exp order3:", [2 * c for c in e3])
print("exp*exp order3:", taylor(sp.exp(2 * z), z, 0, 3))
print("1/(1+z/2+z^2/6) order2:", taylor(1 / (1 + z / 2 + z ** 2 / 6), z, 0, 2))
# reversion of z + z^2: solve y = z + z^2 for z near 0
y = sp.symbols("y")
inv = (-1 + sp.sqrt(1 + 4 * y)) / 2
print("reverse z+z^2 order4:", taylor(inv, y, 0, 4))
# logistic inverse branch at 3/4 (left branch through 1/4)
linv = (1 - sp.sqrt(1 - y)) / 2
print("logistic inverse at 3/4 order3:", taylor(linv, y, R(3, 4), 3))
print("logistic forward at 1/4 order3:", taylor(4 * z * (1 - z), z, R(1, 4), 3))

print("== pade ==")
ex = taylor(sp.exp(z), z, 0, 7)
print("det M2(exp):", hankel(ex, 2).det(), " det M3(exp):", hankel(ex, 3).det())
mob = taylor(z / (1 - z), z, 0, 5)
print("M2(mobius):", hankel(mob, 2).tolist(), hankel(mob, 2).det())
print("exp pade d=1 at z=1:", (1 + R(1, 2)) / (1 - R(1, 2)))

print("== schwarzian ==")
print("S1(exp)(0) classical:", sp.simplify((sp.diff(sp.exp(z), z, 3) / sp.diff(sp.exp(z), z)
                                            - R(3, 2) * (sp.diff(sp.exp(z), z, 2) / sp.diff(sp.exp(z), z)) ** 2).subs(z, 0)))
print("S1(exp) via defect:", schwarzian_by_inverse_pade(sp.exp(z), 0, 1))
print("S2(exp) via defect:", schwarzian_by_inverse_pade(sp.exp(z), 0, 2))
print("S2(exp) via det formula:", sp.factorial(5) * hankel(ex, 3).det() / (ex[1] * hankel(ex, 2).det()))
print("S3(exp) via det formula:", sp.factorial(7) * hankel(ex, 4).det() / (ex[1] * hankel(ex, 3).det()))
S1 = lambda f: sp.simplify(sp.diff(f, z, 3) / sp.diff(f, z) - R(3, 2) * (sp.diff(f, z, 2) / sp.diff(f, z)) ** 2)
print("S1(logistic)(1/4):", S1(4 * z * (1 - z)).subs(z, R(1, 4)))
print("S1(logistic inverse)(3/4):", S1(((1 - sp.sqrt(1 - z)) / 2)).subs(z, R(3, 4)))
pick_exp = sp.series((1 - 1 * z / (sp.exp(z) - 1)) / z, z, 0, 4).removeO()
print("Pick(exp) jet order3:", [sp.nsimplify(pick_exp.coeff(z, k)) for k in range(4)])
pm = sp.series((1 - 1 * z / (z / (1 - z))) / z, z, 0, 3).removeO()
print("Pick(mobius):", sp.simplify(pm))
print("inverse pick of 1/2:", taylor(1 + z / (1 - z / 2), z, 0, 4))
print("S1(exp o (2z+1)) at x=-1/2:", S1(sp.exp(2 * z + 1)).subs(z, R(-1, 2)), " = S1(exp)(0)*4")
print("S1(z^2)(1):", S1(z ** 2).subs(z, 1))
print("S1(z+z^3):", sp.factor(S1(z + z ** 3)))

print("== pickclass ==")
A = sp.Matrix([[1, 1], [1, 1]]); B = sp.Matrix([[2, 1], [1, 1]])
Dm = B ** 2 - A ** 2
print("t^2 fixture B^2-A^2:", Dm.tolist(), "det", Dm.det(), "eigs", [sp.nsimplify(e) for e in Dm.eigenvals()])
print("min eig value:", sp.N((3 - sp.sqrt(13)) / 2, 20))
# cross-ratio matrix for z/(1-z) at (0, 1/4, 1/2)
f = z / (1 - z); lam = [0, R(1, 4), R(1, 2)]
Df = sp.diff(f, z)
M = sp.Matrix(3, 3, lambda i, j: 1 if i == j else sp.sqrt(((f.subs(z, lam[i]) - f.subs(z, lam[j])) / (lam[i] - lam[j])) ** 2 / (Df.subs(z, lam[i]) * Df.subs(z, lam[j]))))
print("crossratio mobius:", M.tolist(), M.eigenvals())

print("== koebe ==")
fk = z / (1 - z)
for x in [0, R(1, 4), R(1, 2), R(3, 4), R(-1, 2)]:
    dist = min(x + 1, 1 - x)
    D1 = sp.diff(fk, z).subs(z, x); D2 = sp.diff(fk, z, 2).subs(z, x)
    print("x", x, "D1", D1, "D2", D2, "ratio(m!/n!)", sp.Abs(D2) / (2 * dist ** -1 * sp.Abs(D1)),
          "ratio(n!/m!)", sp.Abs(D2) / (R(1, 2) * dist ** -1 * sp.Abs(D1)))

print("== dynamics ==")
orb = [R(1, 2)]
for _ in range(4):
    orb.append(4 * orb[-1] * (1 - orb[-1]))
print("orbit 1/2:", orb)
x = R(1, 3); s = 0
while not (R(7, 16) < x < R(9, 16)):
    x = 4 * x * (1 - x); s += 1
print("first entry 1/3 into (7/16,9/16):", s)
print("q_{2,1}:", sp.expand(((z + 1) ** 2 - 1) / ((1 + 1) ** 2 - 1)))
# logistic s=3 inverse branch at x=1/3, d=2 via sympy composition
F = 4 * z * (1 - z)
F4 = F
for _ in range(3):
    F4 = sp.expand(F4.subs(z, 4 * z * (1 - z)))
J = taylor(F4, z, R(1, 3), 5)
y0 = J[0]
# reversion through sympy: series solve
u = sp.symbols("u")
G = [R(1, 3)] + [sp.Symbol("g%d" % k) for k in range(1, 6)]
E = sum(J[k] * u ** k for k in range(1, 6))
comp = sp.expand(sum(G[k] * E ** k for k in range(1, 6)))
sol = {}
for n in range(1, 6):
    eq = sp.expand(comp.coeff(u, n)).subs(sol) - (1 if n == 1 else 0)
    sol[G[n]] = sp.solve(eq, G[n])[0]
Ginv = [R(1, 3)] + [sol[G[k]] for k in range(1, 6)]
Sinv1 = sp.factorial(3) * hankel(Ginv, 2).det() / (Ginv[1] * hankel(Ginv, 1).det())
Sinv2 = sp.factorial(5) * hankel(Ginv, 3).det() / (Ginv[1] * hankel(Ginv, 2).det())
print("f^4(1/3):", y0, " S1,S2 inverse of f^4 at 1/3:", Sinv1, Sinv2, sp.N(Sinv1), sp.N(Sinv2))
print("forward jet of f^4 at 1/3 coefficient 1:", J[1])

# left inverse branch of 4x(1-x): classical Schwarzian in closed form
w = sp.symbols("w")
gl = (1 - sp.sqrt(1 - w)) / 2
S1gl = sp.simplify(sp.diff(gl, w, 3) / sp.diff(gl, w) - R(3, 2) * (sp.diff(gl, w, 2) / sp.diff(gl, w)) ** 2)
print("S1 of left logistic branch:", S1gl, " at 1/2:", S1gl.subs(w, R(1, 2)), " at 3/4:", S1gl.subs(w, R(3, 4)))
