"""Independent values of epsilon_{m,1,a} for d = 1, with the p-th power question
settled exactly in a ray class field.

Needs cypari2. Writes tests/fixtures/epsilon_oracle.json relative to the crate root:

    python3 tests/oracle/epsilon_oracle.py > tests/fixtures/epsilon_oracle.json

Theta values come from PARI's ellwp, g2 and g3 on the lattice Z[i]; the
Galois orbit is built from residue classes modulo the units; the field is
bnrclassfield of the conductor, and p-th powers are found with nfroots.
"""

import json
import sys

import cypari2

pari = cypari2.Pari()
pari.allocatemem(4 * 10**9, silent=True)
pari.set_real_precision(1500)

DEFS = [
    "L0 = [I, 1]",
    "D0 = elleisnum(L0, 4, 1)^3 - 27 * elleisnum(L0, 6, 1)^2",
    # theta_a(z) = alpha^-12 Delta^(Na-1) prod_{nu in E[a], nu != 0} (wp(z) - wp(nu))^-6
    "thf(alpha, z) = my(N = norm(alpha), wz = ellwp(L0, z), s = 1); "
    "for (k = 1, N - 1, s *= wz - ellwp(L0, k / alpha)); alpha^-12 * D0^(N - 1) * s^-6",
    # central: product over a w1 + b w2, w1 = 1/pi, w2 = 1/conj(pi)
    "epsc(alpha, p, pi, m, c) = my(r = 1); "
    "for (a = 1, p - 1, for (b = 1, p - 1, "
    "my(e = lift(Mod(a, p)^(m[1] - 1) * Mod(b, p)^(m[2] - 1))); "
    "if (e, r *= thf(alpha, c * (a / pi + b / conj(pi)))^e))); r",
    # m2 = 1: product over the a conj(pi)/pi, primitive pi-torsion points
    "epse(alpha, p, pi, m, c) = my(r = 1); "
    "for (a = 1, p - 1, my(e = lift(Mod(a, p)^(m[1] - 1))); "
    "if (e, r *= thf(alpha, c * a * conj(pi) / pi)^e)); r",
    "isgauss(z) = denominator(real(z)) == 1 && denominator(imag(z)) == 1",
    "same(c1, c2, md) = for (k = 0, 3, if (isgauss((c1 - I^k * c2) / md), return(1))); 0",
    # representatives of (Z[i]/md)^x modulo {1, i, -1, -i}
    "classes(md, p) = my(reps = List()); "
    "for (x = 0, p - 1, for (y = 0, p - 1, my(c = x + y * I); "
    "if (gcd(norm(c), norm(md)) != 1, next); "
    "if (#select(r -> same(r, c, md), Vec(reps)) == 0, listput(reps, c)))); Vec(reps)",
    "rnd(z) = round(real(z)) + round(imag(z)) * I",
    "togauss(c, i) = real(c) + imag(c) * i",
]
for d in DEFS:
    pari(d)


def gauss_str(z):
    re, im = int(pari("real")(z)), int(pari("imag")(z))
    return [str(re), str(im)]


def run(p, pi, m, alpha, edge):
    md = pi if edge else str(p)
    reps = pari(f"classes({md}, {p})")
    fn = "epse" if edge else "epsc"
    conj = [pari(f"{fn}({alpha}, {p}, {pi}, {m}, {c})") for c in reps]
    poly = pari("x") ** 0
    for v in conj:
        poly = poly * (pari("x") - v)
    rounded = pari("(P) -> Pol(apply(rnd, Vec(P)))")(poly)
    err = pari("(P, R) -> vecmax(apply(abs, Vec(P - R)))")(poly, rounded)
    bnf = pari("bnfinit(y^2 + 1)")
    ideal = pari(f"idealhnf(bnfinit(y^2 + 1), {md.replace('I', 'y')})")
    bnr = pari("bnrinit")(bnf, ideal)
    field = pari("(B) -> subst(polredbest(bnrclassfield(B, , 2)), x, 't)")(bnr)
    nf = pari("nfinit")(field)
    # map Z[i] coefficients into nf through a root of X^2 + 1
    counts = pari(
        "(nf, R, p) -> my(i = nfroots(nf, x^2 + 1)[1], "
        "P = Pol(apply(c -> togauss(c, i), Vec(R))), r = nfroots(nf, P)); "
        "[#r, #nfroots(nf, x^p - r[1])]"
    )(nf, rounded, p)
    log2_err = pari("(e) -> if (e == 0, -1e9, log(e) / log(2))")(err)
    return {
        "d": 1,
        "p": p,
        "m": m,
        "alpha": gauss_str(pari(alpha)),
        "pi": gauss_str(pari(pi)),
        "degree": len(reps),
        # constant term first
        "minpoly": [gauss_str(c) for c in pari("Vecrev")(rounded)],
        "rounding_error_log2": float(log2_err),
        "class_field_degree_over_q": int(pari("poldegree")(field)),
        "roots_in_class_field": int(counts[0]),
        "is_pth_power": int(counts[1]) > 0,
    }


CASES = [
    (5, "2 + I", [3, 3], "3 + 2*I", False),
    (5, "2 + I", [2, 2], "3 + 2*I", False),
    (13, "3 + 2*I", [5, 1], "2 + I", True),
]

json.dump([run(*c) for c in CASES], sys.stdout, indent=1)
sys.stdout.write("\n")
