"""
Rational tangles and Montesinos knots
=====================================

"""

from fractions import Fraction

from montesinos import tangles as T

# pbar is the inverse of -p mod q, taken with the smallest magnitude
for p, q in [(1, 3), (2, 5), (5, 7), (3, 7)]:
    print(f"p/q = {p}/{q}  pbar = {T.mod_inverse_min_abs(p, q)}  parity = {T.parity_type(p, q).value}")

# integer parts move into e0; fractional parts land in (-q/2, q/2]
k = T.normalize([Fraction(7, 3), Fraction(1, 4), Fraction(2, 5)])
print(k.literal(), [(t.p, t.q) for t in k.tangles], "e0 =", k.e0)

# the closure of three tangles may be a knot or a link
for lit in ["K(1/2, 1/5, 1/5)", "K(1/3, 1/3, 2/7)", "K(1/2, 1/2, 1/2)"]:
    print(lit, "components:", T.component_count(T.parse_knot(lit)))

# the twelve permutation/mirror images share one representative
k = T.parse_knot("K(1/3, -1/4, 2/5)")
print(len(T.orbit(k)), "images, representative", T.orbit_representative(k).literal())

# tangles with |pbar| = 2 have a short partial fraction form
pf = T.partial_fraction_small_pbar(3, 7)
print("3/7: n =", pf.n, "m =", pf.m, "signs =", pf.signs, "value =", pf.reconstructed)
