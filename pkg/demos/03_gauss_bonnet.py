"""
Angled Euler numbers on surfaces
================================

"""

import random
from fractions import Fraction

from montesinos import gauss_bonnet as gb
from montesinos.feasibility import PRESETS_BY_REGIME
from montesinos.tangles import parse_knot

# a triangle face with three corners of pi/3 is flat
print(gb.angled_euler(gb.AngledFace(1, (Fraction(1, 3),) * 3)))

# vertex sums of exactly 2pi give equality with the surface Euler characteristic
print(gb.graph_euler_check(gb.tetrahedron()).summary())
print(gb.graph_euler_check(gb.torus_grid()).summary())

# more angle at one vertex pushes the sum above chi
print(gb.graph_euler_check(gb.perturb_vertex(gb.tetrahedron(), 0, Fraction(1, 3))).summary())

# random triangulations with random rational angles
rng = random.Random(1)
for surface in ("sphere", "torus"):
    tris, chi = gb.random_triangulation(rng, surface, moves=12)
    g = gb.graph_from_triangles(tris, chi, gb.random_angles(rng, tris))
    print(surface, len(tris), "triangles:", gb.graph_euler_check(g).summary())

# disk faces of a certified knot never have positive curvature
k = parse_knot("K(1/3, 1/4, 2/5)")
rep = gb.curvature_spectrum(k, PRESETS_BY_REGIME["case-1"].certificate, r_max=4, s_max=12)
print(len(rep.entries), "face types, flat ones:", [(f.r, f.s, f.tangle_index) for f in rep.zeros])
