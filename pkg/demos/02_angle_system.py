"""
Angle inequalities and exact Fourier-Motzkin
============================================

"""

from montesinos.feasibility import build_angle_system, fmt, preset_for, solve, verify_certificate
from montesinos.tangles import parse_knot

# six unknowns, exterior angles in units of pi
k = parse_knot("K(1/3, 1/4, 2/5)")
system = build_angle_system(k)
for c in system.constraints:
    print(f"{c.provenance:<16} {c}")

# a preset covering a whole regime, checked constraint by constraint
cert = preset_for(k)
print("preset", cert.regime, cert.to_json(), "violations:", verify_certificate(k, cert))

# the solver finds its own angles
sol = solve(system)
print("solver point:", {v: fmt(x) for v, x in sol.point.items()})

# when no angles exist the solver returns a Farkas combination instead
bad = build_angle_system(parse_knot("K(1/2, 1/5, 1/5)"))
sol = solve(bad)
print("feasible:", sol.feasible)
for item in sol.farkas.to_json(bad)["multipliers"]:
    print("  ", item["multiplier"], "x", item["provenance"], "|", bad.constraints[item["constraint"]])
