"""Tour of the one-dimensional time machinery.

Projects a smooth function with each member of the projector family, shows
which interface conditions each one matches, and finishes with the lift of
a slab polynomial and the exact identities its defect satisfies.
"""

import numpy as np

from waveslab import (
    IntervalPoly,
    integrated_thomee,
    project_H1,
    project_L2,
    reconstruct_slab,
    reconstruction_constants,
    thomee_project,
    wihler_identities,
)

interval = (0.25, 1.05)
a, b = interval
w = np.exp
dw = np.exp

print("projecting exp(t) on", interval, "at degree 3\n")
projections = {
    "L2": project_L2(w, 3, interval),
    "left-value + derivative": project_H1(w, dw, 3, interval),
    "right-endpoint": thomee_project(w, 3, interval),
    "integrated (both ends + right slope)": integrated_thomee(w, dw, 3, interval),
}
print(f"{'projection':38s} {'err(a)':>9s} {'err(b)':>9s} {'d err(b)':>9s}")
for name, proj in projections.items():
    ea = abs(float(proj.eval(a)) - w(a))
    eb = abs(float(proj.eval(b)) - w(b))
    db = abs(float(proj.deriv(b)) - dw(b))
    print(f"{name:38s} {ea:9.1e} {eb:9.1e} {db:9.1e}")

print("\nevery projector reproduces polynomials of its own degree:")
q = IntervalPoly(interval, np.array([0.3, -1.2, 0.8, 0.4]))
probe = np.linspace(a, b, 9)
worst = max(
    float(np.max(np.abs(p.eval(probe) - q.eval(probe))))
    for p in (
        project_L2(q.eval, 3, interval),
        project_H1(q.eval, q.deriv, 3, interval),
        thomee_project(q.eval, 3, interval),
        integrated_thomee(q.eval, q.deriv, 3, interval),
    )
)
print(f"  worst pointwise defect on a cubic: {worst:.1e}")

print("\nlifting a slab polynomial of degree p to a C1 candidate of degree p+1:")
rng = np.random.default_rng(7)
for p in (2, 3, 4):
    v = IntervalPoly(interval, rng.standard_normal(p + 1))
    prev_deriv = float(v.deriv(a)) - 1.0  # incoming slope one unit off
    lifted = reconstruct_slab(v, prev_deriv)
    jump = float(v.deriv(a)) - prev_deriv
    ids = wihler_identities(v, lifted, jump)
    c1_sq, c2_sq, _ = reconstruction_constants(p)
    print(f"  p={p}: value and slope glued at a ->",
          f"gap(a)={abs(float(lifted.eval(a) - v.eval(a))):.1e},",
          f"slope(a)-incoming={abs(float(lifted.deriv(a)) - prev_deriv):.1e}")
    l, r = ids["deriv_l2"]
    print(f"       derivative defect energy {l:.6e} vs tau*c1^2*jump^2 {r:.6e}")
    l, r = ids["value_l2"]
    print(f"       value defect energy      {l:.6e} <= tau^3*c2^2*jump^2 {r:.6e}")
