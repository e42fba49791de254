# Where the denominators come from and what happens at y = 1 and y = -1.
from tropical_descendants.closed_forms import ac1_even, ac1_odd_corrected, triangle_family_closed
from tropical_descendants.lattice import cubic_degree, newton_polygon, polygon_metrics
from tropical_descendants.refined import eval_y1, eval_y_minus1, pole_analysis, to_y_form
from tropical_descendants.subdivision import compute

cubic = cubic_degree(3)
met = polygon_metrics(newton_polygon(cubic))
geom = {"p_a": met.interior_points, "boundary_points": met.boundary_points, "num_ends": len(cubic)}

for nbar in [(8,), (6, 1), (4, 2), (2, 3), (0, 4), (5, 0, 1), (2, 0, 2), (0, 1, 0, 0, 0, 1)]:
    r = compute(cubic, nbar)
    rep = pole_analysis(r.rd, geom, nbar)
    print(nbar, r.rd.to_string())
    print("   pole order", rep.m_y, "bound", rep.bound, "deg F", rep.deg_F, "predicted", rep.expected_deg_F)

# no descendants: an honest Laurent polynomial
rd = compute(cubic, (8,)).rd
print(eval_y1(rd), eval_y_minus1(rd))

# families where the pole bound is attained
for k in (1, 2, 3):
    print(k, to_y_form(ac1_even(k)).m, to_y_form(ac1_odd_corrected(k, 5)).m)
print(ac1_odd_corrected(1, 3) == triangle_family_closed(3, (1, 1, 1)))
