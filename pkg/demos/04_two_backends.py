# The same numbers from curves through actual points.
from fractions import Fraction

from tropical_descendants.direct import compute_rd_direct, random_points, solve_positions
from tropical_descendants.lattice import cubic_degree
from tropical_descendants.subdivision import compute_rd

line, conic = cubic_degree(1), cubic_degree(2)

res = compute_rd_direct(line, (2,), seed=3)
print(res.points)
(t,) = res.types
for e in t.edges:
    print(e)
sol = solve_positions(t, res.points)
print("vertex:", sol.positions[("v", 0)], "lengths:", sol.lengths)

# a conic through five points
res = compute_rd_direct(conic, (5,), seed=1)
print(len(res.types), res.rd.to_string())

# descendant conditions: the two methods agree
for nbar in [(3, 1), (1, 2), (2, 0, 1), (1, 0, 0, 1), (0, 0, 0, 0, 1)]:
    a = compute_rd_direct(conic, nbar, seed=7).rd
    b = compute_rd(conic, nbar)
    print(nbar, a == b, b.to_string())

# the count does not depend on where the points are
for seed in range(4):
    pts = random_points(3, 50 + seed)
    print(compute_rd_direct(conic, (2, 0, 1), points=pts).rd.to_string())

# points that are too special are refused
try:
    compute_rd_direct(line, (2,), points=[(Fraction(0), Fraction(0)), (Fraction(3), Fraction(0))])
except Exception as exc:
    print(type(exc).__name__, exc)
