# Weights of marked vertices, computed by merging pairs of edges.
from tropical_descendants.closed_forms import star_degree, star_weight, triangle_degree, triangle_family_closed
from tropical_descendants.refined import eval_y1
from tropical_descendants.uniqueness import enumerate_tree_shapes, proportionality_constant, rm_alpha
from tropical_descendants.weights import (
    recursion_summand_count,
    vertex_weight_classical,
    vertex_weight_refined,
    wall_identity_sum,
)

# a trivalent marked vertex gets [mu]^+, an unmarked one [mu]^-
tri = [(2, 0), (-1, -2), (-1, 2)]
print(vertex_weight_refined(tri, marked=True).to_string())
print(vertex_weight_refined(tri, marked=False).to_string())

# four-valent marked vertices: different answers, same classical value 6
for v in ([(1, 0), (1, 0), (-1, 0), (-1, 0)],
          [(1, 0), (-1, 0), (0, 1), (0, -1)],
          [(1, -1), (1, 1), (-1, 0), (-1, 0)]):
    w = vertex_weight_refined(v, marked=True)
    print(v, w.to_string(), eval_y1(w), vertex_weight_classical(v, marked=True))

# the fully expanded recursion has many terms
print([recursion_summand_count(n) for n in range(3, 8)])

# star family against its closed form
for r in range(2, 6):
    print(r, star_weight(r) == vertex_weight_refined(star_degree([1] * r), True), star_weight(r))

# triangle family
print(triangle_family_closed(2, (1, 1)).to_string())
print(vertex_weight_refined(triangle_degree(2, (1, 1)), True).to_string())

# summing over trivalent trees with [.]^+ weights gives the same answer up to a constant
v = [(1, 0), (1, 1), (0, 1), (-1, -1), (-1, -1)]
for shape in enumerate_tree_shapes(5):
    print(shape.describe(), (rm_alpha(v, shape) * proportionality_constant(5)).to_string())
print(vertex_weight_refined(v, True).to_string())

# moving a marked point across a wall changes nothing
print(wall_identity_sum([(1, 0), (1, 1), (-2, 1), (0, -2)]))
