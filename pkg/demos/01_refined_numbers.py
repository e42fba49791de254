# Refined values are Laurent polynomials in z = y^(1/2) over a power of (z + 1/z).
# Everything is exact; coefficients are Fractions.
from tropical_descendants.refined import (
    RefinedValue,
    bracket_minus,
    bracket_plus,
    eval_y1,
    eval_y_minus1,
    symmetric_to_w,
    to_y_form,
)

# quantum integers [a]^- and their "plus" cousins [a]^+
for a in range(5):
    print(a, RefinedValue(bracket_minus(a)).to_string(), "|", bracket_plus(a).to_string())

# [a]^- tends to a and [a]^+ tends to 1 as y -> 1
print(eval_y1(RefinedValue(bracket_minus(7))), eval_y1(bracket_plus(7)))

# products get reduced: common factors of z + 1/z are divided out
v = bracket_plus(0) * bracket_plus(2) * RefinedValue(bracket_minus(3))
print(v)
print(v.to_string())

# the y-form: numerator in y over (y + 2 + 1/y)^m
w = RefinedValue(bracket_minus(3)) ** 2
yf = to_y_form(w)
print(yf.numerator.to_string("y"), "over power", yf.m)
print("at y=-1:", eval_y_minus1(w))

# a symmetric numerator is a polynomial in w = y + 1/y
print(symmetric_to_w(yf.numerator))  # ascending coefficients

# serialization is a plain JSON object
print(w.to_json())
