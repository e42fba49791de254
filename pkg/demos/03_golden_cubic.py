# Plane cubics through 2 ordinary points and 2 points with psi^2 conditions.
from tropical_descendants.lattice import cubic_degree
from tropical_descendants.refined import eval_y1
from tropical_descendants.subdivision import StretchedConfig, classical_nrd, compute
from tropical_descendants.svg import render_svg
from tropical_descendants.weights import normalization_factor

d = cubic_degree(3)
nbar = (2, 0, 2)
print(d.to_json())

# the default order functional is x first, then -y; the psi-indices along it are tau
cfg = StretchedConfig(tau=(2, 0, 2, 0))
res = compute(d, nbar, cfg)
print(len(res.contributions), "marked subdivisions over", res.rag_rug_count, "rag rugs")

for c in res.contributions:
    ks = [e.k for e in c.subdivision.rag_rug]
    cells = [x.cls.tag[0] + str(x.cls.mu or "") for x in c.subdivision.cells]
    nw = c.weight * normalization_factor(nbar)
    print(ks, cells, "|G| =", c.symmetry, " ", nw.to_string())

print("NRD =", res.nrd.to_string())
print("NRD(1) =", eval_y1(res.nrd), "classical:", classical_nrd(res))

# any other tau or order functional gives the same total
for lam in ("1,2/0,1", "2,-1/1,0"):
    for tau in ((0, 0, 2, 2), (2, 2, 0, 0)):
        r = compute(d, nbar, StretchedConfig.parse_lambda(lam, tau))
        print(lam, tau, len(r.contributions), r.nrd == res.nrd)

with open("golden_cubic.svg", "w") as fh:
    fh.write(render_svg([c.subdivision for c in res.contributions]))
print("wrote golden_cubic.svg")
