"""A cylindrical decomposition, level by level.

The parabola x2^2 = x1 splits the plane into nine cells: one cylinder over
x1 < 0, three over x1 = 0 and five over x1 > 0.
"""

from cadqe import CadTree, cell_description, compute_cad, parse_poly, project, render

G = ("x1", "x2")
f = parse_poly("x2^2 - x1", G)

# %% Projection eliminates x2 and keeps what controls the roots in x2.
print("projection:", [str(p) for p in project([f], "x2")])

# %% Build the full tree and walk it.
tree = compute_cad([f])
for cell in tree.root.children:
    print(cell.kind, [float(c) for c in cell.sample.coords], "->", len(cell.children), "children")
print(len(tree.leaves()), "leaves")

# %% Every leaf has a defining formula, a sample point and its sign vector.
for leaf in tree.leaves():
    pt = ", ".join(f"{float(c):+.3f}" for c in leaf.sample.coords)
    print(f"({pt})  signs {leaf.signs}  {render(cell_description(leaf, tree))}")

# %% The golden projection for a general quadratic with a moving constant.
G5 = ("a", "b", "c", "x1", "x2")
q = parse_poly("a*x2^2 + b*x2 + c - x1", G5)
coeffs, pscs, pairs = project([q], "x2", parts=True)
print("coefficients:", [str(p) for p in coeffs])
print("discriminant part:", [str(p) for p in pscs])
print("pairs:", pairs)

# %% A partial tree stops at the requested level.
partial = CadTree([parse_poly("x1^2 - 2", G)], G).build(1)
print([c.kind for c in partial.cells(1)])
