"""Describing a model in a text file and asking questions about it."""

import tempfile
from pathlib import Path

from cadqe import eliminate, evaluate_qf, format_model, implicitization_formula, load_model, render
from cadqe.cli import run

TEXT = """\
# two positive numbers seen through their product and sum
name: sum-product
params: s, t
constraint: s > 0 and t > 0
observables: x, y
map:
  x = s*t
  y = s + t
"""

path = Path(tempfile.mkdtemp()) / "sum_product.model"
path.write_text(TEXT, encoding="utf-8")

m = load_model(str(path))
print(format_model(m))

# %% The image is cut out by positivity and the discriminant.
out = eliminate(implicitization_formula(m))
print(render(out))
for x, y in ((1, 2), (1, 3), (2, 2), (-1, 3)):
    print((x, y), evaluate_qf(out, {"x": x, "y": y}))

# %% The same question through the command line.
run(["model", "implicitize", str(path)])
run(["model", "region", str(path), "--quantity", "s^2 + t^2", "--var", "q"])
