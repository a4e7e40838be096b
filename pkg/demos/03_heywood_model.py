"""A one-factor Gaussian model with three observed variables.

The correlations are r_ij = b_i b_j.  Eliminating the loadings describes
exactly which correlation triples the model can produce.
"""

import itertools

from cadqe import (
    builtin_model,
    decide,
    eliminate,
    evaluate_qf,
    heywood_model,
    identifiability_sentence,
    implicitization_formula,
    model_compare_sentence,
    render,
)

m = heywood_model()
f = implicitization_formula(m)
print(render(f))

# %% The image: a positive product of correlations, an axis, or the origin.
image = eliminate(f)
print(render(image))
for s in itertools.product((-1, 0, 1), repeat=3):
    if evaluate_qf(image, dict(zip(m.observables, s))):
        print("  reachable sign pattern", s)

# %% The loadings are not identified: b and -b give the same correlations.
d = decide(identifiability_sentence(m))
print("identified:", d.value)
print("b1^2 b2^2 b3^2 identified:", decide(identifiability_sentence(m, ["b1^2*b2^2*b3^2"])).value)

# %% Covariance form against the saturated model on three variables.
hey, full = builtin_model("heywood-cov"), builtin_model("gaussian-complete-3")
print("inside:", decide(model_compare_sentence(hey, full)).value)
order = ["s12p", "s13p", "s23p", "s11p", "s22p", "s33p", "eH", "b1", "b2", "b3"]
d = decide(model_compare_sentence(full, hey), var_order=order)
print("everything reachable:", d.value)
print("  missed covariance:", {v: a.approx(3) for v, a in d.genuine.items()})
