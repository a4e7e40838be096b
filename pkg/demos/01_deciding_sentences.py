"""Deciding closed sentences over the reals.

Run with ``python demos/01_deciding_sentences.py``.
"""

from cadqe import decide, parse

# %% A sentence with no free variables has a truth value.
print(decide(parse("(forall x) x*x >= 0")).value)

# %% Order of quantifiers matters: there is always something bigger,
# but nothing bigger than everything.
for text in ("(forall x)(exists y) y > x", "(exists y)(forall x) y > x"):
    print(f"{text:32s} {decide(parse(text)).value}")

# %% False universals come with a counterexample and true existentials with
# a witness.  Values are exact real algebraic numbers.
d = decide(parse("(forall x) x^2 - 2*x + 1 > 0"))
print(d.value, {v: a.approx(6) for v, a in d.genuine.items()})

d = decide(parse("(exists x)(exists y) [x^2 + y^2 = 1 and x*y = 1/3]"), preprocess=False)
print(d.value, {v: a.approx(6) for v, a in d.genuine.items()})

# %% The discriminant criterion for a real root needs a != 0.  Without the
# guard the sentence fails, and the counterexample shows why.
guarded = "(forall a)(forall b)(forall c) [a != 0 -> ((exists x) a*x^2 + b*x + c = 0 <-> b^2 - 4*a*c >= 0)]"
bare = "(forall a)(forall b)(forall c) [(exists x) a*x^2 + b*x + c = 0 <-> b^2 - 4*a*c >= 0]"
print("guarded:", decide(parse(guarded)).value)
d = decide(parse(bare))
print("unguarded:", d.value, {v: a.approx(3) for v, a in d.genuine.items()})

# %% Statistics from the decomposition behind each answer.
d = decide(parse(guarded), short_circuit=False)
print(d.stats)
