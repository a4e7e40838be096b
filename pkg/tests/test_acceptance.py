"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N: PASS|FAIL`` line; the lines are printed
again in the terminal summary.  Run on its own with

    pytest tests/test_acceptance.py -s
"""

import itertools
import random

from gmpy2 import mpq

import test_cad
import test_formula
import test_resultants
import test_roots
from cadqe import (
    builtin_model,
    compute_cad,
    decide,
    eliminate,
    evaluate_qf,
    heywood_model,
    identifiability_sentence,
    implicitization_formula,
    membership_sentence,
    model_compare_sentence,
    parse,
    parse_poly,
    project,
    substitute,
    to_prenex,
)
from cadqe.qe import check_elimination

from support import (
    criterion,
    heywood_image,
    holds_exact,
    parabola_min_oracle,
    sample_point,
    straddling_rationals,
)

R3 = ("r12", "r13", "r23")


def test_criterion_01_square_nonnegative():
    with criterion(1, "(forall x) x*x >= 0 is true", budget=1):
        assert decide(parse("(forall x) x*x >= 0")).value is True


def test_criterion_02_quadratic_root_equivalence():
    with criterion(2, "guarded root equivalence true, unguarded false at a=b=0", budget=60):
        guarded = parse("(forall a)(forall b)(forall c) [a != 0 -> "
                        "((exists x) a*x^2 + b*x + c = 0 <-> b^2 - 4*a*c >= 0)]")
        assert decide(guarded).value is True
        bare = parse("(forall a)(forall b)(forall c) "
                     "[(exists x) a*x^2 + b*x + c = 0 <-> b^2 - 4*a*c >= 0]")
        d = decide(bare)
        assert d.value is False
        w = d.genuine
        assert w["a"].value == 0 and w["b"].value == 0 and float(w["c"]) != 0
        # the witness really breaks the biconditional
        assert decide(substitute(bare.body.body.body, {v: w[v].value for v in "abc"})).value is False


def test_criterion_03_positivity_equivalence():
    with criterion(3, "guarded positivity equivalence is true", budget=60):
        f = parse("(forall a)(forall b)(forall c) [a != 0 -> "
                  "((forall x) a*x^2 + b*x + c > 0 <-> b^2 - 4*a*c < 0 and a > 0)]")
        assert decide(f).value is True


def test_criterion_04_heywood_implicitization():
    with criterion(4, "Heywood image on 1000 random points and 27 sign patterns", budget=600):
        f = implicitization_formula(heywood_model())
        out = eliminate(f)
        rng = random.Random(1234)
        crit = (-1, 0, 1)
        pts = [tuple(straddling_rationals(rng, crit, spread=2) for _ in R3) for _ in range(1000)]
        pts += [tuple(mpq(s) for s in p) for p in itertools.product(crit, repeat=3)]
        for p in pts:
            pt = dict(zip(R3, p))
            got = evaluate_qf(out, pt)
            assert got == heywood_image(*p), p
            assert got == decide(substitute(f, pt)).value, p


def test_criterion_05_heywood_identifiability():
    with criterion(5, "Heywood global identifiability is false with a checked witness", budget=600):
        s = identifiability_sentence(heywood_model())
        d = decide(s, preprocess=False)
        assert d.value is False
        P = to_prenex(s, free_order=[])
        pt = sample_point(d.witness, P.order)
        assert holds_exact(P.matrix, pt, P.order) is False
        body = s
        while hasattr(body, "body"):
            body = body.body
        assert holds_exact(body.lhs, pt, P.order) and not holds_exact(body.rhs, pt, P.order)
        flip = {"b1": 1, "b2": 2, "b3": 3, "b1'": -1, "b2'": -2, "b3'": -3}
        assert evaluate_qf(body.lhs, flip) and not evaluate_qf(body.rhs, flip)


def test_criterion_06_ci_membership():
    with criterion("6a", "{1 _||_ 2, 1 _||_ 3 | 2} implies 1 _||_ 3", budget=60):
        assert decide(membership_sentence(["1 _||_ 2", "1 _||_ 3 | 2"], "1 _||_ 3", 3)).value is True
    with criterion("6b", "{1 _||_ 2, 1 _||_ 2 | 3} implies 1 _||_ 3 or 2 _||_ 3", budget=60):
        s = membership_sentence(["1 _||_ 2", "1 _||_ 2 | 3"], ["1 _||_ 3", "2 _||_ 3"], 3)
        assert decide(s).value is True


REVERSE_ORDER = ["s12p", "s13p", "s23p", "s11p", "s22p", "s33p", "eH", "b1", "b2", "b3"]


def test_criterion_07_model_comparison():
    hey = builtin_model("heywood-cov")
    full = builtin_model("gaussian-complete-3")
    with criterion("7a", "Heywood inside the complete model", budget=600):
        assert decide(model_compare_sentence(hey, full, "inclusion")).value is True
    with criterion("7b", "Heywood equal to the complete model is false", budget=600):
        eq = model_compare_sentence(hey, full, "equality")
        assert decide(eq, var_order=REVERSE_ORDER).value is False
        # the failing half names a covariance matrix outside the Heywood image
        d = decide(model_compare_sentence(full, hey, "inclusion"), var_order=REVERSE_ORDER)
        assert d.value is False
        w = {k: a.value for k, a in d.genuine.items()}
        theta = [w[p] for p in full.params]
        assert full.admits(theta)
        image = dict(zip(hey.observables, full.evaluate(theta)))
        assert decide(substitute(implicitization_formula(hey), image)).value is False


def test_criterion_08_projection_golden():
    with criterion(8, "projection of a*x2^2+b*x2+c-x1 onto x2", budget=10):
        G5 = ("a", "b", "c", "x1", "x2")
        f = parse_poly("a*x2^2+b*x2+c-x1", G5)
        got = project([f], "x2")
        want = [parse_poly(s, G5).canonical() for s in ("a", "b", "c-x1", "4*a*(c-x1)-b^2")]
        assert set(got) == set(want) and len(got) == len(want)
        assert project([f], "x2", parts=True)[2] == []


def test_criterion_09_cad_structure():
    with criterion(9, "5 cells for x^2-2; 9 leaves with 1/3/5 children for x2^2-x1", budget=10):
        assert len(compute_cad([parse_poly("x^2-2", ("x",))]).cells(1)) == 5
        t = compute_cad([parse_poly("x2^2-x1", ("x1", "x2"))], 2)
        assert len(t.leaves()) == 9
        assert [len(c.children) for c in t.root.children] == [1, 3, 5]


def test_criterion_10_parabola_elimination():
    with criterion(10, "(exists x1)(forall x2) elimination vs a > 0 or a = b = 0", budget=600):
        f = parse("(exists x1)(forall x2) a*x2^2 + b*x2 + c - x1 > 0")
        out = eliminate(f)
        rng = random.Random(77)
        pts = [{v: straddling_rationals(rng, (0,), spread=3) for v in "abc"} for _ in range(1000)]
        for pt in pts:
            assert evaluate_qf(out, pt) == parabola_min_oracle(pt["a"], pt["b"], pt["c"]), pt
        assert check_elimination(f, out, pts[:200]) == []


def test_criterion_11_property_suites():
    with criterion(11, "property suites", budget=600):
        test_resultants.test_multiplicativity()
        test_resultants.test_gcd_degree_criterion()
        test_roots.test_isolation_count_matches_sturm()
        for F, gens in test_cad.CORPUS:
            test_cad.test_sign_invariance_audit(F, gens)
        test_formula.test_prenex_preserves_truth()
        for text in test_formula.CORPUS:
            test_formula.test_parse_render_roundtrip(text)
