import itertools
import random

import pytest
from gmpy2 import mpq

from cadqe import (
    BUILTIN_MODELS,
    TRUE,
    CiStatement,
    ParseError,
    PolynomialModel,
    UsageError,
    builtin_model,
    decide,
    eliminate,
    evaluate_qf,
    format_model,
    gaussian_complete_model,
    gaussian_constraints,
    heywood_model,
    identifiability_sentence,
    implicitization_formula,
    load_model,
    membership_sentence,
    model_compare_sentence,
    parse,
    parse_model,
    pd_constraints,
    quantity_region_formula,
)
from cadqe.models import matrix_symbol

from support import heywood_image

R3 = ("r12", "r13", "r23")


def F(text, gens=R3):
    return parse(text, gens)


# -- CI encodings -------------------------------------------------------------


def test_ci_constraints_examples():
    assert gaussian_constraints(CiStatement(1, 2), 3) == F("r12 = 0")
    assert gaussian_constraints(CiStatement(1, 3, 2), 3) == F("r13 - r12*r23 = 0")
    s = ("s11", "s12", "s13", "s22", "s23", "s33")
    assert gaussian_constraints(CiStatement(1, 3, 2), 3, "covariance") == parse("s22*s13 - s12*s23 = 0", s)


def test_ci_general_conditioning_set():
    f = gaussian_constraints(CiStatement(1, 4, (2, 3)), 4)
    # a single 3x3 minor
    assert f.poly.degree("r14") == 1


def test_pd_constraints_correlation():
    want = F("1 - r12^2 > 0 and 1 - r13^2 > 0 and 1 - r23^2 > 0 and 1 + 2*r12*r13*r23 - r12^2 - r13^2 - r23^2 > 0")
    assert pd_constraints(3) == want


def test_ci_statement_parse_and_errors():
    assert CiStatement.parse("1 _||_ 3 | 2") == CiStatement(1, 3, 2)
    assert CiStatement.parse("{1,2} ⊥ 4 | {3}") == CiStatement((1, 2), 4, 3)
    assert str(CiStatement.parse("1 indep 2")) == "1 _||_ 2"
    with pytest.raises(UsageError):
        CiStatement(1, 1)
    with pytest.raises(UsageError):
        gaussian_constraints(CiStatement(1, 5), 3)
    with pytest.raises(UsageError):
        CiStatement.parse("1 2 3")


def test_matrix_symbol():
    assert matrix_symbol(2, 1, 3) == "r12"
    assert matrix_symbol(1, 1, 3, "covariance") == "s11"
    assert matrix_symbol(3, 11, 12) == "r3_11"


def test_membership_examples():
    assert decide(membership_sentence(["1 _||_ 2", "1 _||_ 3 | 2"], "1 _||_ 3", 3)).value is True
    assert decide(membership_sentence(["1 _||_ 2", "1 _||_ 2 | 3"], ["1 _||_ 3", "2 _||_ 3"], 3)).value is True
    assert decide(membership_sentence(["1 _||_ 2", "2 _||_ 3"], "1 _||_ 2", 3)).value is True
    # not every conclusion follows
    assert decide(membership_sentence(["1 _||_ 2"], "1 _||_ 3", 3)).value is False


# -- models -------------------------------------------------------------------


def test_heywood_maps():
    m = heywood_model()
    assert m.evaluate((1, 2, 3)) == (2, 3, 6)
    assert m.evaluate((0, 0, 0)) == (0, 0, 0)
    c = heywood_model("covariance")
    vals = c.evaluate(dict(eH=1, e1=1, e2=1, e3=1, b1=1, b2=1, b3=1))
    assert vals == (2, 2, 2, 1, 1, 1)
    assert c.admits([1] * 7) and not c.admits([0] + [1] * 6)


def test_model_validation():
    with pytest.raises(UsageError):
        PolynomialModel(("t",), TRUE, ("x", "y"), ("t",))
    with pytest.raises(UsageError):
        PolynomialModel(("t",), "u > 0", ("x",), ("t",))
    with pytest.raises(UsageError):
        PolynomialModel(("t",), TRUE, ("x",), ("t*u",))
    with pytest.raises(UsageError):
        PolynomialModel(("t",), TRUE, ("t",), ("t",))


def test_compare_examples():
    corr = builtin_model("heywood-corr")
    assert decide(model_compare_sentence(corr, corr, "overlap")).value is True
    assert decide(model_compare_sentence(corr, corr, "equality")).value is True
    std = builtin_model("heywood-std")
    assert decide(model_compare_sentence(std, corr, "inclusion")).value is True
    assert decide(model_compare_sentence(corr, std, "inclusion")).value is False
    with pytest.raises(UsageError):
        model_compare_sentence(corr, builtin_model("heywood-cov"))


def test_inclusion_antisymmetry():
    line = PolynomialModel(("t",), TRUE, ("x", "y"), ("t", "t"))
    ray = PolynomialModel(("t",), "t > 0", ("x", "y"), ("t", "t"))
    parab = PolynomialModel(("t",), TRUE, ("x", "y"), ("t", "t^2"))
    corpus = [line, ray, parab, PolynomialModel(("u",), TRUE, ("x", "y"), ("u^3", "u^3"))]
    for a, b in itertools.product(corpus, repeat=2):
        eq = decide(model_compare_sentence(a, b, "equality")).value
        both = decide(model_compare_sentence(a, b)).value and decide(model_compare_sentence(b, a)).value
        assert eq == both


def test_identifiability_examples():
    m = heywood_model()
    d = decide(identifiability_sentence(m))
    assert d.value is False
    assert decide(identifiability_sentence(m, ["7"])).value is True
    ident = PolynomialModel(("t",), TRUE, ("x",), ("t",))
    assert decide(identifiability_sentence(ident)).value is True
    # a quantity that is identified: the product of all three weights squared
    assert decide(identifiability_sentence(m, ["b1^2*b2^2*b3^2"])).value is True


def test_identifiability_counterexample_and_sign_flip():
    m = heywood_model()
    sentence = identifiability_sentence(m)
    d = decide(sentence, preprocess=False)
    w = d.genuine
    assert w is not None and set(w) == {"b1", "b2", "b3", "b1'", "b2'", "b3'"}
    body = sentence
    while hasattr(body, "body"):
        body = body.body
    if all(a.is_rational for a in w.values()):
        pt = {k: a.value for k, a in w.items()}
        assert evaluate_qf(body.lhs, pt) and not evaluate_qf(body.rhs, pt)
    flip = {"b1": 1, "b2": 2, "b3": 3, "b1'": -1, "b2'": -2, "b3'": -3}
    assert evaluate_qf(body.lhs, flip) and not evaluate_qf(body.rhs, flip)


def test_with_observables_form_agrees():
    m = heywood_model()
    assert decide(identifiability_sentence(m, with_observables=True)).value is False


def test_quantity_region_examples():
    sq = PolynomialModel(("t",), TRUE, ("x",), ("t",))
    out = eliminate(quantity_region_formula(sq, "t^2"))
    assert [evaluate_qf(out, {"r": v}) for v in (-1, 0, 2)] == [False, True, True]
    out = eliminate(quantity_region_formula(sq, "1"))
    assert [evaluate_qf(out, {"r": v}) for v in (0, 1, 2)] == [False, True, False]
    pos = PolynomialModel(("t",), "t > 0", ("x",), ("t",))
    out = eliminate(quantity_region_formula(pos, "t"))
    assert [evaluate_qf(out, {"r": v}) for v in (-1, 0, mpq(1, 9))] == [False, False, True]
    with pytest.raises(UsageError):
        quantity_region_formula(sq, "t", var="t")


def test_implicitization_examples():
    diag = PolynomialModel(("t",), TRUE, ("x", "y"), ("t", "t"))
    out = eliminate(implicitization_formula(diag))
    assert evaluate_qf(out, {"x": 2, "y": 2}) and not evaluate_qf(out, {"x": 2, "y": 3})
    sq = PolynomialModel(("t",), TRUE, ("x",), ("t^2",))
    out = eliminate(implicitization_formula(sq))
    assert [evaluate_qf(out, {"x": v}) for v in (-1, 0, 5)] == [False, True, True]
    f = implicitization_formula(heywood_model())
    assert f == parse("(exists b1)(exists b2)(exists b3) [r12 = b1*b2 and r13 = b1*b3 and r23 = b2*b3]")


_heywood = {}


def heywood_answer():
    if not _heywood:
        _heywood["f"] = eliminate(implicitization_formula(heywood_model()))
    return _heywood["f"]


def test_heywood_sign_analysis():
    out = heywood_answer()
    for s in itertools.product((-1, 0, 1), repeat=3):
        assert evaluate_qf(out, dict(zip(R3, s))) == heywood_image(*s), s
    for s in itertools.product((-1, 1), repeat=3):
        want = s[0] * s[1] * s[2] > 0
        assert evaluate_qf(out, dict(zip(R3, s))) is want


SUM_PRODUCT = PolynomialModel(("s", "t"), "s > 0 and t > 0", ("x", "y"), ("s*t", "s + t"), "sum-product")


def test_forward_image_consistency():
    rng = random.Random(17)
    for m in (heywood_model(), SUM_PRODUCT):
        out = heywood_answer() if m.name == "heywood-corr" else eliminate(implicitization_formula(m))
        n = 0
        while n < 200:
            theta = [mpq(rng.randint(-9, 9), rng.randint(1, 9)) for _ in m.params]
            if not m.admits(theta):
                continue
            n += 1
            assert evaluate_qf(out, dict(zip(m.observables, m.evaluate(theta))))


def test_sum_product_image():
    # (x, y) = (st, s + t) with s, t > 0: exactly x > 0, y > 0, y^2 >= 4x
    out = eliminate(implicitization_formula(SUM_PRODUCT))
    rng = random.Random(4)
    for _ in range(300):
        x, y = (mpq(rng.randint(-20, 20), rng.randint(1, 4)) for _ in range(2))
        assert evaluate_qf(out, {"x": x, "y": y}) == (x > 0 and y > 0 and y * y >= 4 * x)


# -- description text ---------------------------------------------------------


@pytest.mark.parametrize("name", sorted(BUILTIN_MODELS))
def test_dsl_roundtrip(name):
    m = builtin_model(name)
    assert parse_model(format_model(m)) == m


def test_dsl_inline_map_and_comments():
    text = """
    # a ray in the plane
    name: ray
    params: t
    constraint: t > 0   # open ray
    observables: x, y
    map: x = t; y = 2*t
    """
    m = parse_model("\n".join(line[4:] for line in text.splitlines()))
    assert m.name == "ray" and m.evaluate([3]) == (3, 6)
    assert not m.admits([0])


def test_dsl_continuation_lines():
    m = parse_model("params: a, b\nconstraint: a > 0\n  and b > 0\nobservables: u\nmap:\n  u = a*b\n")
    assert m.constraint == parse("a > 0 and b > 0", ("a", "b"))


@pytest.mark.parametrize(
    "text, where",
    [
        ("params: t\nobservables: x\n", "map"),
        ("params: t\nobservables: x\nmap: y = t\n", "not an observable"),
        ("params: t\nobservables: x, y\nmap: x = t\n", "no map entry"),
        ("params: t\nobservables: x\nmap: x = t +\n", "map entry"),
        ("params: t\nobservables: x\nmap: x = t\nmap: x = t\n", "twice"),
        ("params: t\nobservables: x\nmap: x = t\ncolour: red\n", "unknown field"),
        ("params: t\nconstraint: t >\nobservables: x\nmap: x = t\n", "constraint"),
        ("params: t\nobservables: x\nmap: x = s\n", "non-parameters"),
    ],
)
def test_dsl_errors(text, where):
    with pytest.raises(ParseError) as e:
        parse_model(text)
    assert where in str(e.value)


def test_load_model(tmp_path):
    assert load_model("heywood-cov") == heywood_model("covariance")
    p = tmp_path / "m.model"
    p.write_text(format_model(gaussian_complete_model(3, "correlation")), encoding="utf-8")
    assert load_model(str(p)) == gaussian_complete_model(3, "correlation")
    with pytest.raises(UsageError):
        load_model("no-such-model")
