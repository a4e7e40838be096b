import json
import random

import pytest
from gmpy2 import mpq

from cadqe import (
    SECTION,
    SECTOR,
    TRUE,
    CadTree,
    UsageError,
    cell_description,
    compute_cad,
    evaluate_qf,
    lift_cell,
    parse,
    parse_poly,
    project,
    render,
)
from cadqe.sample import SamplePoint

from support import locate, random_point_in_leaf, roots_above, signs_at

G5 = ("a", "b", "c", "x1", "x2")
G2 = ("x1", "x2")


def P(text, gens=G2):
    return parse_poly(text, gens)


# -- projection ---------------------------------------------------------------


def test_projection_golden_parts():
    f = P("a*x2^2+b*x2+c-x1", G5)
    phi1, phi2, phi3 = project([f], "x2", parts=True)
    assert set(phi1) == {P("a", G5), P("b", G5), P("c-x1", G5)}
    assert P("4*a^2*(c-x1)-a*b^2", G5) in phi2
    assert phi3 == []


def test_projection_golden_normalized():
    f = P("a*x2^2+b*x2+c-x1", G5)
    got = project([f], "x2")
    want = [P(s, G5).canonical() for s in ("a", "b", "c-x1", "4*a*(c-x1)-b^2")]
    assert set(got) == set(want)
    assert all(g.degree("x2") <= 0 for g in got)


def test_project_examples():
    assert project([P("x2^2-x1")], "x2") == [P("x1")]
    assert project([P("x2-x1"), P("x2+x1")], "x2") == [P("x1")]


# -- construction -------------------------------------------------------------


def test_two_root_quadratic_gives_five_cells():
    t = compute_cad([parse_poly("x^2-2", ("x",))])
    cells = t.cells(1)
    assert [c.kind for c in cells] == [SECTOR, SECTION, SECTOR, SECTION, SECTOR]
    assert [c.signs for c in cells] == [(1,), (0,), (-1,), (0,), (1,)]
    s = [float(c.sample.coords[0]) for c in cells]
    assert s == sorted(s) and s[2] == 0
    assert abs(s[3] - 2 ** 0.5) < 1e-9


def test_single_root_gives_three_cells():
    assert len(compute_cad([parse_poly("x", ("x",))]).cells(1)) == 3


def test_parabola_tree():
    t = compute_cad([P("x2^2-x1")])
    assert [len(c.children) for c in t.root.children] == [1, 3, 5]
    assert len(t.leaves()) == 9
    assert t.family(1) == [P("x1")]


def test_lift_cell_examples():
    t = CadTree([P("x2^2-x1")], G2)
    fam = t.family(2)
    for x1, count in ((1, 5), (-1, 1)):
        cell = type(t.root)(1, (1,), (SECTOR,), SamplePoint.rational([x1]), ())
        assert len(lift_cell(cell, fam)) == count
    # the tree's own family splits x1*x2 into factors, so lift the product directly
    t2 = CadTree([P("x1")], G2)
    zero = [c for c in t2.children(t2.root) if c.kind == SECTION][0]
    assert zero.sample.rational_values() == [0]
    kids = lift_cell(zero, [P("x1*x2")])
    assert len(kids) == 1 and kids[0].signs == (0,)


def test_lift_rejects_wrong_level():
    t = CadTree([P("x2^2-x1")], G2)
    with pytest.raises(UsageError):
        lift_cell(t.root, t.family(2))


def test_compute_cad_partial_level():
    with pytest.raises(UsageError):
        compute_cad([P("x2-x1")], 1)
    t = compute_cad([P("x1-1")], 1, gens=G2)
    assert len(t.leaves()) == 3


def test_empty_family_single_cylinder():
    t = CadTree([], G2).build()
    assert len(t.leaves()) == 1


def test_records_dump():
    t = compute_cad([P("x2^2-x1")])
    recs = t.records(digits=4, exact=True)
    assert len(recs) == 3 + 9
    assert json.loads(json.dumps(recs)) == recs
    assert {r["kind"] for r in recs} == {SECTOR, SECTION}


# -- cell descriptions --------------------------------------------------------


def test_cell_description_examples():
    t = compute_cad([P("x2^2-x1")])
    assert render(cell_description(t.root.children[0], t, 1)) == "x1 < 0"
    r = ("r12", "r13", "r23")
    h = compute_cad([parse_poly(s, r) for s in ("r12", "r13", "r23")])
    origin = locate(h, [0, 0, 0])
    assert cell_description(origin, h) == parse("r12 = 0 and r13 = 0 and r23 = 0", r)
    empty = CadTree([], G2).build()
    assert cell_description(empty.leaves()[0], empty) == TRUE
    with pytest.raises(UsageError):
        cell_description(t.root.children[0], t, 2)


def test_cell_description_holds_on_cell():
    t = compute_cad([P("x2^2-x1"), P("x1+x2-1")])
    rng = random.Random(5)
    for leaf in t.leaves():
        if leaf.full_dimensional:
            pt = random_point_in_leaf(t, leaf, rng)
            assert evaluate_qf(cell_description(leaf, t), dict(zip(G2, pt)))


# -- audits -------------------------------------------------------------------

G3 = ("x", "y", "z")
CORPUS = [
    ([P("x2^2-x1")], G2),
    ([P("x1*x2-1"), P("x2-x1^2")], G2),
    ([P("x1^2+x2^2-1"), P("x2-x1")], G2),
    ([P("x1*x2")], G2),
    ([P("x2^3-x1*x2")], G2),
    ([parse_poly("x^2+y^2+z^2-1", G3), parse_poly("z-x*y", G3)], G3),
    ([parse_poly("x*y*z-1", G3)], G3),
]


@pytest.mark.parametrize("F,gens", CORPUS)
def test_sign_invariance_audit(F, gens):
    t = compute_cad(F, gens=gens)
    rng = random.Random(11)
    for leaf in t.leaves():
        if not leaf.full_dimensional:
            continue
        want = leaf.sign_vectors()
        for _ in range(5):
            pt = random_point_in_leaf(t, leaf, rng)
            got = tuple(signs_at(t, k, pt[:k]) for k in range(1, len(gens) + 1))
            assert got == want


@pytest.mark.parametrize("F,gens", CORPUS[:4] + CORPUS[5:6])
def test_partition(F, gens):
    t = compute_cad(F, gens=gens)
    rng = random.Random(3)
    for _ in range(100):
        pt = [mpq(rng.randint(-30, 30), rng.randint(1, 10)) for _ in gens]
        leaf = locate(t, pt)
        assert leaf.level == len(gens)
        # the located leaf carries exactly the signs at the point
        assert leaf.sign_vectors() == tuple(signs_at(t, k, pt[:k]) for k in range(1, len(gens) + 1))


@pytest.mark.parametrize("F,gens", CORPUS)
def test_child_count_bookkeeping(F, gens):
    t = compute_cad(F, gens=gens)
    assert len(t.root.children) == 2 * len(roots_above(t, 1, [])) + 1
    for cell in t.cells():
        if cell.children is None:
            continue
        assert len(cell.children) % 2 == 1
        kinds = [c.kind for c in cell.children]
        assert kinds[::2] == [SECTOR] * (len(kinds) // 2 + 1)
        assert kinds[1::2] == [SECTION] * (len(kinds) // 2)
        if cell.sample.is_rational:
            m = len(roots_above(t, cell.level + 1, cell.sample.rational_values()))
            assert len(cell.children) == 2 * m + 1


def test_deterministic_records():
    F = [P("x1^2+x2^2-1"), P("x2-x1")]
    assert compute_cad(F).records() == compute_cad(F).records()
