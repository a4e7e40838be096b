"""Real quantifier elimination by cylindrical algebraic decomposition.

The public surface mirrors the layers of the method::

    Poly, gcd, factor_basis          exact multivariate polynomials
    sylvester_resultant, psc         resultants and subresultant coefficients
    AlgebraicNumber, isolate_roots   real algebraic numbers
    project, compute_cad             projection and lifting
    parse, render, to_prenex         first-order formulas
    decide, eliminate                the decision and elimination procedures
    PolynomialModel, heywood_model   statistical questions as sentences
"""

from .cad import (
    SECTION,
    SECTOR,
    CadCell,
    CadTree,
    TimeBudgetExceeded,
    cell_description,
    compute_cad,
    lift_cell,
    project,
    projection_closure,
)
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    ParseError,
    PrenexFormula,
    Quant,
    atoms,
    bound_vars,
    conj,
    disj,
    exists,
    forall,
    free_vars,
    parse,
    parse_poly,
    render,
    substitute,
    to_prenex,
)
from .models import (
    BUILTIN_MODELS,
    CiStatement,
    PolynomialModel,
    builtin_model,
    format_model,
    gaussian_complete_model,
    gaussian_constraints,
    heywood_model,
    identifiability_sentence,
    implicitization_formula,
    load_model,
    membership_sentence,
    model_compare_sentence,
    parse_model,
    pd_constraints,
    quantity_region_formula,
)
from .polynomial import (
    Poly,
    Q,
    UsageError,
    content,
    factor_basis,
    gcd,
    normalize_set,
    primitive_part,
    squarefree_decomposition,
    squarefree_part,
)
from .qe import Decision, SolutionFormulaError, Stats, check_elimination, decide, eliminate, evaluate_qf
from .resultants import psc, psc_sequence, sylvester_matrix, sylvester_resultant
from .roots import AlgebraicNumber, isolate_roots, isolate_univariate, merge_roots, simplest_between
from .sample import SamplePoint, sign_at

__version__ = "0.1.0"
