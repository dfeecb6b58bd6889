"""diffavoid: exact maximum difference-avoiding sets in (F_p)^n.

Computes kth-power residue sets, builds the Cayley graph of forbidden
box differences, finds exact maximum avoiding sets (including quadratic-
residue-graph clique numbers), evaluates the closed-form upper bounds,
and verifies avoidance certificates built from vanishing polynomials.
"""

from .bounds import (
    BoundReport,
    bound_report,
    box_bound,
    digit_sum,
    digit_sum_constant,
    digit_sum_threshold,
    is_prime_power,
    paley_reference,
    power_residue_bound,
)
from .certificate import (
    Certificate,
    VanishingPolynomial,
    build_matrix,
    build_vanishing_poly,
    eval_univariate,
    eval_vanishing_poly,
    monomial_box_dimension,
    rank_mod_p,
    verify_certificate,
)
from .modp import (
    ForbiddenBox,
    FpVector,
    all_vectors,
    check_vector,
    ensure_odd_prime,
    is_prime,
    negate_set,
    power_residues,
    vec_diff,
    vec_neg,
    vec_rank,
    vec_unrank,
)
from .search import (
    DEFAULT_TIME_LIMIT,
    DEFAULT_VERTEX_CAP,
    CapacityError,
    CayleyGraph,
    SearchResult,
    build_graph,
    greedy_lower_bound,
    max_avoiding_set,
    paley_clique_number,
    to_dimacs,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "CapacityError",
    "CayleyGraph",
    "Certificate",
    "DEFAULT_TIME_LIMIT",
    "DEFAULT_VERTEX_CAP",
    "ForbiddenBox",
    "FpVector",
    "SearchResult",
    "VanishingPolynomial",
    "all_vectors",
    "bound_report",
    "box_bound",
    "build_graph",
    "build_matrix",
    "build_vanishing_poly",
    "check_vector",
    "digit_sum",
    "digit_sum_constant",
    "digit_sum_threshold",
    "ensure_odd_prime",
    "eval_univariate",
    "eval_vanishing_poly",
    "greedy_lower_bound",
    "is_prime",
    "is_prime_power",
    "max_avoiding_set",
    "monomial_box_dimension",
    "negate_set",
    "paley_clique_number",
    "paley_reference",
    "power_residue_bound",
    "power_residues",
    "rank_mod_p",
    "to_dimacs",
    "vec_diff",
    "vec_neg",
    "vec_rank",
    "vec_unrank",
    "verify_certificate",
    "__version__",
]
