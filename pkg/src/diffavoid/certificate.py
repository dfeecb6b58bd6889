"""Mechanized verification that a set is difference-avoiding.

The checker builds the monic univariate polynomial whose roots are
exactly the allowed residues (the complement of K), extends it to n
variables as a tensor product over the coordinates, and evaluates the
matrix of its values at pairwise differences of a candidate set. The
polynomial vanishes exactly on vectors with some coordinate outside K,
so the matrix is diagonal with a nonzero constant diagonal precisely
when the set avoids the box K^n; in that case its rows are linearly
independent, the rank over F_p equals the set size, and the size cannot
exceed the number of monomials with per-variable degree at most the
univariate degree, which is (p - t + 1)^n. A nonzero off-diagonal entry
names a concrete violating pair.

The polynomial is kept in factored/tensor form: one univariate
coefficient vector. The dense multivariate expansion would have
(p - t + 1)^n coefficients and adds nothing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .modp import ForbiddenBox, FpVector, check_vector, vec_diff, vec_rank

DEFAULT_DENSE_CAP = 4096


class VanishingPolynomial:
    """Tensor-form polynomial vanishing exactly off the forbidden box.

    coeffs are the ascending-degree coefficients of the monic univariate
    factor (roots = the avoided residues, reduced mod p); the n-variate
    value at v is the product of the factor over v's coordinates.
    """

    __slots__ = ("p", "n", "coeffs", "avoided")

    def __init__(self, p: int, n: int, coeffs: tuple[int, ...],
                 avoided: tuple[int, ...]):
        self.p = p
        self.n = n
        self.coeffs = coeffs
        self.avoided = avoided

    @property
    def degree(self) -> int:
        """Degree of the univariate factor: |complement of K| = p - t."""
        return len(self.coeffs) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VanishingPolynomial):
            return NotImplemented
        return (self.p, self.n, self.coeffs) == (other.p, other.n, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.coeffs))

    def __repr__(self) -> str:
        return (f"VanishingPolynomial(p={self.p}, n={self.n}, "
                f"degree={self.degree})")


def build_vanishing_poly(box: ForbiddenBox, n: int) -> VanishingPolynomial:
    """Expand the product of (x - alpha) over the avoided residues mod p.

    An empty complement (K = F_p) gives the constant 1.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p = box.p
    coeffs = [1]
    for alpha in box.complement:
        # multiply by (x - alpha)
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] = (nxt[i + 1] + c) % p
            nxt[i] = (nxt[i] - alpha * c) % p
        coeffs = nxt
    return VanishingPolynomial(p, n, tuple(coeffs), box.complement)


def eval_univariate(coeffs: Sequence[int], x: int, p: int) -> int:
    """Horner evaluation mod p."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def eval_vanishing_poly(poly: VanishingPolynomial, v: Sequence[int]) -> int:
    """Product of the univariate factor over v's coordinates, mod p.

    Zero iff some coordinate of v is an avoided residue.
    """
    vt = check_vector(v, poly.p, poly.n)
    acc = 1
    for c in vt:
        acc = acc * eval_univariate(poly.coeffs, c, poly.p) % poly.p
        if acc == 0:
            return 0
    return acc


def build_matrix(elements: Sequence[Sequence[int]],
                 poly: VanishingPolynomial) -> list[list[int]]:
    """The evaluation matrix with entry [i][j] = poly at (A[i] - A[j])."""
    vecs = _checked_elements(elements, poly.p, poly.n)
    p = poly.p
    return [[eval_vanishing_poly(poly, vec_diff(a, b, p)) for b in vecs]
            for a in vecs]


def rank_mod_p(matrix: Sequence[Sequence[int]], p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    rows = [list(r) for r in matrix]
    if not rows:
        return 0
    ncols = len(rows[0])
    for r in rows:
        if len(r) != ncols:
            raise ValueError("matrix rows have unequal lengths")
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if rows[i][col] % p:
                pivot = i
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col] % p, -1, p)
        rows[rank] = [(c * inv) % p for c in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col] % p
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def monomial_box_dimension(poly: VanishingPolynomial) -> int:
    """(degree + 1)^n: monomials with per-variable degree <= the degree.

    Every difference-translate of the polynomial lives in the span of
    those monomials, so this dimension caps the size of any valid
    certificate's set. Equals (p - t + 1)^n.
    """
    return len(poly.coeffs) ** poly.n


@dataclass(frozen=True)
class Certificate:
    """Verdict for one candidate set.

    verdict is "valid" iff the evaluation matrix is diagonal with nonzero
    diagonal; then rank equals |A| and |A| <= bound. A "violation" verdict
    carries one ordered pair (a, b) with a - b inside the forbidden box.
    rank is None when the matrix was streamed instead of materialized.
    """

    p: int
    n: int
    forbidden: tuple[int, ...]
    elements: tuple[FpVector, ...]
    verdict: str
    is_diagonal: bool
    diagonal_nonzero: bool
    diagonal_value: int
    rank: int | None
    bound: int
    violating_pair: tuple[FpVector, FpVector] | None = None
    matrix: tuple[tuple[int, ...], ...] | None = None

    @property
    def valid(self) -> bool:
        return self.verdict == "valid"

    def to_json_dict(self) -> dict:
        ranked = sorted(self.elements, key=lambda v: vec_rank(v, self.p))
        out: dict = {
            "p": self.p,
            "n": self.n,
            "K": list(self.forbidden),
            "A": [list(v) for v in ranked],
            "verdict": self.verdict,
            "rank": self.rank,
            "bound": str(self.bound),
            "diagonal_value": self.diagonal_value,
        }
        if self.violating_pair is not None:
            out["violating_pair"] = [list(v) for v in self.violating_pair]
        return out


def _checked_elements(elements: Sequence[Sequence[int]], p: int,
                      n: int) -> list[FpVector]:
    if not elements:
        raise ValueError("the candidate set must be nonempty")
    vecs = [check_vector(v, p, n) for v in elements]
    if len(set(vecs)) != len(vecs):
        raise ValueError("the candidate set contains duplicate elements")
    return vecs


def verify_certificate(elements: Sequence[Sequence[int]], box: ForbiddenBox,
                       n: int | None = None, *,
                       dense_cap: int = DEFAULT_DENSE_CAP) -> Certificate:
    """Check difference-avoidance of A via the evaluation matrix.

    Materializes the full matrix and computes its rank for |A| <= dense_cap;
    beyond that, streams the off-diagonal entries (diagonality alone decides
    the verdict) and leaves rank as None.
    """
    p = box.p
    if not elements:
        raise ValueError("the candidate set must be nonempty")
    if n is None:
        n = len(elements[0])
    vecs = _checked_elements(elements, p, n)
    poly = build_vanishing_poly(box, n)
    diag_value = eval_vanishing_poly(poly, (0,) * n)
    if diag_value == 0:
        raise AssertionError(
            "the polynomial cannot vanish at 0: 0 is never an avoided residue")
    bound = monomial_box_dimension(poly)
    m = len(vecs)

    violating: tuple[FpVector, FpVector] | None = None
    matrix: list[list[int]] | None = None

    if m <= dense_cap:
        matrix = build_matrix(vecs, poly)
        for i in range(m):
            if violating is not None:
                break
            for j in range(m):
                if i != j and matrix[i][j] != 0:
                    violating = (vecs[i], vecs[j])
                    break
        diagonal_nonzero = all(matrix[i][i] != 0 for i in range(m))
    else:
        for i in range(m):
            if violating is not None:
                break
            for j in range(m):
                if i != j and eval_vanishing_poly(
                        poly, vec_diff(vecs[i], vecs[j], p)) != 0:
                    violating = (vecs[i], vecs[j])
                    break
        diagonal_nonzero = diag_value != 0

    is_diagonal = violating is None
    if is_diagonal and diagonal_nonzero:
        rank = rank_mod_p(matrix, p) if matrix is not None else None
        if rank is not None and rank != m:
            raise AssertionError(
                f"diagonal nonzero matrix must have full rank, got {rank} != {m}")
        if m > bound:
            raise AssertionError(
                f"avoiding set of size {m} exceeds the dimension bound {bound}")
        return Certificate(
            p=p, n=n, forbidden=box.residues, elements=tuple(vecs),
            verdict="valid", is_diagonal=True, diagonal_nonzero=True,
            diagonal_value=diag_value, rank=rank, bound=bound,
            matrix=_freeze(matrix),
        )

    a, b = violating  # type: ignore[misc]
    diff = vec_diff(a, b, p)
    if not all(c in box for c in diff):
        raise AssertionError(
            "off-diagonal nonzero entry must come from a forbidden difference")
    return Certificate(
        p=p, n=n, forbidden=box.residues, elements=tuple(vecs),
        verdict="violation", is_diagonal=False, diagonal_nonzero=diagonal_nonzero,
        diagonal_value=diag_value, rank=None, bound=bound,
        violating_pair=(a, b), matrix=_freeze(matrix),
    )


def _freeze(matrix: list[list[int]] | None) -> tuple[tuple[int, ...], ...] | None:
    if matrix is None:
        return None
    return tuple(tuple(row) for row in matrix)
