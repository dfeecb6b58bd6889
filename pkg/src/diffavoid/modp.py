"""Exact residue arithmetic in F_p and (F_p)^n.

Residues are canonical representatives in [0, p-1] and every operation
reduces eagerly, so values coming out of this module are always already
normalized. Vectors are plain tuples of residues; the modulus travels as
an explicit argument. Ranking is little-endian base p: coordinate 0 is
the least significant digit. The DIMACS export and the witness file
format both depend on that convention, so it must not change.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

# p must fit 32-bit so that residue products stay inside 64-bit
# intermediates; big integers appear only in the bound formulas.
MAX_PRIME = 2**31 - 1

FpVector = tuple[int, ...]


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality check."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def ensure_odd_prime(p: int) -> int:
    """Validate p as an odd prime in the supported range and return it."""
    if p > MAX_PRIME:
        raise ValueError(f"p exceeds the 32-bit residue limit: {p}")
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise ValueError(f"p must be an odd prime >= 3, got {p}")
    return p


class ForbiddenBox:
    """A forbidden residue set K subseteq F_p with 0 in K.

    Stores the sorted residues of K, the sorted complement N = F_p \\ K,
    and t = |K|. Immutable value object; instances hash and compare by
    (p, residues).
    """

    __slots__ = ("p", "residues", "complement", "_members")

    def __init__(self, p: int, residues: Iterable[int]):
        ensure_odd_prime(p)
        ks = set()
        for r in residues:
            r = int(r)
            if not 0 <= r < p:
                raise ValueError(f"residue {r} is not reduced mod {p}")
            ks.add(r)
        if 0 not in ks:
            raise ValueError("the forbidden set must contain 0")
        self.p = p
        self.residues: tuple[int, ...] = tuple(sorted(ks))
        self._members: frozenset[int] = frozenset(ks)
        self.complement: tuple[int, ...] = tuple(
            r for r in range(p) if r not in ks
        )

    @property
    def t(self) -> int:
        return len(self.residues)

    def __contains__(self, r: int) -> bool:
        return r in self._members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ForbiddenBox):
            return NotImplemented
        return self.p == other.p and self.residues == other.residues

    def __hash__(self) -> int:
        return hash((self.p, self.residues))

    def __repr__(self) -> str:
        return f"ForbiddenBox(p={self.p}, residues={list(self.residues)})"


def power_residues(p: int, k: int) -> ForbiddenBox:
    """The set {x^k mod p : x in F_p}, 0 included, as a ForbiddenBox.

    Its size is (p-1)/gcd(k, p-1) + 1.
    """
    ensure_odd_prime(p)
    if k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k}")
    return ForbiddenBox(p, {pow(x, k, p) for x in range(p)})


def check_vector(v: Sequence[int], p: int, n: int | None = None) -> FpVector:
    """Validate that v has reduced coordinates (and length n, if given)."""
    vt = tuple(v)
    if n is not None and len(vt) != n:
        raise ValueError(f"expected {n} coordinates, got {len(vt)}")
    if not vt:
        raise ValueError("vectors must have at least one coordinate")
    for c in vt:
        if not 0 <= c < p:
            raise ValueError(f"coordinate {c} is not reduced mod {p}")
    return vt


def vec_rank(v: Sequence[int], p: int) -> int:
    """Little-endian base-p rank of v, a bijection onto [0, p^len(v) - 1]."""
    vt = check_vector(v, p)
    rank = 0
    for c in reversed(vt):
        rank = rank * p + c
    return rank


def vec_unrank(rank: int, p: int, n: int) -> FpVector:
    """Inverse of vec_rank for n coordinates."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= rank < p**n:
        raise ValueError(f"rank {rank} out of range for p={p}, n={n}")
    coords = []
    for _ in range(n):
        rank, c = divmod(rank, p)
        coords.append(c)
    return tuple(coords)


def vec_diff(a: Sequence[int], b: Sequence[int], p: int) -> FpVector:
    """Coordinatewise (a - b) mod p."""
    at = check_vector(a, p)
    bt = check_vector(b, p)
    if len(at) != len(bt):
        raise ValueError(f"dimension mismatch: {len(at)} vs {len(bt)}")
    return tuple((x - y) % p for x, y in zip(at, bt))


def vec_neg(v: Sequence[int], p: int) -> FpVector:
    """Coordinatewise negation mod p."""
    return tuple((-c) % p for c in check_vector(v, p))


def negate_set(vectors: Iterable[Sequence[int]], p: int) -> set[FpVector]:
    """{-s mod p : s in vectors}."""
    return {vec_neg(v, p) for v in vectors}


def all_vectors(p: int, n: int) -> Iterator[FpVector]:
    """All of (F_p)^n in rank order."""
    for r in range(p**n):
        yield vec_unrank(r, p, n)
