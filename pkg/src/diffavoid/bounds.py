"""Closed-form upper bounds on difference-avoiding sets.

Integer-valued bounds are computed exactly with arbitrary precision.
Real-valued reference quantities use double precision and are meant for
comparison tables only; in particular sqrt(p) - 1 is a non-binding
reference (it does not hold for every prime) and is never asserted
against search results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .modp import ensure_odd_prime


def box_bound(p: int, t: int, n: int) -> int:
    """Exact (p - t + 1)^n for a forbidden set of size t.

    No avoiding set in (F_p)^n can be larger than this.
    """
    ensure_odd_prime(p)
    if not 1 <= t <= p:
        raise ValueError(f"t must lie in [1, {p}], got {t}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return (p - t + 1) ** n


def power_residue_bound(p: int, k: int, n: int) -> int:
    """Exact ((p-1)(d-1)/d + 1)^n with d = gcd(k, p-1).

    The specialization of box_bound to K = the kth power residues: their
    count is t = (p-1)/d + 1, and substituting it gives this expression.
    """
    ensure_odd_prime(p)
    if k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    d = math.gcd(k, p - 1)
    return (((p - 1) // d) * (d - 1) + 1) ** n


def is_prime_power(q: int) -> bool:
    if q < 2:
        return False
    f = 2
    while f * f <= q:
        if q % f == 0:
            while q % f == 0:
                q //= f
            return q == 1
        f += 1
    return True  # q itself is prime


def digit_sum(k: int, q: int) -> int:
    """Sum of the digits of k in base q."""
    if q < 2:
        raise ValueError(f"base must be >= 2, got {q}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    s = 0
    while k:
        k, r = divmod(k, q)
        s += r
    return s


def digit_sum_constant(q: int, k: int, log_base: float | None = None) -> float:
    """The constant c = 1 / (2 k^2 D^2 log q), D the digit sum of k base q."""
    if not is_prime_power(q):
        raise ValueError(f"q must be a prime power >= 2, got {q}")
    if k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k}")
    if log_base is None:
        log_q = math.log(q)
    else:
        if log_base <= 1:
            raise ValueError(f"log base must exceed 1, got {log_base}")
        log_q = math.log(q, log_base)
    d = digit_sum(k, q)
    return 1.0 / (2.0 * k * k * d * d * log_q)


def digit_sum_threshold(q: int, k: int, n: int,
                        log_base: float | None = None) -> float:
    """The threshold 2 * q^((1 - c) * n) built on digit_sum_constant.

    The log base is configurable because the constant only feeds
    non-binding comparisons; None means natural log.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    c = digit_sum_constant(q, k, log_base)
    return 2.0 * q ** ((1.0 - c) * n)


def paley_reference(p: int) -> float:
    """sqrt(p) - 1 as a labeled, non-binding reference for clique numbers.

    Defined only for p = 1 (mod 4), where the quadratic-residue graph is
    self-complementary. Known to hold for infinitely many primes, not all,
    so callers must treat it as a comparison value, never a bound.
    """
    ensure_odd_prime(p)
    if p % 4 != 1:
        raise ValueError(f"p must be congruent to 1 mod 4, got {p}")
    return math.sqrt(p) - 1.0


@dataclass(frozen=True)
class BoundReport:
    """All bound values for one (p, n) configuration.

    box_bound and power_residue_bound are exact big integers; the
    real-valued fields are optional comparison quantities.
    `paley_reference_binding` is always False in the JSON form: the
    reference may be exceeded by exact results.
    """

    p: int
    n: int
    t: int
    k: int | None = None
    d: int | None = None
    box_bound: int = 0
    power_residue_bound: int | None = None
    digit_threshold: float | None = None
    digit_log_base: str | None = None
    paley_ref: float | None = None

    def to_json_dict(self) -> dict:
        out: dict = {"p": self.p, "n": self.n, "t": self.t}
        if self.k is not None:
            out["k"] = self.k
            out["d"] = self.d
        out["box_bound"] = str(self.box_bound)
        if self.power_residue_bound is not None:
            out["power_residue_bound"] = str(self.power_residue_bound)
        if self.digit_threshold is not None:
            out["digit_sum_threshold"] = _six_digits(self.digit_threshold)
            out["digit_sum_log_base"] = self.digit_log_base
        if self.paley_ref is not None:
            out["paley_reference"] = _six_digits(self.paley_ref)
            out["paley_reference_binding"] = False
        return out


def _six_digits(x: float) -> float:
    """Round a reported real to 6 significant digits."""
    return float(f"{x:.6g}")


def bound_report(
    p: int,
    n: int,
    t: int | None = None,
    k: int | None = None,
    include_digit_threshold: bool = False,
    include_paley_reference: bool = False,
    log_base: float | None = None,
) -> BoundReport:
    """Assemble a BoundReport from either t or k (exactly one).

    With k given, t is the kth-power-residue count (p-1)/d + 1, so the two
    integer bounds coincide. The digit-sum threshold and the sqrt(p) - 1
    reference are only meaningful for the n = 1 comparison and require it.
    """
    ensure_odd_prime(p)
    if (t is None) == (k is None):
        raise ValueError("exactly one of t and k must be given")
    if k is not None:
        if k < 2:
            raise ValueError(f"k must be an integer >= 2, got {k}")
        d = math.gcd(k, p - 1)
        t_eff = (p - 1) // d + 1
        residue_bound = power_residue_bound(p, k, n)
    else:
        d = None
        t_eff = t  # type: ignore[assignment]
        residue_bound = None
    exact_bound = box_bound(p, t_eff, n)

    threshold = None
    threshold_base = None
    if include_digit_threshold:
        if n != 1:
            raise ValueError("the digit-sum threshold comparison applies to n=1 only")
        if k is None:
            raise ValueError("the digit-sum threshold needs k")
        threshold = digit_sum_threshold(p, k, 1, log_base)
        threshold_base = "e" if log_base is None else f"{log_base:g}"

    paley_ref = None
    if include_paley_reference:
        if n != 1:
            raise ValueError("the sqrt(p)-1 reference applies to n=1 only")
        paley_ref = paley_reference(p)

    return BoundReport(
        p=p, n=n, t=t_eff, k=k, d=d,
        box_bound=exact_bound, power_residue_bound=residue_bound,
        digit_threshold=threshold, digit_log_base=threshold_base,
        paley_ref=paley_ref,
    )
