"""Arithmetic functions and closed-form densities for lattice visibility statistics.

Everything here is deterministic: Mobius sieve, divisor counting, zeta and
prime-product evaluation with rigorous truncation-error bounds, the limiting
residue-class densities of visible (gcd = 1) walk steps, and the finite
Mobius-weighted sums whose averages those densities come from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

__all__ = [
    "MobiusTable",
    "TheoryConstants",
    "UnsupportedModulusError",
    "consecutive_main_sum",
    "euler_product_two",
    "mobius_sieve",
    "mobius_floor_sum",
    "pair_main_term",
    "pair_main_vector",
    "pair_residue_density",
    "residue_pair_average",
    "residue_visible_average",
    "tau",
    "theory_constants",
    "visible_main_term",
    "visible_main_vector",
    "visible_residue_density",
    "zeta",
]

# Sieve size guard: int8 values plus a boolean scratch array, so this caps
# memory at a few hundred MB.
MAX_SIEVE = 200_000_000

# pi(x) <= PI_BOUND_C * x / log x for x > 1 (Rosser-Schoenfeld explicit bound).
PI_BOUND_C = 1.25506

# Largest prime bound the Euler-product evaluator will sieve to.
MAX_PRIME_LIMIT = 2**31


class UnsupportedModulusError(ValueError):
    """Raised for moduli with no proven closed-form density (not 2^r or an odd prime)."""


@dataclass(frozen=True)
class MobiusTable:
    """Mobius function values mu(1..limit); the values array is read-only."""

    limit: int
    values: np.ndarray  # int8, index 0 unused

    def mu(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise ValueError(f"n={n} outside sieve range 1..{self.limit}")
        return int(self.values[n])


@dataclass(frozen=True)
class TheoryConstants:
    """Limiting densities for dimension k: 1/zeta(k) and prod_p(1 - 2/p^k).

    Both values carry a guaranteed absolute error <= tolerance.
    """

    k: int
    inv_zeta_k: float
    euler2_k: float
    tolerance: float

    def __post_init__(self) -> None:
        if not 0.0 < self.euler2_k < self.inv_zeta_k < 1.0:
            raise ValueError("expected 0 < prod(1-2/p^k) < 1/zeta(k) < 1")


@lru_cache(maxsize=8)
def mobius_sieve(n: int) -> MobiusTable:
    """Sieve mu(1..n). Raises for n = 0 or n beyond the memory budget."""
    if n < 1:
        raise ValueError("sieve limit must be >= 1")
    if n > MAX_SIEVE:
        raise ValueError(f"sieve limit {n} exceeds budget {MAX_SIEVE}")
    values = np.ones(n + 1, dtype=np.int8)
    values[0] = 0
    is_comp = np.zeros(n + 1, dtype=bool)
    for p in range(2, n + 1):
        if is_comp[p]:
            continue
        is_comp[p * p :: p] = True
        values[p::p] *= -1
        if p * p <= n:
            values[p * p :: p * p] = 0
    values.setflags(write=False)
    return MobiusTable(limit=n, values=values)


def tau(n: int) -> int:
    """Number of positive divisors of n."""
    if n < 1:
        raise ValueError("tau is defined for n >= 1")
    count = 1
    for p, e in _factorize(n):
        count *= e + 1
    return count


def _factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, as (prime, exponent) pairs."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1 if d == 2 else 2
    return True


def _block_fsum(values_iter) -> float:
    return math.fsum(values_iter)


@lru_cache(maxsize=32)
def zeta(k: int, tol: float = 1e-12) -> float:
    """zeta(k) for integer k >= 2, guaranteed within tol.

    Direct series over d <= D plus the integral bracket
    int_{D+1}^inf x^-k dx <= sum_{d>D} d^-k <= int_D^inf x^-k dx;
    taking the bracket midpoint leaves error <= D^-k / 2.
    """
    if k < 2:
        raise ValueError("zeta evaluated only at integer k >= 2")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must be in (0, 1)")
    terms = max(16, math.ceil((2.0 * tol) ** (-1.0 / k)) + 1)
    if terms > 2**27:
        raise ValueError(f"tol={tol} needs {terms} series terms, beyond budget")
    partials = []
    block = 1 << 22
    for lo in range(1, terms + 1, block):
        hi = min(terms, lo + block - 1)
        d = np.arange(lo, hi + 1, dtype=np.float64)
        partials.append(math.fsum(d ** (-float(k))))
    tail_hi = terms ** (1 - k) / (k - 1)
    tail_lo = (terms + 1) ** (1 - k) / (k - 1)
    return math.fsum(partials) + (tail_hi + tail_lo) / 2.0


def _prime_tail_bound(limit: float, k: int) -> float:
    """Rigorous bound on sum_{p > limit} 2/p^k via pi(x) <= PI_BOUND_C x/log x."""
    return 2.0 * PI_BOUND_C * k * limit ** (1 - k) / ((k - 1) * math.log(limit))


def _base_primes(limit: int) -> np.ndarray:
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0]


def _prime_segments(limit: int, segment: int = 1 << 22):
    """Yield numpy arrays of the primes <= limit, in blocks."""
    base = _base_primes(math.isqrt(limit))
    yield base[base <= limit]
    lo = math.isqrt(limit) + 1
    while lo <= limit:
        hi = min(limit, lo + segment - 1)
        flags = np.ones(hi - lo + 1, dtype=bool)
        for p in base:
            p = int(p)
            start = ((lo + p - 1) // p) * p
            if start <= hi:
                flags[start - lo :: p] = False
        yield np.nonzero(flags)[0] + lo
        lo = hi + 1


@lru_cache(maxsize=32)
def euler_product_two(k: int, tol: float = 1e-10) -> float:
    """prod_p (1 - 2/p^k) over all primes, guaranteed within tol.

    Truncated product over p <= P; the dropped factors lie in
    [1 - B, 1] where B bounds sum_{p>P} 2/p^k, so the midpoint
    V_P * (1 - B/2) is within V_P * B / 2 of the true value.
    """
    if k < 2:
        raise ValueError("product evaluated only at integer k >= 2")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must be in (0, 1)")

    def required_limit(v_upper: float) -> int:
        lo, hi = 100, MAX_PRIME_LIMIT
        if v_upper * _prime_tail_bound(hi, k) / 2.0 > 0.98 * tol:
            raise ValueError(f"tol={tol} at k={k} needs primes beyond {MAX_PRIME_LIMIT}")
        while lo < hi:
            mid = (lo + hi) // 2
            if v_upper * _prime_tail_bound(mid, k) / 2.0 <= 0.98 * tol:
                hi = mid
            else:
                lo = mid + 1
        return lo

    limit = required_limit(1.0)
    if limit > 200_000:
        # The partial product only shrinks as the limit grows, so a cheap
        # prefix product gives a valid upper bound for V_P and a smaller P.
        p = _base_primes(100_000).astype(np.float64)
        prefix = math.exp(math.fsum(np.log1p(-2.0 / p**k)))
        limit = required_limit(prefix)

    log_chunks = []
    for primes in _prime_segments(limit):
        if primes.size:
            p = primes.astype(np.float64)
            log_chunks.append(math.fsum(np.log1p(-2.0 / p**k)))
    partial = math.exp(math.fsum(log_chunks))
    bound = _prime_tail_bound(limit, k)
    return partial * (1.0 - bound / 2.0)


def theory_constants(k: int, tol: float = 1e-10) -> TheoryConstants:
    """Both limiting densities for dimension k, each within tol."""
    inv_z = 1.0 / zeta(k, tol / 2.0)
    return TheoryConstants(
        k=k,
        inv_zeta_k=inv_z,
        euler2_k=euler_product_two(k, tol),
        tolerance=tol,
    )


def _modulus_shape(m: int) -> tuple[str, int]:
    """Classify m as ("two_power", r) or ("odd_prime", m); reject the rest."""
    if m >= 2 and m & (m - 1) == 0:
        return "two_power", m.bit_length() - 1
    if m >= 3 and m % 2 == 1 and _is_prime(m):
        return "odd_prime", m
    raise UnsupportedModulusError(
        f"modulus {m} unsupported: closed forms exist only for powers of two and odd primes"
    )


def _check_residue(a: int, m: int) -> None:
    if not 0 <= a < m:
        raise ValueError(f"residue a={a} not in [0, {m})")


def visible_residue_density(k: int, a: int, m: int, *, tol: float = 1e-12) -> float:
    """Limiting proportion of walk steps i = a (mod m) landing on visible points.

    m must be a power of two or an odd prime. The rational prefactor is exact;
    the 1/zeta(k) factor is within tol.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    _check_residue(a, m)
    shape, v = _modulus_shape(m)
    if shape == "two_power":
        r = v
        if a % 2 == 1:
            frac = Fraction(2 ** (k - r), 2**k - 1)
        else:
            frac = Fraction(2 ** (k - 1) - 1, 2 ** (r - 1) * (2**k - 1))
    else:
        p1 = v
        if a == 0:
            frac = Fraction(p1 ** (k - 1) - 1, p1**k - 1)
        else:
            frac = Fraction(p1 ** (k - 1), p1**k - 1)
    return float(frac) / zeta(k, tol / 2.0)


def pair_residue_density(
    k: int, a: int, m: int, *, tol: float = 1e-10
) -> float:
    """Limiting proportion of step indices i = a (mod m) where steps i and i+1
    are both visible.

    m must be a power of two or an odd prime.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    _check_residue(a, m)
    shape, v = _modulus_shape(m)
    if shape == "two_power":
        frac = Fraction(1, m)
    else:
        p1 = v
        if a == 0 or a == p1 - 1:
            frac = Fraction(p1 ** (k - 1) - 1, p1**k - 2)
        else:
            frac = Fraction(p1 ** (k - 1), p1**k - 2)
    return float(frac) * euler_product_two(k, tol)


def mobius_floor_sum(n: int, l: int = 2) -> float:
    """sum_{d<=n} mu(d) / d^(l-1) * floor(n/d); approaches n / zeta(l)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if l < 2:
        raise ValueError("l must be >= 2")
    mu = mobius_sieve(n).values
    d = np.arange(1, n + 1, dtype=np.int64)
    terms = mu[1:].astype(np.float64) * (n // d) / d.astype(np.float64) ** (l - 1)
    return math.fsum(terms)


def _squarefree_divisors(n: int) -> list[tuple[int, int]]:
    """Squarefree divisors of n with their Mobius signs, ascending."""
    divs = [(1, 1)]
    for p, _ in _factorize(n):
        divs += [(d * p, -s) for d, s in divs]
    return sorted(divs)


def visible_main_term(i: int, k: int) -> float:
    """sum_{d | i} mu(d) / d^(k-1)  ==  prod_{p | i} (1 - p^(1-k))."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    out = 1.0
    for p, _ in _factorize(i):
        out *= 1.0 - float(p) ** (1 - k)
    return out


def pair_main_term(i: int, k: int) -> float:
    """sum over d1 | i, d2 | i+1 with d1*d2 <= i of mu(d1) mu(d2) / (d1 d2)^(k-1).

    d1 and d2 are automatically coprime since they divide consecutive integers.
    """
    if i < 1:
        raise ValueError("i must be >= 1")
    if k < 2:
        raise ValueError("k must be >= 2")
    d2s = _squarefree_divisors(i + 1)
    terms = []
    for d1, s1 in _squarefree_divisors(i):
        cap = i // d1
        if cap < 1:
            break
        w1 = s1 / float(d1) ** (k - 1)
        for d2, s2 in d2s:
            if d2 > cap:
                break
            terms.append(w1 * s2 / float(d2) ** (k - 1))
    return math.fsum(terms)


@lru_cache(maxsize=8)
def visible_main_vector(n: int, k: int) -> np.ndarray:
    """Array M with M[i] = visible_main_term(i, k) for 1 <= i <= n (M[0] = 0)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    mu = mobius_sieve(n).values
    out = np.zeros(n + 1, dtype=np.float64)
    for d in range(1, n + 1):
        md = mu[d]
        if md:
            out[d::d] += md / float(d) ** (k - 1)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=8)
def pair_main_vector(n: int, k: int) -> np.ndarray:
    """Array P with P[i] = pair_main_term(i, k) for 1 <= i <= n (P[0] = 0).

    Accumulates one arithmetic progression per coprime squarefree pair
    (d1, d2): the i with d1 | i and d2 | i + 1 form a progression modulo
    d1*d2, and the d1*d2 <= i cutoff drops only the first solution.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    mu = mobius_sieve(n + 1).values
    squarefree = np.nonzero(mu)[0]
    out = np.zeros(n + 1, dtype=np.float64)
    for d1 in squarefree[squarefree <= n]:
        d1 = int(d1)
        w1 = int(mu[d1]) / float(d1) ** (k - 1)
        cap = n // d1
        for d2 in squarefree[: np.searchsorted(squarefree, cap, side="right")]:
            d2 = int(d2)
            if math.gcd(d1, d2) != 1:
                continue
            step = d1 * d2
            if d2 == 1:
                start = d1
            else:
                x = (-pow(d1, -1, d2)) % d2
                first = d1 * x  # in (0, step): meets d1 | i, d2 | i + 1
                start = first + step
            if start > n:
                continue
            out[start::step] += w1 * int(mu[d2]) / float(d2) ** (k - 1)
    out.setflags(write=False)
    return out


def consecutive_main_sum(n: int, l: int = 2) -> float:
    """sum_{i<=n} pair_main_term(i, l); approaches n * prod_p(1 - 2/p^l)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.fsum(pair_main_vector(n, l)[1:])


def residue_visible_average(n: int, k: int, a: int, m: int) -> float:
    """(1/n) * sum of visible_main_term(i, k) over 1 <= i <= n with i = a (mod m)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_residue(a, m)
    vec = visible_main_vector(n, k)
    start = a if a >= 1 else m
    return math.fsum(vec[start::m]) / n


def residue_pair_average(n: int, k: int, a: int, m: int) -> float:
    """(1/n) * sum of pair_main_term(i, k) over 1 <= i <= n with i = a (mod m)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    _check_residue(a, m)
    vec = pair_main_vector(n, k)
    start = a if a >= 1 else m
    return math.fsum(vec[start::m]) / n
