"""Arithmetic of imaginary quadratic orders Z[w] with w**2 = t*w - n.

The pair (t, n), t in {0, 1} and n >= 1, fixes the multiplication rule.
The discriminant t**2 - 4n is then always negative, so the norm form
x**2 + t*x*y + n*y**2 is positive definite and every search by norm is
a finite exhaustion.  Brute-force enumeration is deliberate: it is the
ground truth the rest of the package is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "OrderParams",
    "QuadElem",
    "SplitType",
    "SplitDensityReport",
    "norm",
    "conjugate",
    "units",
    "elements_of_norm",
    "degree_two_table",
    "is_prime",
    "primes_up_to",
    "legendre",
    "legendre_euler",
    "legendre_reciprocity",
    "split_type",
    "is_norm_of_prime",
    "split_density_report",
    "split_residues",
    "euler_totient",
]


@dataclass(frozen=True, order=True)
class OrderParams:
    """Multiplication parameters of Z[w]: w**2 = t*w - n."""

    t: int
    n: int

    def __post_init__(self) -> None:
        if self.t not in (0, 1):
            raise ValueError(f"t must be 0 or 1, got {self.t!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def discriminant(self) -> int:
        return self.t * self.t - 4 * self.n


@dataclass(frozen=True)
class QuadElem:
    """Element x + y*w of a fixed order."""

    order: OrderParams
    x: int
    y: int

    def _same_order(self, other: "QuadElem") -> None:
        if self.order != other.order:
            raise ValueError(f"mixed orders: {self.order} vs {other.order}")

    def __add__(self, other: "QuadElem") -> "QuadElem":
        self._same_order(other)
        return QuadElem(self.order, self.x + other.x, self.y + other.y)

    def __sub__(self, other: "QuadElem") -> "QuadElem":
        self._same_order(other)
        return QuadElem(self.order, self.x - other.x, self.y - other.y)

    def __neg__(self) -> "QuadElem":
        return QuadElem(self.order, -self.x, -self.y)

    def __mul__(self, other):
        if isinstance(other, int):
            return QuadElem(self.order, self.x * other, self.y * other)
        self._same_order(other)
        t, n = self.order.t, self.order.n
        # (x1 + y1 w)(x2 + y2 w) with w*w = t*w - n
        return QuadElem(
            self.order,
            self.x * other.x - n * self.y * other.y,
            self.x * other.y + self.y * other.x + t * self.y * other.y,
        )

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"QuadElem(t={self.order.t}, n={self.order.n}, x={self.x}, y={self.y})"


def norm(a: QuadElem) -> int:
    """Norm x**2 + t*x*y + n*y**2 of x + y*w; equals a times its conjugate."""
    t, n = a.order.t, a.order.n
    return a.x * a.x + t * a.x * a.y + n * a.y * a.y


def conjugate(a: QuadElem) -> QuadElem:
    """w maps to t - w, so x + y*w maps to (x + t*y) - y*w."""
    return QuadElem(a.order, a.x + a.order.t * a.y, -a.y)


def elements_of_norm(order: OrderParams, m: int) -> tuple[QuadElem, ...]:
    """All elements of norm m, sorted by (y, x).

    4*(x**2 + t*x*y + n*y**2) = (2x + t*y)**2 + |D|*y**2 with D the
    discriminant, so |y| <= sqrt(4m/|D|) and each y leaves a perfect
    square condition plus a parity condition on x.
    """
    if m < 1:
        raise ValueError(f"norm target must be positive, got {m!r}")
    d = -order.discriminant
    found = set()
    y_max = math.isqrt(4 * m // d)
    for y in range(-y_max, y_max + 1):
        square = 4 * m - d * y * y  # equals (2x + t*y)**2 if solvable
        s = math.isqrt(square)
        if s * s != square:
            continue
        for root in (s, -s):
            numerator = root - order.t * y
            if numerator % 2 == 0:
                found.add(QuadElem(order, numerator // 2, y))
    return tuple(sorted(found, key=lambda a: (a.y, a.x)))


def units(order: OrderParams) -> tuple[QuadElem, ...]:
    """Norm-one elements; 4 for discriminant -4, 6 for -3, else 2."""
    return elements_of_norm(order, 1)


def degree_two_table(n_max: int) -> dict[OrderParams, tuple[QuadElem, ...]]:
    """Norm-2 elements for every order with n <= n_max, both trace values.

    Nonempty rows occur exactly at discriminants -4, -7 and -8: for
    n >= 3 the y = 0 column would need x**2 = 2.
    """
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max!r}")
    table: dict[OrderParams, tuple[QuadElem, ...]] = {}
    for t in (0, 1):
        for n in range(1, n_max + 1):
            order = OrderParams(t, n)
            table[order] = elements_of_norm(order, 2)
    return table


def is_prime(m: int) -> bool:
    """Trial division; all callers stay in ranges where this is cheap."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    f = 3
    while f * f <= m:
        if m % f == 0:
            return False
        f += 2
    return True


def primes_up_to(bound: int) -> list[int]:
    """Sieve of Eratosthenes, inclusive bound."""
    if bound < 2:
        return []
    flags = bytearray([1]) * (bound + 1)
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(bound) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, keep in enumerate(flags) if keep]


def legendre_euler(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion a**((p-1)/2) mod p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def legendre_reciprocity(a: int, p: int) -> int:
    """Legendre symbol by recursive quadratic reciprocity.

    Supplementary laws peel off -1 and factors of 2; the swap step stays
    valid when the reduced upper entry is an odd composite, which is what
    the recursion produces, so no factoring is needed.
    """
    if p == 1:  # recursion bottom after a swap
        return 1
    if a < 0:
        sign = 1 if p % 4 == 1 else -1
        return sign * legendre_reciprocity(-a, p)
    a %= p
    if a == 0:
        return 0
    if a == 1:
        return 1
    if a % 2 == 0:
        sign = 1 if p % 8 in (1, 7) else -1
        return sign * legendre_reciprocity(a // 2, p)
    sign = -1 if a % 4 == 3 and p % 4 == 3 else 1
    return sign * legendre_reciprocity(p % a, a)


def legendre(a: int, p: int) -> int:
    """Legendre symbol of a mod an odd prime p.

    Computed by Euler's criterion and cross-checked against the
    reciprocity evaluation on every call; the redundancy is the point.
    """
    assert p > 2 and is_prime(p), f"p must be an odd prime, got {p!r}"
    e = legendre_euler(a, p)
    assert e == legendre_reciprocity(a, p), f"legendre mismatch at ({a}, {p})"
    return e


class SplitType(Enum):
    SPLIT = "split"
    INERT = "inert"
    RAMIFIED = "ramified"


def split_type(order: OrderParams, p: int) -> SplitType:
    """Behaviour of the rational prime p under the discriminant character.

    p = 2 reads the discriminant mod 8 (odd discriminants only; even ones
    are ramified at 2), odd p uses the Legendre symbol of the discriminant.
    """
    assert is_prime(p), f"p must be prime, got {p!r}"
    d = order.discriminant
    if p == 2:
        if d % 2 == 0:
            return SplitType.RAMIFIED
        return SplitType.SPLIT if d % 8 == 1 else SplitType.INERT
    if d % p == 0:
        return SplitType.RAMIFIED
    return SplitType.SPLIT if legendre(d, p) == 1 else SplitType.INERT


def is_norm_of_prime(order: OrderParams, p: int) -> QuadElem | None:
    """Brute-force witness: the (y, x)-smallest element of norm p, if any."""
    assert is_prime(p), f"p must be prime, got {p!r}"
    elems = elements_of_norm(order, p)
    return elems[0] if elems else None


@dataclass(frozen=True)
class SplitDensityReport:
    order: OrderParams
    bound: int
    split_count: int
    inert_count: int
    ramified_count: int

    @property
    def total(self) -> int:
        return self.split_count + self.inert_count + self.ramified_count

    @property
    def split_fraction(self) -> float:
        return self.split_count / self.total

    def as_dict(self) -> dict:
        return {
            "order": {"t": self.order.t, "n": self.order.n},
            "bound": self.bound,
            "split_count": self.split_count,
            "inert_count": self.inert_count,
            "ramified_count": self.ramified_count,
            "split_fraction": self.split_fraction,
        }


def split_density_report(order: OrderParams, bound: int) -> SplitDensityReport:
    """Split/inert/ramified counts over all primes <= bound."""
    if bound < 100:
        raise ValueError(f"bound must be at least 100, got {bound!r}")
    counts = {SplitType.SPLIT: 0, SplitType.INERT: 0, SplitType.RAMIFIED: 0}
    for p in primes_up_to(bound):
        counts[split_type(order, p)] += 1
    return SplitDensityReport(
        order=order,
        bound=bound,
        split_count=counts[SplitType.SPLIT],
        inert_count=counts[SplitType.INERT],
        ramified_count=counts[SplitType.RAMIFIED],
    )


def _smallest_prime_in_class(residue: int, modulus: int) -> int:
    candidate = residue if residue > 1 else residue + modulus
    for _ in range(10**6):
        if is_prime(candidate):
            return candidate
        candidate += modulus
    raise RuntimeError(f"no prime found in class {residue} mod {modulus}")


def split_residues(order: OrderParams, modulus: int) -> frozenset[int]:
    """Residue classes mod modulus consisting entirely of split primes.

    Splitting depends on p only through the discriminant character, which
    is periodic with period |D|, so the modulus must be a multiple of |D|.
    One prime per coprime class is sampled; periodicity does the rest.
    Classes sharing a factor with the modulus have at most one prime each
    and are left out.
    """
    d = abs(order.discriminant)
    if modulus < 1 or modulus % d != 0:
        raise ValueError(f"modulus must be a positive multiple of |D| = {d}")
    out = set()
    for r in range(1, modulus):
        if math.gcd(r, modulus) != 1:
            continue
        p = _smallest_prime_in_class(r, modulus)
        if split_type(order, p) is SplitType.SPLIT:
            out.add(r)
    return frozenset(out)


def euler_totient(k: int) -> int:
    """Totient by trial factorization."""
    if k < 1:
        raise ValueError(f"totient needs a positive integer, got {k!r}")
    result = k
    m = k
    f = 2
    while f * f <= m:
        if m % f == 0:
            result -= result // f
            while m % f == 0:
                m //= f
        f += 1 if f == 2 else 2
    if m > 1:
        result -= result // m
    return result
