"""Degree classification for P^1-bundles over elliptic curves.

A rank-2 bundle on an elliptic curve is either split, O + L with L of
some degree, or one of the two indecomposable Atiyah extensions.  The
split torsion case is the interesting one: whether the projectivized
bundle carries a self-map of prime degree p comes down to three
concrete routes, each a statement about the curve's endomorphisms and
the torsion point defining L.  Everything else reduces to a fixed
verdict per bundle shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence, Union

from .cm_elliptic import (
    CurveModel,
    TorsionPoint,
    aut_group,
    endomorphisms_of_degree,
    kernel_on_torsion,
    normalize_point,
    pullback_exponent,
)
from .ns_lattice import atiyah_deg2_search, square_degree_certificate
from .qorders import (
    OrderParams,
    QuadElem,
    conjugate,
    euler_totient,
    is_prime,
    norm,
    primes_up_to,
)
from .verdicts import (
    AllDegrees,
    AutRoute,
    DegreeCertificate,
    InfinitelyManyMissing,
    IsogenyRoute,
    MissingPrimes,
    PrimeDecision,
    SquaresOnly,
    TorsionMultiple,
    Verdict,
    Witness,
    witness_degrees,
)

__all__ = [
    "SplitTorsion",
    "SplitNonTorsion",
    "SplitNonzeroDegree",
    "AtiyahDegreeZero",
    "AtiyahDegreeOne",
    "BundleModel",
    "EllipticBundleDescriptor",
    "ExceptionalFamily",
    "ScanReport",
    "prime_achievable",
    "scan_primes",
    "admits_all_degrees",
    "nonsplit_verdict",
    "exceptional_triples",
    "matching_exceptional_family",
    "totient_filter",
    "compose_decisions",
]


@dataclass(frozen=True)
class SplitTorsion:
    """P(O + L) with L torsion; the point is normalized to its exact order."""

    point: TorsionPoint

    def __post_init__(self) -> None:
        object.__setattr__(self, "point", normalize_point(self.point))

    @property
    def k(self) -> int:
        return self.point.k


@dataclass(frozen=True)
class SplitNonTorsion:
    """P(O + L) with deg L = 0 and L of infinite order."""


@dataclass(frozen=True)
class SplitNonzeroDegree:
    """P(O + L) with deg L nonzero."""

    degree: int

    def __post_init__(self) -> None:
        if self.degree == 0:
            raise ValueError("degree 0 bundles are the torsion/nontorsion cases")


@dataclass(frozen=True)
class AtiyahDegreeZero:
    """Projectivization of the nontrivial self-extension of O."""


@dataclass(frozen=True)
class AtiyahDegreeOne:
    """Projectivization of the nontrivial extension of a degree-1 bundle by O."""


BundleModel = Union[
    SplitTorsion, SplitNonTorsion, SplitNonzeroDegree, AtiyahDegreeZero, AtiyahDegreeOne
]


@dataclass(frozen=True)
class EllipticBundleDescriptor:
    curve: CurveModel
    bundle: BundleModel


def _require_split_torsion(desc: EllipticBundleDescriptor) -> SplitTorsion:
    if not isinstance(desc.bundle, SplitTorsion):
        raise ValueError(
            f"per-prime decisions apply to split torsion bundles, got {type(desc.bundle).__name__}"
        )
    return desc.bundle


def prime_achievable(desc: EllipticBundleDescriptor, p: int) -> PrimeDecision:
    """Decide a single prime degree for a split torsion bundle.

    Route order is fixed and gives deterministic witnesses:
      (a) k divides p: a fiberwise map of degree p exists outright;
      (b) some automorphism phi has pullback exponent m on L with
          p = +-m (mod k): combine a fiber map of degree p with phi;
      (c) some endomorphism alpha of degree p fixes L up to inverse
          (pullback exponent 1 or k-1): the map acts by alpha on the
          base.  Candidates are tried in the elements_of_norm order,
          exponent 1 before k-1.
    A prime with none of these has no self-map of that degree at all,
    because a prime-degree map must be trivial on one of base or fiber.
    """
    bundle = _require_split_torsion(desc)
    if not is_prime(p):
        raise ValueError(f"need a prime degree, got {p!r}")
    point = bundle.point
    k = point.k
    if p % k == 0:
        return PrimeDecision(prime=p, k=k, achievable=True, witness=TorsionMultiple(k))
    for phi in aut_group(desc.curve):
        m = pullback_exponent(phi, point)
        if m is not None and (p % k == m or (p + m) % k == 0):
            return PrimeDecision(prime=p, k=k, achievable=True, witness=AutRoute(phi, m))
    candidates = endomorphisms_of_degree(desc.curve, p)
    for alpha in candidates:
        m = pullback_exponent(alpha, point)
        if m == 1 % k:
            return PrimeDecision(prime=p, k=k, achievable=True, witness=IsogenyRoute(alpha, 1))
        if m == (k - 1) % k:
            return PrimeDecision(prime=p, k=k, achievable=True, witness=IsogenyRoute(alpha, -1))
    reason = "no_isogeny" if candidates else "no_residue"
    return PrimeDecision(prime=p, k=k, achievable=False, reason=reason)


@dataclass(frozen=True)
class ScanReport:
    bound: int
    achievable: tuple[PrimeDecision, ...]
    missing: tuple[int, ...]


def scan_primes(desc: EllipticBundleDescriptor, bound: int) -> ScanReport:
    """Run prime_achievable over every prime up to bound."""
    if bound < 2:
        raise ValueError(f"need bound >= 2, got {bound!r}")
    decisions = [prime_achievable(desc, p) for p in primes_up_to(bound)]
    return ScanReport(
        bound=bound,
        achievable=tuple(d for d in decisions if d.achievable),
        missing=tuple(d.prime for d in decisions if not d.achievable),
    )


@dataclass(frozen=True)
class ExceptionalFamily:
    """A (curve order, torsion level, kernel element) triple with every degree achievable."""

    order: OrderParams
    k: int
    kernel_element: QuadElem
    degree: int


def exceptional_triples() -> tuple[ExceptionalFamily, ...]:
    """The six split-torsion families beyond k <= 3 that admit all degrees.

    Three base triples, each with its conjugate variant: the kernel
    element has norm k (or norm 4 for k = 4) and its kernel meets the
    exact-order-k points.
    """
    base = (
        (OrderParams(1, 2), 4, QuadElem(OrderParams(1, 2), 1, 1)),
        (OrderParams(0, 1), 5, QuadElem(OrderParams(0, 1), 2, 1)),
        (OrderParams(1, 1), 7, QuadElem(OrderParams(1, 1), 2, 1)),
    )
    out = []
    for order, k, element in base:
        for alpha in (element, conjugate(element)):
            out.append(
                ExceptionalFamily(order=order, k=k, kernel_element=alpha, degree=norm(alpha))
            )
    return tuple(out)


def matching_exceptional_family(desc: EllipticBundleDescriptor) -> ExceptionalFamily | None:
    """The family this descriptor belongs to, or None.

    Matching is computational: same endomorphism order, same exact
    torsion order, and the point lies in the named element's kernel.
    """
    if not isinstance(desc.bundle, SplitTorsion) or not desc.curve.has_cm:
        return None
    point = desc.bundle.point
    for family in exceptional_triples():
        if family.order != desc.curve.order or family.k != point.k:
            continue
        if point.v in kernel_on_torsion(family.kernel_element, point.k):
            return family
    return None


def _certificate_attempt(desc: EllipticBundleDescriptor) -> DegreeCertificate | None:
    """Build the all-degrees certificate, or None if some piece is unreachable.

    Complete means: every residue in (Z/k)* is hit by an automorphism
    exponent up to sign (an automorphism route covers a whole residue
    class of primes at once), and every prime divisor of k has its own
    per-prime witness.  Together these cover all primes, and products
    of primes follow by composing.
    """
    bundle = _require_split_torsion(desc)
    point = bundle.point
    k = point.k
    residue_witnesses: dict[int, Witness] = {}
    for phi in aut_group(desc.curve):
        m = pullback_exponent(phi, point)
        if m is None:
            continue
        for r in (m % k, (-m) % k):
            if gcd(r, k) == 1 and r not in residue_witnesses:
                residue_witnesses[r] = AutRoute(phi, m)
    special_witnesses: dict[int, Witness] = {}
    for p in (q for q in primes_up_to(k) if k % q == 0):
        decision = prime_achievable(desc, p)
        if not decision.achievable:
            return None
        assert decision.witness is not None
        special_witnesses[p] = decision.witness
    if any(gcd(r, k) == 1 and r not in residue_witnesses for r in range(k)):
        return None
    return DegreeCertificate(
        k=k, residue_witnesses=residue_witnesses, special_witnesses=special_witnesses
    )


def admits_all_degrees(desc: EllipticBundleDescriptor) -> Verdict:
    """Certificate-or-counterexample classification of a split torsion bundle."""
    certificate = _certificate_attempt(desc)
    if certificate is not None:
        family = matching_exceptional_family(desc)
        if family is not None:
            note = (
                f"kernel point of the degree-{family.degree} element "
                f"{family.kernel_element!r} at torsion level {family.k}"
            )
        else:
            note = "unit pullbacks cover every residue class"
        return AllDegrees(certificate=certificate, note=note)
    report = scan_primes(desc, 1000)
    if not report.missing:
        raise RuntimeError(
            "residue certificate incomplete yet no missing prime up to 1000; "
            "the two methods disagree"
        )
    return MissingPrimes(missing=report.missing, scan_bound=report.bound)


def nonsplit_verdict(desc: EllipticBundleDescriptor, bound: int = 1000) -> Verdict:
    """Fixed verdicts for the bundle shapes that never reach a certificate.

    The two degree-0 shapes (nontrivial self-extension of O, and split
    with a nontorsion summand) only admit base-isogeny degrees, so all
    primes outside the endomorphism norm form are missing; the list up
    to the bound is reported as evidence.  The degree-1 extension has
    no degree-2 self-map by exhaustive search.  Split with a summand of
    nonzero degree carries a unique curve of negative self-intersection
    and only square degrees survive.
    """
    bundle = desc.bundle
    if isinstance(bundle, SplitTorsion):
        raise ValueError("split torsion bundles are classified by admits_all_degrees")
    if isinstance(bundle, (AtiyahDegreeZero, SplitNonTorsion)):
        non_norm = tuple(
            p for p in primes_up_to(bound) if not endomorphisms_of_degree(desc.curve, p)
        )
        shape = (
            "indecomposable degree-0 bundle"
            if isinstance(bundle, AtiyahDegreeZero)
            else "split bundle with a nontorsion degree-0 summand"
        )
        return InfinitelyManyMissing(
            reason=(
                f"{shape}: achievable prime degrees are norms of endomorphisms, "
                "and primes outside the norm form have positive density"
            ),
            missing_examples=non_norm,
        )
    if isinstance(bundle, AtiyahDegreeOne):
        assert atiyah_deg2_search() == ()
        return MissingPrimes(
            missing=(2,),
            scan_bound=None,
            note="no solution to the degree-2 section equations (exhaustive search)",
        )
    assert isinstance(bundle, SplitNonzeroDegree)
    cert = square_degree_certificate(-abs(bundle.degree))
    assert cert.degree_is_square
    return SquaresOnly(
        reason=(
            f"the section with self-intersection {-abs(bundle.degree)} is the unique "
            "negative curve, so every self-map has square degree"
        )
    )


def totient_filter(k: int) -> bool:
    """Fast necessary condition for all degrees at torsion level k on a generic curve."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k!r}")
    return euler_totient(k) < 4


def compose_decisions(decisions: Sequence[PrimeDecision]) -> tuple[int, int]:
    """(base degree, fiber degree) of the composite of per-prime witnesses.

    Degrees multiply under composition, so a composite degree is
    witnessed by chaining the per-prime routes; this is bookkeeping on
    the pairs, not a construction of the composite map.
    """
    base, fiber = 1, 1
    for decision in decisions:
        if not decision.achievable or decision.witness is None:
            raise ValueError(f"prime {decision.prime} has no witness to compose")
        b, f = witness_degrees(decision.witness, decision.prime)
        base *= b
        fiber *= f
    return base, fiber
