"""Shared verdict and witness vocabulary for the classifiers.

Every classifier in the package answers with one of five verdicts, and
achievability of a single prime degree is always justified by one of
three routes.  Keeping the vocabulary in one place gives the command
line layer a single JSON mapping, documented in docs/report_schema.md.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .qorders import OrderParams, QuadElem

__all__ = [
    "TorsionMultiple",
    "AutRoute",
    "IsogenyRoute",
    "Witness",
    "PrimeDecision",
    "DegreeCertificate",
    "AllDegrees",
    "MissingPrimes",
    "InfinitelyManyMissing",
    "SquaresOnly",
    "FiniteCandidatePrimes",
    "Verdict",
    "witness_degrees",
    "witness_to_payload",
    "witness_from_payload",
    "verdict_to_payload",
    "verdict_from_payload",
]


@dataclass(frozen=True)
class TorsionMultiple:
    """Degree divisible by the torsion order: the fiberwise power construction."""

    k: int

    route_rank = 0


@dataclass(frozen=True)
class AutRoute:
    """Base automorphism phi with pullback exponent m; works for every
    degree congruent to m or -m mod k."""

    phi: QuadElem
    m: int

    route_rank = 1


@dataclass(frozen=True)
class IsogenyRoute:
    """Base isogeny alpha whose pullback fixes the bundle (sign +1) or
    inverts it (sign -1); realizes exactly the degree of alpha."""

    alpha: QuadElem
    sign: int

    route_rank = 2


Witness = Union[TorsionMultiple, AutRoute, IsogenyRoute]


def witness_degrees(witness: Witness, degree: int) -> tuple[int, int]:
    """(base degree, fiber degree) of the self-map a witness builds."""
    if isinstance(witness, IsogenyRoute):
        return (degree, 1)
    return (1, degree)


@dataclass(frozen=True)
class PrimeDecision:
    prime: int
    k: int
    achievable: bool
    witness: Witness | None = None
    reason: str | None = None  # "no_residue" or "no_isogeny" when unachievable


@dataclass(frozen=True)
class DegreeCertificate:
    """Achievability certificate covering every degree at once.

    residue_witnesses assigns each residue class r coprime to k a route
    valid for every degree in that class; special_witnesses covers the
    finitely many primes dividing k.  Together with multiplicativity of
    degrees this reaches every integer at least 2.
    """

    k: int
    residue_witnesses: dict[int, Witness]
    special_witnesses: dict[int, Witness]


@dataclass(frozen=True)
class AllDegrees:
    certificate: DegreeCertificate | None = None
    note: str = ""

    kind = "all_degrees"


@dataclass(frozen=True)
class MissingPrimes:
    missing: tuple[int, ...]
    scan_bound: int | None = None
    note: str = ""

    kind = "missing_primes"


@dataclass(frozen=True)
class InfinitelyManyMissing:
    reason: str
    missing_examples: tuple[int, ...] = ()

    kind = "infinitely_many_missing"


@dataclass(frozen=True)
class SquaresOnly:
    reason: str = ""

    kind = "squares_only"


@dataclass(frozen=True)
class FiniteCandidatePrimes:
    """Upper bound only: primes outside the set are excluded, membership
    in the set is not an existence claim."""

    candidates: frozenset[int] = field(default_factory=frozenset)
    note: str = ""

    kind = "finite_candidate_primes"


Verdict = Union[
    AllDegrees, MissingPrimes, InfinitelyManyMissing, SquaresOnly, FiniteCandidatePrimes
]


def _elem_to_payload(elem: QuadElem) -> dict:
    return {"t": elem.order.t, "n": elem.order.n, "x": elem.x, "y": elem.y}


def _elem_from_payload(payload: dict) -> QuadElem:
    return QuadElem(OrderParams(payload["t"], payload["n"]), payload["x"], payload["y"])


def witness_to_payload(witness: Witness) -> dict:
    if isinstance(witness, TorsionMultiple):
        return {"route": "torsion_multiple", "k": witness.k}
    if isinstance(witness, AutRoute):
        return {"route": "aut", "phi": _elem_to_payload(witness.phi), "exponent": witness.m}
    if isinstance(witness, IsogenyRoute):
        return {"route": "isogeny", "alpha": _elem_to_payload(witness.alpha), "sign": witness.sign}
    raise TypeError(f"not a witness: {witness!r}")


def witness_from_payload(payload: dict) -> Witness:
    route = payload["route"]
    if route == "torsion_multiple":
        return TorsionMultiple(k=payload["k"])
    if route == "aut":
        return AutRoute(phi=_elem_from_payload(payload["phi"]), m=payload["exponent"])
    if route == "isogeny":
        return IsogenyRoute(alpha=_elem_from_payload(payload["alpha"]), sign=payload["sign"])
    raise ValueError(f"unknown witness route: {route!r}")


def _certificate_to_payload(cert: DegreeCertificate) -> dict:
    return {
        "k": cert.k,
        "residues": {
            str(r): witness_to_payload(w) for r, w in sorted(cert.residue_witnesses.items())
        },
        "special_primes": {
            str(p): witness_to_payload(w) for p, w in sorted(cert.special_witnesses.items())
        },
    }


def _certificate_from_payload(payload: dict) -> DegreeCertificate:
    return DegreeCertificate(
        k=payload["k"],
        residue_witnesses={
            int(r): witness_from_payload(w) for r, w in payload["residues"].items()
        },
        special_witnesses={
            int(p): witness_from_payload(w) for p, w in payload["special_primes"].items()
        },
    )


def verdict_to_payload(verdict: Verdict) -> dict:
    if isinstance(verdict, AllDegrees):
        return {
            "kind": verdict.kind,
            "certificate": None
            if verdict.certificate is None
            else _certificate_to_payload(verdict.certificate),
            "note": verdict.note,
        }
    if isinstance(verdict, MissingPrimes):
        return {
            "kind": verdict.kind,
            "missing": list(verdict.missing),
            "scan_bound": verdict.scan_bound,
            "note": verdict.note,
        }
    if isinstance(verdict, InfinitelyManyMissing):
        return {
            "kind": verdict.kind,
            "reason": verdict.reason,
            "missing_examples": list(verdict.missing_examples),
        }
    if isinstance(verdict, SquaresOnly):
        return {"kind": verdict.kind, "reason": verdict.reason}
    if isinstance(verdict, FiniteCandidatePrimes):
        return {
            "kind": verdict.kind,
            "candidates": sorted(verdict.candidates),
            "note": verdict.note,
        }
    raise TypeError(f"not a verdict: {verdict!r}")


def verdict_from_payload(payload: dict) -> Verdict:
    kind = payload["kind"]
    if kind == "all_degrees":
        cert = payload.get("certificate")
        return AllDegrees(
            certificate=None if cert is None else _certificate_from_payload(cert),
            note=payload.get("note", ""),
        )
    if kind == "missing_primes":
        return MissingPrimes(
            missing=tuple(payload["missing"]),
            scan_bound=payload.get("scan_bound"),
            note=payload.get("note", ""),
        )
    if kind == "infinitely_many_missing":
        return InfinitelyManyMissing(
            reason=payload["reason"],
            missing_examples=tuple(payload.get("missing_examples", ())),
        )
    if kind == "squares_only":
        return SquaresOnly(reason=payload.get("reason", ""))
    if kind == "finite_candidate_primes":
        return FiniteCandidatePrimes(
            candidates=frozenset(payload["candidates"]),
            note=payload.get("note", ""),
        )
    raise ValueError(f"unknown verdict kind: {kind!r}")
