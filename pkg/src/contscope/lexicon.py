"""Standard generalized quantifiers as continuation-monad values.

A determiner plus a restriction set A over a carrier X denotes the
function P(X) -> 2 used at computation-tree leaves. All semantics here
are cardinality-based (and therefore conservative): only |A intersect h|
and |A| matter.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fincore import FinSet, Pred
from .monads import ContinuationMonad, TValue

_SIMPLE_KINDS = ("every", "some", "no", "most")


@dataclass(frozen=True)
class Determiner:
    kind: str
    k: int | None = None

    def __post_init__(self) -> None:
        if self.kind in _SIMPLE_KINDS:
            if self.k is not None:
                raise ValueError(f"{self.kind} takes no numeral")
        elif self.kind in ("at_least", "exactly"):
            if self.k is None or self.k < 0:
                raise ValueError(f"{self.kind} needs k >= 0")
        else:
            raise ValueError(f"unknown determiner kind {self.kind!r}")


EVERY = Determiner("every")
SOME = Determiner("some")
NO = Determiner("no")
MOST = Determiner("most")


def at_least(k: int) -> Determiner:
    return Determiner("at_least", k)


def exactly(k: int) -> Determiner:
    return Determiner("exactly", k)


@dataclass(frozen=True)
class GQuant:
    """A quantifier over base with restriction A: evaluable on Pred(base)."""

    base: FinSet
    restriction: Pred
    det: Determiner
    value: TValue

    def __call__(self, h: Pred) -> bool:
        return self.value.payload(h)


def make_gq(det: Determiner, X: FinSet, A: Pred) -> GQuant:
    """every: all of A in h; some: at least one; no: none; most: strict
    majority of A; at_least/exactly k by count."""
    if A.dom != X:
        raise ValueError(f"restriction over {A.dom.name}, carrier is {X.name}")
    size_a = sum(A.bits)
    abits = A.bits
    kind, k = det.kind, det.k

    def val(h: Pred) -> bool:
        inter = 0
        for i, b in enumerate(abits):
            if b and h.bits[i]:
                inter += 1
        if kind == "every":
            return inter == size_a
        if kind == "some":
            return inter >= 1
        if kind == "no":
            return inter == 0
        if kind == "most":
            return inter > size_a - inter
        if kind == "at_least":
            return inter >= k
        return inter == k

    return GQuant(X, A, det, TValue(ContinuationMonad(), X, val))


def parse_determiner(name: str) -> Determiner:
    """Accepts every, some, a (= some), no, most, at_least_K, exactly_K."""
    name = name.strip().lower()
    if name == "a":
        return SOME
    if name in _SIMPLE_KINDS:
        return Determiner(name)
    for prefix, kind in (("at_least_", "at_least"), ("exactly_", "exactly")):
        if name.startswith(prefix):
            tail = name[len(prefix):]
            if not tail.isdigit():
                raise ValueError(f"bad numeral in determiner {name!r}")
            return Determiner(kind, int(tail))
    raise ValueError(f"unknown determiner {name!r}")


def det_name(det: Determiner) -> str:
    if det.k is None:
        return det.kind
    return f"{det.kind}_{det.k}"
