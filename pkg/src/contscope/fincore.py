"""Finite sets, total maps, products and predicates.

Everything downstream is evaluated extensionally over these carriers:
elements are dense integer indices 0..size-1, functions are lookup
tables, and predicates are bit tuples. Tuples in a product are packed
with a fixed mixed-radix encoding (last factor varies fastest); golden
outputs depend on that convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

PRED_ENUM_BUDGET = 20


@dataclass(frozen=True)
class FinSet:
    name: str
    size: int

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError(f"FinSet {self.name!r}: size must be >= 0, got {self.size}")

    def elements(self) -> range:
        return range(self.size)

    def check_element(self, x: int) -> None:
        if not 0 <= x < self.size:
            raise ValueError(f"element {x} out of range for {self.name} (size {self.size})")


@dataclass(frozen=True)
class FinMap:
    """A total function dom -> cod given by its full lookup table."""

    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.table) != self.dom.size:
            raise ValueError(
                f"FinMap table length {len(self.table)} != dom size {self.dom.size}"
            )
        for i, v in enumerate(self.table):
            if not 0 <= v < self.cod.size:
                raise ValueError(f"FinMap not total: table[{i}] = {v} not in cod {self.cod.name}")

    def __call__(self, x: int) -> int:
        return self.table[x]


def identity_map(X: FinSet) -> FinMap:
    return FinMap(X, X, tuple(range(X.size)))


def compose(g: FinMap, f: FinMap) -> FinMap:
    """g after f."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose: {f.cod.name} != {g.dom.name}")
    return FinMap(f.dom, g.cod, tuple(g.table[v] for v in f.table))


@dataclass(frozen=True)
class Pred:
    """A predicate on a finite set, i.e. an element of dom => 2."""

    dom: FinSet
    bits: tuple[bool, ...]

    def __post_init__(self) -> None:
        if len(self.bits) != self.dom.size:
            raise ValueError(f"Pred has {len(self.bits)} bits for dom of size {self.dom.size}")

    def __call__(self, x: int) -> bool:
        return self.bits[x]

    @cached_property
    def index(self) -> int:
        """Position of this predicate in the all_preds enumeration order."""
        return sum(1 << i for i, b in enumerate(self.bits) if b)


def pred_from_indices(X: FinSet, members: Sequence[int]) -> Pred:
    inside = set(members)
    for x in inside:
        X.check_element(x)
    return Pred(X, tuple(i in inside for i in range(X.size)))


def pred_from_index(X: FinSet, k: int) -> Pred:
    return Pred(X, tuple(bool((k >> i) & 1) for i in range(X.size)))


def full_pred(X: FinSet) -> Pred:
    return Pred(X, (True,) * X.size)


def empty_pred(X: FinSet) -> Pred:
    return Pred(X, (False,) * X.size)


def all_preds(X: FinSet, budget: int = PRED_ENUM_BUDGET) -> Iterator[Pred]:
    """Yield all 2^|X| predicates on X in binary-counter order.

    Element i of X is bit i of the counter, so predicate k holds at x
    iff bit x of k is set.
    """
    if X.size > budget:
        raise ValueError(
            f"all_preds over {X.name} (size {X.size}) exceeds budget {budget}; "
            "use sampled predicates instead"
        )
    for k in range(1 << X.size):
        yield pred_from_index(X, k)


@lru_cache(maxsize=128)
def all_preds_tuple(X: FinSet) -> tuple[Pred, ...]:
    """Cached materialization of all_preds for small carriers."""
    if X.size > 12:
        raise ValueError(f"all_preds_tuple over {X.name} (size {X.size}) would not be cached")
    return tuple(all_preds(X))


class ProdSet:
    """An n-ary product of finite sets with tuple packing.

    encode/decode are mutually inverse bijections between factor-index
    tuples and 0..size-1, mixed radix with the last factor fastest.
    """

    def __init__(self, factors: Sequence[FinSet]):
        if not factors:
            raise ValueError("empty product")
        self.factors: tuple[FinSet, ...] = tuple(factors)
        size = 1
        for f in self.factors:
            size *= f.size
        name = "x".join(f.name for f in self.factors)
        self.carrier = FinSet(name, size)
        # strides[i] = product of sizes of the factors after i
        strides = []
        acc = 1
        for f in reversed(self.factors):
            strides.append(acc)
            acc *= f.size
        self.strides: tuple[int, ...] = tuple(reversed(strides))

    def encode(self, t: Sequence[int]) -> int:
        if len(t) != len(self.factors):
            raise ValueError(f"tuple arity {len(t)} != product arity {len(self.factors)}")
        code = 0
        for x, f, s in zip(t, self.factors, self.strides):
            f.check_element(x)
            code += x * s
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        self.carrier.check_element(code)
        out = []
        for f, s in zip(self.factors, self.strides):
            out.append((code // s) % f.size)
        return tuple(out)

    def tuples(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(f.elements() for f in self.factors))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ProdSet) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __repr__(self) -> str:
        return f"ProdSet({self.carrier.name})"


@lru_cache(maxsize=None)
def _product_cached(factors: tuple[FinSet, ...]) -> ProdSet:
    return ProdSet(factors)


def product(factors: Sequence[FinSet]) -> ProdSet:
    return _product_cached(tuple(factors))


def proj_sigma(sigma: Sequence[int], factors: Sequence[FinSet]) -> FinMap:
    """Generalized projection for sigma: {1..m} -> {1..n} (1-based values).

    Maps encode(x_1..x_n) to encode(x_sigma(1)..x_sigma(m)); for a
    bijective sigma this permutes the factors.
    """
    n = len(factors)
    for v in sigma:
        if not 1 <= v <= n:
            raise ValueError(f"sigma value {v} out of range 1..{n}")
    dom = ProdSet(factors)
    cod = ProdSet([factors[v - 1] for v in sigma])
    table = []
    for code in range(dom.carrier.size):
        t = dom.decode(code)
        table.append(cod.encode(tuple(t[v - 1] for v in sigma)))
    return FinMap(dom.carrier, cod.carrier, tuple(table))


@lru_cache(maxsize=None)
def _slice_offsets(prod: ProdSet, pos: int) -> tuple[int, ...]:
    # packed codes of all settings of the factors other than `pos`,
    # enumerated in the remaining product's own order
    rest = [i for i in range(len(prod.factors)) if i != pos - 1]
    out = []
    for t in itertools.product(*(prod.factors[i].elements() for i in rest)):
        out.append(sum(x * prod.strides[i] for x, i in zip(t, rest)))
    return tuple(out)


def slice_pred(prod: ProdSet, c: Pred, pos: int, val: int) -> Pred:
    """Fix factor `pos` (1-based) of a predicate on a product to `val`.

    Returns the predicate on the remaining factors (surface order kept);
    for a binary product this is the paper-style partial evaluation.
    """
    if c.dom != prod.carrier:
        raise ValueError(f"pred domain {c.dom.name} != product carrier {prod.carrier.name}")
    if not 1 <= pos <= len(prod.factors):
        raise ValueError(f"factor position {pos} out of range")
    prod.factors[pos - 1].check_element(val)
    rest = tuple(f for i, f in enumerate(prod.factors) if i != pos - 1)
    if not rest:
        raise ValueError("cannot slice the only factor; evaluate the predicate instead")
    rprod = _product_cached(rest)
    offsets = _slice_offsets(prod, pos)
    base = val * prod.strides[pos - 1]
    cbits = c.bits
    return Pred(rprod.carrier, tuple(cbits[base + o] for o in offsets))


def invert_permutation(sigma: Sequence[int]) -> tuple[int, ...]:
    """Inverse of a 1-based permutation tuple."""
    inv = [0] * len(sigma)
    for i, v in enumerate(sigma):
        inv[v - 1] = i + 1
    return tuple(inv)
