"""Monads on finite Set: functor action, unit, multiplication, law checks.

Six instances: identity, maybe, exception, list, covariant power-set and
continuation. Values of T(X) are TValue records; nested levels T(T(X))
are represented over a materialized carrier for T(X) (see t_carrier), so
the same three operations work at every depth. Continuation values are
black-box evaluables on predicates, never tables of size 2^(2^n), and
their equality is extensional on demand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator

from .fincore import FinMap, FinSet, Pred, all_preds, all_preds_tuple, pred_from_index


@dataclass(frozen=True)
class IdentityMonad:
    pass


@dataclass(frozen=True)
class MaybeMonad:
    pass


@dataclass(frozen=True)
class ExceptionMonad:
    exceptions: FinSet


@dataclass(frozen=True)
class ListMonad:
    # max_len caps enumeration only; construction accepts any finite word
    max_len: int = 3


@dataclass(frozen=True)
class PowersetMonad:
    pass


@dataclass(frozen=True)
class ContinuationMonad:
    pass


MonadInstance = (
    IdentityMonad
    | MaybeMonad
    | ExceptionMonad
    | ListMonad
    | PowersetMonad
    | ContinuationMonad
)


@dataclass(frozen=True)
class Exc:
    """An exception outcome of the exception monad (index into E)."""

    which: int


@dataclass(frozen=True)
class TValue:
    """One T-computation over `base`.

    Payload by instance: identity = element index; maybe = index or None;
    exception = index or Exc; list = tuple of indices; powerset = Pred
    over base; continuation = callable Pred(base) -> bool.
    """

    monad: MonadInstance
    base: FinSet
    payload: Any

    def __repr__(self) -> str:
        kind = type(self.monad).__name__.removesuffix("Monad").lower()
        if isinstance(self.monad, ContinuationMonad):
            return f"TValue({kind}, {self.base.name}, <evaluable>)"
        return f"TValue({kind}, {self.base.name}, {self.payload!r})"


def same_monad(a: MonadInstance, b: MonadInstance) -> bool:
    """Instance compatibility; list caps affect enumeration only."""
    if isinstance(a, ListMonad) and isinstance(b, ListMonad):
        return True
    return a == b


def _check_value(T: MonadInstance, t: TValue) -> None:
    if not same_monad(t.monad, T):
        raise ValueError(f"TValue built for {t.monad}, operation on {T}")


def t_unit(T: MonadInstance, X: FinSet, x: int) -> TValue:
    """The monad unit at X applied to element x."""
    X.check_element(x)
    if isinstance(T, (IdentityMonad, MaybeMonad, ExceptionMonad)):
        return TValue(T, X, x)
    if isinstance(T, ListMonad):
        return TValue(T, X, (x,))
    if isinstance(T, PowersetMonad):
        return TValue(T, X, Pred(X, tuple(i == x for i in range(X.size))))
    if isinstance(T, ContinuationMonad):
        return TValue(T, X, lambda h, _x=x: h(_x))
    raise TypeError(f"unknown monad instance {T!r}")


def _map_fn(T: MonadInstance, fn: Callable[[int], int], dom: FinSet, cod: FinSet,
            t: TValue) -> TValue:
    _check_value(T, t)
    if t.base != dom:
        raise ValueError(f"value over {t.base.name}, map from {dom.name}")
    p = t.payload
    if isinstance(T, IdentityMonad):
        return TValue(T, cod, fn(p))
    if isinstance(T, MaybeMonad):
        return TValue(T, cod, None if p is None else fn(p))
    if isinstance(T, ExceptionMonad):
        return TValue(T, cod, p if isinstance(p, Exc) else fn(p))
    if isinstance(T, ListMonad):
        return TValue(T, cod, tuple(fn(x) for x in p))
    if isinstance(T, PowersetMonad):
        bits = [False] * cod.size
        for x in range(dom.size):
            if p.bits[x]:
                bits[fn(x)] = True
        return TValue(T, cod, Pred(cod, tuple(bits)))
    if isinstance(T, ContinuationMonad):
        def mapped(h: Pred, _q=p, _fn=fn, _dom=dom) -> bool:
            return _q(Pred(_dom, tuple(h(_fn(x)) for x in range(_dom.size))))
        return TValue(T, cod, mapped)
    raise TypeError(f"unknown monad instance {T!r}")


def t_map(T: MonadInstance, f: FinMap, t: TValue) -> TValue:
    """Functor action T(f) on a value over f.dom."""
    return _map_fn(T, f, f.dom, f.cod, t)


class TCarrier:
    """T(X) materialized as a finite set with decode/encode bijections.

    `fin` is the FinSet standing for T(X); decode(i) is the TValue it
    indexes and encode is its inverse. Sizes can be astronomically large
    (they are exact ints); only decode/encode of individual indices is
    ever required. For the continuation instance encode fingerprints the
    evaluable on all predicates of X, so it demands a small inner set.
    """

    def __init__(self, monad: MonadInstance, inner: FinSet):
        self.monad = monad
        self.inner = inner
        n = inner.size
        if isinstance(monad, IdentityMonad):
            size = n
            name = f"Id({inner.name})"
        elif isinstance(monad, MaybeMonad):
            size = n + 1
            name = f"Maybe({inner.name})"
        elif isinstance(monad, ExceptionMonad):
            size = n + monad.exceptions.size
            name = f"Exc({inner.name})"
        elif isinstance(monad, ListMonad):
            size = 1
            block = 1
            for _ in range(monad.max_len):
                block *= n
                size += block
            name = f"List{monad.max_len}({inner.name})"
        elif isinstance(monad, PowersetMonad):
            size = 1 << n
            name = f"Pow({inner.name})"
        elif isinstance(monad, ContinuationMonad):
            if n > 20:
                raise ValueError(f"continuation carrier over {inner.name} (size {n}) too large")
            size = 1 << (1 << n)
            name = f"Cont({inner.name})"
        else:
            raise TypeError(f"unknown monad instance {monad!r}")
        self.fin = FinSet(name, size)

    @property
    def size(self) -> int:
        return self.fin.size

    def decode(self, i: int) -> TValue:
        T, X = self.monad, self.inner
        self.fin.check_element(i)
        if isinstance(T, IdentityMonad):
            return TValue(T, X, i)
        if isinstance(T, MaybeMonad):
            return TValue(T, X, None if i == X.size else i)
        if isinstance(T, ExceptionMonad):
            return TValue(T, X, Exc(i - X.size) if i >= X.size else i)
        if isinstance(T, ListMonad):
            n = X.size
            k, block = 0, 1
            while i >= block:
                i -= block
                k += 1
                block *= n
            word = []
            for _ in range(k):
                block //= n
                word.append(i // block)
                i %= block
            return TValue(T, X, tuple(word))
        if isinstance(T, PowersetMonad):
            return TValue(T, X, pred_from_index(X, i))
        if isinstance(T, ContinuationMonad):
            return TValue(T, X, lambda h, _tbl=i: bool((_tbl >> h.index) & 1))
        raise TypeError(f"unknown monad instance {T!r}")

    def encode(self, t: TValue) -> int:
        T, X = self.monad, self.inner
        _check_value(T, t)
        if t.base != X:
            raise ValueError(f"value over {t.base.name}, carrier over {X.name}")
        p = t.payload
        if isinstance(T, IdentityMonad):
            return p
        if isinstance(T, MaybeMonad):
            return X.size if p is None else p
        if isinstance(T, ExceptionMonad):
            return X.size + p.which if isinstance(p, Exc) else p
        if isinstance(T, ListMonad):
            n = X.size
            if len(p) > T.max_len:
                raise ValueError(f"word of length {len(p)} exceeds enumeration cap {T.max_len}")
            # words ranked by length, then lexicographically (first letter
            # most significant), matching decode
            code = 0
            for x in p:
                code = code * n + x
            return self._list_offset(len(p)) + code
        if isinstance(T, PowersetMonad):
            return p.index
        if isinstance(T, ContinuationMonad):
            code = 0
            for h in all_preds(X):
                if p(h):
                    code |= 1 << h.index
            return code
        raise TypeError(f"unknown monad instance {T!r}")

    def _list_offset(self, k: int) -> int:
        # number of words strictly shorter than k
        n = self.inner.size
        total, block = 0, 1
        for _ in range(k):
            total += block
            block *= n
        return total


def t_carrier(T: MonadInstance, X: FinSet) -> TCarrier:
    return TCarrier(T, X)


def t_mult(T: MonadInstance, tt: TValue, carrier: TCarrier) -> TValue:
    """Monad multiplication: flatten a value over the carrier of T(X).

    `carrier` must describe tt.base as T(X); the result lives over X.
    """
    _check_value(T, tt)
    if not same_monad(carrier.monad, T) or carrier.fin != tt.base:
        raise ValueError(
            f"carrier {carrier.fin.name} does not describe the base of {tt!r}"
        )
    X = carrier.inner
    p = tt.payload
    if isinstance(T, IdentityMonad):
        return carrier.decode(p)
    if isinstance(T, MaybeMonad):
        return TValue(T, X, None) if p is None else carrier.decode(p)
    if isinstance(T, ExceptionMonad):
        return TValue(T, X, p) if isinstance(p, Exc) else carrier.decode(p)
    if isinstance(T, ListMonad):
        flat: list[int] = []
        for i in p:
            flat.extend(carrier.decode(i).payload)
        return TValue(T, X, tuple(flat))
    if isinstance(T, PowersetMonad):
        # mu(H)(x) = OR over h in P(X) of H(h) and h(x)
        bits = [False] * X.size
        for i in range(carrier.size):
            if p.bits[i]:
                inner = carrier.decode(i).payload
                for x in range(X.size):
                    if inner.bits[x]:
                        bits[x] = True
        return TValue(T, X, Pred(X, tuple(bits)))
    if isinstance(T, ContinuationMonad):
        def flattened(h: Pred, _f=p, _c=carrier) -> bool:
            probe = Pred(_c.fin, tuple(_c.decode(i).payload(h) for i in range(_c.size)))
            return _f(probe)
        return TValue(T, X, flattened)
    raise TypeError(f"unknown monad instance {T!r}")


def tvalues_equal(a: TValue, b: TValue, pred_budget: int = 20) -> bool:
    """Extensional equality; continuation values are compared on all preds."""
    if not same_monad(a.monad, b.monad) or a.base != b.base:
        return False
    if isinstance(a.monad, ContinuationMonad):
        preds = all_preds_tuple(a.base) if a.base.size <= 12 else all_preds(a.base, pred_budget)
        return all(a.payload(h) == b.payload(h) for h in preds)
    return a.payload == b.payload


# ---------------------------------------------------------------------------
# Law checking


@dataclass(frozen=True)
class LawBudget:
    max_enumerate: int = 70_000   # spaces above this get a seeded sample
    samples: int = 256
    seed: int = 0
    cont_family: int = 220        # generated C^3(X) inputs for associativity
    random_functionals: int = 8


@dataclass
class LawReport:
    monad: MonadInstance
    carrier_sizes: tuple[int, ...]
    mode: str
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures


def space_indices(size: int, budget: LawBudget) -> tuple[str, list[int]]:
    if size <= budget.max_enumerate:
        return "exhaustive", list(range(size))
    rng = random.Random(budget.seed)
    head = list(range(min(size, 64)))
    picks = sorted({rng.randrange(size) for _ in range(budget.samples)} | set(head))
    return "sampled", picks


def check_monad_laws(T: MonadInstance, X: FinSet, budget: LawBudget | None = None) -> LawReport:
    """Verify the unit triangles and the associativity square at X.

    Inputs are every element of the relevant space when it fits the
    budget, otherwise a deterministic seeded sample of carrier indices
    (continuation associativity always runs on the generated family).
    """
    budget = budget or LawBudget()
    if isinstance(T, ContinuationMonad):
        return _check_continuation_laws(X, budget)

    c1 = t_carrier(T, X)
    c2 = t_carrier(T, c1.fin)
    c3 = t_carrier(T, c2.fin)
    report = LawReport(T, (X.size,), "exhaustive")
    unit_fn = lambda x: c1.encode(t_unit(T, X, x))

    mode1, idx1 = space_indices(c1.size, budget)
    for i in idx1:
        t = c1.decode(i)
        left = t_mult(T, t_unit(T, c1.fin, i), c1)
        if not tvalues_equal(left, t):
            report.failures.append(f"mu.eta_T != id at {t!r}")
        right = t_mult(T, _map_fn(T, unit_fn, X, c1.fin, t), c1)
        if not tvalues_equal(right, t):
            report.failures.append(f"mu.T(eta) != id at {t!r}")
        report.checked += 2

    # flattening a T^2 element can exceed a list cap, so route the T(mu)
    # side through a carrier wide enough for the flattened words
    c1w = t_carrier(ListMonad(T.max_len * T.max_len), X) if isinstance(T, ListMonad) else c1
    mult_fn = lambda i: c1w.encode(t_mult(T, c2.decode(i), c1))
    mode3, idx3 = space_indices(c3.size, budget)
    for i in idx3:
        ttt = c3.decode(i)
        lhs = t_mult(T, t_mult(T, ttt, c2), c1)
        rhs = t_mult(T, _map_fn(T, mult_fn, c2.fin, c1w.fin, ttt), c1w)
        if not tvalues_equal(lhs, rhs):
            report.failures.append(f"mu.mu_T != mu.T(mu) at index {i} of {c3.fin.name}")
        report.checked += 1

    report.mode = "exhaustive" if mode1 == mode3 == "exhaustive" else "sampled"
    return report


# -- continuation towers ----------------------------------------------------
#
# Raw-closure representation above ground level, so mu at C^2/C^3 never
# enumerates anything: a pred on C(X) is a callable on ground TValues, a
# C^2 value is a callable on such preds, and so on up.


def _cont_ground_family(X: FinSet, budget: LawBudget) -> list[TValue]:
    T = ContinuationMonad()
    out = [t_unit(T, X, x) for x in range(X.size)]
    n = X.size

    def counted(test: Callable[[int], bool]) -> TValue:
        return TValue(T, X, lambda h, _t=test: _t(sum(1 for b in h.bits if b)))

    out.append(counted(lambda k: k == n))       # every
    out.append(counted(lambda k: k >= 1))       # some
    out.append(counted(lambda k: k == 0))       # no
    out.append(counted(lambda k: 2 * k > n))    # most
    rng = random.Random(budget.seed)
    for _ in range(budget.random_functionals):
        tbl = rng.getrandbits(1 << n) if n else rng.getrandbits(1)
        out.append(TValue(T, X, lambda h, _tbl=tbl: bool((_tbl >> h.index) & 1)))
    return out


def cont_eta1(q: TValue):
    """Unit image of a ground continuation value in C^2 (closure form:
    a C^2 value is a callable on preds-on-C(X), which are callables on
    ground TValues)."""
    return lambda e, _q=q: e(_q)


def cont_mu0(X: FinSet, d) -> TValue:
    """Multiplication from a closure-form C^2 value down to a TValue."""
    T = ContinuationMonad()
    return TValue(T, X, lambda h, _d=d: _d(lambda q: q.payload(h)))


def cont_cmap_eta(X: FinSet, q: TValue):
    """C(eta_X) applied to a ground value: lands in C^2 (closure form)."""
    T = ContinuationMonad()
    return lambda e, _q=q: _q.payload(
        Pred(X, tuple(e(t_unit(T, X, x)) for x in range(X.size)))
    )


def cont_level2_family(X: FinSet, budget: LawBudget,
                       ground: list[TValue] | None = None) -> list:
    """Generated C^2(X) values: eta images, C(eta) images of the ground
    family, and seeded random functionals fingerprinting their argument
    on ground probes."""
    ground = ground if ground is not None else _cont_ground_family(X, budget)
    level2 = [cont_eta1(q) for q in ground]
    level2 += [cont_cmap_eta(X, q) for q in ground]
    rng = random.Random(budget.seed + 1)
    probes = ground[: min(len(ground), 10)]
    for _ in range(budget.random_functionals):
        r = rng.getrandbits(64)

        def rand2(e, _r=r, _p=probes):
            fp = sum(1 << i for i, q in enumerate(_p) if e(q))
            return bool((_r >> (fp % 61)) & 1)

        level2.append(rand2)
    return level2


def _check_continuation_laws(X: FinSet, budget: LawBudget) -> LawReport:
    T = ContinuationMonad()
    c1 = t_carrier(T, X)
    report = LawReport(T, (X.size,), "exhaustive")

    mode1, idx1 = space_indices(c1.size, budget)
    unit_fn = lambda x: c1.encode(t_unit(T, X, x))
    for i in idx1:
        q = c1.decode(i)
        left = t_mult(T, t_unit(T, c1.fin, i), c1)
        if not tvalues_equal(left, q):
            report.failures.append(f"mu.eta_T != id at C-table {i}")
        right = t_mult(T, _map_fn(T, unit_fn, X, c1.fin, q), c1)
        if not tvalues_equal(right, q):
            report.failures.append(f"mu.T(eta) != id at C-table {i}")
        report.checked += 2

    # associativity at C^3(X) over the generated family
    ground = _cont_ground_family(X, budget)
    level2 = cont_level2_family(X, budget, ground)

    def eta2(d):
        return lambda e2, _d=d: e2(_d)                   # C^3 value

    def cmap1(d, fn):
        # C(fn)(d) for fn: C(X) -> C^2(X), d in C^2(X); lands in C^3(X)
        return lambda e2, _d=d, _fn=fn: _d(lambda q: e2(_fn(q)))

    family = [eta2(d) for d in level2]
    family += [cmap1(d, cont_eta1) for d in level2]
    rng = random.Random(budget.seed + 2)
    probes2 = level2[: min(len(level2), 8)]
    while len(family) < budget.cont_family:
        r = rng.getrandbits(64)

        def rand3(e2, _r=r, _p=probes2):
            fp = sum(1 << i for i, d in enumerate(_p) if e2(d))
            return bool((_r >> (fp % 61)) & 1)

        family.append(rand3)

    def mu1(f):
        return lambda e, _f=f: _f(lambda d: d(e))        # mu at C(X): C^3 -> C^2

    def cmap_mu(f):
        return lambda e, _f=f: _f(lambda d: e(cont_mu0(X, d)))   # C(mu_X)

    for k, f in enumerate(family):
        lhs = cont_mu0(X, mu1(f))
        rhs = cont_mu0(X, cmap_mu(f))
        if not tvalues_equal(lhs, rhs):
            report.failures.append(f"mu.mu_T != mu.T(mu) at generated C^3 element {k}")
        report.checked += 1

    report.mode = mode1 if mode1 == "sampled" else "exhaustive"
    return report
