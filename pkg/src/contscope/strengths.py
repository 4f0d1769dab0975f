"""Canonical strengths, pile-ups, and their axiom checkers.

Every monad on Set carries the canonical left/right strength
stl(s, y) = T(l_y)(s) and str(x, t) = T(r_x)(t); the two pile-ups
T(X) x T(Y) -> T(X x Y) sequence a pair of computations left-first or
right-first, and their disagreement is what scope ambiguity is made of.
pile_left/pile_right use the per-instance forms; the *_diagram variants
chase the defining composite mu . T(str) . stl so the two routes can be
compared extensionally.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .fincore import FinMap, FinSet, Pred, all_preds, pred_from_index, product, proj_sigma, slice_pred
from .lexicon import EVERY, MOST, NO, SOME, Determiner, make_gq
from .monads import (
    ContinuationMonad,
    Exc,
    ExceptionMonad,
    IdentityMonad,
    LawBudget,
    ListMonad,
    MaybeMonad,
    MonadInstance,
    PowersetMonad,
    TValue,
    _map_fn,
    cont_level2_family,
    cont_mu0,
    same_monad,
    space_indices,
    t_carrier,
    t_map,
    t_mult,
    t_unit,
    tvalues_equal,
)


def st_left(T: MonadInstance, s: TValue, Y: FinSet, y: int) -> TValue:
    """Left strength: T(l_y)(s), a value over s.base x Y."""
    Y.check_element(y)
    X = s.base
    prod = product([X, Y])
    l_y = FinMap(X, prod.carrier, tuple(prod.encode((x, y)) for x in range(X.size)))
    return t_map(T, l_y, s)


def st_right(T: MonadInstance, X: FinSet, x: int, t: TValue) -> TValue:
    """Right strength: T(r_x)(t), a value over X x t.base."""
    X.check_element(x)
    Y = t.base
    prod = product([X, Y])
    r_x = FinMap(Y, prod.carrier, tuple(prod.encode((x, y)) for y in range(Y.size)))
    return t_map(T, r_x, t)


def _pair_base(s: TValue, t: TValue):
    prod = product([s.base, t.base])
    return prod, prod.carrier


def pile_left(T: MonadInstance, s: TValue, t: TValue) -> TValue:
    """Left pile-up: run s first, then t.

    Extensionally equal to mu . T(str) . stl (see pile_left_diagram);
    for the continuation monad this is lambda c. M(lambda x. N(lambda y. c(x,y))).
    """
    for v in (s, t):
        if not same_monad(v.monad, T):
            raise ValueError(f"pile-up on {T} got a value of {v.monad}")
    prod, carrier = _pair_base(s, t)
    X, Y = s.base, t.base
    if isinstance(T, IdentityMonad):
        return TValue(T, carrier, prod.encode((s.payload, t.payload)))
    if isinstance(T, MaybeMonad):
        if s.payload is None or t.payload is None:
            return TValue(T, carrier, None)
        return TValue(T, carrier, prod.encode((s.payload, t.payload)))
    if isinstance(T, ExceptionMonad):
        if isinstance(s.payload, Exc):
            return TValue(T, carrier, s.payload)
        if isinstance(t.payload, Exc):
            return TValue(T, carrier, t.payload)
        return TValue(T, carrier, prod.encode((s.payload, t.payload)))
    if isinstance(T, ListMonad):
        word = tuple(prod.encode((x, y)) for x in s.payload for y in t.payload)
        return TValue(T, carrier, word)
    if isinstance(T, PowersetMonad):
        bits = tuple(s.payload.bits[x] and t.payload.bits[y] for x, y in prod.tuples())
        return TValue(T, carrier, Pred(carrier, bits))
    if isinstance(T, ContinuationMonad):
        def piled(c: Pred, _m=s.payload, _n=t.payload) -> bool:
            outer = tuple(_n(slice_pred(prod, c, 1, x)) for x in range(X.size))
            return _m(Pred(X, outer))
        return TValue(T, carrier, piled)
    raise TypeError(f"unknown monad instance {T!r}")


def pile_right(T: MonadInstance, s: TValue, t: TValue) -> TValue:
    """Right pile-up: run t first, then s."""
    for v in (s, t):
        if not same_monad(v.monad, T):
            raise ValueError(f"pile-up on {T} got a value of {v.monad}")
    prod, carrier = _pair_base(s, t)
    X, Y = s.base, t.base
    if isinstance(T, (IdentityMonad, MaybeMonad, PowersetMonad)):
        return pile_left(T, s, t)  # commutative instances
    if isinstance(T, ExceptionMonad):
        if isinstance(t.payload, Exc):
            return TValue(T, carrier, t.payload)
        if isinstance(s.payload, Exc):
            return TValue(T, carrier, s.payload)
        return TValue(T, carrier, prod.encode((s.payload, t.payload)))
    if isinstance(T, ListMonad):
        word = tuple(prod.encode((x, y)) for y in t.payload for x in s.payload)
        return TValue(T, carrier, word)
    if isinstance(T, ContinuationMonad):
        def piled(c: Pred, _m=s.payload, _n=t.payload) -> bool:
            outer = tuple(_m(slice_pred(prod, c, 2, y)) for y in range(Y.size))
            return _n(Pred(Y, outer))
        return TValue(T, carrier, piled)
    raise TypeError(f"unknown monad instance {T!r}")


def pile_left_diagram(T: MonadInstance, s: TValue, t: TValue) -> TValue:
    """Left pile-up via its defining composite mu . T(str) . stl."""
    prod, carrier = _pair_base(s, t)
    X, Y = s.base, t.base
    if isinstance(T, ContinuationMonad):
        # stl_{X,T(Y)} then C(str) then mu, with the middle set virtual
        def piled(c: Pred, _s=s, _t=t) -> bool:
            outer = tuple(st_right(T, X, x, _t).payload(c) for x in range(X.size))
            return _s.payload(Pred(X, outer))
        return TValue(T, carrier, piled)
    cty = t_carrier(T, Y)
    mid = product([X, cty.fin])
    t_idx = cty.encode(t)
    l_t = FinMap(X, mid.carrier, tuple(mid.encode((x, t_idx)) for x in range(X.size)))
    step1 = t_map(T, l_t, s)
    cxy = t_carrier(T, carrier)

    def push(pi: int) -> int:
        x, i = mid.decode(pi)
        return cxy.encode(st_right(T, X, x, cty.decode(i)))

    return t_mult(T, _map_fn(T, push, mid.carrier, cxy.fin, step1), cxy)


def pile_right_diagram(T: MonadInstance, s: TValue, t: TValue) -> TValue:
    """Right pile-up via its defining composite mu . T(stl) . str."""
    prod, carrier = _pair_base(s, t)
    X, Y = s.base, t.base
    if isinstance(T, ContinuationMonad):
        def piled(c: Pred, _s=s, _t=t) -> bool:
            outer = tuple(st_left(T, _s, Y, y).payload(c) for y in range(Y.size))
            return _t.payload(Pred(Y, outer))
        return TValue(T, carrier, piled)
    ctx = t_carrier(T, X)
    mid = product([ctx.fin, Y])
    s_idx = ctx.encode(s)
    r_s = FinMap(Y, mid.carrier, tuple(mid.encode((s_idx, y)) for y in range(Y.size)))
    step1 = t_map(T, r_s, t)
    cxy = t_carrier(T, carrier)

    def push(pi: int) -> int:
        i, y = mid.decode(pi)
        return cxy.encode(st_left(T, ctx.decode(i), Y, y))

    return t_mult(T, _map_fn(T, push, mid.carrier, cxy.fin, step1), cxy)


# ---------------------------------------------------------------------------
# Generated value families with serializable descriptors


def value_from_desc(T: MonadInstance, X: FinSet, desc) -> TValue:
    """Rebuild a family value from its descriptor (see described_values)."""
    tag = desc[0]
    if tag == "idx":
        return t_carrier(T, X).decode(desc[1])
    if tag == "eta":
        return t_unit(T, X, desc[1])
    if tag == "det":
        _, kind, k, mask = desc
        return make_gq(Determiner(kind, k), X, pred_from_index(X, mask)).value
    if tag == "table":
        return TValue(ContinuationMonad(), X, lambda h, _tbl=desc[1]: bool((_tbl >> h.index) & 1))
    raise ValueError(f"unknown value descriptor {desc!r}")


def described_values(T: MonadInstance, X: FinSet,
                     budget: LawBudget | None = None) -> list[tuple[tuple, TValue]]:
    """The check family over X: enumerated carrier elements for concrete
    monads; for continuation, all unit images, the lexicon quantifiers
    over the full carrier, and seeded random evaluables."""
    budget = budget or LawBudget()
    if not isinstance(T, ContinuationMonad):
        carrier = t_carrier(T, X)
        _, idx = space_indices(carrier.size, budget)
        return [(("idx", i), carrier.decode(i)) for i in idx]
    out: list[tuple[tuple, TValue]] = []
    for x in range(X.size):
        out.append((("eta", x), value_from_desc(T, X, ("eta", x))))
    full = (1 << X.size) - 1
    for det in (EVERY, SOME, NO, MOST):
        desc = ("det", det.kind, det.k, full)
        out.append((desc, value_from_desc(T, X, desc)))
    rng = random.Random(budget.seed)
    for _ in range(budget.random_functionals):
        tbl = rng.getrandbits(1 << X.size) if X.size else rng.getrandbits(1)
        out.append((("table", tbl), value_from_desc(T, X, ("table", tbl))))
    return out


def _capped_combos(pools: list[list], budget: LawBudget) -> tuple[str, list[tuple]]:
    total = 1
    for p in pools:
        total *= len(p)
    if total <= budget.max_enumerate:
        return "exhaustive", list(itertools.product(*pools))
    rng = random.Random(budget.seed)
    combos = [tuple(p[rng.randrange(len(p))] for p in pools) for _ in range(budget.samples)]
    return "sampled", combos


# ---------------------------------------------------------------------------
# Reports and checks


@dataclass
class StrengthReport:
    monad: MonadInstance
    carriers: tuple[int, ...]
    axioms: tuple[str, ...]
    failures: list[str] = field(default_factory=list)
    checked: int = 0
    mode: str = "exhaustive"

    @property
    def ok(self) -> bool:
        return not self.failures


def check_strength_axioms(T: MonadInstance, sizes: tuple[int, int, int] = (2, 2, 2),
                          budget: LawBudget | None = None) -> StrengthReport:
    """Both strength triangles and unit/mult pentagons, the bi-strong
    square, both swap relations, and agreement of the pile-up closed
    forms with their defining diagrams."""
    budget = budget or LawBudget()
    X, Y, Z = (FinSet(n, s) for n, s in zip(("X", "Y", "Z"), sizes))
    report = StrengthReport(
        T, sizes,
        ("left-assoc", "left-unit", "left-mult", "right-assoc", "right-unit",
         "right-mult", "bistrong-square", "swap-strength", "swap-pileup",
         "pileup-diagram"),
    )
    vx = described_values(T, X, budget)
    vy = described_values(T, Y, budget)
    yz = product([Y, Z])
    xy = product([X, Y])
    swap_xy = proj_sigma((2, 1), [X, Y])
    swap_yx = proj_sigma((2, 1), [Y, X])

    def fail(axiom: str, detail: str) -> None:
        report.failures.append(f"{axiom}: {detail}")

    mode, combos = _capped_combos([vx, list(Y.elements()), list(Z.elements())], budget)
    report.mode = mode
    for (sd, s), y, z in combos:
        lhs = st_left(T, st_left(T, s, Y, y), Z, z)
        rhs = st_left(T, s, yz.carrier, yz.encode((y, z)))
        if not tvalues_equal(lhs, rhs):
            fail("left-assoc", f"s={sd} y={y} z={z}")
        report.checked += 1

    for x in X.elements():
        for y in Y.elements():
            if not tvalues_equal(st_left(T, t_unit(T, X, x), Y, y),
                                 t_unit(T, xy.carrier, xy.encode((x, y)))):
                fail("left-unit", f"x={x} y={y}")
            if not tvalues_equal(st_right(T, X, x, t_unit(T, Y, y)),
                                 t_unit(T, xy.carrier, xy.encode((x, y)))):
                fail("right-unit", f"x={x} y={y}")
            report.checked += 2

    _check_strength_mult(T, X, Y, budget, report, fail)

    mode_r, combos_r = _capped_combos([list(X.elements()), list(Y.elements()),
                                       described_values(T, Z, budget)], budget)
    for x, y, (ud, u) in combos_r:
        lhs = st_right(T, xy.carrier, xy.encode((x, y)), u)
        rhs = st_right(T, X, x, st_right(T, Y, y, u))
        if not tvalues_equal(lhs, rhs):
            fail("right-assoc", f"x={x} y={y} u={ud}")
        report.checked += 1

    mode_b, combos_b = _capped_combos([list(X.elements()), vy, list(Z.elements())], budget)
    for x, (td, t), z in combos_b:
        lhs = st_left(T, st_right(T, X, x, t), Z, z)
        rhs = st_right(T, X, x, st_left(T, t, Z, z))
        if not tvalues_equal(lhs, rhs):
            fail("bistrong-square", f"x={x} t={td} z={z}")
        report.checked += 1

    for (sd, s) in vx:
        for y in Y.elements():
            lhs = t_map(T, swap_xy, st_left(T, s, Y, y))
            rhs = st_right(T, Y, y, s)
            if not tvalues_equal(lhs, rhs):
                fail("swap-strength", f"s={sd} y={y}")
            report.checked += 1

    mode_p, pairs = _capped_combos([vx, vy], budget)
    for (sd, s), (td, t) in pairs:
        pl, pr = pile_left(T, s, t), pile_right(T, s, t)
        if not tvalues_equal(pr, t_map(T, swap_yx, pile_left(T, t, s))):
            fail("swap-pileup", f"s={sd} t={td}")
        if not tvalues_equal(pl, pile_left_diagram(T, s, t)):
            fail("pileup-diagram", f"pul s={sd} t={td}")
        if not tvalues_equal(pr, pile_right_diagram(T, s, t)):
            fail("pileup-diagram", f"pur s={sd} t={td}")
        report.checked += 3

    return report


def _check_strength_mult(T, X, Y, budget, report, fail) -> None:
    """mu pentagons: stl . (mu x 1) = mu . T(stl) . stl_{T(X),Y} and mirror."""
    xy = product([X, Y])
    if isinstance(T, ContinuationMonad):
        for side, base, other in (("left-mult", X, Y), ("right-mult", Y, X)):
            for k, f2 in enumerate(cont_level2_family(base, budget)):
                flat = cont_mu0(base, f2)
                for w in other.elements():
                    if side == "left-mult":
                        lhs = st_left(T, flat, Y, w)
                        prod = product([X, Y])

                        def rhs_payload(c, _f=f2, _w=w):
                            return _f(lambda q: st_left(T, q, Y, _w).payload(c))
                    else:
                        lhs = st_right(T, X, w, flat)
                        prod = product([X, Y])

                        def rhs_payload(c, _f=f2, _w=w):
                            return _f(lambda q: st_right(T, X, _w, q).payload(c))
                    rhs = TValue(T, prod.carrier, rhs_payload)
                    if not tvalues_equal(lhs, rhs):
                        fail(side, f"C^2 element {k}, other={w}")
                    report.checked += 1
        return

    c1x = t_carrier(T, X)
    c2x = t_carrier(T, c1x.fin)
    cxy = t_carrier(T, xy.carrier)
    mode, idx = space_indices(c2x.size, budget)
    mid = product([c1x.fin, Y])
    for i in idx:
        ss = c2x.decode(i)
        for y in Y.elements():
            lhs = st_left(T, t_mult(T, ss, c1x), Y, y)
            step1 = st_left(T, ss, Y, y)

            def push(pi: int) -> int:
                j, yv = mid.decode(pi)
                return cxy.encode(st_left(T, c1x.decode(j), Y, yv))

            rhs = t_mult(T, _map_fn(T, push, mid.carrier, cxy.fin, step1), cxy)
            if not tvalues_equal(lhs, rhs):
                fail("left-mult", f"T^2 index {i}, y={y}")
            report.checked += 1

    c1y = t_carrier(T, Y)
    c2y = t_carrier(T, c1y.fin)
    mode, idx = space_indices(c2y.size, budget)
    mid = product([X, c1y.fin])
    for i in idx:
        tt = c2y.decode(i)
        for x in X.elements():
            lhs = st_right(T, X, x, t_mult(T, tt, c1y))
            step1 = st_right(T, X, x, tt)

            def push(pi: int) -> int:
                xv, j = mid.decode(pi)
                return cxy.encode(st_right(T, X, xv, c1y.decode(j)))

            rhs = t_mult(T, _map_fn(T, push, mid.carrier, cxy.fin, step1), cxy)
            if not tvalues_equal(lhs, rhs):
                fail("right-mult", f"T^2 index {i}, x={x}")
            report.checked += 1


def check_pileup_lemma(T: MonadInstance, X: FinSet, Y: FinSet,
                       budget: LawBudget | None = None) -> StrengthReport:
    """Pile-ups agree on pairs with one unit-image component, and both
    equal the corresponding strength."""
    budget = budget or LawBudget()
    report = StrengthReport(T, (X.size, Y.size), ("pileup-lemma",))

    for x in X.elements():
        for td, t in described_values(T, Y, budget):
            eta_x = t_unit(T, X, x)
            pl, pr = pile_left(T, eta_x, t), pile_right(T, eta_x, t)
            want = st_right(T, X, x, t)
            if not (tvalues_equal(pl, want) and tvalues_equal(pr, want)):
                report.failures.append(f"pileup-lemma: eta({x}) vs t={td}")
            report.checked += 1

    for sd, s in described_values(T, X, budget):
        for y in Y.elements():
            eta_y = t_unit(T, Y, y)
            pl, pr = pile_left(T, s, eta_y), pile_right(T, s, eta_y)
            want = st_left(T, s, Y, y)
            if not (tvalues_equal(pl, want) and tvalues_equal(pr, want)):
                report.failures.append(f"pileup-lemma: s={sd} vs eta({y})")
            report.checked += 1
    return report


def check_pileup_assoc(T: MonadInstance, X: FinSet, Y: FinSet, Z: FinSet,
                       budget: LawBudget | None = None) -> StrengthReport:
    """pul(pul x 1) = pul(1 x pul) and the pur analogue, extensionally."""
    budget = budget or LawBudget()
    report = StrengthReport(T, (X.size, Y.size, Z.size), ("pileup-assoc",))
    pools = [described_values(T, S, budget) for S in (X, Y, Z)]
    mode, triples = _capped_combos(pools, budget)
    report.mode = mode
    for (sd, s), (td, t), (ud, u) in triples:
        for name, op in (("pul", pile_left), ("pur", pile_right)):
            lhs = op(T, op(T, s, t), u)
            rhs = op(T, s, op(T, t, u))
            if not tvalues_equal(lhs, rhs):
                report.failures.append(f"pileup-assoc: {name} s={sd} t={td} u={ud}")
            report.checked += 1
    return report


@dataclass
class CommutativityWitness:
    """Outcome of the pul-vs-pur search: either commutative on the tested
    range or a reconstructible counterexample (with a distinguishing
    predicate index for continuation values)."""

    monad: MonadInstance
    X: FinSet
    Y: FinSet
    commutative: bool
    s_desc: tuple | None = None
    t_desc: tuple | None = None
    c_index: int | None = None
    pairs_checked: int = 0

    def reverify(self) -> bool:
        """Re-evaluate the stored counterexample; True iff it still separates."""
        if self.commutative:
            return True
        s = value_from_desc(self.monad, self.X, self.s_desc)
        t = value_from_desc(self.monad, self.Y, self.t_desc)
        pl, pr = pile_left(self.monad, s, t), pile_right(self.monad, s, t)
        if self.c_index is not None:
            c = pred_from_index(product([self.X, self.Y]).carrier, self.c_index)
            return pl.payload(c) != pr.payload(c)
        return not tvalues_equal(pl, pr)


def find_noncommutativity(T: MonadInstance, X: FinSet, Y: FinSet,
                          budget: LawBudget | None = None) -> CommutativityWitness:
    """First pair (lexicographic over the generated families) where the
    two pile-ups differ, or a commutative-on-range verdict."""
    budget = budget or LawBudget()
    checked = 0
    for sd, s in described_values(T, X, budget):
        for td, t in described_values(T, Y, budget):
            checked += 1
            pl, pr = pile_left(T, s, t), pile_right(T, s, t)
            if isinstance(T, ContinuationMonad):
                for c in all_preds(pl.base):
                    if pl.payload(c) != pr.payload(c):
                        return CommutativityWitness(T, X, Y, False, sd, td, c.index, checked)
            elif not tvalues_equal(pl, pr):
                return CommutativityWitness(T, X, Y, False, sd, td, None, checked)
    return CommutativityWitness(T, X, Y, True, pairs_checked=checked)
