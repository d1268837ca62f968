"""Randomized law suites with deterministic seeding and greedy shrinking.

Every lemma the engine implements has a suite here that generates random
instances and checks the law against an independent oracle (usually
brute-force enumeration).  Reports are rendered without timing data so
that identical (suite, trials, seed) invocations are byte-identical;
wall time is tracked separately for the CLI to print on stderr.
"""

from __future__ import annotations

import random
import time

import numpy as np

from . import equivalence, exreg, poset, relation
from .poset import FinPoset, MonotoneMap
from .relation import Relation


class UnknownSuite(KeyError):
    pass


class NotFailing(ValueError):
    pass


DEFAULT_POSET_CAP = 6
DEFAULT_RELATION_CAP = 5


def _rng_for(seed, trial):
    """Per-trial stream: independent of other trials, stable across runs."""
    return random.Random(f"{seed}:{trial}")


# -- generators ---------------------------------------------------------------


def gen_poset(rng, n, p=0.35):
    """Random poset: upper-triangular edges with probability p, then closure."""
    mat = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                mat[i, j] = True
    return FinPoset(poset.transitive_closure(mat))


def gen_sized_poset(rng, cap=DEFAULT_POSET_CAP):
    return gen_poset(rng, rng.randrange(0, cap + 1))


def gen_map(rng, X, Y):
    maps = poset.all_monotone_maps(X, Y)
    if not maps:
        return None
    return maps[rng.randrange(len(maps))]


def gen_relation(rng, X, Y, p=0.4):
    mat = np.zeros((X.n, Y.n), dtype=bool)
    for x in range(X.n):
        for y in range(Y.n):
            if rng.random() < p:
                mat[x, y] = True
    return Relation(X, Y, mat)


def gen_weakening_relation(rng, X, Y, p=0.3):
    return gen_relation(rng, X, Y, p).weakening_closure()


def gen_congruence(rng, X, extra=2):
    pairs = [(rng.randrange(X.n), rng.randrange(X.n)) for _ in range(extra)] if X.n else []
    return exreg.Congruence.from_pairs(X, pairs)


def gen_exreg_object(rng, cap=DEFAULT_POSET_CAP):
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    return exreg.ExRegObject(X, gen_congruence(rng, X))


def gen_exreg_morphism(rng, src=None, tgt=None, cap=4):
    """A valid morphism, either a lifted poset map or a realized random map."""
    if src is None:
        src = gen_exreg_object(rng, cap)
    if tgt is None:
        tgt = gen_exreg_object(rng, cap)
    P, _ = equivalence.quotient_realize(src)
    Q, _ = equivalence.quotient_realize(tgt)
    r = gen_map(rng, P, Q)
    return equivalence.morphism_from_map(src, tgt, r)


# -- shrinking ----------------------------------------------------------------


class Counterexample:
    """A failing value together with the predicate that rejects it.

    ``predicate(value)`` returns True when the value still exhibits the
    failure."""

    __slots__ = ("value", "predicate")

    def __init__(self, value, predicate):
        self.value = value
        self.predicate = predicate

    def __repr__(self):
        return f"Counterexample({self.value!r})"


def _poset_shrinks(P):
    for drop in range(P.n):
        keep = [i for i in range(P.n) if i != drop]
        sub, _ = poset.subposet(P, keep)
        yield sub


def _relation_shrinks(R):
    for x, y in R.pair_list():
        mat = R.pairs.copy()
        mat[x, y] = False
        yield Relation(R.dom, R.cod, mat)


def _shrink_moves(value):
    if isinstance(value, FinPoset):
        yield from _poset_shrinks(value)
    elif isinstance(value, Relation):
        yield from _relation_shrinks(value)
    elif isinstance(value, dict):
        for key in value:
            for smaller in _shrink_moves(value[key]):
                out = dict(value)
                out[key] = smaller
                yield out


def shrink(cx):
    """Greedy fixpoint shrink; raises NotFailing on a non-failing input."""
    if not cx.predicate(cx.value):
        raise NotFailing("input does not exhibit the failure")
    current = cx.value
    while True:
        for candidate in _shrink_moves(current):
            try:
                still_failing = cx.predicate(candidate)
            except Exception:
                still_failing = False
            if still_failing:
                current = candidate
                break
        else:
            return Counterexample(current, cx.predicate)


# -- suite trial bodies -------------------------------------------------------
#
# Each trial returns None on success or a short description of the failure.


def _trial_modular_law(rng, cap):
    X, Y, Z = (gen_poset(rng, rng.randrange(1, cap + 1)) for _ in range(3))
    P = gen_relation(rng, X, Y)
    Q = gen_relation(rng, Y, Z)
    S = gen_relation(rng, X, Z)
    report = relation.check_modular_law(P, Q, S)
    if not report.holds:
        return f"modular law violated at {report.witnesses}"
    return None


def _trial_map_distributivity(rng, cap):
    W, X, Y, Z = (gen_poset(rng, rng.randrange(1, min(cap, 4) + 1)) for _ in range(4))
    f = gen_map(rng, W, X)
    g = gen_map(rng, Z, Y)
    R = gen_weakening_relation(rng, X, Y)
    S = gen_weakening_relation(rng, X, Y)
    if not relation.check_map_distributivity(f, g, R, S):
        return "distributivity over meet failed"
    return None


def _trial_kernel_identity(rng, cap):
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    Y = gen_poset(rng, rng.randrange(1, cap + 1))
    f = gen_map(rng, X, Y)
    if not relation.kernel_identity_check(f):
        return "f^* f_* differs from the kernel congruence"
    return None


def _trial_maps_theorem(rng, cap):
    X = gen_poset(rng, rng.randrange(1, min(cap, 4) + 1))
    Y = gen_poset(rng, rng.randrange(1, min(cap, 4) + 1))
    phi = gen_weakening_relation(rng, X, Y)
    psi = relation.has_right_adjoint(phi)
    hypergraphs = {relation.hypergraph(f) for f in poset.all_monotone_maps(X, Y)}
    if (psi is not None) != (phi in hypergraphs):
        return "adjoint existence disagrees with hypergraph enumeration"
    if psi is not None:
        f = relation.extract_map(phi, psi)
        if relation.hypergraph(f) != phi or relation.hypograph(f) != psi:
            return "extracted map does not round-trip"
    return None


def _trial_r4_redundancy(rng, cap):
    # every so-morphism is effective: the coinserter of its own kernel
    # congruence, up to the canonical comparison isomorphism
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    Y = gen_poset(rng, rng.randrange(1, cap + 1))
    f = gen_map(rng, X, Y)
    e, _ = poset.image_factorize(f)
    K, k0, k1 = poset.kernel_congruence(e)
    q = poset.coinserter(k0, k1)
    if q.cod.n != e.cod.n:
        return "comparison carriers differ"
    h = [None] * q.cod.n
    for x in range(X.n):
        h[q.assign[x]] = e.assign[x]
    try:
        comparison = MonotoneMap(q.cod, e.cod, h)
    except poset.NotMonotone:
        return "comparison map is not monotone"
    if not poset.classify_map(comparison).is_iso or comparison.dom != q.cod:
        return "comparison map is not an isomorphism"
    if any(comparison.assign[q.assign[x]] != e.assign[x] for x in range(X.n)):
        return "comparison triangle does not commute"
    return None


def _trial_pasting(rng, cap):
    cap = min(cap, 4)
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    Y = gen_poset(rng, rng.randrange(1, cap + 1))
    Z = gen_poset(rng, rng.randrange(1, cap + 1))
    Xp = gen_poset(rng, rng.randrange(1, cap + 1))
    f = gen_map(rng, X, Y)
    g = gen_map(rng, Z, Y)
    x = gen_map(rng, Xp, X)
    Q, q0, q1 = poset.comma(f, g)
    P, p0, p1 = poset.pullback(x, q0)
    outer0, outer1 = p0, p1.then(q1)
    if not poset.is_comma_square(x.then(f), g, outer0, outer1):
        return "pullback-then-comma rectangle is not a comma square"
    # converse: the comma of (fx, g) must agree with the pullback
    C, c0, c1 = poset.comma(x.then(f), g)
    pts_comma = {(c0.assign[k], c1.assign[k]) for k in range(C.n)}
    pts_pasted = {(outer0.assign[k], outer1.assign[k]) for k in range(P.n)}
    if pts_comma != pts_pasted:
        return "comma and pasted pullback have different points"
    return None


def _trial_kernel_coinserter_duality(rng, cap):
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    # (1) a coinserter is the coinserter of its kernel congruence
    W = gen_poset(rng, rng.randrange(1, 3))
    f0 = gen_map(rng, W, X)
    f1 = gen_map(rng, W, X)
    q = poset.coinserter(f0, f1)
    K, k0, k1 = poset.kernel_congruence(q)
    q2 = poset.coinserter(k0, k1)
    if [q2.assign[x] for x in range(X.n)] != [q.assign[x] for x in range(X.n)]:
        return "coinserter of kernel congruence differs"
    # (2) a kernel congruence is the kernel congruence of its coinserter
    Y = gen_poset(rng, rng.randrange(1, cap + 1))
    f = gen_map(rng, X, Y)
    R, r0, r1 = poset.kernel_congruence(f)
    p = poset.coinserter(r0, r1)
    ker_f = {(a, b) for a in range(X.n) for b in range(X.n) if Y.leq[f.assign[a], f.assign[b]]}
    ker_p = {(a, b) for a in range(X.n) for b in range(X.n) if p.cod.leq[p.assign[a], p.assign[b]]}
    if ker_f != ker_p:
        return "kernel congruence not recovered from the coinserter"
    return None


def _trial_coinserters_are_so(rng, cap):
    W = gen_poset(rng, rng.randrange(1, 3))
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    q = poset.coinserter(gen_map(rng, W, X), gen_map(rng, W, X))
    if not poset.classify_map(q).is_so:
        return "coinserter is not an so-morphism"
    return None


def _trial_effective_splitting(rng, cap):
    # every congruence here is effective: it splits through its quotient
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    E = gen_congruence(rng, X)
    obj = exreg.ExRegObject(X, E)
    _, p = equivalence.quotient_realize(obj)
    unit = relation.compose(relation.hypograph(p), relation.hypergraph(p))
    counit = relation.compose(relation.hypergraph(p), relation.hypograph(p))
    if unit != E.as_relation():
        return "p^* p_* differs from the congruence"
    if counit != relation.identity_I(p.cod):
        return "p_* p^* differs from the identity on the quotient"
    return None


def _trial_quotient_bijection(rng, cap):
    A = gen_exreg_object(rng, min(cap, 4))
    B = gen_exreg_object(rng, min(cap, 4))
    R = gen_exreg_morphism(rng, A, B)
    r = equivalence.realize_morphism(R)
    if equivalence.morphism_from_map(A, B, r) != R:
        return "morphism-to-map round trip failed"
    S = gen_exreg_morphism(rng, A, B)
    if exreg.hom_leq(R, S) != equivalence.realize_morphism(R).leq(
        equivalence.realize_morphism(S)
    ):
        return "hom order not preserved by realization"
    return None


def _trial_tabulation(rng, cap):
    A = gen_exreg_object(rng, 3)
    B = gen_exreg_object(rng, 3)
    raw = gen_relation(rng, A.X, B.X)
    phi = relation.compose(B.core(), relation.compose(raw, A.core()))
    tab = exreg.tabulate(phi, A, B)
    W = gen_exreg_object(rng, 3)
    for S0 in equivalence.all_morphisms(W, A):
        for S1 in equivalence.all_morphisms(W, B):
            cone = relation.compose(
                exreg.graph_of(S1), relation.opposite(exreg.graph_of(S0))
            )
            if not cone.leq(phi):
                continue
            H = exreg.tabulation_factor(tab, S0, S1)
            if exreg.compose_morphisms(tab.leg0, H) != S0:
                return "factorization does not recover the first leg"
            if exreg.compose_morphisms(tab.leg1, H) != S1:
                return "factorization does not recover the second leg"
    return None


def _trial_jointly_mono(rng, cap):
    A = gen_exreg_object(rng, 3)
    B = gen_exreg_object(rng, 3)
    C = gen_exreg_object(rng, 3)
    R = gen_exreg_morphism(rng, A, B)
    S = gen_exreg_morphism(rng, A, C)
    criterion = exreg.jointly_order_mono_pair(R, S)
    rR, rS = equivalence.realize_morphism(R), equivalence.realize_morphism(S)
    oracle = poset.jointly_order_mono(rR, rS)
    if criterion != oracle:
        return "criterion disagrees with the realized joint embedding test"
    return None


def _trial_classification(rng, cap):
    A = gen_exreg_object(rng, min(cap, 4))
    B = gen_exreg_object(rng, min(cap, 4))
    R = gen_exreg_morphism(rng, A, B)
    cls = exreg.classify(R)
    oracle = poset.classify_map(equivalence.realize_morphism(R))
    if (cls.is_ff, cls.is_so) != (oracle.is_ff, oracle.is_so):
        return "classification disagrees with the realized map"
    return None


def _trial_exreg_limits(rng, cap):
    A = gen_exreg_object(rng, 3)
    B = gen_exreg_object(rng, 3)
    C = gen_exreg_object(rng, 3)
    R = gen_exreg_morphism(rng, A, C)
    S = gen_exreg_morphism(rng, B, C)
    for kind, pos_ctor in (("pullback", poset.pullback), ("comma", poset.comma)):
        tab = exreg.limit(kind, R, S)
        rR, rS = equivalence.realize_morphism(R), equivalence.realize_morphism(S)
        P, _, _ = pos_ctor(rR, rS)
        Q, _ = equivalence.quotient_realize(tab.apex)
        if not poset.are_isomorphic(Q, P):
            return f"{kind} apex does not realize to the poset construction"
    prod = exreg.limit("product", A, B)
    QA, _ = equivalence.quotient_realize(A)
    QB, _ = equivalence.quotient_realize(B)
    P, _, _ = poset.product(QA, QB)
    Q, _ = equivalence.quotient_realize(prod.apex)
    if not poset.are_isomorphic(Q, P):
        return "product apex does not realize to the product of realizations"
    return None


def _trial_exreg_factorization(rng, cap):
    A = gen_exreg_object(rng, min(cap, 4))
    B = gen_exreg_object(rng, min(cap, 4))
    R = gen_exreg_morphism(rng, A, B)
    Q, M = exreg.factorize(R)
    if not exreg.classify(Q).is_so:
        return "first factor is not so"
    if not exreg.classify(M).is_ff:
        return "second factor is not ff"
    if exreg.compose_morphisms(M, Q) != R:
        return "factorization does not compose to the original"
    return None


def _trial_so_stability(rng, cap):
    A = gen_exreg_object(rng, 3)
    B = gen_exreg_object(rng, 3)
    C = gen_exreg_object(rng, 3)
    R = gen_exreg_morphism(rng, A, C)
    S = gen_exreg_morphism(rng, B, C)
    if not exreg.classify(R).is_so:
        Q, _ = exreg.factorize(R)
        R, C = Q, Q.tgt
        S = gen_exreg_morphism(rng, B, C)
    tab = exreg.limit("pullback", R, S)
    # the projection over the other object must be so again
    if not exreg.classify(tab.leg1).is_so:
        return "pullback of an so-morphism is not so"
    return None


def _trial_exactness(rng, cap):
    obj = gen_exreg_object(rng, min(cap, 4))
    R = exreg.Congruence.from_pairs(
        obj.X,
        obj.rel().pair_list()
        + [(rng.randrange(obj.X.n), rng.randrange(obj.X.n)) for _ in range(2)],
    )
    q, m = exreg.split_congruence(obj, R)
    if relation.compose(m.rel, q.lower) != R.as_relation():
        return "legs do not compose to the congruence"
    if relation.compose(q.upper, q.lower) != R.as_relation():
        return "kernel congruence of the quotient leg is not the congruence"
    if not exreg.classify(q).is_so:
        return "quotient leg is not so"
    return None


def _trial_presentation(rng, cap):
    obj = gen_exreg_object(rng, min(cap, 4))
    pres = exreg.canonical_presentation(obj)
    if not exreg.classify(pres.quotient).is_so:
        return "presentation quotient is not so"
    tab = exreg.limit("comma", pres.quotient, pres.quotient)
    QK, _ = equivalence.quotient_realize(pres.kernel)
    QT, _ = equivalence.quotient_realize(tab.apex)
    if not poset.are_isomorphic(QK, QT):
        return "kernel is not the comma of the quotient with itself"
    return None


def _trial_universal_property(rng, cap):
    A = gen_exreg_object(rng, min(cap, 4))
    B = gen_exreg_object(rng, min(cap, 4))
    C = gen_exreg_object(rng, min(cap, 4))
    R = gen_exreg_morphism(rng, A, B)
    S = gen_exreg_morphism(rng, B, C)
    lhs = exreg.lift_functor("identity", exreg.compose_morphisms(S, R))
    rhs = exreg.lift_functor("identity", R).then(exreg.lift_functor("identity", S))
    if lhs != rhs:
        return "induced functor is not functorial"
    X = gen_poset(rng, rng.randrange(1, cap + 1))
    if not poset.are_isomorphic(
        exreg.lift_functor("identity", exreg.gamma_object(X)), X
    ):
        return "induced functor does not restrict to the embedding"
    return None


SUITES = {
    "modular-law": ("modular law and its dual hold for all relations", _trial_modular_law),
    "map-distributivity": (
        "meets distribute over pre/post-composition with map legs",
        _trial_map_distributivity,
    ),
    "kernel-identity": (
        "hypograph-then-hypergraph equals the kernel congruence",
        _trial_kernel_identity,
    ),
    "maps-theorem": (
        "a weakening relation has a right adjoint iff it is a hypergraph",
        _trial_maps_theorem,
    ),
    "r4-redundancy": (
        "every so-morphism is the coinserter of its kernel congruence",
        _trial_r4_redundancy,
    ),
    "pasting": (
        "pasting a pullback onto a comma square yields a comma square",
        _trial_pasting,
    ),
    "kernel-coinserter-duality": (
        "kernel congruences and coinserters determine each other",
        _trial_kernel_coinserter_duality,
    ),
    "coinserters-are-so": ("every coinserter is an so-morphism", _trial_coinserters_are_so),
    "effective-splitting": (
        "every congruence splits through its quotient",
        _trial_effective_splitting,
    ),
    "quotient-bijection": (
        "morphisms correspond bijectively to maps of realizations",
        _trial_quotient_bijection,
    ),
    "tabulation": ("tabulations factor every compatible cone uniquely", _trial_tabulation),
    "jointly-mono": (
        "the joint-embedding criterion matches the enumeration test",
        _trial_jointly_mono,
    ),
    "classification": (
        "ff/so classification matches the realized maps",
        _trial_classification,
    ),
    "exreg-limits": (
        "finite limits realize to the corresponding poset limits",
        _trial_exreg_limits,
    ),
    "exreg-factorization": ("every morphism factors as so followed by ff", _trial_exreg_factorization),
    "so-stability": ("so-morphisms are stable under pullback", _trial_so_stability),
    "exactness": ("congruences over an object split effectively", _trial_exactness),
    "presentation": (
        "every object has its canonical exact presentation",
        _trial_presentation,
    ),
    "universal-property": (
        "the induced exact functor is functorial and restricts correctly",
        _trial_universal_property,
    ),
}


class SuiteReport:
    """Outcome of one suite run; renders identically for identical inputs."""

    __slots__ = ("name", "trials", "seed", "failures", "wall_time")

    def __init__(self, name, trials, seed, failures, wall_time):
        self.name = name
        self.trials = trials
        self.seed = seed
        self.failures = failures
        self.wall_time = wall_time

    @property
    def passed(self):
        return not self.failures

    def render(self):
        lines = [
            f"suite {self.name}: {self.trials} trials, seed {self.seed}: "
            + ("ok" if self.passed else f"{len(self.failures)} FAILURES")
        ]
        for trial, message, shrunk in self.failures:
            lines.append(f"  trial {trial}: {message}")
            if shrunk is not None:
                lines.append(f"    shrunk: {shrunk}")
        return "\n".join(lines)


def run_suite(name, trials, seed, cap=DEFAULT_RELATION_CAP):
    """Run one registered suite; failures carry their reproducing sub-seed."""
    if name not in SUITES:
        raise UnknownSuite(name)
    _, trial_fn = SUITES[name]
    failures = []
    start = time.perf_counter()
    for t in range(trials):
        rng = _rng_for(seed, t)
        try:
            message = trial_fn(rng, cap)
        except Exception as exc:  # a law check crashing is a failure too
            message = f"{type(exc).__name__}: {exc}"
        if message is not None:
            shrunk = _shrink_failure(name, seed, t, cap)
            failures.append((t, f"[seed {seed}:{t}] {message}", shrunk))
    wall = time.perf_counter() - start
    return SuiteReport(name, trials, seed, failures, wall)


def _shrink_failure(name, seed, trial, cap):
    """Best-effort shrink by replaying the trial at smaller size caps."""
    _, trial_fn = SUITES[name]
    best = None
    for smaller in range(1, cap):
        rng = _rng_for(seed, trial)
        try:
            message = trial_fn(rng, smaller)
        except Exception as exc:
            message = f"{type(exc).__name__}: {exc}"
        if message is not None:
            best = f"cap {smaller}: {message}"
            break
    return best


def run_all(trials, seed, cap=DEFAULT_RELATION_CAP, names=None):
    return [run_suite(n, trials, seed, cap) for n in sorted(names or SUITES)]
