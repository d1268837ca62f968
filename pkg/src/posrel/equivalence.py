"""Realization of objects-with-congruence as plain posets, and the
desk-scale equivalence checks built on it.

The quotient functor sends (X, E) to the poset of E-classes and a
morphism to the induced monotone map; in the other direction a monotone
map between realizations determines the adjoint pair by the hypergraph
formula.  The checks in this module make "fully order-faithful and
covering", essential surjectivity, and the Ord(FinSet) comparisons into
finite, decidable statements at a given size bound.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .poset import (
    FinPoset,
    MonotoneMap,
    all_monotone_maps,
    are_isomorphic,
    classify_map,
    find_order_iso,
    poset_reflection,
    transitive_closure,
)
from .relation import Relation, compose, hypergraph, hypograph
from .exreg import (
    Congruence,
    ExRegMorphism,
    ExRegObject,
    gamma_object,
    graph_of,
    hom_leq,
    validate_morphism,
)


def quotient_realize(obj):
    """The poset of E-classes, with the surjection from the carrier.

    Carrier: X/(E∩E°) with smallest-index representatives; order
    [x] <= [y] iff E(x, y).  Returns (poset, projection)."""
    Q, class_of = poset_reflection(obj.E.E)
    return Q, MonotoneMap(obj.X, Q, class_of)


def realize_morphism(R):
    """The monotone map between realizations: r([x]) = [y] for (x,y) in gr."""
    P, p = quotient_realize(R.src)
    Q, q = quotient_realize(R.tgt)
    gr = graph_of(R)
    assign = [None] * P.n
    for x in range(R.src.X.n):
        ys = np.flatnonzero(gr.pairs[x])
        assert len(ys), "graph of a morphism must be total"
        assign[p.assign[x]] = q.assign[int(ys[0])]
    return MonotoneMap(P, Q, assign)


def morphism_from_map(src, tgt, r):
    """The adjoint pair determined by a map between realizations.

    R_*(x, y) iff r([x]) <= [y] and R^*(y, x) iff [y] <= r([x]) in the
    target realization; inverse to realize_morphism."""
    P, p = quotient_realize(src)
    Q, q = quotient_realize(tgt)
    if r.dom != P or r.cod != Q:
        raise ValueError("map does not connect the realizations")
    lower = np.zeros((src.X.n, tgt.X.n), dtype=bool)
    upper = np.zeros((tgt.X.n, src.X.n), dtype=bool)
    for x in range(src.X.n):
        rx = r.assign[p.assign[x]]
        for y in range(tgt.X.n):
            lower[x, y] = Q.leq[rx, q.assign[y]]
            upper[y, x] = Q.leq[q.assign[y], rx]
    return validate_morphism(
        src, tgt, Relation(src.X, tgt.X, lower), Relation(tgt.X, src.X, upper)
    )


def all_morphisms(src, tgt):
    """Every morphism src -> tgt, via the bijection with realization maps."""
    P, _ = quotient_realize(src)
    Q, _ = quotient_realize(tgt)
    return [morphism_from_map(src, tgt, r) for r in all_monotone_maps(P, Q)]


# -- poset catalogue ----------------------------------------------------------


@lru_cache(maxsize=None)
def all_posets_up_to_iso(n):
    """All posets on n elements, one per isomorphism class.

    Enumerates strict upper-triangular edge sets (every finite poset is
    isomorphic to one compatible with 0..n-1 as a linear extension),
    closes transitively, and deduplicates by iso search.  Sizes for
    n = 0..5: 1, 1, 2, 5, 16, 63."""
    if n == 0:
        return (FinPoset.discrete(0),)
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = []
    for bits in range(1 << len(slots)):
        mat = np.eye(n, dtype=bool)
        for k, (i, j) in enumerate(slots):
            if bits >> k & 1:
                mat[i, j] = True
        P = FinPoset(transitive_closure(mat))
        if not any(are_isomorphic(P, Q) for Q in seen):
            seen.append(P)
    return tuple(seen)


def all_posets_up_to(n):
    return [P for k in range(n + 1) for P in all_posets_up_to_iso(k)]


# -- concrete functors and the characterization checks ------------------------


class ConcreteFunctor:
    """A functor from an enumerable source into finite posets.

    ``objects(bound)`` yields source objects; ``object_action`` /
    ``morphism_action`` give the image in FinPos; ``source_homs`` lists
    the source hom-poset as (maps, leq predicate); ``cover`` exhibits a
    surjection from an image object onto a given poset, or None."""

    def __init__(self, name, objects, object_action, morphism_action, source_homs, cover):
        self.name = name
        self.objects = objects
        self.object_action = object_action
        self.morphism_action = morphism_action
        self.source_homs = source_homs
        self.cover = cover


def identity_functor():
    return ConcreteFunctor(
        name="identity",
        objects=all_posets_up_to,
        object_action=lambda P: P,
        morphism_action=lambda f: f,
        source_homs=lambda A, B: all_monotone_maps(A, B),
        cover=lambda Y: (Y, MonotoneMap.identity(Y)),
    )


def discrete_inclusion_functor():
    def objects(bound):
        return [FinPoset.discrete(k) for k in range(bound + 1)]

    def source_homs(A, B):
        # all functions between the carriers
        if A.n == 0:
            return [MonotoneMap(A, B, [])]
        return [
            MonotoneMap(A, B, assign)
            for assign in itertools.product(range(B.n), repeat=A.n)
        ]

    def cover(Y):
        return FinPoset.discrete(Y.n), MonotoneMap(FinPoset.discrete(Y.n), Y, range(Y.n))

    return ConcreteFunctor(
        name="discrete-inclusion",
        objects=objects,
        object_action=lambda X: X,
        morphism_action=lambda f: f,
        source_homs=source_homs,
        cover=cover,
    )


def doubling_functor():
    """X maps to two discrete copies of X; a deliberately non-full fixture."""

    def objects(bound):
        return [FinPoset.discrete(k) for k in range(bound + 1)]

    def object_action(X):
        return FinPoset.discrete(2 * X.n)

    def morphism_action(f):
        return MonotoneMap(
            object_action(f.dom),
            object_action(f.cod),
            [f.assign[k // 2] * 2 + k % 2 for k in range(2 * f.dom.n)],
        )

    def source_homs(A, B):
        if A.n == 0:
            return [MonotoneMap(A, B, [])]
        return [
            MonotoneMap(A, B, assign)
            for assign in itertools.product(range(B.n), repeat=A.n)
        ]

    return ConcreteFunctor(
        name="doubling",
        objects=objects,
        object_action=object_action,
        morphism_action=morphism_action,
        source_homs=source_homs,
        cover=lambda Y: None,
    )


class Report:
    """Line-oriented pass/fail report for the equivalence checks."""

    def __init__(self, title):
        self.title = title
        self.lines = []
        self.failures = 0

    def record(self, label, ok, detail=""):
        self.lines.append((label, bool(ok), detail))
        if not ok:
            self.failures += 1

    @property
    def passed(self):
        return self.failures == 0

    def render(self):
        out = [self.title]
        for label, ok, detail in self.lines:
            status = "ok" if ok else "FAIL"
            out.append(f"  {status:4s} {label}" + (f" ({detail})" if detail else ""))
        out.append(f"  {'pass' if self.passed else 'fail'}: {self.failures} failure(s)")
        return "\n".join(out)


def check_fully_order_faithful(F, bound):
    """hom(A, B) -> hom(FA, FB) must be an order-isomorphism for all pairs."""
    report = Report(f"fully-order-faithful: {F.name}, bound {bound}")
    objs = F.objects(bound)
    for A in objs:
        for B in objs:
            src_maps = F.source_homs(A, B)
            images = [F.morphism_action(f) for f in src_maps]
            tgt_maps = all_monotone_maps(F.object_action(A), F.object_action(B))
            injective = len(set(images)) == len(src_maps)
            surjective = set(images) == set(tgt_maps)
            order_ok = all(
                f.leq(g) == F.morphism_action(f).leq(F.morphism_action(g))
                for f in src_maps
                for g in src_maps
            )
            report.record(
                f"hom({A.n},{B.n})",
                injective and surjective and order_ok,
                f"inj={injective} surj={surjective} order={order_ok}",
            )
    return report


def check_covering(F, bound):
    """Every poset up to the bound must receive a surjection from an image."""
    report = Report(f"covering: {F.name}, bound {bound}")
    for idx, Y in enumerate(all_posets_up_to(bound)):
        got = F.cover(Y)
        if got is None:
            report.record(f"cover of class {idx} (n={Y.n})", False, "no cover supplied")
            continue
        X, e = got
        ok = (
            e.cod == Y
            and e.dom == F.object_action(X)
            and classify_map(e).is_so
        )
        report.record(f"cover of class {idx} (n={Y.n})", ok)
    return report


def verify_characterization(F, bound):
    """Essential surjectivity + hom-poset comparison for the induced functor.

    For the discrete inclusion this is the executable form of the
    equivalence between the completion of finite sets and finite posets."""
    report = Report(f"characterization: {F.name}, bound {bound}")
    catalogue = all_posets_up_to(bound)
    # essential surjectivity: hit every iso class by a constructive witness
    for Y in catalogue:
        if F.name == "identity":
            obj = gamma_object(Y)
        else:
            obj = ExRegObject(FinPoset.discrete(Y.n), Y.leq)
        Q, _ = quotient_realize(obj)
        report.record(f"realizes n={Y.n} class", are_isomorphic(Q, Y))
    # hom-posets of the completion match hom-posets of realizations
    sample_objects = []
    for Y in catalogue:
        if Y.n <= 3:
            if F.name == "identity":
                sample_objects.append(gamma_object(Y))
            else:
                sample_objects.append(ExRegObject(FinPoset.discrete(Y.n), Y.leq))
    for A in sample_objects:
        for B in sample_objects:
            morphisms = all_morphisms(A, B)
            realized = [realize_morphism(R) for R in morphisms]
            PA, _ = quotient_realize(A)
            PB, _ = quotient_realize(B)
            plain = all_monotone_maps(PA, PB)
            bijective = len(set(realized)) == len(morphisms) and set(realized) == set(plain)
            order_ok = all(
                hom_leq(R, S) == realize_morphism(R).leq(realize_morphism(S))
                for R in morphisms
                for S in morphisms
            )
            report.record(
                f"hom ({A.X.n},{B.X.n})-carriers", bijective and order_ok
            )
    return report


# -- the internal category Ord(FinSet) ---------------------------------------


class OrdObject:
    """An internal poset in finite sets: a carrier size and an order matrix."""

    __slots__ = ("size", "leq")

    def __init__(self, size, leq):
        self.size = size
        self.leq = np.ascontiguousarray(leq, dtype=bool)
        # internal order axioms are exactly the poset axioms
        FinPoset(self.leq)
        self.leq.flags.writeable = False

    def to_poset(self):
        return FinPoset(self.leq)

    @classmethod
    def from_poset(cls, P):
        return cls(P.n, P.leq)

    def __eq__(self, other):
        return (
            isinstance(other, OrdObject)
            and self.size == other.size
            and (self.leq == other.leq).all()
        )

    def __hash__(self):
        return hash((self.size, self.leq.tobytes()))


def ord_hom_poset(A, B):
    """Order-preserving internal maps A -> B under pointwise order."""
    maps = []
    for assign in itertools.product(range(B.size), repeat=A.size):
        if all(
            B.leq[assign[i], assign[j]]
            for i in range(A.size)
            for j in range(A.size)
            if A.leq[i, j]
        ):
            maps.append(assign)
    k = len(maps)
    leq = np.zeros((k, k), dtype=bool)
    for a in range(k):
        for b in range(k):
            leq[a, b] = all(B.leq[maps[a][i], maps[b][i]] for i in range(A.size))
    return FinPoset(leq), maps


def ord_product(A, B):
    """Product carrier A x B in finite sets with componentwise internal order."""
    size = A.size * B.size
    leq = np.kron(A.leq, B.leq)
    return OrdObject(size, leq)


def ord_inserter(A, B, f, g):
    """The subobject {x : f(x) <= g(x)} with the restricted order."""
    keep = [x for x in range(A.size) if B.leq[f[x], g[x]]]
    leq = A.leq[np.ix_(keep, keep)] if keep else np.zeros((0, 0), bool)
    return OrdObject(len(keep), leq), keep


def ord_image_factorize(A, B, f):
    """Image subobject of f: A -> B with the order induced from B."""
    image = sorted(set(f))
    leq = B.leq[np.ix_(image, image)] if image else np.zeros((0, 0), bool)
    M = OrdObject(len(image), leq)
    pos = {c: k for k, c in enumerate(image)}
    return M, [pos[f[x]] for x in range(A.size)], image


def commutation_check(bound):
    """Compare the three presentations of the same Pos-category at a bound.

    Witnessed only for the base category of finite sets (which is its
    own ordinary exact completion); the general statement is out of
    scope and noted in the report header."""
    report = Report(
        f"commutation at bound {bound} (base category: finite sets only)"
    )
    catalogue = [P for P in all_posets_up_to(bound) if P.n <= bound]
    # Ord(FinSet) vs FinPos: same objects, same hom-posets
    for A in catalogue:
        for B in catalogue:
            if A.n > 3 or B.n > 3:
                continue
            OA, OB = OrdObject.from_poset(A), OrdObject.from_poset(B)
            H_ord, _ = ord_hom_poset(OA, OB)
            from .poset import hom_poset

            H_pos, _ = hom_poset(A, B)
            report.record(f"ord-hom ({A.n},{B.n})", are_isomorphic(H_ord, H_pos))
    # FinSet_ex/reg vs FinPos: essential surjectivity + homs
    sub = verify_characterization(discrete_inclusion_functor(), min(bound, 3))
    report.record("set-completion vs posets", sub.passed, f"{sub.failures} failure(s)")
    # completion over poset carriers realizes back into FinPos as well
    for A in catalogue:
        if A.n > 3:
            continue
        obj = gamma_object(A)
        Q, _ = quotient_realize(obj)
        report.record(f"poset-carrier realization n={A.n}", are_isomorphic(Q, A))
    return report


def discrete_check(bound):
    """Every poset up to the bound is covered by a discrete object."""
    report = Report(f"enough discrete objects, bound {bound}")
    for Y in all_posets_up_to(bound):
        D = FinPoset.discrete(Y.n)
        e = MonotoneMap(D, Y, range(Y.n))
        cls = classify_map(e)
        ok = cls.is_so and (not Y.is_discrete() or cls.is_iso)
        report.record(f"cover n={Y.n}", ok)
    return report
