"""Objects-with-congruence over finite posets and their calculus.

An object is a pair (X, E) of a finite poset and a congruence E on it
(a weakening-closed relation containing the order and closed under
composition).  Morphisms (X, E) -> (Y, F) are adjoint pairs of
bimodules (R_*, R^*); the identity on (X, E) is (E, E).  Tabulations
give all finite limits, (so, ff)-factorizations, and the exactness
witnesses (split_congruence, canonical_presentation).
"""

from __future__ import annotations

from collections import namedtuple

import numpy as np

from .poset import FinPoset, MapClass, MonotoneMap, bool_mat
from .relation import (
    DomainMismatch,
    NotAMap,
    Relation,
    compose,
    identity_I,
    meet,
    opposite,
)


class NotCongruence(ValueError):
    pass


class BimoduleLawFailed(ValueError):
    pass


class AdjunctionFailed(ValueError):
    pass


class NotQMorphism(ValueError):
    pass


class ConeNotIncluded(ValueError):
    pass


class NotCongruenceOver(ValueError):
    pass


class Congruence:
    """A reflexive-over-order, transitive, weakening-closed relation on X."""

    __slots__ = ("base", "E")

    def __init__(self, base, E):
        E = np.ascontiguousarray(E, dtype=bool)
        if E.shape != (base.n, base.n):
            raise NotCongruence(f"expected {(base.n, base.n)} matrix, got {E.shape}")
        if (base.leq & ~E).any():
            raise NotCongruence("congruence does not contain the order")
        if (bool_mat(E, E) & ~E).any():
            raise NotCongruence("congruence is not transitive")
        E.flags.writeable = False
        self.base = base
        self.E = E

    @classmethod
    def from_pairs(cls, base, pair_list):
        """Smallest congruence containing the order and the given pairs."""
        mat = base.leq.copy()
        for x, y in pair_list:
            mat[x, y] = True
        n = base.n
        for k in range(n):
            mat |= np.outer(mat[:, k], mat[k, :])
        return cls(base, mat)

    def as_relation(self):
        return Relation(self.base, self.base, self.E)

    def __eq__(self, other):
        return (
            isinstance(other, Congruence)
            and self.base == other.base
            and (self.E == other.E).all()
        )

    def __hash__(self):
        return hash((self.base, self.E.tobytes()))


class ExRegObject:
    """A pair (X, E): a finite poset with a congruence on it."""

    __slots__ = ("X", "E")

    def __init__(self, X, E):
        if isinstance(E, Congruence):
            if E.base != X:
                raise NotCongruence("congruence lives on a different poset")
        else:
            E = Congruence(X, E)
        self.X = X
        self.E = E

    def rel(self):
        """The congruence as a relation; the identity morphism's lower leg."""
        return self.E.as_relation()

    def core(self):
        """E ∩ E°, the symmetric part; identity of the ambient allegory."""
        return meet(self.rel(), opposite(self.rel()))

    def __eq__(self, other):
        return isinstance(other, ExRegObject) and self.X == other.X and self.E == other.E

    def __hash__(self):
        return hash((self.X, self.E))

    def __repr__(self):
        return f"ExRegObject(n={self.X.n}, pairs={int(self.E.E.sum())})"


def make_object(X, E):
    return ExRegObject(X, E)


def gamma_object(X):
    """Γ X = (X, I_X)."""
    return ExRegObject(X, X.leq)


class QwMorphism:
    """A bimodule (X, E) -> (Y, F): weakening-closed Φ with F Φ E = Φ.

    These are the relations of the completion; the maps among them (the
    ones with a right adjoint) are the ExRegMorphisms."""

    __slots__ = ("src", "tgt", "rel")

    def __init__(self, src, tgt, rel):
        if rel.dom != src.X or rel.cod != tgt.X:
            raise DomainMismatch("relation does not match src/tgt carriers")
        if not rel.is_weakening:
            raise BimoduleLawFailed("relation is not weakening-closed")
        if compose(tgt.rel(), compose(rel, src.rel())) != rel:
            raise BimoduleLawFailed("F Φ E = Φ fails")
        self.src = src
        self.tgt = tgt
        self.rel = rel

    def then(self, other):
        if other.src != self.tgt:
            raise DomainMismatch("composition mismatch")
        return QwMorphism(self.src, other.tgt, compose(other.rel, self.rel))

    def __eq__(self, other):
        return (
            isinstance(other, QwMorphism)
            and self.src == other.src
            and self.tgt == other.tgt
            and self.rel == other.rel
        )

    def __hash__(self):
        return hash((self.src, self.tgt, self.rel))


class ExRegMorphism:
    """A map (X, E) -> (Y, F): an adjoint pair of bimodules (R_*, R^*)."""

    __slots__ = ("src", "tgt", "lower", "upper")

    def __init__(self, src, tgt, lower, upper):
        self.src = src
        self.tgt = tgt
        self.lower = lower
        self.upper = upper

    def __eq__(self, other):
        return (
            isinstance(other, ExRegMorphism)
            and self.src == other.src
            and self.tgt == other.tgt
            and self.lower == other.lower
            and self.upper == other.upper
        )

    def __hash__(self):
        return hash((self.src, self.tgt, self.lower, self.upper))

    def __repr__(self):
        return f"ExRegMorphism({self.src!r} -> {self.tgt!r})"


def validate_morphism(src, tgt, lower, upper):
    """Check all four morphism laws and return the validated morphism."""
    E = src.rel()
    F = tgt.rel()
    if lower.dom != src.X or lower.cod != tgt.X:
        raise DomainMismatch("lower leg does not match src -> tgt carriers")
    if upper.dom != tgt.X or upper.cod != src.X:
        raise DomainMismatch("upper leg does not match tgt -> src carriers")
    if not lower.is_weakening:
        raise BimoduleLawFailed("R_* is not weakening-closed")
    if not upper.is_weakening:
        raise BimoduleLawFailed("R^* is not weakening-closed")
    if compose(F, compose(lower, E)) != lower:
        raise BimoduleLawFailed("F R_* E = R_* fails")
    if compose(E, compose(upper, F)) != upper:
        raise BimoduleLawFailed("E R^* F = R^* fails")
    if not E.leq(compose(upper, lower)):
        raise AdjunctionFailed("R^* R_* ⊇ E fails")
    if not compose(lower, upper).leq(F):
        raise AdjunctionFailed("R_* R^* ⊆ F fails")
    return ExRegMorphism(src, tgt, lower, upper)


def identity_morphism(obj):
    """1_{(X,E)} = (E, E)."""
    E = obj.rel()
    return ExRegMorphism(obj, obj, E, E)


def gamma_morphism(f):
    """Γ f = (f_*, f^*) between Γ-objects."""
    from .relation import hypergraph, hypograph

    return validate_morphism(
        gamma_object(f.dom), gamma_object(f.cod), hypergraph(f), hypograph(f)
    )


def compose_morphisms(S, R):
    """S after R: lower S_* R_*, upper R^* S^*."""
    if S.src != R.tgt:
        raise DomainMismatch("composition mismatch")
    return ExRegMorphism(
        R.src, S.tgt, compose(S.lower, R.lower), compose(R.upper, S.upper)
    )


def hom_leq(R, S):
    """R <= S in the hom-poset: reverse inclusion of the lower legs."""
    if R.src != S.src or R.tgt != S.tgt:
        raise DomainMismatch("morphisms are not parallel")
    lower_side = S.lower.leq(R.lower)
    upper_side = R.upper.leq(S.upper)
    assert lower_side == upper_side, "hom-order cross-check failed"
    return lower_side


def derive_right_adjoint(src, tgt, lower):
    """The unique R^* making (R_*, R^*) a morphism, if one exists.

    The candidate is the largest relation with R_* R^* ⊆ F, namely
    R^*(y, x) ⇔ ∀y'. R_*(x, y') ⇒ F(y, y'); any right adjoint is
    contained in it, so the adjunction unit holds for some R^* iff it
    holds for the candidate."""
    E = src.rel()
    F = tgt.rel()
    if compose(F, compose(lower, E)) != lower:
        raise BimoduleLawFailed("F R_* E = R_* fails")
    mat = np.zeros((tgt.X.n, src.X.n), dtype=bool)
    for x in range(src.X.n):
        ys = np.flatnonzero(lower.pairs[x])
        if len(ys):
            mat[:, x] = F.pairs[:, ys].all(axis=1)
    upper = Relation(tgt.X, src.X, mat)
    if not E.leq(compose(upper, lower)):
        raise NotAMap("R_* has no right adjoint: unit inclusion fails")
    return upper


def graph_of(R):
    """gr(R_*) = R_* ∩ (R^*)°, the honest graph underneath the adjoint pair."""
    gr = meet(R.lower, opposite(R.upper))
    assert compose(R.tgt.rel(), gr) == R.lower
    assert compose(opposite(gr), R.tgt.rel()) == R.upper
    return gr


def classify(R):
    """ff iff R^* R_* = E; so iff R_* R^* = F; iso iff both."""
    E = R.src.rel()
    F = R.tgt.rel()
    is_ff = compose(R.upper, R.lower) == E
    is_so = compose(R.lower, R.upper) == F
    gr = graph_of(R)
    assert is_so == (compose(gr, opposite(gr)) == R.tgt.core())
    return MapClass(is_ff, is_so)


Tabulation = namedtuple("Tabulation", ["apex", "leg0", "leg1", "phi"])


def _q_morphism_check(phi, src, tgt):
    if phi.dom != src.X or phi.cod != tgt.X:
        raise DomainMismatch("relation does not match the given objects")
    if compose(tgt.core(), compose(phi, src.core())) != phi:
        raise NotQMorphism("(F∩F°) Φ (E∩E°) = Φ fails")


def tabulate(phi, src, tgt):
    """Tabulate a relation Φ: (X,E) ⇸ (Y,F) of the completion.

    The apex carrier is the pair set of Φ in lexicographic order, with
    componentwise order from X and Y; T(z, z') holds when both
    coordinates are congruent, and the legs push coordinates through
    the respective congruences."""
    _q_morphism_check(phi, src, tgt)
    pairs = phi.pair_list()  # already lexicographically sorted
    k = len(pairs)
    X, Y = src.X, tgt.X
    leq = np.zeros((k, k), dtype=bool)
    T = np.zeros((k, k), dtype=bool)
    for a, (x, y) in enumerate(pairs):
        for b, (x2, y2) in enumerate(pairs):
            leq[a, b] = X.leq[x, x2] and Y.leq[y, y2]
            T[a, b] = src.E.E[x, x2] and tgt.E.E[y, y2]
    Z = FinPoset(leq)
    apex = ExRegObject(Z, T)
    E, F = src.rel(), tgt.rel()
    lower0 = Relation(Z, X, E.pairs[[x for x, _ in pairs], :] if k else np.zeros((0, X.n), bool))
    upper0 = Relation(X, Z, E.pairs[:, [x for x, _ in pairs]] if k else np.zeros((X.n, 0), bool))
    lower1 = Relation(Z, Y, F.pairs[[y for _, y in pairs], :] if k else np.zeros((0, Y.n), bool))
    upper1 = Relation(Y, Z, F.pairs[:, [y for _, y in pairs]] if k else np.zeros((Y.n, 0), bool))
    leg0 = validate_morphism(apex, src, lower0, upper0)
    leg1 = validate_morphism(apex, tgt, lower1, upper1)
    tab = Tabulation(apex, leg0, leg1, phi)
    assert compose(graph_of(leg1), opposite(graph_of(leg0))) == phi
    assert meet(
        compose(leg0.upper, leg0.lower), compose(leg1.upper, leg1.lower)
    ) == apex.rel()
    return tab


def tabulation_factor(tab, S0, S1):
    """The unique morphism through a tabulation from a compatible cone.

    H_* = R0^* S0_* ∩ R1^* S1_*, and dually for H^*; requires
    gr(S1) gr(S0)° ⊆ Φ."""
    if S0.src != S1.src or S0.tgt != tab.leg0.tgt or S1.tgt != tab.leg1.tgt:
        raise DomainMismatch("cone legs do not match the tabulation")
    cone_rel = compose(graph_of(S1), opposite(graph_of(S0)))
    if not cone_rel.leq(tab.phi):
        raise ConeNotIncluded("gr(S1) gr(S0)° ⊆ Φ fails")
    lower = meet(
        compose(tab.leg0.upper, S0.lower), compose(tab.leg1.upper, S1.lower)
    )
    upper = meet(
        compose(S0.upper, tab.leg0.lower), compose(S1.upper, tab.leg1.lower)
    )
    H = validate_morphism(S0.src, tab.apex, lower, upper)
    assert compose_morphisms(tab.leg0, H) == S0
    assert compose_morphisms(tab.leg1, H) == S1
    return H


def jointly_order_mono_pair(R, S):
    """Whether (R, S) out of a common source is jointly order-mono.

    Criterion: R^* R_* ∩ S^* S_* = E."""
    if R.src != S.src:
        raise DomainMismatch("legs have different sources")
    return meet(compose(R.upper, R.lower), compose(S.upper, S.lower)) == R.src.rel()


def factorize(R):
    """(so, ff)-factorization by tabulating R R°.

    The two legs of that tabulation coincide and give the ff part; the
    so part is the factorization of the cone (R, R) through it."""
    phi = compose(graph_of(R), opposite(graph_of(R)))
    tab = tabulate(phi, R.tgt, R.tgt)
    assert tab.leg0 == tab.leg1
    M = tab.leg0
    Q = tabulation_factor(tab, R, R)
    assert classify(Q).is_so and classify(M).is_ff
    assert compose_morphisms(M, Q) == R
    return Q, M


def limit(kind, *args):
    """Finite limits, each as a tabulation of the appropriate relation.

    kinds: ``terminal`` (no args), ``product`` / ``pullback`` /
    ``comma`` (two morphisms), ``inserter`` (a parallel pair).  Returns
    the terminal object, or the Tabulation whose apex is the limit."""
    if kind == "terminal":
        if args:
            raise DomainMismatch("terminal takes no arguments")
        return gamma_object(FinPoset.discrete(1))
    if kind == "product":
        A, B = args
        phi = Relation.full(A.X, B.X)
        phi = compose(B.core(), compose(phi, A.core()))
        return tabulate(phi, A, B)
    if kind == "comma":
        R, S = args
        if R.tgt != S.tgt:
            raise DomainMismatch("comma needs a common target")
        return tabulate(compose(S.upper, R.lower), R.src, S.src)
    if kind == "inserter":
        R, S = args
        if R.src != S.src or R.tgt != S.tgt:
            raise DomainMismatch("inserter needs a parallel pair")
        phi = meet(compose(S.upper, R.lower), R.src.core())
        return tabulate(phi, R.src, R.src)
    if kind == "pullback":
        R, S = args
        if R.tgt != S.tgt:
            raise DomainMismatch("pullback needs a common target")
        phi = compose(opposite(graph_of(S)), graph_of(R))
        return tabulate(phi, R.src, S.src)
    raise DomainMismatch(f"unknown limit kind {kind!r}")


def split_congruence(obj, R):
    """Split a congruence R ⊇ E on (X, E) through the object (X, R).

    Returns the quotient map q: (X, E) -> (X, R) (an honest morphism,
    surjective with kernel congruence R) and the backward bimodule
    m: (X, R) -> (X, E); their composite is R as an endo-bimodule of
    (X, E).  The backward leg is in general only a bimodule, not a map."""
    if isinstance(R, Congruence):
        if R.base != obj.X:
            raise NotCongruenceOver("congruence lives on a different carrier")
        R = R.E
    R = np.asarray(R, dtype=bool)
    if (obj.E.E & ~R).any():
        raise NotCongruenceOver("R does not contain E")
    through = ExRegObject(obj.X, R)
    rel = through.rel()
    q = validate_morphism(obj, through, rel, rel)
    m = QwMorphism(through, obj, rel)
    assert compose(m.rel, q.lower) == rel
    assert classify(q).is_so
    assert compose(q.upper, q.lower) == rel  # kernel congruence of q is R
    return q, m


Presentation = namedtuple("Presentation", ["kernel", "e0", "e1", "quotient"])


def canonical_presentation(obj):
    """The exact sequence Γ(E-carrier) ⇉ Γ X ↠ (X, E).

    The kernel carrier is the pair poset of E with componentwise order;
    the quotient is the effective morphism (E, E): Γ X -> (X, E)."""
    X = obj.X
    pairs = obj.rel().pair_list()
    k = len(pairs)
    leq = np.zeros((k, k), dtype=bool)
    for a, (x, y) in enumerate(pairs):
        for b, (x2, y2) in enumerate(pairs):
            leq[a, b] = X.leq[x, x2] and X.leq[y, y2]
    K = FinPoset(leq)
    e0 = MonotoneMap(K, X, [x for x, _ in pairs])
    e1 = MonotoneMap(K, X, [y for _, y in pairs])
    E = obj.rel()
    quotient = validate_morphism(gamma_object(X), obj, E, E)
    return Presentation(gamma_object(K), gamma_morphism(e0), gamma_morphism(e1), quotient)


def lift_functor(functor, value):
    """Apply the induced exact functor to an object or morphism.

    ``functor`` names a regular functor into finite posets: either
    ``"identity"`` on posets or ``"discrete-inclusion"`` from finite
    sets (objects must then have discrete carriers).  Objects (X, E) go
    to the coinserter of the E-pairs, i.e. the poset reflection of E;
    morphisms go to the induced monotone maps between reflections."""
    from .equivalence import quotient_realize, realize_morphism

    if functor not in ("identity", "discrete-inclusion"):
        raise ValueError(f"unknown functor {functor!r}")

    def check_carrier(obj):
        if functor == "discrete-inclusion" and not obj.X.is_discrete():
            raise ValueError("discrete-inclusion requires discrete carriers")

    if isinstance(value, ExRegObject):
        check_carrier(value)
        return quotient_realize(value)[0]
    if isinstance(value, ExRegMorphism):
        check_carrier(value.src)
        check_carrier(value.tgt)
        return realize_morphism(value)
    raise TypeError("expected an ExRegObject or ExRegMorphism")
