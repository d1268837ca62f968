"""Relations between finite posets and the weakening-closed calculus.

A relation X ⇸ Y is a |X| x |Y| boolean matrix; pairs[x, y] means x R y.
The weakening-closed ones (x' <= x, x R y, y <= y'  implies  x' R y') form
the hom-posets of the relational calculus this engine is built on.  The
weakening flag is always recomputed from the matrix, never trusted.
"""

from __future__ import annotations

import numpy as np

from .poset import MonotoneMap, NotMonotone, bool_mat, image_factorize, pullback


class DomainMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


class NotWeakening(ValueError):
    pass


class NotAMap(ValueError):
    pass


class NotExactFork(ValueError):
    pass


class Relation:
    """An immutable relation between two finite posets."""

    __slots__ = ("dom", "cod", "pairs", "is_weakening")

    def __init__(self, dom, cod, pairs):
        pairs = np.ascontiguousarray(pairs, dtype=bool)
        if pairs.shape != (dom.n, cod.n):
            raise ShapeMismatch(
                f"expected {(dom.n, cod.n)} matrix, got {pairs.shape}"
            )
        pairs.flags.writeable = False
        self.dom = dom
        self.cod = cod
        self.pairs = pairs
        # x' <= x and x R y and y <= y'  =>  x' R y', as one matrix identity
        closed = bool_mat(bool_mat(dom.leq, pairs), cod.leq)
        self.is_weakening = bool((closed == pairs).all())

    @classmethod
    def from_pairs(cls, dom, cod, pair_list):
        mat = np.zeros((dom.n, cod.n), dtype=bool)
        for x, y in pair_list:
            mat[x, y] = True
        return cls(dom, cod, mat)

    @classmethod
    def empty(cls, dom, cod):
        return cls(dom, cod, np.zeros((dom.n, cod.n), dtype=bool))

    @classmethod
    def full(cls, dom, cod):
        return cls(dom, cod, np.ones((dom.n, cod.n), dtype=bool))

    def pair_list(self):
        return [(int(x), int(y)) for x, y in np.argwhere(self.pairs)]

    def weakening_closure(self):
        """Smallest weakening-closed relation containing this one: I_Y R I_X."""
        return Relation(
            self.dom, self.cod, bool_mat(bool_mat(self.dom.leq, self.pairs), self.cod.leq)
        )

    def leq(self, other):
        """Inclusion as subsets of X x Y."""
        _same_shape(self, other)
        return bool((self.pairs <= other.pairs).all())

    def __eq__(self, other):
        return (
            isinstance(other, Relation)
            and self.dom == other.dom
            and self.cod == other.cod
            and (self.pairs == other.pairs).all()
        )

    def __hash__(self):
        return hash((self.dom, self.cod, self.pairs.tobytes()))

    def __repr__(self):
        return f"Relation({self.pair_list()})"


def _same_shape(r, s):
    if r.dom != s.dom or r.cod != s.cod:
        raise DomainMismatch("relations have different dom/cod")


def compose(S, R):
    """S after R: (x, z) iff some y has R(x, y) and S(y, z)."""
    if R.cod != S.dom:
        raise DomainMismatch("cod of inner relation must equal dom of outer")
    return Relation(R.dom, S.cod, bool_mat(R.pairs, S.pairs))


def compose_categorical(S, R):
    """Composite built as the paper does it: pullback of spans, then image.

    A relation X ⇸ Y is spanned by its pair set with the two coordinate
    maps; composing means pulling back over Y and taking the (so, ff)
    image of the outer legs into X x Z.  Used only to cross-check
    ``compose``."""
    if R.cod != S.dom:
        raise DomainMismatch("cod of inner relation must equal dom of outer")
    from .poset import product, subposet

    def span(rel):
        elems = rel.pair_list()
        P, p0, p1 = product(rel.dom, rel.cod)
        idx = [x * rel.cod.n + y for x, y in elems]
        T, incl = subposet(P, idx)
        return T, incl.then(p0), incl.then(p1)

    TR, r0, r1 = span(R)
    TS, s0, s1 = span(S)
    Pb, q0, q1 = pullback(r1, s0)
    outer0 = q0.then(r0)
    outer1 = q1.then(s1)
    XZ, _, _ = product(R.dom, S.cod)
    m = S.cod.n
    into = MonotoneMap(Pb, XZ, [outer0.assign[k] * m + outer1.assign[k] for k in range(Pb.n)])
    e, mono = image_factorize(into)
    mat = np.zeros((R.dom.n, S.cod.n), dtype=bool)
    for k in mono.assign:
        mat[k // m, k % m] = True
    return Relation(R.dom, S.cod, mat)


def opposite(R):
    return Relation(R.cod, R.dom, R.pairs.T)


def meet(R, S):
    _same_shape(R, S)
    return Relation(R.dom, R.cod, R.pairs & S.pairs)


def delta(X):
    """The diagonal; the identity for general relations."""
    return Relation(X, X, np.eye(X.n, dtype=bool))


def identity_I(X):
    """The order relation of X; the identity for weakening-closed relations."""
    return Relation(X, X, X.leq)


def graph(f):
    mat = np.zeros((f.dom.n, f.cod.n), dtype=bool)
    for x, y in enumerate(f.assign):
        mat[x, y] = True
    return Relation(f.dom, f.cod, mat)


def hypergraph(f):
    """f_* = {(x, y) : f(x) <= y}."""
    return Relation(f.dom, f.cod, f.cod.leq[list(f.assign), :])


def hypograph(f):
    """f^* = {(y, x) : y <= f(x)}."""
    return Relation(f.cod, f.dom, f.cod.leq[:, list(f.assign)])


def smallest_violation(big, small):
    """Lexicographically least pair in ``small`` missing from ``big``, or None."""
    diff = small.pairs & ~big.pairs
    hits = np.argwhere(diff)
    if len(hits) == 0:
        return None
    return (int(hits[0][0]), int(hits[0][1]))


class LawReport:
    """Outcome of a relation-algebra law check, with a witness on failure."""

    __slots__ = ("holds", "witnesses")

    def __init__(self, holds, witnesses):
        self.holds = holds
        self.witnesses = witnesses

    def __bool__(self):
        return self.holds

    def __repr__(self):
        return f"LawReport(holds={self.holds}, witnesses={self.witnesses})"


def check_modular_law(P, Q, S):
    """Check ML and its dual on a composable triple.

    ML:  QP ∩ S  ⊆  Q (P ∩ Q°S)
    ML*: QP ∩ S  ⊆  (Q ∩ S P°) P
    with P: X ⇸ Y, Q: Y ⇸ Z, S: X ⇸ Z."""
    if P.cod != Q.dom or P.dom != S.dom or Q.cod != S.cod:
        raise ShapeMismatch("need P: X->Y, Q: Y->Z, S: X->Z")
    lhs = meet(compose(Q, P), S)
    ml_rhs = compose(Q, meet(P, compose(opposite(Q), S)))
    ml_star_rhs = compose(meet(Q, compose(S, opposite(P))), P)
    witnesses = {}
    w = smallest_violation(ml_rhs, lhs)
    if w is not None:
        witnesses["ML"] = w
    w = smallest_violation(ml_star_rhs, lhs)
    if w is not None:
        witnesses["ML*"] = w
    return LawReport(not witnesses, witnesses)


def check_map_distributivity(f, g, R, S):
    """Both restricted distributivity laws.

    MD:  (R ∩ S) f_* = R f_* ∩ S f_*   for f: W -> X
    MD*: g^* (R ∩ S) = g^* R ∩ g^* S   for g: Z -> Y
    with R, S: X ⇸ Y weakening-closed."""
    _same_shape(R, S)
    fs = hypergraph(f)
    gh = hypograph(g)
    md = compose(meet(R, S), fs) == meet(compose(R, fs), compose(S, fs))
    md_star = compose(gh, meet(R, S)) == meet(compose(gh, R), compose(gh, S))
    return md and md_star


def is_adjoint_pair(phi, psi):
    """Whether I_X ⊆ ψφ and φψ ⊆ I_Y in the weakening-closed calculus."""
    if not phi.is_weakening:
        raise NotWeakening("left relation is not weakening-closed")
    if not psi.is_weakening:
        raise NotWeakening("right relation is not weakening-closed")
    if phi.cod != psi.dom or phi.dom != psi.cod:
        raise DomainMismatch("candidate adjoints must be opposed")
    unit = identity_I(phi.dom).leq(compose(psi, phi))
    counit = compose(phi, psi).leq(identity_I(phi.cod))
    return unit and counit


def extract_map(phi, psi):
    """Recover the monotone map f with φ = f_* and ψ = f^* from an adjoint pair."""
    if not is_adjoint_pair(phi, psi):
        raise NotAMap("relations are not an adjoint pair")
    G = meet(phi, opposite(psi))
    assign = []
    for x in range(phi.dom.n):
        ys = np.flatnonzero(G.pairs[x])
        if len(ys) != 1:
            raise NotAMap(f"element {x} relates to {len(ys)} elements, not 1")
        assign.append(int(ys[0]))
    try:
        return MonotoneMap(phi.dom, phi.cod, assign)
    except NotMonotone as exc:  # pragma: no cover - excluded by adjointness
        raise NotAMap(str(exc)) from exc


def kernel_identity_check(f):
    """Whether f^* f_* equals the kernel congruence f/f as relations on X."""
    from .poset import kernel_congruence

    composite = compose(hypograph(f), hypergraph(f))
    K, k0, k1 = kernel_congruence(f)
    mat = np.zeros((f.dom.n, f.dom.n), dtype=bool)
    for c in range(K.n):
        mat[k0.assign[c], k1.assign[c]] = True
    return composite == Relation(f.dom, f.dom, mat)


def exact_fork_identities(p, E):
    """Check the relational identities of an exact fork (p so, E = p/p).

    pE = p_*, Ep° = p^*, p_* E p^* = I_P, p_* p^* = I_P, p°p = E ∩ E°."""
    if E.dom != p.dom or E.cod != p.dom:
        raise NotExactFork("congruence must live on the domain of p")
    if not p.is_surjective():
        raise NotExactFork("p is not surjective")
    expected = compose(hypograph(p), hypergraph(p))
    if E != expected:
        raise NotExactFork("E is not the kernel congruence of p")
    g = graph(p)
    I_P = identity_I(p.cod)
    report = {
        "pE = p_*": compose(g, E) == hypergraph(p),
        "Ep° = p^*": compose(E, opposite(g)) == hypograph(p),
        "p_* E p^* = I_P": compose(hypergraph(p), compose(E, hypograph(p))) == I_P,
        "p_* p^* = I_P": compose(hypergraph(p), hypograph(p)) == I_P,
        "p°p = E ∩ E°": compose(opposite(g), g) == meet(E, opposite(E)),
    }
    return report


def has_right_adjoint(phi):
    """Search for a weakening-closed right adjoint of φ by the candidate formula.

    If a right adjoint exists it is the largest ψ with φψ ⊆ I_Y, namely
    ψ(y, x) ⇔ ∀y'. φ(x, y') ⇒ y ≤ y'; build that and test the unit."""
    if not phi.is_weakening:
        raise NotWeakening("relation is not weakening-closed")
    X, Y = phi.dom, phi.cod
    mat = np.zeros((Y.n, X.n), dtype=bool)
    for y in range(Y.n):
        for x in range(X.n):
            mat[y, x] = all(Y.leq[y, yp] for yp in np.flatnonzero(phi.pairs[x]))
    psi = Relation(Y, X, mat).weakening_closure()
    if is_adjoint_pair(phi, psi):
        return psi
    return None
