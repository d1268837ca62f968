"""Finite posets, monotone maps, and their finite weighted (co)limits.

Conventions used throughout:

  - Elements of a poset of size n are the indices 0..n-1; ``labels`` is
    cosmetic only and never affects equality or any construction.
  - ``leq`` is an n x n boolean matrix with leq[i, j] iff i <= j.
  - Limit carriers over pairs use lexicographic order of the index pairs,
    so repeated runs produce bit-identical objects.
  - The empty poset is a legal value everywhere.
"""

from __future__ import annotations

import itertools

import numpy as np


class AntisymmetryViolation(ValueError):
    """Raised when a generating relation closes up into a 2-cycle."""


class NotMonotone(ValueError):
    pass


def bool_mat(a, b):
    """Boolean matrix product: out[i, k] iff exists j with a[i, j] and b[j, k]."""
    return (a.astype(np.uint8) @ b.astype(np.uint8)) > 0


def transitive_closure(mat):
    """Reflexive-transitive closure of a boolean square matrix (Warshall)."""
    n = mat.shape[0]
    out = mat.copy()
    out[np.diag_indices(n)] = True
    for k in range(n):
        out |= np.outer(out[:, k], out[k, :])
    return out


def _freeze(mat):
    mat = np.ascontiguousarray(mat, dtype=bool)
    mat.flags.writeable = False
    return mat


class FinPoset:
    """An immutable finite poset given by its full order matrix."""

    __slots__ = ("n", "leq", "labels", "_hash")

    def __init__(self, leq, labels=None):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise ValueError(f"order matrix must be square, got {leq.shape}")
        if not leq[np.diag_indices(n)].all():
            raise ValueError("order matrix is not reflexive")
        sym = leq & leq.T
        sym[np.diag_indices(n)] = False
        if sym.any():
            i, j = map(int, np.argwhere(sym)[0])
            raise AntisymmetryViolation(f"elements {i} and {j} form a 2-cycle")
        if (bool_mat(leq, leq) & ~leq).any():
            raise ValueError("order matrix is not transitive")
        self.n = n
        self.leq = _freeze(leq)
        self.labels = tuple(labels) if labels is not None else None
        self._hash = hash((n, self.leq.tobytes()))

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_covers(cls, n, pairs, labels=None):
        """Poset generated by ``pairs`` (i <= j), closed reflexively/transitively."""
        mat = np.zeros((n, n), dtype=bool)
        for i, j in pairs:
            mat[i, j] = True
        return cls(transitive_closure(mat), labels=labels)

    @classmethod
    def discrete(cls, n, labels=None):
        return cls(np.eye(n, dtype=bool), labels=labels)

    @classmethod
    def chain(cls, n, labels=None):
        return cls(np.triu(np.ones((n, n), dtype=bool)), labels=labels)

    # -- basic queries --------------------------------------------------------

    def is_discrete(self):
        return bool((self.leq == np.eye(self.n, dtype=bool)).all())

    def label(self, i):
        return self.labels[i] if self.labels is not None else str(i)

    def covers(self):
        """Cover pairs (i, j): i < j with nothing strictly between."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        red = lt & ~bool_mat(lt, lt)
        return [(int(i), int(j)) for i, j in np.argwhere(red)]

    def __eq__(self, other):
        return (
            isinstance(other, FinPoset)
            and self.n == other.n
            and (self.leq == other.leq).all()
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FinPoset(n={self.n}, covers={self.covers()})"


def make_poset(elements, cover_pairs):
    """Build a poset from labels and generating pairs given by index or label."""
    labels = [str(e) for e in elements]
    index = {lab: i for i, lab in enumerate(labels)}
    pairs = []
    for a, b in cover_pairs:
        i = a if isinstance(a, int) else index[str(a)]
        j = b if isinstance(b, int) else index[str(b)]
        pairs.append((i, j))
    return FinPoset.from_covers(len(labels), pairs, labels=labels)


class MonotoneMap:
    """An order-preserving function between finite posets."""

    __slots__ = ("dom", "cod", "assign")

    def __init__(self, dom, cod, assign):
        assign = tuple(int(a) for a in assign)
        if len(assign) != dom.n:
            raise ValueError("assignment length does not match domain size")
        for a in assign:
            if not 0 <= a < cod.n:
                raise ValueError(f"image index {a} out of range")
        for i, j in np.argwhere(dom.leq):
            if not cod.leq[assign[i], assign[j]]:
                raise NotMonotone(
                    f"{i} <= {j} in domain but {assign[i]} !<= {assign[j]} in codomain"
                )
        self.dom = dom
        self.cod = cod
        self.assign = assign

    @classmethod
    def identity(cls, poset):
        return cls(poset, poset, range(poset.n))

    @classmethod
    def constant(cls, dom, cod, value):
        return cls(dom, cod, [value] * dom.n)

    def __call__(self, i):
        return self.assign[i]

    def then(self, g):
        """g o self."""
        if g.dom != self.cod:
            raise ValueError("composition mismatch")
        return MonotoneMap(self.dom, g.cod, [g.assign[a] for a in self.assign])

    def is_surjective(self):
        return set(self.assign) == set(range(self.cod.n))

    def leq(self, other):
        """Pointwise hom-poset order self <= other."""
        if self.dom != other.dom or self.cod != other.cod:
            raise ValueError("maps are not parallel")
        return all(self.cod.leq[a, b] for a, b in zip(self.assign, other.assign))

    def __eq__(self, other):
        return (
            isinstance(other, MonotoneMap)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.assign == other.assign
        )

    def __hash__(self):
        return hash((self.dom, self.cod, self.assign))

    def __repr__(self):
        return f"MonotoneMap({list(self.assign)})"


def compose(g, f):
    """g o f as a function application order."""
    return f.then(g)


class MapClass:
    """Classification flags of a monotone map."""

    __slots__ = ("is_ff", "is_so", "is_iso")

    def __init__(self, is_ff, is_so):
        self.is_ff = bool(is_ff)
        self.is_so = bool(is_so)
        self.is_iso = self.is_ff and self.is_so

    def __repr__(self):
        return f"MapClass(ff={self.is_ff}, so={self.is_so}, iso={self.is_iso})"


def classify_map(f):
    """ff iff order-embedding (reflects order, hence injective); so iff surjective."""
    is_ff = True
    for i in range(f.dom.n):
        for j in range(f.dom.n):
            if f.cod.leq[f.assign[i], f.assign[j]] and not f.dom.leq[i, j]:
                is_ff = False
                break
        if not is_ff:
            break
    return MapClass(is_ff, f.is_surjective())


# -- enumeration and isomorphism ---------------------------------------------


def linear_extension(poset):
    """A topological order of the elements (stable: smallest index first)."""
    remaining = set(range(poset.n))
    out = []
    while remaining:
        for i in sorted(remaining):
            if all(j == i or j not in remaining or not poset.leq[j, i] for j in range(poset.n)):
                out.append(i)
                remaining.remove(i)
                break
        else:  # pragma: no cover - impossible for a valid poset
            raise RuntimeError("cycle in order matrix")
    return out


def all_monotone_maps(X, Y):
    """All monotone maps X -> Y, lexicographic in the assignment tuple."""
    if X.n == 0:
        return [MonotoneMap(X, Y, [])]
    order = linear_extension(X)
    results = []
    assign = [None] * X.n

    def backtrack(k):
        if k == len(order):
            results.append(MonotoneMap(X, Y, assign))
            return
        i = order[k]
        for c in range(Y.n):
            ok = True
            for j in order[:k]:
                if X.leq[j, i] and not Y.leq[assign[j], c]:
                    ok = False
                    break
                if X.leq[i, j] and not Y.leq[c, assign[j]]:
                    ok = False
                    break
            if ok:
                assign[i] = c
                backtrack(k + 1)
                assign[i] = None

    backtrack(0)
    results.sort(key=lambda m: m.assign)
    return results


def _iso_signature(poset):
    down = poset.leq.sum(axis=0)
    up = poset.leq.sum(axis=1)
    return sorted((int(d), int(u)) for d, u in zip(down, up))


def find_order_iso(X, Y):
    """An order-isomorphism X -> Y as a MonotoneMap, or None.

    Backtracking on (down-set size, up-set size) signatures; adequate for the
    small carriers this engine works with.
    """
    if X.n != Y.n:
        return None
    if _iso_signature(X) != _iso_signature(Y):
        return None
    sig_y = {}
    down_y = Y.leq.sum(axis=0)
    up_y = Y.leq.sum(axis=1)
    for j in range(Y.n):
        sig_y.setdefault((int(down_y[j]), int(up_y[j])), []).append(j)
    down_x = X.leq.sum(axis=0)
    up_x = X.leq.sum(axis=1)

    assign = [None] * X.n
    used = [False] * Y.n

    def backtrack(i):
        if i == X.n:
            return True
        key = (int(down_x[i]), int(up_x[i]))
        for j in sig_y.get(key, []):
            if used[j]:
                continue
            ok = True
            for k in range(i):
                if X.leq[k, i] != Y.leq[assign[k], j] or X.leq[i, k] != Y.leq[j, assign[k]]:
                    ok = False
                    break
            if ok:
                assign[i] = j
                used[j] = True
                if backtrack(i + 1):
                    return True
                used[j] = False
                assign[i] = None
        return False

    if backtrack(0):
        return MonotoneMap(X, Y, assign)
    return None


def are_isomorphic(X, Y):
    return find_order_iso(X, Y) is not None


# -- limits ------------------------------------------------------------------


def subposet(X, elements):
    """The induced subposet on a sorted element list, with its ff inclusion."""
    elements = sorted(elements)
    sub = FinPoset(X.leq[np.ix_(elements, elements)] if elements else np.zeros((0, 0), bool))
    return sub, MonotoneMap(sub, X, elements)


def product(X, Y):
    """Cartesian product with componentwise order; carrier is lexicographic pairs."""
    n, m = X.n, Y.n
    leq = np.kron(X.leq, Y.leq)
    P = FinPoset(leq)
    p0 = MonotoneMap(P, X, [k // m for k in range(n * m)]) if m else MonotoneMap(P, X, [])
    p1 = MonotoneMap(P, Y, [k % m for k in range(n * m)]) if m else MonotoneMap(P, Y, [])
    return P, p0, p1


def pair_into_product(P, p0, p1, u0, u1):
    """The unique map <u0, u1> into a componentwise product carrier."""
    m = p1.cod.n
    return MonotoneMap(u0.dom, P, [u0.assign[z] * m + u1.assign[z] for z in range(u0.dom.n)])


def terminal():
    return FinPoset.discrete(1)


def inserter(f, g):
    """The ff inclusion of the elements where f(x) <= g(x)."""
    if f.dom != g.dom or f.cod != g.cod:
        raise ValueError("inserter needs a parallel pair")
    keep = [x for x in range(f.dom.n) if f.cod.leq[f.assign[x], g.assign[x]]]
    _, incl = subposet(f.dom, keep)
    return incl


def equalizer(f, g):
    """Direct equalizer: the induced subposet where f(x) = g(x)."""
    keep = [x for x in range(f.dom.n) if f.assign[x] == g.assign[x]]
    _, incl = subposet(f.dom, keep)
    return incl


def equalizer_via_inserters(f, g):
    """Equalizer built as a double inserter; agrees with ``equalizer`` up to iso."""
    m = inserter(f, g)
    n = inserter(m.then(g), m.then(f))
    return n.then(m)


def power(X, P):
    """The power poset of monotone maps P -> X under pointwise order."""
    maps = all_monotone_maps(P, X)
    k = len(maps)
    leq = np.zeros((k, k), dtype=bool)
    for a in range(k):
        for b in range(k):
            leq[a, b] = maps[a].leq(maps[b])
    return FinPoset(leq), maps


def power_via_inserters(X, P):
    """Power built from the ordinary power by inserting pi_a <= pi_b per a <= b.

    The carrier is cut out of the |P|-fold product of X by one inserter per
    related pair, i.e. the tuples t with t[a] <= t[b] whenever a <= b.
    """
    if P.n == 0:
        return terminal()
    cur = X
    projections = [MonotoneMap.identity(X)]
    for _ in range(P.n - 1):
        new, p0, p1 = product(cur, X)
        projections = [p0.then(pr) for pr in projections]
        projections.append(p1)
        cur = new
    incl = MonotoneMap.identity(cur)
    for a in range(P.n):
        for b in range(P.n):
            if a != b and P.leq[a, b]:
                e = inserter(incl.then(projections[a]), incl.then(projections[b]))
                incl = e.then(incl)
    return incl.dom


def comma(f, g):
    """Comma object f/g = {(x, y) : f(x) <= g(y)} with its two projections."""
    if f.cod != g.cod:
        raise ValueError("comma needs a common codomain")
    pairs = [
        (x, y)
        for x in range(f.dom.n)
        for y in range(g.dom.n)
        if f.cod.leq[f.assign[x], g.assign[y]]
    ]
    k = len(pairs)
    leq = np.zeros((k, k), dtype=bool)
    for a, (x, y) in enumerate(pairs):
        for b, (x2, y2) in enumerate(pairs):
            leq[a, b] = f.dom.leq[x, x2] and g.dom.leq[y, y2]
    C = FinPoset(leq)
    c0 = MonotoneMap(C, f.dom, [x for x, _ in pairs])
    c1 = MonotoneMap(C, g.dom, [y for _, y in pairs])
    return C, c0, c1


def kernel_congruence(f):
    """The comma f/f."""
    return comma(f, f)


def pullback(f, g):
    """Pullback {(x, y) : f(x) = g(y)} with induced order and projections."""
    if f.cod != g.cod:
        raise ValueError("pullback needs a common codomain")
    pairs = [
        (x, y)
        for x in range(f.dom.n)
        for y in range(g.dom.n)
        if f.assign[x] == g.assign[y]
    ]
    k = len(pairs)
    leq = np.zeros((k, k), dtype=bool)
    for a, (x, y) in enumerate(pairs):
        for b, (x2, y2) in enumerate(pairs):
            leq[a, b] = f.dom.leq[x, x2] and g.dom.leq[y, y2]
    P = FinPoset(leq)
    p0 = MonotoneMap(P, f.dom, [x for x, _ in pairs])
    p1 = MonotoneMap(P, g.dom, [y for _, y in pairs])
    return P, p0, p1


def image_factorize(f):
    """Factor f as a surjection onto its image followed by an order-embedding.

    The image carries the order induced from the codomain, so the embedding
    is ff while the surjection need not be (order can be gained)."""
    image = sorted(set(f.assign))
    M, m = subposet(f.cod, image)
    pos = {c: k for k, c in enumerate(image)}
    e = MonotoneMap(f.dom, M, [pos[a] for a in f.assign])
    return e, m


def poset_reflection(pre):
    """Collapse a preorder matrix to a poset.

    Returns (poset, class_of) where class_of[i] is the index of i's class;
    classes are numbered by their smallest member."""
    pre = np.asarray(pre, dtype=bool)
    n = pre.shape[0]
    both = pre & pre.T
    reps = []
    class_of = [None] * n
    for i in range(n):
        for r_idx, r in enumerate(reps):
            if both[i, r]:
                class_of[i] = r_idx
                break
        else:
            class_of[i] = len(reps)
            reps.append(i)
    k = len(reps)
    leq = np.zeros((k, k), dtype=bool)
    for a, ra in enumerate(reps):
        for b, rb in enumerate(reps):
            leq[a, b] = pre[ra, rb]
    return FinPoset(leq), class_of


def coinserter(f0, f1):
    """Quotient of the codomain by the inequalities f0(c) <= f1(c).

    Returns the surjective quotient map; its codomain is the poset reflection
    of the smallest compatible preorder."""
    if f0.dom != f1.dom or f0.cod != f1.cod:
        raise ValueError("coinserter needs a parallel pair")
    X = f0.cod
    pre = X.leq.copy()
    for c in range(f0.dom.n):
        pre[f0.assign[c], f1.assign[c]] = True
    pre = transitive_closure(pre)
    Q, class_of = poset_reflection(pre)
    return MonotoneMap(X, Q, class_of)


def hom_poset(X, Y):
    """The poset of all monotone maps X -> Y with pointwise order."""
    return power(Y, X)


# -- universal-property checks -----------------------------------------------
#
# In Pos a cone condition quantified over all stages holds iff it holds on
# elements, so the checks below are element-level and exact.  A slower
# cone-enumeration variant is kept for cross-validation in the test-suite.


def jointly_order_mono(c0, c1):
    """Whether (c0, c1) is an order-embedding into the product order."""
    C = c0.dom
    for a in range(C.n):
        for b in range(C.n):
            if (
                c0.cod.leq[c0.assign[a], c0.assign[b]]
                and c1.cod.leq[c1.assign[a], c1.assign[b]]
                and not C.leq[a, b]
            ):
                return False
    return True


def is_comma_square(f, g, c0, c1):
    """Whether (c0, c1) out of a common domain is the comma of (f, g)."""
    C = c0.dom
    if C != c1.dom:
        return False
    seen = set()
    for c in range(C.n):
        x, y = c0.assign[c], c1.assign[c]
        if not f.cod.leq[f.assign[x], g.assign[y]]:
            return False
        seen.add((x, y))
    want = {
        (x, y)
        for x in range(f.dom.n)
        for y in range(g.dom.n)
        if f.cod.leq[f.assign[x], g.assign[y]]
    }
    return seen == want and jointly_order_mono(c0, c1)


def is_pullback_square(f, g, p0, p1):
    P = p0.dom
    if P != p1.dom:
        return False
    seen = set()
    for c in range(P.n):
        x, y = p0.assign[c], p1.assign[c]
        if f.assign[x] != g.assign[y]:
            return False
        seen.add((x, y))
    want = {
        (x, y)
        for x in range(f.dom.n)
        for y in range(g.dom.n)
        if f.assign[x] == g.assign[y]
    }
    return seen == want and jointly_order_mono(p0, p1)


def is_comma_square_by_cones(f, g, c0, c1, stage_posets):
    """Cone-enumeration comma check, for cross-validating the fast path."""
    C = c0.dom
    for W in stage_posets:
        maps_x = all_monotone_maps(W, f.dom)
        maps_y = all_monotone_maps(W, g.dom)
        maps_c = all_monotone_maps(W, C)
        for u0 in maps_x:
            for u1 in maps_y:
                if not u0.then(f).leq(u1.then(g)):
                    continue
                hits = [w for w in maps_c if w.then(c0) == u0 and w.then(c1) == u1]
                if len(hits) != 1:
                    return False
        for u in maps_c:
            for v in maps_c:
                if u.then(c0).leq(v.then(c0)) and u.then(c1).leq(v.then(c1)):
                    if not u.leq(v):
                        return False
    return True


def is_coinserter(f0, f1, q, test_codomains):
    """Coinserter check by enumerating all factorizations through q.

    For every monotone g out of q's domain into one of ``test_codomains``
    with g.f0 <= g.f1, there must be exactly one v with v.q = g."""
    X = q.dom
    if not q.is_surjective():
        return False
    if not f0.then(q).leq(f1.then(q)):
        return False
    for Z in test_codomains:
        for g in all_monotone_maps(X, Z):
            if not f0.then(g).leq(f1.then(g)):
                continue
            factorizations = [
                v for v in all_monotone_maps(q.cod, Z) if q.then(v) == g
            ]
            if len(factorizations) != 1:
                return False
    return True
