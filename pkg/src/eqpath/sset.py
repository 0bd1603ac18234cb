"""Truncated simplicial sets, normalized chains, products, shuffle and Alexander-Whitney maps.

Simplices are hashable, totally ordered keys; each concrete simplicial set
knows how to read the dimension off a key. Normalized chains are the quotient
of all chains by degenerate simplices, so a chain is a ``dict`` from
nondegenerate simplices to integer coefficients and degenerate terms are
simply dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product as iproduct
from typing import Hashable, Iterable, Sequence

from .linalg import Matrix, Ring, ZZ

Chain = dict


class CapExceeded(ValueError):
    """A construction needs simplices above the truncation cap."""


class CapMismatch(ValueError):
    pass


def add_term(chain: Chain, key, coeff: int) -> None:
    if not coeff:
        return
    v = chain.get(key, 0) + coeff
    if v:
        chain[key] = v
    else:
        chain.pop(key, None)


def add_chain(acc: Chain, other: Chain, coeff: int = 1) -> Chain:
    for k, v in other.items():
        add_term(acc, k, coeff * v)
    return acc


class SimplicialSet:
    """A simplicial set truncated at dimension ``cap``.

    Subclasses implement :meth:`dim`, :meth:`face`, :meth:`degeneracy` and
    :meth:`_level`. Face and degeneracy operators of implicit constructions
    work at any dimension; ``cap`` bounds enumeration only.
    """

    cap: int

    def dim(self, s) -> int:
        raise NotImplementedError

    def face(self, i: int, s):
        raise NotImplementedError

    def degeneracy(self, i: int, s):
        raise NotImplementedError

    def _level(self, n: int) -> list:
        raise NotImplementedError

    def level(self, n: int) -> list:
        if n > self.cap:
            raise CapExceeded(f"level {n} above cap {self.cap}")
        cache = self.__dict__.setdefault("_level_cache", {})
        if n not in cache:
            cache[n] = sorted(self._level(n))
        return cache[n]

    def extensions(self, s) -> Iterable:
        """All simplices one dimension up whose last face is ``s``."""
        n = self.dim(s)
        return [t for t in self.level(n + 1) if self.face(n + 1, t) == s]

    def is_degenerate(self, s) -> bool:
        n = self.dim(s)
        return any(self.degeneracy(i, self.face(i, s)) == s for i in range(n))

    def nondegenerate(self, n: int) -> list:
        return [s for s in self.level(n) if not self.is_degenerate(s)]

    def vertices(self) -> list:
        return self.level(0)


class ExplicitSimplicialSet(SimplicialSet):
    """Simplicial set given by finite face and degeneracy tables.

    ``faces[(i, s)]`` and ``degeneracies[(i, s)]`` give the structure maps;
    ``levels[n]`` lists the ``n``-simplices.
    """

    def __init__(self, levels: dict[int, Sequence], faces: dict, degeneracies: dict, cap: int | None = None):
        self.levels = {n: list(v) for n, v in levels.items()}
        self.faces = dict(faces)
        self.degeneracies = dict(degeneracies)
        self.cap = max(self.levels) if cap is None else cap
        self._dims = {s: n for n, ss in self.levels.items() for s in ss}

    def dim(self, s):
        return self._dims[s]

    def face(self, i, s):
        return self.faces[(i, s)]

    def degeneracy(self, i, s):
        try:
            return self.degeneracies[(i, s)]
        except KeyError:
            raise CapExceeded(f"s_{i} of {s!r} not tabulated") from None

    def _level(self, n):
        return self.levels.get(n, [])


class StandardSimplex(SimplicialSet):
    """The standard ``k``-simplex: ``n``-simplices are weakly increasing ``(n+1)``-tuples in ``0..k``."""

    def __init__(self, k: int, cap: int):
        self.k = k
        self.cap = cap

    def dim(self, s):
        return len(s) - 1

    def face(self, i, s):
        return s[:i] + s[i + 1:]

    def degeneracy(self, i, s):
        return s[:i + 1] + s[i:]

    def _level(self, n):
        from itertools import combinations_with_replacement
        return [tuple(c) for c in combinations_with_replacement(range(self.k + 1), n + 1)]

    def extensions(self, s):
        return [s + (v,) for v in range(s[-1], self.k + 1)]


class ProductSet(SimplicialSet):
    """Levelwise Cartesian product ``X x Y`` with componentwise structure maps."""

    def __init__(self, X: SimplicialSet, Y: SimplicialSet):
        if X.cap != Y.cap:
            raise CapMismatch(f"caps differ: {X.cap} vs {Y.cap}")
        self.X, self.Y = X, Y
        self.cap = X.cap

    def dim(self, s):
        return self.X.dim(s[0])

    def face(self, i, s):
        return (self.X.face(i, s[0]), self.Y.face(i, s[1]))

    def degeneracy(self, i, s):
        return (self.X.degeneracy(i, s[0]), self.Y.degeneracy(i, s[1]))

    def _level(self, n):
        return list(iproduct(self.X.level(n), self.Y.level(n)))

    def extensions(self, s):
        return list(iproduct(self.X.extensions(s[0]), self.Y.extensions(s[1])))


def product(X: SimplicialSet, Y: SimplicialSet) -> ProductSet:
    return ProductSet(X, Y)


# ---------------------------------------------------------------------------
# validation


@dataclass
class Violation:
    identity: str
    indices: tuple
    simplex: Hashable

    def __str__(self):
        return f"{self.identity} {self.indices} fails at {self.simplex!r}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def validate(X: SimplicialSet, upto: int | None = None) -> ValidationReport:
    """Check every simplicial identity on simplices of dimension ``<= upto`` (default: cap)."""
    top = X.cap if upto is None else min(upto, X.cap)
    report = ValidationReport()
    bad = report.violations
    for n in range(top + 1):
        for s in X.level(n):
            faces = [X.face(i, s) for i in range(n + 1)] if n >= 1 else []
            if n >= 2:
                for j in range(n + 1):
                    for i in range(j):
                        if X.face(i, faces[j]) != X.face(j - 1, faces[i]):
                            bad.append(Violation("d_i d_j = d_{j-1} d_i", (i, j), s))
            if n + 1 > X.cap:
                continue
            degs = [X.degeneracy(j, s) for j in range(n + 1)]
            for j in range(n + 1):
                t = degs[j]
                for i in range(n + 2):
                    f = X.face(i, t)
                    if i < j:
                        ok = f == X.degeneracy(j - 1, faces[i])
                        name = "d_i s_j = s_{j-1} d_i"
                    elif i in (j, j + 1):
                        ok = f == s
                        name = "d_j s_j = d_{j+1} s_j = id"
                    else:
                        ok = f == X.degeneracy(j, faces[i - 1])
                        name = "d_i s_j = s_j d_{i-1}"
                    if not ok:
                        bad.append(Violation(name, (i, j), s))
            if n + 2 > X.cap:
                continue
            for j in range(n + 1):
                for i in range(j + 1):
                    if X.degeneracy(i, degs[j]) != X.degeneracy(j + 1, degs[i]):
                        bad.append(Violation("s_i s_j = s_{j+1} s_i", (i, j), s))
    return report


# ---------------------------------------------------------------------------
# normalized chains


def boundary(X: SimplicialSet, s) -> Chain:
    """Normalized boundary of a nondegenerate simplex (degenerate faces dropped)."""
    n = X.dim(s)
    out: Chain = {}
    if n == 0:
        return out
    for i in range(n + 1):
        f = X.face(i, s)
        if not X.is_degenerate(f):
            add_term(out, f, -1 if i % 2 else 1)
    return out


def boundary_chain(X: SimplicialSet, chain: Chain) -> Chain:
    out: Chain = {}
    for s, c in chain.items():
        add_chain(out, boundary(X, s), c)
    return out


def normalize(X: SimplicialSet, chain: Chain) -> Chain:
    return {s: c for s, c in chain.items() if c and not X.is_degenerate(s)}


@dataclass
class NormalizedComplex:
    ring: Ring
    basis: list[list]
    index: list[dict]
    differentials: list[Matrix]

    @property
    def maxdeg(self) -> int:
        return len(self.basis) - 1

    def rank(self, n: int) -> int:
        return len(self.basis[n])


def chains_to_matrix(chains: Sequence[Chain], index: dict, ring: Ring) -> Matrix:
    cols = []
    for ch in chains:
        col = {}
        for k, v in ch.items():
            col[index[k]] = v
        cols.append(col)
    return Matrix.from_sparse_columns(cols, len(index), ring)


def normalized_complex(X: SimplicialSet, ring: Ring = ZZ, maxdeg: int | None = None) -> NormalizedComplex:
    """``N(X)`` with basis the nondegenerate simplices; ``differentials[n]: N_n -> N_{n-1}``."""
    top = X.cap if maxdeg is None else maxdeg
    basis = [X.nondegenerate(n) for n in range(top + 1)]
    index = [{s: i for i, s in enumerate(b)} for b in basis]
    diffs = [Matrix.zeros(0, len(basis[0]), ring)]
    for n in range(1, top + 1):
        diffs.append(chains_to_matrix([boundary(X, s) for s in basis[n]], index[n - 1], ring))
    return NormalizedComplex(ring, basis, index, diffs)


# ---------------------------------------------------------------------------
# shuffles, Eilenberg-Zilber and Alexander-Whitney


@dataclass(frozen=True)
class ShuffleIndex:
    """A ``(p, q)``-shuffle: ``mu`` (size p) degenerates the second factor, ``nu`` (size q) the first."""

    p: int
    q: int
    mu: tuple
    nu: tuple
    sign: int


def shuffles(p: int, q: int) -> list[ShuffleIndex]:
    out = []
    for mu in combinations(range(p + q), p):
        nu = tuple(i for i in range(p + q) if i not in mu)
        inversions = sum(m - k for k, m in enumerate(mu))
        out.append(ShuffleIndex(p, q, mu, nu, -1 if inversions % 2 else 1))
    return out


def degenerate_by(X: SimplicialSet, s, indices: Iterable[int]):
    """Apply ``s_{i_1}``, then ``s_{i_2}``, ... for increasing ``indices``."""
    for i in indices:
        s = X.degeneracy(i, s)
    return s


def front(X: SimplicialSet, s, p: int):
    """Front ``p``-face: iterated last faces."""
    for i in range(X.dim(s), p, -1):
        s = X.face(i, s)
    return s


def back(X: SimplicialSet, s, q: int):
    """Back ``q``-face: iterated 0-faces."""
    for _ in range(X.dim(s) - q):
        s = X.face(0, s)
    return s


def shuffle_product(P: SimplicialSet, X: SimplicialSet, Y: SimplicialSet, x, y) -> Chain:
    """Eilenberg-Zilber image of ``x (x) y`` as a normalized chain on the product ``P``."""
    p, q = X.dim(x), Y.dim(y)
    out: Chain = {}
    for sh in shuffles(p, q):
        pair = (degenerate_by(X, x, sh.nu), degenerate_by(Y, y, sh.mu))
        if not P.is_degenerate(pair):
            add_term(out, pair, sh.sign)
    return out


def aw_chain(X: SimplicialSet, Y: SimplicialSet, pair) -> Chain:
    """Alexander-Whitney image of a product simplex as a chain of ``((x, y))`` tensor keys."""
    x, y = pair
    n = X.dim(x)
    out: Chain = {}
    for p in range(n + 1):
        a = front(X, x, p)
        b = back(Y, y, n - p)
        if not X.is_degenerate(a) and not Y.is_degenerate(b):
            add_term(out, (a, b), 1)
    return out


def tensor_basis(bx: list[list], by: list[list], n: int) -> list:
    """Basis of ``(A (x) B)_n`` ordered by first-factor degree, then lexicographically."""
    return [(a, b) for p in range(n + 1) if p < len(bx) and n - p < len(by)
            for a in bx[p] for b in by[n - p]]


def shuffle_map(X: SimplicialSet, Y: SimplicialSet, p: int, q: int, ring: Ring = ZZ) -> Matrix:
    """Matrix of ``N_p(X) (x) N_q(Y) -> N_{p+q}(X x Y)`` in nondegenerate bases."""
    if p + q > min(X.cap, Y.cap):
        raise CapExceeded(f"bidegree ({p},{q}) needs cap {p + q}")
    P = ProductSet(X, Y)
    target = {s: i for i, s in enumerate(P.nondegenerate(p + q))}
    chains = [shuffle_product(P, X, Y, x, y) for x in X.nondegenerate(p) for y in Y.nondegenerate(q)]
    return chains_to_matrix(chains, target, ring)


def aw_map(X: SimplicialSet, Y: SimplicialSet, n: int, ring: Ring = ZZ) -> Matrix:
    """Matrix of ``N_n(X x Y) -> (N(X) (x) N(Y))_n`` in nondegenerate bases."""
    if n > min(X.cap, Y.cap):
        raise CapExceeded(f"degree {n} above cap")
    P = ProductSet(X, Y)
    bx = [X.nondegenerate(k) for k in range(n + 1)]
    by = [Y.nondegenerate(k) for k in range(n + 1)]
    target = {t: i for i, t in enumerate(tensor_basis(bx, by, n))}
    return chains_to_matrix([aw_chain(X, Y, s) for s in P.nondegenerate(n)], target, ring)


def tensor_boundary(X: SimplicialSet, Y: SimplicialSet, a, b) -> Chain:
    """Koszul-signed boundary on ``N(X) (x) N(Y)``."""
    out: Chain = {}
    for f, c in boundary(X, a).items():
        add_term(out, (f, b), c)
    sign = -1 if X.dim(a) % 2 else 1
    for g, c in boundary(Y, b).items():
        add_term(out, (a, g), sign * c)
    return out
