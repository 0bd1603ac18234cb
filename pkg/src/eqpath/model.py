"""Twisted tensor product model for Borel equivariant path homology.

The model is ``N(B Gamma) (x)_t C`` for a chain complex ``C`` with a
``Gamma``-action, where ``t`` is Szczarba's twisting cochain. For a constant
group ``t`` only sees 1-simplices, which gives the closed form

    d(x (x) w) = dx (x) w + (-1)^n x (x) dw + (-1)^n (x_1..x_{n-1}) (x) (x_n^{-1} w - w).

The generic differential assembled from ``t_sz``, Alexander-Whitney and the
shuffle module structure is kept alongside as a cross-check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

from .digraph import Digraph, QuotientComplex, glmy_complex, inclusion_matrices, no_edges_from_complement, \
    omega_U_complex, quotient_complex
from .groups import (
    ClassifyingSpace,
    DigraphAction,
    FiniteGroup,
    TwistedProduct,
    TwistingFunction,
    borel_marked,
    check_invariant,
    classifying_space,
    action_on_path_chains,
)
from .linalg import HomologyGroup, Matrix, Ring, SolveFailure, ZZ, homology_from_sparse, sparse_rank
from .marked import NonFieldRing, PathComplex, cochain_quotient, path_complex
from .sset import Chain, SimplicialSet, add_term, back, boundary, degenerate_by, front, shuffles


class DomainViolation(ValueError):
    pass


class ImageEscapesOmega(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Szczarba operators


@dataclass(frozen=True)
class SeqIndex:
    seq: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.seq)

    @property
    def sign(self) -> int:
        return -1 if sum(self.seq) % 2 else 1


def seq_indices(n: int) -> list[SeqIndex]:
    """The ``n!`` sequences with ``0 <= i_k <= n - k``, lexicographic."""
    return [SeqIndex(s) for s in itertools.product(*(range(n - k + 1) for k in range(1, n + 1)))]


# an operator is a tuple of ("d" | "s", index) in the order they are applied
Op = tuple


def _shift(ops: Op) -> Op:
    return tuple((kind, i + 1) for kind, i in ops)


@lru_cache(maxsize=None)
def d_operator(seq: tuple[int, ...], k: int) -> Op:
    """``D_{seq,k}`` as elementary operators in application order; the derived operator shifts indices by one."""
    if not seq:
        if k != 0:
            raise DomainViolation(f"D_(),{k} is undefined")
        return ()
    if not 0 <= k <= len(seq):
        raise DomainViolation(f"k={k} out of range for a sequence of length {len(seq)}")
    i1, rest = seq[0], seq[1:]
    if k < i1:
        return (("d", i1 - k), ("s", 0)) + _shift(d_operator(rest, k))
    if k == i1:
        return _shift(d_operator(rest, k))
    return (("s", 0),) + _shift(d_operator(rest, k - 1))


def apply_operator(X: SimplicialSet, seq: tuple[int, ...], k: int, s):
    if X.dim(s) < len(seq) - k:
        raise DomainViolation(f"D_{seq},{k} needs dimension >= {len(seq) - k}, got {X.dim(s)}")
    for kind, i in d_operator(seq, k):
        s = X.face(i, s) if kind == "d" else X.degeneracy(i, s)
    return s


def _power_d0(X: SimplicialSet, x, k: int):
    for _ in range(k):
        x = X.face(0, x)
    return x


def sz(tf: TwistingFunction, seq: tuple[int, ...], x):
    """``Sz_seq(x)`` in ``G_{n-1}`` for ``seq`` in ``S_{n-1}``."""
    X, G = tf.source, tf.group
    n = X.dim(x)
    out = None
    for k in range(n):
        g = apply_operator(G, seq, k, tf.sigma(_power_d0(X, x, k)))
        out = g if out is None else G.mul(out, g)
    return out


def sz_hat(tf: TwistingFunction, seq: tuple[int, ...], x):
    """``(D_{seq,0} x, D_{seq,1} sigma(x) ... D_{seq,n} sigma(d_0^{n-1} x))`` for ``seq`` in ``S_n``."""
    X, G = tf.source, tf.group
    n = X.dim(x)
    g = G.unit(0) if n == 0 else None
    for k in range(1, n + 1):
        h = apply_operator(G, seq, k, tf.sigma(_power_d0(X, x, k - 1)))
        g = h if g is None else G.mul(g, h)
    return apply_operator(X, seq, 0, x), g


def t_sz(tf: TwistingFunction, x) -> Chain:
    """Szczarba's twisting cochain on a simplex, as a normalized chain of group simplices."""
    X, G = tf.source, tf.group
    n = X.dim(x)
    if n > X.cap:
        from .sset import CapExceeded
        raise CapExceeded(f"dimension {n} above cap {X.cap}")
    out: Chain = {}
    if n == 0:
        return out
    if n == 1:
        add_term(out, tf.sigma(x), 1)
        add_term(out, G.unit(0), -1)
        return out
    for idx in seq_indices(n - 1):
        g = sz(tf, idx.seq, x)
        if not G.is_degenerate(g):
            add_term(out, g, idx.sign)
    return out


# ---------------------------------------------------------------------------
# complexes with a group action


@dataclass
class GComplex:
    """Free chain complex with a linear ``Gamma``-action given by matrices per degree."""

    ring: Ring
    group: FiniteGroup
    ranks: list[int]
    differentials: list[Matrix]
    action_fn: Callable[[int], list[Matrix]] = field(repr=False)
    source: object = field(default=None, repr=False)
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def valid_through(self) -> int:
        return len(self.ranks) - 1

    def action(self, g: int) -> list[Matrix]:
        if g not in self._cache:
            self._cache[g] = self.action_fn(g)
        return self._cache[g]


def gcomplex_from_path(A: DigraphAction, pc: PathComplex) -> GComplex:
    return GComplex(pc.ring, A.group, pc.ranks(), pc.differentials,
                    lambda g: action_on_path_chains(A, pc, g), source=pc)


def gcomplex_from_quotient(A: DigraphAction, big: PathComplex, q: QuotientComplex) -> GComplex:
    def act(g):
        mats = action_on_path_chains(A, big, g)
        return [q.projection[n] @ mats[n] @ q.lift[n] for n in range(q.valid_through + 1)]
    return GComplex(q.ring, A.group, q.ranks(), q.differentials, act, source=q)


# ---------------------------------------------------------------------------
# the model complex


@dataclass
class ModelComplex:
    """``N(B Gamma) (x)_t C`` truncated at total degree ``valid_through``.

    Basis labels at total degree ``d`` are ``(x, k, j)``: a tuple ``x`` of
    non-identity group indices with ``len(x) + k = d`` and ``j`` a basis
    index of ``C_k``. Order: ``len(x)`` ascending, then ``x``, then ``j``.
    """

    ring: Ring
    basis: list[list[tuple]]
    differentials: list[Matrix]

    def __post_init__(self):
        self.index = [{b: i for i, b in enumerate(bs)} for bs in self.basis]

    @property
    def valid_through(self) -> int:
        return len(self.basis) - 1

    def rank(self, d: int) -> int:
        return len(self.basis[d])

    def ranks(self) -> list[int]:
        return [len(b) for b in self.basis]

    def homology(self, maxdeg: int | None = None) -> list[HomologyGroup]:
        top = self.valid_through - 1 if maxdeg is None else maxdeg
        if top >= self.valid_through:
            raise ValueError(f"homology through {top} needs the model through {top + 1}")
        return [homology_from_sparse(self.rank(d), self.differentials[d].sparse_columns(),
                                     self.differentials[d + 1].sparse_columns(), self.ring)
                for d in range(top + 1)]


def model_basis(group: FiniteGroup, ranks: Sequence[int], d: int) -> list[tuple]:
    out = []
    for n in range(d + 1):
        k = d - n
        if k >= len(ranks):
            continue
        for x in itertools.product(range(1, group.order), repeat=n):
            out.extend((x, k, j) for j in range(ranks[k]))
    return out


def model_complex(C: GComplex, maxdeg: int) -> ModelComplex:
    """Model through total degree ``min(maxdeg, C.valid_through)`` using the closed-form differential."""
    top = min(maxdeg, C.valid_through)
    group, ring = C.group, C.ring
    B = ClassifyingSpace(group, top)
    basis = [model_basis(group, C.ranks, d) for d in range(top + 1)]
    index = [{b: i for i, b in enumerate(bs)} for bs in basis]
    dcols = [c.sparse_columns() for c in C.differentials]
    diffs = [Matrix.zeros(0, len(basis[0]), ring)]
    for d in range(1, top + 1):
        target = index[d - 1]
        cols = []
        for x, k, j in basis[d]:
            n = len(x)
            col: dict = {}

            def put(label, c):
                i = target[label]
                v = ring(col.get(i, 0) + c)
                if v:
                    col[i] = v
                else:
                    col.pop(i, None)

            for y, c in boundary(B, x).items():
                put((y, k, j), c)
            sign = -1 if n % 2 else 1
            if k >= 1:
                for i, c in dcols[k][j].items():
                    put((x, k - 1, i), sign * c)
            if n >= 1:
                act = C.action(group.inv[x[-1]])[k]
                for i in range(C.ranks[k]):
                    c = act[i, j] - (1 if i == j else 0)
                    if c:
                        put((x[:-1], k, i), sign * c)
            cols.append(col)
        diffs.append(Matrix.from_sparse_columns(cols, len(basis[d - 1]), ring))
    return ModelComplex(ring, basis, diffs)


def _module_action(A: DigraphAction, tf: TwistingFunction, pc: PathComplex, gchain: Chain, k: int, j: int):
    """``mu(g (x) w)`` through the shuffle map and the action, as a chain of nerve simplices."""
    G = tf.group
    out: Chain = {}
    w = pc.omega_chain(k, j)
    for g, a in gchain.items():
        for y, c in w.items():
            for sh in shuffles(G.dim(g), k):
                gg = degenerate_by(G, g, sh.nu)
                yy = y
                for i in sh.mu:
                    yy = yy[:i + 1] + yy[i:]
                # a degenerate pair has a degenerate image, so filtering after the action suffices
                z = A.act_path(gg[1], yy)
                if any(z[i] == z[i + 1] for i in range(len(z) - 1)):
                    continue
                add_term(out, z, sh.sign * a * c)
    return out


def generic_model_differential(A: DigraphAction, pc: PathComplex, d: int, ring: Ring | None = None) -> Matrix:
    """Degree ``d`` differential from ``d_C (x) 1 + 1 (x) d_M - (1 (x) mu)(1 (x) t (x) 1)(Delta (x) 1)``."""
    ring = ring or pc.ring
    B, tf = classifying_space(A.group, d)
    C = gcomplex_from_path(A, pc)
    basis = model_basis(A.group, C.ranks, d)
    below = model_basis(A.group, C.ranks, d - 1)
    target = {b: i for i, b in enumerate(below)}
    dcols = [c.sparse_columns() for c in pc.differentials]
    cols = []
    for x, k, j in basis:
        n = len(x)
        col: dict = {}

        def put(label, c):
            i = target[label]
            col[i] = ring(col.get(i, 0) + c)

        for y, c in boundary(B, x).items():
            put((y, k, j), c)
        if k >= 1:
            for i, c in dcols[k][j].items():
                put((x, k - 1, i), (-1) ** n * c)
        for p in range(n + 1):
            a = front(B, x, p)
            if B.is_degenerate(a):
                continue
            b = back(B, x, n - p)
            if n - p >= 1 and B.is_degenerate(b):
                continue
            t = t_sz(tf, b)
            if not t:
                continue
            m = n - p - 1
            image = _module_action(A, tf, pc, t, k, j)
            coords = pc.coordinates(k + m, image)
            for i, c in coords.items():
                put((a, k + m, i), -((-1) ** p) * c)
        cols.append({i: c for i, c in col.items() if c})
    return Matrix.from_sparse_columns(cols, len(below), ring)


def model_homology(mc: ModelComplex, maxdeg: int | None = None) -> list[HomologyGroup]:
    return mc.homology(maxdeg)


def equivariant_model(A: DigraphAction, ring: Ring = ZZ, maxdeg: int = 3) -> tuple[ModelComplex, PathComplex]:
    """Model through ``maxdeg + 1`` built on the GLMY complex of the acted-on digraph."""
    pc = glmy_complex(A.graph, ring, maxdeg + 1)
    return model_complex(gcomplex_from_path(A, pc), maxdeg + 1), pc


def borel_path_complex(A: DigraphAction, ring: Ring = ZZ, maxdeg: int = 3, level_budget: int | None = None) -> PathComplex:
    """``Omega`` of the Borel construction through degree ``maxdeg`` (the direct oracle)."""
    kwargs = {} if level_budget is None else {"level_budget": level_budget}
    return path_complex(borel_marked(A, maxdeg, **kwargs), ring, maxdeg)


# ---------------------------------------------------------------------------
# twisted shuffle map


def psi_chain(A: DigraphAction, tf: TwistingFunction, T: TwistedProduct, x, y) -> Chain:
    """``psi(x (x) y)`` for a group tuple ``x`` and a nerve simplex ``y``, as a chain on ``T``."""
    B, G = tf.source, tf.group
    n, q = len(x), len(y) - 1
    XG = TwistedProduct(B, tf, G, G.mul)
    out: Chain = {}
    for idx in seq_indices(n):
        xs, g = sz_hat(tf, idx.seq, x)
        if XG.is_degenerate((xs, g)):
            continue
        for sh in shuffles(n, q):
            bx = degenerate_by(B, xs, sh.nu)
            bg = degenerate_by(G, g, sh.nu)
            fy = degenerate_by(T.F, y, sh.mu)
            z = (bx, A.act_path(bg[1], fy))
            if T.is_degenerate(z):
                continue
            add_term(out, z, idx.sign * sh.sign)
    return out


def psi_omega(A: DigraphAction, pc: PathComplex, borel: PathComplex, maxdeg: int) -> list[Matrix]:
    """Matrices of the twisted shuffle map from the model basis to the Borel ``Omega`` basis."""
    ring = pc.ring
    T = borel_marked(A, max(maxdeg, 1)).sset
    tf = T.tf
    mats = []
    for d in range(maxdeg + 1):
        cols = []
        for x, k, j in model_basis(A.group, pc.ranks(), d):
            img: Chain = {}
            for y, c in pc.omega_chain(k, j).items():
                for z, e in psi_chain(A, tf, T, x, y).items():
                    add_term(img, z, c * e)
            try:
                cols.append(borel.coordinates(d, img))
            except SolveFailure as exc:
                raise ImageEscapesOmega(f"image of {(x, k, j)} leaves Omega in degree {d}: {exc}") from None
        mats.append(Matrix.from_sparse_columns(cols, borel.rank(d), ring))
    return mats


# ---------------------------------------------------------------------------
# relative version


@dataclass
class RelativeResult:
    model: ModelComplex
    model_homology: list[HomologyGroup]
    borel_homology: list[HomologyGroup]
    omega_u_homology: list[HomologyGroup] | None


def relative_model(A: DigraphAction, Gsub: Digraph, ring: Ring = ZZ, maxdeg: int = 2,
                   compare: bool = True) -> RelativeResult:
    """Model on ``Omega(G)/Omega(Gsub)`` and, optionally, the Borel and ``Omega^U`` comparisons."""
    G = A.graph
    check_invariant(Gsub, A)
    big = glmy_complex(G, ring, maxdeg + 1)
    sub = glmy_complex(Gsub, ring, maxdeg + 1)
    q = quotient_complex(big.differentials, inclusion_matrices(sub, big))
    mc = model_complex(gcomplex_from_quotient(A, big, q), maxdeg + 1)
    hom = mc.homology(maxdeg)
    borel_h, omega_u_h = [], None
    if compare:
        Ab = borel_path_complex(A, ring, maxdeg + 1)
        Asub = DigraphAction(A.group, Gsub)
        Sb = borel_path_complex(Asub, ring, maxdeg + 1)
        bq = quotient_complex(Ab.differentials, inclusion_matrices(Sb, Ab))
        borel_h = bq.homology(maxdeg)
        if no_edges_from_complement(G, Gsub):
            U = set(G.ids) - set(Gsub.ids)
            pu = omega_U_complex(G, U, ring, maxdeg + 1)
            mu = model_complex(gcomplex_from_path(A, pu), maxdeg + 1)
            omega_u_h = mu.homology(maxdeg)
    return RelativeResult(mc, hom, borel_h, omega_u_h)


# ---------------------------------------------------------------------------
# dual model over a field


@dataclass
class DualModelComplex:
    """Cochains ``x* (x) u`` with ``coboundary[d]`` from degree ``d`` to ``d + 1``."""

    ring: Ring
    basis: list[list[tuple]]
    coboundary: list[Matrix]

    def dims(self) -> list[int]:
        return [len(b) for b in self.basis]

    def cohomology_dims(self) -> list[int]:
        out = []
        for d in range(len(self.coboundary)):
            r_out = sparse_rank(self.coboundary[d].sparse_rows(), self.ring)
            r_in = sparse_rank(self.coboundary[d - 1].sparse_rows(), self.ring) if d else 0
            out.append(len(self.basis[d]) - r_out - r_in)
        return out


def dual_model_complex(C: GComplex, maxdeg: int) -> DualModelComplex:
    """Dual model built from its own formula.

    ``d(x* (x) u) = d(x*) (x) u + (-1)^k x* (x) d(u)
    + (-1)^(k+1) sum_h (x, h)* (x) (h^{-1} ^ u - u)`` where ``k = len(x)``.
    """
    ring = C.ring
    if not ring.is_field:
        raise NonFieldRing("the dual model is defined over fields")
    group = C.group
    top = min(maxdeg, C.valid_through)
    B = ClassifyingSpace(group, top)
    basis = [model_basis(group, C.ranks, d) for d in range(top + 1)]
    index = [{b: i for i, b in enumerate(bs)} for bs in basis]
    # cofaces of x: tuples y with x appearing in the boundary of y
    cobdry = {}
    for n in range(1, top + 1):
        for y in B.nondegenerate(n):
            for x, c in boundary(B, y).items():
                cobdry.setdefault(x, []).append((y, c))
    drows = [c.sparse_rows() for c in C.differentials]  # row i of d_{k+1}: coefficients of e_i in d(e_j)
    cob = []
    for d in range(top):
        rows = []
        target = index[d + 1]
        for x, k, j in basis[d]:
            row: dict = {}

            def put(label, c):
                i = target[label]
                v = ring(row.get(i, 0) + c)
                if v:
                    row[i] = v
                else:
                    row.pop(i, None)

            for y, c in cobdry.get(x, []):
                put((y, k, j), c)
            sign = -1 if len(x) % 2 else 1
            if k + 1 < len(C.ranks):
                for i, c in drows[k + 1][j].items():
                    put((x, k + 1, i), sign * c)
            for h in range(1, group.order):
                act = C.action(group.inv[h])[k]
                for i in range(C.ranks[k]):
                    c = act[j, i] - (1 if i == j else 0)
                    if c:
                        put((x + (h,), k, i), -sign * c)
            rows.append(row)
        # rows[i] is the image of basis element i; store as a matrix from degree d to d + 1
        cob.append(Matrix.from_sparse_columns(rows, len(basis[d + 1]), ring))
    return DualModelComplex(ring, basis, cob)


def dual_model(A: DigraphAction, field_ring: Ring, maxdeg: int = 3) -> DualModelComplex:
    if not field_ring.is_field:
        raise NonFieldRing("the dual model is defined over fields")
    pc = glmy_complex(A.graph, field_ring, maxdeg + 1)
    return dual_model_complex(gcomplex_from_path(A, pc), maxdeg + 1)


def borel_cochain_dims(A: DigraphAction, field_ring: Ring, maxdeg: int = 3) -> list[int]:
    """Cohomology of the path cochain quotient of the Borel construction, degrees ``0..maxdeg``."""
    return cochain_quotient(borel_marked(A, maxdeg + 1), field_ring, maxdeg + 1).cohomology_dims()
