"""Marked simplicial sets and their path chain complexes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .linalg import (
    EchelonSolver,
    HomologyGroup,
    Matrix,
    Ring,
    SolveFailure,
    ZZ,
    _echelon_field,
    homology_from_sparse,
    kernel_rows,
    sparse_rank,
)
from .sset import (
    Chain,
    ProductSet,
    SimplicialSet,
    ValidationReport,
    Violation,
    add_term,
    back,
    boundary,
    front,
)


class InvalidMarking(ValueError):
    pass


class NonFieldRing(ValueError):
    pass


class MarkedSimplicialSet:
    """A simplicial set with a set of marked 1-simplices.

    Degenerate 1-simplices are added to the marking automatically.
    """

    def __init__(self, sset: SimplicialSet, marked: Iterable | None = None,
                 predicate: Callable | None = None):
        self.sset = sset
        if marked is None:
            if predicate is None:
                raise ValueError("give either marked edges or a predicate")
            marked = [e for e in sset.level(1) if predicate(e)]
        degenerate = [sset.degeneracy(0, v) for v in sset.level(0)]
        self.marked = frozenset(marked) | frozenset(degenerate)

    @property
    def cap(self) -> int:
        return self.sset.cap

    def is_marked(self, edge) -> bool:
        return edge in self.marked

    @classmethod
    def sharp(cls, X: SimplicialSet) -> "MarkedSimplicialSet":
        """Every 1-simplex marked."""
        return cls(X, X.level(1))


def validate_marking(XM: MarkedSimplicialSet) -> ValidationReport:
    X = XM.sset
    report = ValidationReport()
    for v in X.level(0):
        e = X.degeneracy(0, v)
        if e not in XM.marked:
            report.violations.append(Violation("degenerate edge unmarked", (0,), e))
    level1 = set(X.level(1))
    for e in XM.marked:
        if e not in level1:
            report.violations.append(Violation("marked edge not a 1-simplex", (), e))
    return report


def edge_face(X: SimplicialSet, s, k: int):
    """The ``(k-1, k)`` edge: apply ``d_n, ..., d_{k+1}`` and then ``d_0`` ``k-1`` times."""
    n = X.dim(s)
    if not 1 <= k <= n:
        raise ValueError(f"edge index {k} out of range for dimension {n}")
    for i in range(n, k, -1):
        s = X.face(i, s)
    for _ in range(k - 1):
        s = X.face(0, s)
    return s


class LevelExplosion(RuntimeError):
    def __init__(self, level: int, count: int, budget: int):
        super().__init__(f"level {level} has more than {budget} simplices ({count} reached)")
        self.level, self.count, self.budget = level, count, budget


def is_allowed(XM: MarkedSimplicialSet, s) -> bool:
    X = XM.sset
    return all(edge_face(X, s, k) in XM.marked for k in range(1, X.dim(s) + 1))


def allowed_simplices(XM: MarkedSimplicialSet, maxdeg: int) -> list[list]:
    """All allowed simplices (degenerate ones included) in degrees ``0..maxdeg``.

    A simplex is allowed iff its last face is allowed and its final edge is
    marked, so the levels are grown by extension rather than by scanning.
    """
    X = XM.sset
    budget = getattr(X, "level_budget", None)
    out = [list(X.level(0))]
    for n in range(1, maxdeg + 1):
        nxt = []
        for s in out[-1]:
            for t in X.extensions(s):
                if edge_face(X, t, n) in XM.marked:
                    nxt.append(t)
            if budget is not None and len(nxt) > budget:
                raise LevelExplosion(n, len(nxt), budget)
        out.append(nxt)
    return out


def allowed_basis(XM: MarkedSimplicialSet, n: int) -> list:
    """Nondegenerate allowed ``n``-simplices in canonical order."""
    X = XM.sset
    return sorted(s for s in allowed_simplices(XM, n)[n] if not X.is_degenerate(s))


# ---------------------------------------------------------------------------
# path complexes


@dataclass
class PathComplex:
    """The path chain complex, truncated.

    ``omega[n]`` holds a basis of ``Omega_n`` as sparse vectors over the
    indices of ``allowed[n]``; ``differentials[n]`` is the matrix of
    ``Omega_n -> Omega_{n-1}`` in these bases. Degrees up to ``valid_through``
    carry correct differentials.
    """

    ring: Ring
    allowed: list[list]
    omega: list[list[dict]]
    differentials: list[Matrix]
    boundary: Callable = field(repr=False)
    allowed_index: list[dict] = field(default_factory=list, repr=False)
    _solvers: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self.allowed_index:
            self.allowed_index = [{s: i for i, s in enumerate(a)} for a in self.allowed]

    @property
    def valid_through(self) -> int:
        return len(self.omega) - 1

    def rank(self, n: int) -> int:
        return len(self.omega[n]) if n < len(self.omega) else 0

    def ranks(self) -> list[int]:
        return [len(o) for o in self.omega]

    def omega_matrix(self, n: int) -> Matrix:
        return Matrix.from_sparse_columns(self.omega[n], len(self.allowed[n]), self.ring)

    def omega_chain(self, n: int, j: int) -> Chain:
        gens = self.allowed[n]
        return {gens[i]: c for i, c in self.omega[n][j].items()}

    def solver(self, n: int) -> EchelonSolver:
        if n not in self._solvers:
            self._solvers[n] = EchelonSolver(self.omega[n], self.ring)
        return self._solvers[n]

    def coordinates(self, n: int, chain: Chain) -> dict:
        """Coordinates of a chain (generators -> coefficients) in the ``Omega_n`` basis."""
        idx = self.allowed_index[n]
        vec = {}
        for s, c in chain.items():
            if s not in idx:
                if self.ring(c):
                    raise SolveFailure(f"{s!r} is not an allowed generator in degree {n}")
                continue
            vec[idx[s]] = c
        return self.solver(n).solve(vec)

    def homology(self, maxdeg: int | None = None) -> list[HomologyGroup]:
        top = self.valid_through - 1 if maxdeg is None else maxdeg
        if top >= self.valid_through:
            raise ValueError(f"homology through {top} needs differentials through {top + 1}")
        out = []
        for n in range(top + 1):
            d_out = self.differentials[n]
            d_in = self.differentials[n + 1]
            out.append(homology_from_sparse(self.rank(n), d_out.sparse_columns(),
                                            d_in.sparse_columns(), self.ring))
        return out


def build_path_complex(generators: Sequence[Sequence], boundary_fn: Callable[[object], Chain],
                       ring: Ring, maxdeg: int) -> PathComplex:
    """Path complex from allowed generators and their boundary in the ambient chains.

    ``Omega_n`` is the kernel of the boundary followed by projection onto the
    ambient generators that are not allowed.
    """
    allowed = [list(generators[n]) for n in range(maxdeg + 1)]
    index = [{s: i for i, s in enumerate(a)} for a in allowed]
    omega: list[list[dict]] = [[{i: ring(1)} for i in range(len(allowed[0]))]]
    diffs = [Matrix.zeros(0, len(allowed[0]), ring)]
    pc = PathComplex(ring, allowed, omega, diffs, boundary_fn, index)
    for n in range(1, maxdeg + 1):
        below = index[n - 1]
        bounds = [boundary_fn(s) for s in allowed[n]]
        outside: dict = {}
        constraint = []
        for b in bounds:
            col = {}
            for f, c in b.items():
                if f not in below:
                    col[outside.setdefault(f, len(outside))] = c
            constraint.append(col)
        basis = kernel_rows(constraint, ring)
        omega.append(basis)
        solver = pc.solver(n - 1)
        cols = []
        for w in basis:
            dv: dict = {}
            for i, a in w.items():
                for f, c in bounds[i].items():
                    j = below.get(f)
                    if j is not None:
                        dv[j] = ring(dv.get(j, 0) + a * c)
            cols.append(solver.solve(dv))
        diffs.append(Matrix.from_sparse_columns(cols, len(omega[n - 1]), ring))
    return pc


def path_complex(XM: MarkedSimplicialSet, ring: Ring = ZZ, maxdeg: int = 3) -> PathComplex:
    """``Omega_*(X, M)`` in degrees ``0..maxdeg``; needs ``cap >= maxdeg``."""
    X = XM.sset
    if maxdeg > X.cap:
        raise ValueError(f"maxdeg {maxdeg} exceeds cap {X.cap}")
    allowed = allowed_simplices(XM, maxdeg)
    gens = [sorted(s for s in lvl if not X.is_degenerate(s)) for lvl in allowed]
    return build_path_complex(gens, lambda s: boundary(X, s), ring, maxdeg)


def path_homology(XM: MarkedSimplicialSet, ring: Ring = ZZ, maxdeg: int = 2) -> list[HomologyGroup]:
    return path_complex(XM, ring, maxdeg + 1).homology(maxdeg)


def box_product(XM: MarkedSimplicialSet, YN: MarkedSimplicialSet) -> MarkedSimplicialSet:
    """Product with edges marked when one side is degenerate and the other marked."""
    X, Y = XM.sset, YN.sset
    P = ProductSet(X, Y)
    marked = [e for e in P.level(1)
              if (e[0] in XM.marked and Y.is_degenerate(e[1]))
              or (X.is_degenerate(e[0]) and e[1] in YN.marked)]
    return MarkedSimplicialSet(P, marked)


def induced_chain_map(source: PathComplex, target: PathComplex,
                      f: Callable[[object], object | None], degree: int) -> Matrix:
    """Matrix of the map on path complexes induced by a generator map.

    ``f`` returns the image generator, or ``None`` when the image is
    degenerate. Raises :class:`SolveFailure` if an image leaves ``Omega``.
    """
    cols = []
    for j in range(source.rank(degree)):
        img: Chain = {}
        for s, c in source.omega_chain(degree, j).items():
            t = f(s)
            if t is not None:
                add_term(img, t, c)
        cols.append(target.coordinates(degree, img))
    return Matrix.from_sparse_columns(cols, target.rank(degree), source.ring)


# ---------------------------------------------------------------------------
# path cochain algebra over a field


class CochainQuotient:
    """``N^*(X) / J(X, M)`` over a field, truncated at ``maxdeg``.

    Representatives of the quotient are dual basis vectors of nondegenerate
    simplices not eliminated by the ideal ``J``. ``coboundary[n]`` is the
    induced map ``Omega^n -> Omega^{n+1}`` (``n < maxdeg``).
    """

    def __init__(self, XM: MarkedSimplicialSet, ring: Ring, maxdeg: int):
        if not ring.is_field:
            raise NonFieldRing("path cochain quotients are computed over fields only")
        X = XM.sset
        self.XM, self.ring, self.maxdeg = XM, ring, maxdeg
        self.basis = [X.nondegenerate(n) for n in range(maxdeg + 1)]
        self.index = [{s: i for i, s in enumerate(b)} for b in self.basis]
        allowed = {s for lvl in allowed_simplices(XM, maxdeg) for s in lvl}
        # coboundary of a dual basis vector e*_t: sum over s with t in boundary(s)
        self._delta: list[list[dict]] = [[{} for _ in self.basis[0]]]
        for n in range(1, maxdeg + 1):
            cols = [dict() for _ in self.basis[n - 1]]
            for j, s in enumerate(self.basis[n]):
                for f, c in boundary(X, s).items():
                    cols[self.index[n - 1][f]][j] = ring(c)
            self._delta.append(cols)  # _delta[n][t] : e*_t (deg n-1) -> N^n
        self.kernel_rows = []
        self.ideal_rows = []
        self.reps: list[list[int]] = []
        self._pivots: list[dict] = []
        for n in range(maxdeg + 1):
            K = [{i: ring(1)} for i, s in enumerate(self.basis[n]) if s not in allowed]
            self.kernel_rows.append(K)
            J = list(K)
            if n >= 1:
                for k in self.kernel_rows[n - 1]:
                    (t,) = k
                    J.append(dict(self._delta[n][t]))
            rows, _, _ = _echelon_field(J, ring)
            self.ideal_rows.append(rows)
            pivots = {min(r): r for r in rows}
            self._pivots.append(pivots)
            self.reps.append([i for i in range(len(self.basis[n])) if i not in pivots])
        self.coboundary: list[Matrix] = []
        for n in range(maxdeg):
            cols = [self.reduce(n + 1, self._delta[n + 1][i]) for i in self.reps[n]]
            self.coboundary.append(Matrix.from_sparse_columns(cols, self.dim(n + 1), ring))

    def dim(self, n: int) -> int:
        return len(self.reps[n])

    def dims(self) -> list[int]:
        return [len(r) for r in self.reps]

    def reduce(self, n: int, vec: dict) -> dict:
        """Coordinates of the class of a cochain ``vec`` (over ``N^n`` indices) in the representative basis."""
        ring = self.ring
        mod = ring.p if ring.kind == "GF" else 0
        v = {k: ring(a) for k, a in vec.items() if ring(a)}
        for c in sorted(self._pivots[n]):
            a = v.get(c)
            if a:
                row = self._pivots[n][c]
                for k, w in row.items():
                    nv = v.get(k, 0) - a * w
                    if mod:
                        nv %= mod
                    if nv:
                        v[k] = nv
                    else:
                        v.pop(k, None)
        pos = {i: j for j, i in enumerate(self.reps[n])}
        return {pos[k]: a for k, a in v.items()}

    def in_ideal(self, n: int, vec: dict) -> bool:
        return not self.reduce(n, vec)

    def cup_vectors(self, p: int, f: dict, q: int, g: dict) -> dict:
        """Alexander-Whitney cup product of cochains given over ``N^p`` and ``N^q`` indices."""
        X = self.XM.sset
        out: dict = {}
        for k, z in enumerate(self.basis[p + q]):
            a = front(X, z, p)
            b = back(X, z, q)
            fa = f.get(self.index[p].get(a, -1), 0)
            if not fa:
                continue
            gb = g.get(self.index[q].get(b, -1), 0)
            if gb:
                out[k] = self.ring(fa * gb)
        return out

    def cup(self, p: int, i: int, q: int, j: int) -> dict:
        """Product of representatives ``i`` (degree p) and ``j`` (degree q), reduced."""
        f = {self.reps[p][i]: self.ring(1)}
        g = {self.reps[q][j]: self.ring(1)}
        return self.reduce(p + q, self.cup_vectors(p, f, q, g))

    def ideal_is_two_sided(self, p: int, q: int) -> bool:
        """Check ``J^p cup N^q`` and ``N^p cup J^q`` lie in ``J^{p+q}``."""
        one = self.ring(1)
        for jr in self.ideal_rows[p]:
            for t in range(len(self.basis[q])):
                if not self.in_ideal(p + q, self.cup_vectors(p, jr, q, {t: one})):
                    return False
        for jr in self.ideal_rows[q]:
            for t in range(len(self.basis[p])):
                if not self.in_ideal(p + q, self.cup_vectors(p, {t: one}, q, jr)):
                    return False
        return True

    def pairing(self, pc: PathComplex, n: int) -> Matrix:
        """Evaluation of representatives on the ``Omega_n`` basis of ``pc``."""
        rows = []
        for i in self.reps[n]:
            s = self.basis[n][i]
            rows.append([pc.omega_chain(n, j).get(s, 0) for j in range(pc.rank(n))])
        return Matrix(rows, self.ring, pc.rank(n))

    def cohomology_dims(self) -> list[int]:
        """Dimensions of cohomology in degrees ``0..maxdeg-1``."""
        out = []
        for n in range(self.maxdeg):
            r_out = sparse_rank(self.coboundary[n].sparse_rows(), self.ring)
            r_in = sparse_rank(self.coboundary[n - 1].sparse_rows(), self.ring) if n else 0
            out.append(self.dim(n) - r_out - r_in)
        return out


def cochain_quotient(XM: MarkedSimplicialSet, ring: Ring, maxdeg: int) -> CochainQuotient:
    return CochainQuotient(XM, ring, maxdeg)
