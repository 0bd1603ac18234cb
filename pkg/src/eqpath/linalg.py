"""Exact linear algebra over the integers, the rationals and prime fields.

Matrices are small dense objects on the public surface; the heavy routines
(echelon forms, kernels, ranks, invariant factors) work on sparse rows
stored as ``dict[int, element]`` since every complex built by this package
is very sparse.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

__all__ = [
    "Ring",
    "ZZ",
    "QQ",
    "GF",
    "Matrix",
    "SmithDecomposition",
    "HomologyGroup",
    "LinAlgError",
    "CompositionNonzero",
    "SolveFailure",
    "smith_normal_form",
    "invariant_factors",
    "hermite_normal_form",
    "kernel_basis",
    "rank",
    "solve_matrix",
    "homology_of_pair",
]


class LinAlgError(Exception):
    pass


class CompositionNonzero(LinAlgError):
    """Raised when two differentials do not compose to zero."""


class SolveFailure(LinAlgError):
    """Raised when a vector does not lie in the span (lattice) of a basis."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: ``ZZ``, ``QQ`` or ``GF`` (with prime modulus ``p``)."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("ZZ", "QQ", "GF"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "GF" and not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.kind != "ZZ"

    def __call__(self, x):
        if self.kind == "ZZ":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        if self.kind == "QQ":
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, a):
        if self.kind == "QQ":
            return 1 / Fraction(a)
        if self.kind == "GF":
            return pow(a, -1, self.p)
        if a in (1, -1):
            return a
        raise ZeroDivisionError(f"{a} is not a unit in Z")

    @classmethod
    def parse(cls, text: str) -> "Ring":
        t = text.strip().lower()
        if t in ("z", "zz", "int"):
            return ZZ
        if t in ("q", "qq", "rat"):
            return QQ
        if t.startswith("fp:") or t.startswith("gf:"):
            return GF(int(t[3:]))
        raise ValueError(f"cannot parse coefficient ring {text!r}")

    def __str__(self):
        if self.kind == "ZZ":
            return "Z"
        if self.kind == "QQ":
            return "Q"
        return f"F_{self.p}"


ZZ = Ring("ZZ")
QQ = Ring("QQ")


def GF(p: int) -> Ring:
    return Ring("GF", p)


class Matrix:
    """Dense exact matrix; ``data`` is a list of rows."""

    __slots__ = ("rows", "cols", "ring", "data")

    def __init__(self, data: Sequence[Sequence], ring: Ring = ZZ, cols: int | None = None):
        self.ring = ring
        self.data = [[ring(v) for v in row] for row in data]
        self.rows = len(self.data)
        if cols is None:
            cols = len(self.data[0]) if self.data else 0
        self.cols = cols
        for row in self.data:
            if len(row) != cols:
                raise ValueError("ragged matrix data")

    @classmethod
    def zeros(cls, rows: int, cols: int, ring: Ring = ZZ) -> "Matrix":
        return cls([[0] * cols for _ in range(rows)], ring, cols)

    @classmethod
    def identity(cls, n: int, ring: Ring = ZZ) -> "Matrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], ring, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int, ring: Ring = ZZ) -> "Matrix":
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(data, ring, len(columns))

    @classmethod
    def from_sparse_columns(cls, columns: Sequence[dict], rows: int, ring: Ring = ZZ) -> "Matrix":
        m = cls.zeros(rows, len(columns), ring)
        for j, col in enumerate(columns):
            for i, v in col.items():
                m.data[i][j] = ring(v)
        return m

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.data[i][j] = self.ring(value)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def T(self) -> "Matrix":
        return Matrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)],
                      self.ring, self.rows)

    def column(self, j: int) -> list:
        return [row[j] for row in self.data]

    def sparse_columns(self) -> list[dict]:
        cols: list[dict] = [{} for _ in range(self.cols)]
        for i, row in enumerate(self.data):
            for j, v in enumerate(row):
                if v:
                    cols[j][i] = v
        return cols

    def sparse_rows(self) -> list[dict]:
        return [{j: v for j, v in enumerate(row) if v} for row in self.data]

    def is_zero(self) -> bool:
        return all(not v for row in self.data for v in row)

    def over(self, ring: Ring) -> "Matrix":
        return Matrix(self.data, ring, self.cols)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ring = self.ring
        ocols = other.sparse_rows()
        out = [[0] * other.cols for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            acc = out[i]
            for k, a in enumerate(row):
                if a:
                    for j, b in ocols[k].items():
                        acc[j] += a * b
        return Matrix(out, ring, other.cols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)],
                      self.ring, self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-a for a in r] for r in self.data], self.ring, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        return Matrix([[c * a for a in r] for r in self.data], self.ring, self.cols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(tuple(r) for r in self.data)))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.data[i][j] for j in cols] for i in rows], self.ring, len(cols))

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]], ring: Ring = ZZ) -> "Matrix":
        """Assemble a block matrix; every block row must agree in height."""
        data = []
        cols = None
        for brow in blocks:
            height = brow[0].rows
            for i in range(height):
                data.append([v for b in brow for v in b.data[i]])
            width = sum(b.cols for b in brow)
            if cols is not None and cols != width:
                raise ValueError("block widths disagree")
            cols = width
        return cls(data, ring, cols or 0)

    def to_lists(self) -> list[list]:
        if self.ring.kind == "QQ":
            return [[int(v) if v.denominator == 1 else str(v) for v in r] for r in self.data]
        return [list(r) for r in self.data]

    def __repr__(self):
        return f"Matrix({self.to_lists()!r}, ring={self.ring})"


# ---------------------------------------------------------------------------
# sparse row kernels


def _axpy(target: dict, q, source: dict, mod: int = 0) -> None:
    """target -= q * source, in place."""
    for k, v in source.items():
        nv = target.get(k, 0) - q * v
        if mod:
            nv %= mod
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def _echelon_zz(rows: list[dict], aux: list[dict] | None = None):
    """Unimodular row reduction of integer sparse rows.

    Pivots are chosen with smallest absolute value among rows sharing a
    leading column. Returns ``(pivot_rows, pivot_aux, zero_aux)`` where the
    pivot rows have strictly increasing leading columns, and ``zero_aux``
    holds the auxiliary rows of rows reduced to zero.
    """
    rows = [dict(r) for r in rows]
    aux = [dict(a) for a in aux] if aux is not None else None
    buckets: dict[int, set[int]] = {}
    zero_idx: list[int] = []
    heap: list[int] = []
    for idx, r in enumerate(rows):
        if r:
            lead = min(r)
            if lead not in buckets:
                buckets[lead] = set()
                heapq.heappush(heap, lead)
            buckets[lead].add(idx)
        else:
            zero_idx.append(idx)
    pivots: list[int] = []
    while heap:
        c = heapq.heappop(heap)
        cands = buckets.pop(c, set())
        while len(cands) > 1:
            p = min(cands, key=lambda i: (abs(rows[i][c]), i))
            prow = rows[p]
            pv = prow[c]
            for i in list(cands):
                if i == p:
                    continue
                q = rows[i][c] // pv
                _axpy(rows[i], q, prow)
                if aux is not None:
                    _axpy(aux[i], q, aux[p])
                if c not in rows[i]:
                    cands.discard(i)
                    r = rows[i]
                    if r:
                        lead = min(r)
                        if lead not in buckets:
                            buckets[lead] = set()
                            heapq.heappush(heap, lead)
                        buckets[lead].add(i)
                    else:
                        zero_idx.append(i)
        if cands:
            pivots.append(cands.pop())
    prows = [rows[i] for i in pivots]
    paux = [aux[i] for i in pivots] if aux is not None else None
    zaux = [aux[i] for i in sorted(zero_idx)] if aux is not None else None
    return prows, paux, zaux


def _echelon_field(rows: list[dict], ring: Ring, aux: list[dict] | None = None, reduced: bool = True):
    """Gauss-Jordan elimination over QQ or GF(p) on sparse rows.

    Same return convention as :func:`_echelon_zz`; pivot entries are 1 and,
    with ``reduced``, pivot columns are cleared in all other pivot rows.
    """
    mod = ring.p if ring.kind == "GF" else 0
    rows = [dict(r) for r in rows]
    aux = [dict(a) for a in aux] if aux is not None else None
    buckets: dict[int, list[int]] = {}
    heap: list[int] = []
    zero_idx: list[int] = []

    def place(i):
        r = rows[i]
        if r:
            lead = min(r)
            if lead not in buckets:
                buckets[lead] = []
                heapq.heappush(heap, lead)
            buckets[lead].append(i)
        else:
            zero_idx.append(i)

    for i in range(len(rows)):
        place(i)
    pivots: list[int] = []
    while heap:
        c = heapq.heappop(heap)
        cands = buckets.pop(c)
        p = cands[0]
        inv = ring.inv(rows[p][c])
        if inv != 1:
            rows[p] = {k: ring(v * inv) for k, v in rows[p].items()}
            if aux is not None:
                aux[p] = {k: ring(v * inv) for k, v in aux[p].items()}
        for i in cands[1:]:
            q = rows[i][c]
            _axpy(rows[i], q, rows[p], mod)
            if aux is not None:
                _axpy(aux[i], q, aux[p], mod)
            place(i)
        pivots.append(p)
    if reduced:
        for jj in range(len(pivots) - 1, -1, -1):
            p = pivots[jj]
            c = min(rows[p])
            for ii in range(jj):
                i = pivots[ii]
                q = rows[i].get(c)
                if q:
                    _axpy(rows[i], q, rows[p], mod)
                    if aux is not None:
                        _axpy(aux[i], q, aux[p], mod)
    prows = [rows[i] for i in pivots]
    paux = [aux[i] for i in pivots] if aux is not None else None
    zaux = [aux[i] for i in sorted(zero_idx)] if aux is not None else None
    return prows, paux, zaux


def _hermite_rows(rows: list[dict]) -> list[dict]:
    """Row-style Hermite normal form of an integer sparse row set (nonzero rows only)."""
    prows, _, _ = _echelon_zz(rows)
    for r in prows:
        if r[min(r)] < 0:
            for k in r:
                r[k] = -r[k]
    leads = [min(r) for r in prows]
    for j, rj in enumerate(prows):
        c = leads[j]
        pv = rj[c]
        for i in range(j):
            v = prows[i].get(c, 0)
            if v:
                q = v // pv
                if q:
                    _axpy(prows[i], q, rj)
    return prows


def canonical_rows(rows: list[dict], ring: Ring) -> list[dict]:
    """Canonical basis of the row span (HNF over ZZ, RREF over a field)."""
    if ring.kind == "ZZ":
        return _hermite_rows(rows)
    prows, _, _ = _echelon_field(rows, ring)
    return prows


def kernel_rows(columns: list[dict], ring: Ring) -> list[dict]:
    """Canonical basis of ``{v : sum_j v_j columns[j] = 0}`` as sparse vectors.

    Over ZZ the result generates the full (saturated) kernel lattice and is
    in Hermite normal form; over a field it is in reduced echelon form.
    Basis vectors are ordered by leading coordinate.
    """
    aux = [{j: 1} for j in range(len(columns))]
    if ring.kind == "ZZ":
        _, _, zaux = _echelon_zz(columns, aux)
        return _hermite_rows(zaux)
    cols = [{k: ring(v) for k, v in c.items() if ring(v)} for c in columns]
    _, _, zaux = _echelon_field(cols, ring, aux, reduced=False)
    return canonical_rows(zaux, ring)


def sparse_rank(rows: list[dict], ring: Ring) -> int:
    if ring.kind == "ZZ":
        return len(_echelon_zz(rows)[0])
    rows = [{k: ring(v) for k, v in r.items() if ring(v)} for r in rows]
    return len(_echelon_field(rows, ring, reduced=False)[0])


def _normalize_diagonal(diag: list[int]) -> list[int]:
    d = sorted(abs(x) for x in diag if x)
    n = len(d)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] * d[j] // g
    return d


def sparse_invariant_factors(rows: list[dict]) -> list[int]:
    """Nonzero invariant factors of an integer sparse matrix, ascending."""
    cur = [dict(r) for r in rows if r]
    while True:
        cur, _, _ = _echelon_zz(cur)
        if all(len(r) == 1 for r in cur):
            return _normalize_diagonal([next(iter(r.values())) for r in cur])
        # transpose and reduce again; pivot magnitudes strictly shrink or the matrix diagonalises
        t: dict[int, dict] = {}
        for i, r in enumerate(cur):
            for j, v in r.items():
                t.setdefault(j, {})[i] = v
        cur = [t[j] for j in sorted(t)]


class EchelonSolver:
    """Expresses vectors in terms of a fixed family of sparse basis vectors.

    ``solve(v)`` returns coefficients ``c`` with ``sum_j c_j basis[j] = v``
    exactly (integral over ZZ) or raises :class:`SolveFailure`.
    """

    def __init__(self, basis: list[dict], ring: Ring):
        self.ring = ring
        self.size = len(basis)
        aux = [{j: 1} for j in range(len(basis))]
        if ring.kind == "ZZ":
            prows, paux, _ = _echelon_zz(basis, aux)
        else:
            basis = [{k: ring(v) for k, v in b.items() if ring(v)} for b in basis]
            prows, paux, _ = _echelon_field(basis, ring, aux, reduced=False)
        self._rows = prows
        self._aux = paux
        self._leads = [min(r) for r in prows]
        self._mod = ring.p if ring.kind == "GF" else 0

    def solve(self, v: dict) -> dict:
        ring = self.ring
        y = {k: ring(a) for k, a in v.items() if ring(a)}
        coeff: dict = {}
        for row, aux, c in zip(self._rows, self._aux, self._leads):
            a = y.get(c)
            if not a:
                continue
            pv = row[c]
            if ring.kind == "ZZ":
                if a % pv:
                    raise SolveFailure("vector is not in the lattice spanned by the basis")
                q = a // pv
            elif ring.kind == "QQ":
                q = a / pv
            else:
                q = a * pow(pv, -1, ring.p) % ring.p
            _axpy(y, q, row, self._mod)
            for k, w in aux.items():
                nv = coeff.get(k, 0) + q * w
                if self._mod:
                    nv %= self._mod
                if nv:
                    coeff[k] = nv
                else:
                    coeff.pop(k, None)
        if y:
            raise SolveFailure("vector is not in the span of the basis")
        return coeff


# ---------------------------------------------------------------------------
# public operations


@dataclass(frozen=True)
class SmithDecomposition:
    """``M = U @ S @ V`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: Matrix
    S: Matrix
    V: Matrix
    invariant_factors: tuple[int, ...]


def smith_normal_form(M: Matrix) -> SmithDecomposition:
    """Smith normal form over ZZ with explicit unimodular transforms.

    Pivoting picks the entry of smallest absolute value in the active block.
    """
    if M.ring.kind != "ZZ":
        raise ValueError("smith_normal_form requires integer matrices")
    m, n = M.rows, M.cols
    A = [list(r) for r in M.data]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        for r in U:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        V[i], V[j] = V[j], V[i]

    def row_sub(i, j, q):  # row_i -= q row_j
        ai, aj = A[i], A[j]
        for k in range(n):
            ai[k] -= q * aj[k]
        for r in U:
            r[j] += q * r[i]

    def col_sub(i, j, q):  # col_i -= q col_j
        for r in A:
            r[i] -= q * r[j]
        vi, vj = V[i], V[j]
        for k in range(n):
            vj[k] += q * vi[k]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    row_sub(i, t, q)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    col_sub(j, t, q)
                    if A[t][j]:
                        done = False
            if not done:
                best = None
                for i in range(t, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, "r")
                for j in range(t, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), j, "c")
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_sub(t, bad, -1)  # row_t += row_bad
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            for r in U:
                r[t] = -r[t]
        t += 1
    factors = tuple(A[k][k] for k in range(min(m, n)))
    return SmithDecomposition(Matrix(U, ZZ, m), Matrix(A, ZZ, n), Matrix(V, ZZ, n), factors)


def invariant_factors(M: Matrix) -> tuple[int, ...]:
    """Invariant factors of an integer matrix, padded with zeros to ``min(rows, cols)``."""
    nz = sparse_invariant_factors(M.sparse_rows())
    return tuple(nz) + (0,) * (min(M.rows, M.cols) - len(nz))


def hermite_normal_form(M: Matrix) -> Matrix:
    """Row-style Hermite normal form (nonzero rows only) over ZZ, RREF over a field."""
    rows = canonical_rows(M.sparse_rows(), M.ring)
    return Matrix.from_sparse_columns(rows, M.cols, M.ring).T if rows else Matrix.zeros(0, M.cols, M.ring)


def kernel_basis(M: Matrix) -> Matrix:
    """Columns form a canonical basis of ``{v : M v = 0}`` (saturated over ZZ)."""
    vecs = kernel_rows(M.sparse_columns(), M.ring)
    return Matrix.from_sparse_columns(vecs, M.cols, M.ring)


def rank(M: Matrix) -> int:
    return sparse_rank(M.sparse_rows(), M.ring)


def solve_matrix(B: Matrix, Y: Matrix) -> Matrix:
    """Exact ``X`` with ``B @ X = Y``; raises :class:`SolveFailure` when impossible."""
    if B.rows != Y.rows:
        raise ValueError("row count mismatch")
    solver = EchelonSolver(B.sparse_columns(), B.ring)
    cols = [solver.solve(y) for y in Y.sparse_columns()]
    return Matrix.from_sparse_columns(cols, B.cols, B.ring)


@dataclass(frozen=True)
class HomologyGroup:
    """``free_rank`` copies of the ring plus cyclic torsion ``Z/t`` for ``t`` in ``torsion``."""

    free_rank: int
    torsion: tuple[int, ...] = ()
    ring: Ring = ZZ

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        base = str(self.ring)
        parts = []
        if self.free_rank == 1:
            parts.append(base)
        elif self.free_rank > 1:
            parts.append(f"{base}^{self.free_rank}")
        parts.extend(f"Z/{t}" for t in self.torsion)
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def sparse_product_is_zero(a_cols: list[dict], b_cols: list[dict], ring: Ring) -> bool:
    """Whether ``A @ B == 0`` where both are given by sparse columns."""
    for bc in b_cols:
        acc: dict = {}
        for k, v in bc.items():
            for i, w in a_cols[k].items():
                acc[i] = acc.get(i, 0) + v * w
        if any(ring(x) for x in acc.values()):
            return False
    return True


def homology_of_pair(d_out: Matrix, d_in: Matrix, ring: Ring | None = None) -> HomologyGroup:
    """Homology ``ker(d_out) / im(d_in)`` at the module between the two maps."""
    ring = ring or d_out.ring
    if d_out.cols != d_in.rows:
        raise ValueError(f"incompatible shapes {d_out.shape} and {d_in.shape}")
    out_cols = d_out.over(ring).sparse_columns() if d_out.ring != ring else d_out.sparse_columns()
    in_m = d_in.over(ring) if d_in.ring != ring else d_in
    if not sparse_product_is_zero(out_cols, in_m.sparse_columns(), ring):
        raise CompositionNonzero("d_out @ d_in is not zero")
    return _homology(d_out.cols, d_out.over(ring).sparse_rows(), in_m.sparse_rows(), ring)


def _homology(dim: int, out_rows: list[dict], in_rows: list[dict], ring: Ring) -> HomologyGroup:
    r_out = sparse_rank(out_rows, ring)
    if ring.kind == "ZZ":
        factors = sparse_invariant_factors(in_rows)
        r_in = len(factors)
        torsion = tuple(f for f in factors if f > 1)
    else:
        r_in = sparse_rank(in_rows, ring)
        torsion = ()
    return HomologyGroup(dim - r_out - r_in, torsion, ring)


def homology_from_sparse(dim: int, out_cols: list[dict], in_cols: list[dict], ring: Ring,
                         out_rows_count: int = 0) -> HomologyGroup:
    """Variant of :func:`homology_of_pair` taking sparse columns (no zero check)."""

    def rows_of(cols):
        t: dict[int, dict] = {}
        for j, c in enumerate(cols):
            for i, v in c.items():
                if ring(v):
                    t.setdefault(i, {})[j] = ring(v) if ring.kind != "ZZ" else v
        return list(t.values())

    return _homology(dim, rows_of(out_cols), rows_of(in_cols), ring)


def vectors_to_matrix(vectors: Iterable[dict], length: int, ring: Ring) -> Matrix:
    return Matrix.from_sparse_columns(list(vectors), length, ring)
