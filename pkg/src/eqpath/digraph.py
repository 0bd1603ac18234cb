"""Directed graphs, their reachability nerves and GLMY path complexes.

Every digraph carries the degenerate loops ``(v, v)``. Vertices have string
names and integer ids; ids are the document order of the graph, or of the
parent graph when the digraph was loaded as a subgraph, so chains of a
subgraph and of its parent share generators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .linalg import Matrix, Ring, SolveFailure, ZZ, kernel_rows, smith_normal_form, solve_matrix
from .marked import LevelExplosion, MarkedSimplicialSet, PathComplex, build_path_complex
from .sset import Chain, SimplicialSet, add_term

DEFAULT_LEVEL_BUDGET = 200_000


class ParseError(ValueError):
    def __init__(self, position, reason: str):
        super().__init__(f"{position}: {reason}")
        self.position = position
        self.reason = reason


class DanglingEdge(ValueError):
    pass


class NotSubgraph(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    """Finite digraph; ``edges`` are id pairs and always contain every loop."""

    names: tuple[str, ...]
    ids: tuple[int, ...]
    edges: frozenset

    def __post_init__(self):
        if len(self.names) != len(self.ids):
            raise ValueError("names and ids differ in length")
        idset = set(self.ids)
        for u, v in self.edges:
            if u not in idset or v not in idset:
                raise DanglingEdge(f"edge ({u}, {v}) has an endpoint outside the vertex set")
        object.__setattr__(self, "edges", frozenset(self.edges) | {(v, v) for v in self.ids})

    @classmethod
    def from_names(cls, names: Sequence[str], edges: Iterable[tuple[str, str]]) -> "Digraph":
        names = tuple(str(n) for n in names)
        index = {n: i for i, n in enumerate(names)}
        if len(index) != len(names):
            raise ValueError("duplicate vertex names")
        pairs = set()
        for u, v in edges:
            if str(u) not in index or str(v) not in index:
                raise DanglingEdge(f"edge {u} -> {v} references an undeclared vertex")
            pairs.add((index[str(u)], index[str(v)]))
        return cls(names, tuple(range(len(names))), frozenset(pairs))

    @property
    def nondegenerate_edges(self) -> list[tuple[int, int]]:
        return sorted(e for e in self.edges if e[0] != e[1])

    def name(self, v: int) -> str:
        return self.names[self.ids.index(v)]

    def id_of(self, name: str) -> int:
        return self.ids[self.names.index(name)]

    def to_json(self) -> dict:
        return {"vertices": list(self.names),
                "edges": [[self.name(u), self.name(v)] for u, v in self.nondegenerate_edges]}

    def is_subgraph_of(self, other: "Digraph") -> bool:
        parent = dict(zip(other.ids, other.names))
        return (all(parent.get(i) == n for i, n in zip(self.ids, self.names))
                and self.edges <= other.edges)


def _parse_text(text: str) -> tuple[list[str], list[tuple[str, str]]]:
    names: list[str] = []
    edges = []
    seen = set()

    def see(v):
        if v not in seen:
            seen.add(v)
            names.append(v)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            parts = [p.strip() for p in line.split("->")]
            if len(parts) != 2 or not all(parts):
                raise ParseError(f"line {lineno}", "expected 'u -> v'")
            see(parts[0])
            see(parts[1])
            edges.append((parts[0], parts[1]))
        elif len(line.split()) == 1:
            see(line)
        else:
            raise ParseError(f"line {lineno}", "expected 'u -> v' or a single vertex name")
    return names, edges


def _parse_document(document) -> tuple[list[str], list[tuple[str, str]]]:
    if isinstance(document, dict):
        data = document
    else:
        text = document
        stripped = text.lstrip()
        if not stripped.startswith("{"):
            return _parse_text(text)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if "vertices" not in data or not isinstance(data["vertices"], list):
        raise ParseError("vertices", "missing or not a list")
    names = [str(v) for v in data["vertices"]]
    edges = []
    for k, e in enumerate(data.get("edges", [])):
        if not isinstance(e, (list, tuple)) or len(e) != 2:
            raise ParseError(f"edges[{k}]", "edge must be a pair")
        edges.append((str(e[0]), str(e[1])))
    return names, edges


def load_digraph(document) -> Digraph:
    """Parse a digraph from JSON (``{"vertices": [...], "edges": [[u, v], ...]}``), a dict, or ``u -> v`` lines."""
    names, edges = _parse_document(document)
    return Digraph.from_names(names, edges)


def load_subgraph(document, parent: Digraph) -> Digraph:
    """Parse a subgraph whose vertex ids are taken from ``parent``."""
    names, edges = _parse_document(document)
    missing = [n for n in names if n not in parent.names]
    if missing:
        raise NotSubgraph(f"vertices {missing} are not in the parent graph")
    ids = sorted(parent.id_of(n) for n in set(names))
    sub_names = tuple(parent.name(i) for i in ids)
    pairs = set()
    for u, v in edges:
        if u not in names or v not in names:
            raise DanglingEdge(f"edge {u} -> {v} references an undeclared vertex")
        pairs.add((parent.id_of(u), parent.id_of(v)))
    sub = Digraph(sub_names, tuple(ids), frozenset(pairs))
    if not sub.is_subgraph_of(parent):
        bad = sorted(sub.edges - parent.edges)
        raise NotSubgraph(f"edges {bad} are not edges of the parent graph")
    return sub


def induced_subgraph(G: Digraph, vertex_ids: Iterable[int]) -> Digraph:
    keep = sorted(set(vertex_ids))
    return Digraph(tuple(G.name(i) for i in keep), tuple(keep),
                   frozenset((u, v) for u, v in G.edges if u in keep and v in keep))


# ---------------------------------------------------------------------------
# reachability and nerve


@dataclass(frozen=True)
class ReachabilityPreorder:
    """``u <= v`` iff there is a directed path from ``u`` to ``v``."""

    successors: dict

    def leq(self, u: int, v: int) -> bool:
        return v in self.successors[u]

    def pairs(self) -> set:
        return {(u, v) for u, vs in self.successors.items() for v in vs}


def reachability(G: Digraph) -> ReachabilityPreorder:
    out = {v: set() for v in G.ids}
    for u, v in G.edges:
        out[u].add(v)
    succ = {}
    for s in G.ids:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v in out[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        succ[s] = tuple(sorted(seen))
    return ReachabilityPreorder(succ)


class Nerve(SimplicialSet):
    """Nerve of the reachability preorder; ``n``-simplices are ``(n+1)``-tuples of vertex ids."""

    def __init__(self, G: Digraph, cap: int, level_budget: int = DEFAULT_LEVEL_BUDGET):
        self.G = G
        self.cap = cap
        self.level_budget = level_budget
        self.reach = reachability(G)

    def dim(self, s):
        return len(s) - 1

    def face(self, i, s):
        return s[:i] + s[i + 1:]

    def degeneracy(self, i, s):
        return s[:i + 1] + s[i:]

    def is_degenerate(self, s):
        return any(s[i] == s[i + 1] for i in range(len(s) - 1))

    def extensions(self, s):
        return [s + (v,) for v in self.reach.successors[s[-1]]]

    def _level(self, n):
        cur = [(v,) for v in self.G.ids]
        for k in range(1, n + 1):
            nxt = []
            for s in cur:
                nxt.extend(self.extensions(s))
                if len(nxt) > self.level_budget:
                    raise LevelExplosion(k, len(nxt), self.level_budget)
            cur = nxt
        return cur


def nerve_marked(G: Digraph, cap: int, level_budget: int = DEFAULT_LEVEL_BUDGET) -> MarkedSimplicialSet:
    """``(Nrv(G), E)``: the nerve marked by the edges (loops are the degenerate edges)."""
    return MarkedSimplicialSet(Nerve(G, cap, level_budget), [tuple(e) for e in G.edges])


# ---------------------------------------------------------------------------
# GLMY complex


def n_paths(G: Digraph, n: int) -> list[tuple]:
    """All ``n``-paths: consecutive vertices distinct and joined by an edge."""
    out_edges: dict = {v: [] for v in G.ids}
    for u, v in G.nondegenerate_edges:
        out_edges[u].append(v)
    cur = [(v,) for v in G.ids]
    for _ in range(n):
        cur = [p + (w,) for p in cur for w in out_edges[p[-1]]]
    return sorted(cur)


def glmy_boundary(path: tuple) -> Chain:
    """Boundary on regular paths, dropping deletions that create a repeated vertex."""
    n = len(path) - 1
    out: Chain = {}
    if n == 0:
        return out
    for i in range(n + 1):
        if 0 < i < n and path[i - 1] == path[i + 1]:
            continue
        add_term(out, path[:i] + path[i + 1:], -1 if i % 2 else 1)
    return out


def glmy_complex(G: Digraph, ring: Ring = ZZ, maxdeg: int = 3) -> PathComplex:
    """``Omega_*(G)`` built directly on regular paths, degrees ``0..maxdeg``."""
    gens = [n_paths(G, n) for n in range(maxdeg + 1)]
    return build_path_complex(gens, glmy_boundary, ring, maxdeg)


def glmy_homology(G: Digraph, ring: Ring = ZZ, maxdeg: int = 3):
    return glmy_complex(G, ring, maxdeg + 1).homology(maxdeg)


def omega_U_complex(G: Digraph, U: Iterable[int], ring: Ring = ZZ, maxdeg: int = 3,
                    base: PathComplex | None = None) -> PathComplex:
    """``Omega^U``: elements of ``Omega(G)`` supported on paths meeting ``U``.

    The differential is the boundary followed by discarding paths that avoid
    ``U``; under the no-edges-from-``U`` condition this is the quotient
    differential of ``Omega(G)/Omega(G')`` with ``G'`` induced on the rest.
    """
    U = set(U)
    base = base or glmy_complex(G, ring, maxdeg)
    gens, omega = [], []
    for n in range(maxdeg + 1):
        paths = base.allowed[n]
        keep = [i for i, p in enumerate(paths) if U & set(p)]
        pos = {i: j for j, i in enumerate(keep)}
        # combinations of Omega_n basis vectors with no mass on U-avoiding paths
        constraint = [{i: c for i, c in w.items() if i not in pos} for w in base.omega[n]]
        combos = kernel_rows(constraint, ring)
        vecs = []
        for comb in combos:
            v: dict = {}
            for j, a in comb.items():
                for i, c in base.omega[n][j].items():
                    v[i] = ring(v.get(i, 0) + a * c)
            vecs.append({pos[i]: c for i, c in v.items() if c})
        gens.append([paths[i] for i in keep])
        omega.append(vecs)

    def projected(path):
        return {q: c for q, c in glmy_boundary(path).items() if U & set(q)}

    pc = PathComplex(ring, gens, [omega[0]], [Matrix.zeros(0, len(omega[0]), ring)], projected)
    for n in range(1, maxdeg + 1):
        pc.omega.append(omega[n])
        solver = pc.solver(n - 1)
        idx = pc.allowed_index[n - 1]
        cols = []
        for w in omega[n]:
            chain: Chain = {}
            for i, a in w.items():
                for q, c in projected(gens[n][i]).items():
                    add_term(chain, q, a * c)
            dv = {}
            for q, c in chain.items():
                if not ring(c):
                    continue
                if q not in idx:
                    raise SolveFailure(f"projected boundary leaves the generators at {q!r}")
                dv[idx[q]] = ring(c)
            cols.append(solver.solve(dv))
        pc.differentials.append(Matrix.from_sparse_columns(cols, len(omega[n - 1]), ring))
    return pc


@dataclass
class QuotientComplex:
    """``C / C'`` for a saturated subcomplex, presented on a complement basis.

    ``lift[n]`` has the complement basis as columns (in ``C_n`` coordinates);
    ``projection[n]`` maps ``C_n`` coordinates onto quotient coordinates.
    """

    ring: Ring
    lift: list[Matrix]
    projection: list[Matrix]
    differentials: list[Matrix]

    def rank(self, n: int) -> int:
        return self.lift[n].cols

    def ranks(self) -> list[int]:
        return [m.cols for m in self.lift]

    @property
    def valid_through(self) -> int:
        return len(self.lift) - 1

    def homology(self, maxdeg: int | None = None):
        from .linalg import homology_from_sparse
        top = self.valid_through - 1 if maxdeg is None else maxdeg
        return [homology_from_sparse(self.rank(n), self.differentials[n].sparse_columns(),
                                     self.differentials[n + 1].sparse_columns(), self.ring)
                for n in range(top + 1)]


def _complement(inclusion: Matrix) -> tuple[Matrix, Matrix]:
    """Complement basis and projection for the column span of an injective map with saturated image."""
    m, r = inclusion.rows, inclusion.cols
    ring = inclusion.ring
    if ring.kind == "ZZ":
        dec = smith_normal_form(inclusion)
        if any(f != 1 for f in dec.invariant_factors):
            raise NotSubgraph("subcomplex is not a saturated direct summand")
        U = dec.U
    else:
        # extend a basis of the image by unit vectors
        from .linalg import rank as _rank
        cols = [inclusion.column(j) for j in range(r)]
        chosen = list(cols)
        for i in range(m):
            e = [int(k == i) for k in range(m)]
            trial = Matrix.from_columns(chosen + [e], m, ring)
            if _rank(trial) == len(chosen) + 1:
                chosen.append(e)
        U = Matrix.from_columns(chosen, m, ring)
    Uinv = solve_matrix(U, Matrix.identity(m, ring))
    lift = U.submatrix(range(m), range(r, m))
    proj = Uinv.submatrix(range(r, m), range(m))
    return lift, proj


def quotient_complex(differentials: Sequence[Matrix], inclusions: Sequence[Matrix]) -> QuotientComplex:
    """Quotient of a complex by a subcomplex given through its inclusion matrices."""
    ring = inclusions[0].ring
    lifts, projs = [], []
    for inc in inclusions:
        lift, proj = _complement(inc)
        lifts.append(lift)
        projs.append(proj)
    diffs = [Matrix.zeros(0, lifts[0].cols, ring)]
    for n in range(1, len(inclusions)):
        diffs.append(projs[n - 1] @ differentials[n] @ lifts[n])
    return QuotientComplex(ring, lifts, projs, diffs)


def inclusion_matrices(sub: PathComplex, big: PathComplex) -> list[Matrix]:
    from .marked import induced_chain_map
    return [induced_chain_map(sub, big, lambda s: s, n) for n in range(sub.valid_through + 1)]


def relative_complex(G: Digraph, Gsub: Digraph, ring: Ring = ZZ, maxdeg: int = 3) -> QuotientComplex:
    """``Omega(G) / Omega(Gsub)`` presented on quotient bases."""
    if not Gsub.is_subgraph_of(G):
        raise NotSubgraph("second graph is not a subgraph of the first")
    big = glmy_complex(G, ring, maxdeg)
    sub = glmy_complex(Gsub, ring, maxdeg)
    return quotient_complex(big.differentials, inclusion_matrices(sub, big))


def no_edges_from_complement(G: Digraph, Gsub: Digraph) -> bool:
    """True when no edge of ``G`` runs from a vertex outside ``Gsub`` into ``Gsub``."""
    inside = set(Gsub.ids)
    return not any(u not in inside and v in inside for u, v in G.nondegenerate_edges)
