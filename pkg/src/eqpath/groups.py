"""Finite permutation groups, classifying spaces and Borel constructions of digraphs."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .digraph import DEFAULT_LEVEL_BUDGET, Digraph, Nerve, ParseError, nerve_marked
from .linalg import Matrix
from .marked import MarkedSimplicialSet, PathComplex
from .sset import SimplicialSet, ValidationReport, Violation


class OrderExceeded(RuntimeError):
    pass


class InvalidAction(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__(str(report))
        self.report = report


class HypothesisViolated(ValueError):
    pass


class InvalidTwisting(ValueError):
    pass


class NotInvariant(ValueError):
    pass


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class FiniteGroup:
    """Permutation group with identity at index 0.

    ``mult[a][b]`` is the index of ``a*b`` where ``(a*b)(v) = a(b(v))``.
    """

    perms: tuple[tuple[int, ...], ...]
    generators: tuple[int, ...] = ()
    mult: tuple = field(default=(), repr=False, compare=False)
    inv: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        index = {p: i for i, p in enumerate(self.perms)}
        if len(index) != len(self.perms):
            raise ValueError("repeated group element")
        ident = tuple(range(len(self.perms[0])))
        if self.perms[0] != ident:
            raise ValueError("identity must come first")
        try:
            mult = tuple(tuple(index[tuple(a[x] for x in b)] for b in self.perms) for a in self.perms)
        except KeyError:
            raise ValueError("elements are not closed under composition") from None
        inv = tuple(row.index(0) for row in mult)
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "inv", inv)

    @property
    def order(self) -> int:
        return len(self.perms)

    @property
    def identity(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def is_abelian(self) -> bool:
        return all(self.mult[a][b] == self.mult[b][a] for a in range(self.order) for b in range(a))

    def check_axioms(self) -> ValidationReport:
        report = ValidationReport()
        n = self.order
        for a, b, c in itertools.product(range(n), repeat=3):
            if self.mult[self.mult[a][b]][c] != self.mult[a][self.mult[b][c]]:
                report.violations.append(Violation("associativity", (a, b, c), None))
        for a in range(n):
            if self.mult[0][a] != a or self.mult[a][0] != a:
                report.violations.append(Violation("identity", (a,), None))
            if self.mult[a][self.inv[a]] != 0 or self.mult[self.inv[a]][a] != 0:
                report.violations.append(Violation("inverse", (a,), None))
        return report


def group_closure(generators: Sequence[Sequence[int]], max_order: int = 1000,
                  degree: int | None = None) -> FiniteGroup:
    """Close permutations under composition.

    Order: identity, then by word length in the generators, ties broken
    lexicographically on the permutation tuples.
    """
    gens = [tuple(g) for g in generators]
    if degree is None:
        if not gens:
            raise ValueError("need a degree when there are no generators")
        degree = len(gens[0])
    ident = tuple(range(degree))
    for g in gens:
        if sorted(g) != list(ident):
            raise ValueError(f"{g} is not a permutation of {degree} points")
    order = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        new = set()
        for w in frontier:
            for g in gens:
                p = tuple(w[g[x]] for x in range(degree))
                if p not in seen and p not in new:
                    new.add(p)
        frontier = sorted(new)
        order.extend(frontier)
        seen |= new
        if len(order) > max_order:
            raise OrderExceeded(f"group order exceeds {max_order}")
    gen_idx = tuple(order.index(g) for g in gens)
    return FiniteGroup(tuple(order), gen_idx)


def cycles_to_perm(cycles: Iterable[Sequence[int]], degree: int) -> tuple[int, ...]:
    perm = list(range(degree))
    for cyc in cycles:
        cyc = list(cyc)
        if len(set(cyc)) != len(cyc):
            raise ValueError(f"cycle {cyc} repeats a point")
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return tuple(perm)


@dataclass(frozen=True)
class DigraphAction:
    """A finite group acting on the vertex ids of a digraph."""

    group: FiniteGroup
    graph: Digraph

    def act(self, g: int, v: int) -> int:
        return self.group.perms[g][v]

    def act_path(self, g: int, path: tuple) -> tuple:
        p = self.group.perms[g]
        return tuple(p[v] for v in path)

    def restrict(self, sub: Digraph) -> "DigraphAction":
        return DigraphAction(self.group, sub)


def load_group(document, G: Digraph, max_order: int = 1000) -> DigraphAction:
    """Parse ``{"generators": [{"cycles": [[...], ...]}, ...]}``.

    String entries are vertex names, integers are vertex indices in document order.
    """
    if isinstance(document, dict):
        data = document
    else:
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(data, dict) or not isinstance(data.get("generators"), list):
        raise ParseError("generators", "missing or not a list")
    degree = max(G.ids) + 1 if G.ids else 0
    gens = []
    for k, gen in enumerate(data["generators"]):
        cycles = gen.get("cycles") if isinstance(gen, dict) else gen
        if not isinstance(cycles, list):
            raise ParseError(f"generators[{k}]", "expected a list of cycles")
        resolved = []
        for cyc in cycles:
            pts = []
            for x in cyc:
                if isinstance(x, str):
                    if x not in G.names:
                        raise ParseError(f"generators[{k}]", f"unknown vertex {x!r}")
                    pts.append(G.id_of(x))
                elif isinstance(x, int) and 0 <= x < len(G.ids):
                    pts.append(G.ids[x])
                else:
                    raise ParseError(f"generators[{k}]", f"bad vertex reference {x!r}")
            resolved.append(pts)
        try:
            gens.append(cycles_to_perm(resolved, degree))
        except ValueError as exc:
            raise ParseError(f"generators[{k}]", str(exc)) from None
    return DigraphAction(group_closure(gens, max_order, degree), G)


def validate_digraph_action(G: Digraph, A: DigraphAction) -> ValidationReport:
    """Every generator must send edges to edges."""
    report = ValidationReport()
    for g in A.group.generators:
        for u, v in sorted(G.edges):
            if (A.act(g, u), A.act(g, v)) not in G.edges:
                report.violations.append(
                    Violation("edge not preserved", (g,), (G.name(u), G.name(v))))
    return report


def check_invariant(sub: Digraph, A: DigraphAction) -> None:
    """Raise :class:`NotInvariant` unless the subgraph is mapped into itself."""
    ids = set(sub.ids)
    for g in A.group.generators:
        for v in sub.ids:
            if A.act(g, v) not in ids:
                raise NotInvariant(f"generator {g} moves vertex {sub.name(v)} out of the subgraph")
        for u, v in sorted(sub.edges):
            if (A.act(g, u), A.act(g, v)) not in sub.edges:
                raise NotInvariant(f"generator {g} moves edge ({sub.name(u)}, {sub.name(v)}) out of the subgraph")


def action_on_path_chains(A: DigraphAction, pc: PathComplex, g: int) -> list[Matrix]:
    """Matrices of ``e_p -> e_{g p}`` on each ``Omega_n``, in the path complex bases."""
    mats = []
    for n in range(pc.valid_through + 1):
        cols = []
        for j in range(pc.rank(n)):
            chain = {A.act_path(g, p): c for p, c in pc.omega_chain(n, j).items()}
            cols.append(pc.coordinates(n, chain))
        mats.append(Matrix.from_sparse_columns(cols, pc.rank(n), pc.ring))
    return mats


# ---------------------------------------------------------------------------
# simplicial groups, classifying spaces, twisting functions


class ConstantSimplicialGroup(SimplicialSet):
    """``Gamma`` in every degree; simplices are ``(n, g)``."""

    def __init__(self, group: FiniteGroup, cap: int):
        self.group = group
        self.cap = cap

    def dim(self, s):
        return s[0]

    def face(self, i, s):
        return (s[0] - 1, s[1])

    def degeneracy(self, i, s):
        return (s[0] + 1, s[1])

    def is_degenerate(self, s):
        return s[0] > 0

    def extensions(self, s):
        return [(s[0] + 1, s[1])]

    def _level(self, n):
        return [(n, g) for g in range(self.group.order)]

    def mul(self, a, b):
        return (a[0], self.group.mul(a[1], b[1]))

    def inverse(self, a):
        return (a[0], self.group.inv[a[1]])

    def unit(self, n):
        return (n, 0)


# merge order for inner faces of the classifying space
REVERSED_CONVENTION = "reversed"  # (x_i, x_{i+1}) -> x_{i+1} x_i
CLASSICAL_CONVENTION = "classical"  # (x_i, x_{i+1}) -> x_i x_{i+1}


class ClassifyingSpace(SimplicialSet):
    """``B Gamma`` with ``n``-simplices the tuples in ``Gamma^n``."""

    def __init__(self, group: FiniteGroup, cap: int, convention: str = REVERSED_CONVENTION):
        if convention not in (REVERSED_CONVENTION, CLASSICAL_CONVENTION):
            raise ValueError(f"unknown convention {convention!r}")
        self.group = group
        self.cap = cap
        self.convention = convention

    def dim(self, s):
        return len(s)

    def _merge(self, a, b):
        if self.convention == REVERSED_CONVENTION:
            return self.group.mul(b, a)
        return self.group.mul(a, b)

    def face(self, i, s):
        n = len(s)
        if i == 0:
            return s[1:]
        if i == n:
            return s[:-1]
        return s[:i - 1] + (self._merge(s[i - 1], s[i]),) + s[i + 1:]

    def degeneracy(self, i, s):
        return s[:i] + (0,) + s[i:]

    def is_degenerate(self, s):
        return 0 in s

    def nondegenerate(self, n):
        return list(itertools.product(range(1, self.group.order), repeat=n))

    def extensions(self, s):
        return [s + (g,) for g in range(self.group.order)]

    def _level(self, n):
        return list(itertools.product(range(self.group.order), repeat=n))


@dataclass
class TwistingFunction:
    """``tau: X_n -> G_{n-1}`` for ``n >= 1``; ``sigma`` is the pointwise inverse."""

    source: SimplicialSet
    group: ConstantSimplicialGroup
    tau: Callable

    def sigma(self, x):
        return self.group.inverse(self.tau(x))


def validate_twisting(tf: TwistingFunction, upto: int | None = None) -> ValidationReport:
    """Check the four twisting-function identities on every simplex of dimension ``1..upto``."""
    X, G = tf.source, tf.group
    upto = X.cap if upto is None else upto
    report = ValidationReport()
    for n in range(1, upto + 1):
        for x in X.level(n):
            t = tf.tau(x)
            if n >= 2:
                lhs = G.face(0, t)
                rhs = G.mul(G.inverse(tf.tau(X.face(0, x))), tf.tau(X.face(1, x)))
                if lhs != rhs:
                    report.violations.append(Violation("d0 tau = tau(d0 x)^-1 tau(d1 x)", (0,), x))
                for i in range(1, n):
                    if G.face(i, t) != tf.tau(X.face(i + 1, x)):
                        report.violations.append(Violation("d_i tau = tau d_{i+1}", (i,), x))
            if n + 1 <= X.cap:
                for i in range(n):
                    if G.degeneracy(i, t) != tf.tau(X.degeneracy(i + 1, x)):
                        report.violations.append(Violation("s_i tau = tau s_{i+1}", (i,), x))
        if n <= X.cap:
            for v in X.level(n - 1):
                if tf.tau(X.degeneracy(0, v)) != G.unit(n - 1):
                    report.violations.append(Violation("tau s_0 = 1", (0,), v))
    return report


def classifying_space(group: FiniteGroup, cap: int, convention: str = REVERSED_CONVENTION):
    """``(B Gamma, tau)`` with ``tau`` the first-coordinate projection."""
    B = ClassifyingSpace(group, cap, convention)
    G = ConstantSimplicialGroup(group, cap)
    return B, TwistingFunction(B, G, lambda x: (len(x) - 1, x[0]))


# ---------------------------------------------------------------------------
# twisted products


class MarkedGSet:
    """Marked simplicial set with a levelwise action of a simplicial group.

    ``act(g, f)`` takes a group simplex and a simplex of the same dimension.
    """

    def __init__(self, marked: MarkedSimplicialSet, group: ConstantSimplicialGroup, act: Callable):
        self.marked = marked
        self.group = group
        self.act = act
        F = marked.sset
        self.degenerate_orbits = all(
            F.is_degenerate(act((1, g), F.degeneracy(0, v)))
            for g in range(group.group.order) for v in F.level(0))

    @property
    def sset(self) -> SimplicialSet:
        return self.marked.sset

    def witness(self):
        F = self.sset
        for g in range(self.group.group.order):
            for v in F.level(0):
                e = self.act((1, g), F.degeneracy(0, v))
                if not F.is_degenerate(e):
                    return g, v, e
        return None


def validate_gset(FM: MarkedGSet, upto: int | None = None) -> ValidationReport:
    """The action commutes with faces and degeneracies and preserves marked edges."""
    F, G = FM.sset, FM.group
    upto = F.cap if upto is None else upto
    report = ValidationReport()
    for n in range(upto + 1):
        for g in G.level(n):
            for f in F.level(n):
                gf = FM.act(g, f)
                for i in range(n + 1 if n else 0):
                    if F.face(i, gf) != FM.act(G.face(i, g), F.face(i, f)):
                        report.violations.append(Violation("action vs face", (i,), (g, f)))
                if n + 1 <= F.cap:
                    for i in range(n + 1):
                        if F.degeneracy(i, gf) != FM.act(G.degeneracy(i, g), F.degeneracy(i, f)):
                            report.violations.append(Violation("action vs degeneracy", (i,), (g, f)))
                if n == 1 and f in FM.marked.marked and gf not in FM.marked.marked:
                    report.violations.append(Violation("marked edge not preserved", (), (g, f)))
    return report


def nerve_gset(A: DigraphAction, cap: int, level_budget: int = DEFAULT_LEVEL_BUDGET) -> MarkedGSet:
    G = ConstantSimplicialGroup(A.group, cap)
    return MarkedGSet(nerve_marked(A.graph, cap, level_budget), G, lambda g, f: A.act_path(g[1], f))


class TwistedProduct(SimplicialSet):
    """``X x_tau F`` with ``d_0 (x, f) = (d_0 x, tau(x) . d_0 f)``; other structure maps componentwise."""

    def __init__(self, X: SimplicialSet, tf: TwistingFunction, F: SimplicialSet, act: Callable):
        if X.cap != F.cap:
            from .sset import CapMismatch
            raise CapMismatch(f"caps differ: {X.cap} vs {F.cap}")
        self.X, self.tf, self.F, self.act = X, tf, F, act
        self.cap = X.cap
        self.level_budget = getattr(F, "level_budget", None)

    def dim(self, s):
        return self.X.dim(s[0])

    def face(self, i, s):
        x, f = s
        if i == 0:
            return (self.X.face(0, x), self.act(self.tf.tau(x), self.F.face(0, f)))
        return (self.X.face(i, x), self.F.face(i, f))

    def degeneracy(self, i, s):
        return (self.X.degeneracy(i, s[0]), self.F.degeneracy(i, s[1]))

    def is_degenerate(self, s):
        x, f = s
        n = self.X.dim(x)
        return any(self.X.degeneracy(i, self.X.face(i, x)) == x
                   and self.F.degeneracy(i, self.F.face(i, f)) == f for i in range(n))

    def extensions(self, s):
        # the last face is untwisted, so extensions split as a product
        return [(a, b) for a in self.X.extensions(s[0]) for b in self.F.extensions(s[1])]

    def _level(self, n):
        return [(a, b) for a in self.X.level(n) for b in self.F.level(n)]


def marked_twisted_product(X: SimplicialSet, tf: TwistingFunction, FM: MarkedGSet) -> MarkedSimplicialSet:
    """Twisted product marked by ``s_0(X_0) x M`` together with ``X_1 x s_0(F_0)``."""
    if tf.source is not X:
        raise InvalidTwisting("twisting function has a different source")
    if not FM.degenerate_orbits:
        g, v, e = FM.witness()
        raise HypothesisViolated(f"group element {g} sends s_0({v!r}) to nondegenerate {e!r}")
    T = TwistedProduct(X, tf, FM.sset, FM.act)
    F = FM.sset
    degenerate_x = {X.degeneracy(0, v) for v in X.level(0)}
    degenerate_f = {F.degeneracy(0, v) for v in F.level(0)}
    marked = [(b, f) for b in X.level(1) for f in FM.marked.marked if b in degenerate_x]
    marked += [(b, f) for b in X.level(1) for f in degenerate_f]
    return MarkedSimplicialSet(T, marked)


def borel_marked(A: DigraphAction, cap: int, level_budget: int = DEFAULT_LEVEL_BUDGET) -> MarkedSimplicialSet:
    """The Borel construction ``B Gamma x_tau Nrv(G)`` with its twisted-product marking."""
    B, tf = classifying_space(A.group, cap)
    return marked_twisted_product(B, tf, nerve_gset(A, cap, level_budget))


class BorelQuotient(SimplicialSet):
    """``E Gamma x_Gamma Nrv(G)`` on orbit representatives ``(0, b, f)``.

    ``E Gamma`` simplices are ``(g, b)`` with ``g`` the top group entry and
    ``b`` in ``B Gamma``; ``Gamma`` acts freely on the top entry, so every
    orbit has exactly one representative whose top entry is the identity.
    """

    def __init__(self, A: DigraphAction, cap: int, level_budget: int = DEFAULT_LEVEL_BUDGET):
        self.A = A
        self.group = A.group
        self.B = ClassifyingSpace(A.group, cap)
        self.nerve = Nerve(A.graph, cap, level_budget)
        self.cap = cap

    def normalize(self, g, b, f):
        return (0, b, self.A.act_path(g, f))

    def raw_face(self, i, s):
        g, b, f = s
        if i == 0:
            return (self.group.mul(b[0], g) if b else g, self.B.face(0, b), self.nerve.face(0, f))
        return (g, self.B.face(i, b), self.nerve.face(i, f))

    def dim(self, s):
        return len(s[1])

    def face(self, i, s):
        return self.normalize(*self.raw_face(i, s))

    def degeneracy(self, i, s):
        g, b, f = s
        return (g, self.B.degeneracy(i, b), self.nerve.degeneracy(i, f))

    def is_degenerate(self, s):
        _, b, f = s
        return any(self.B.degeneracy(i, self.B.face(i, b)) == b
                   and self.nerve.degeneracy(i, self.nerve.face(i, f)) == f for i in range(len(b)))

    def extensions(self, s):
        return [(0, b, f) for b in self.B.extensions(s[1]) for f in self.nerve.extensions(s[2])]

    def _level(self, n):
        return [(0, b, f) for b in self.B.level(n) for f in self.nerve.level(n)]

    def raw_marked(self, g, b, f) -> bool:
        return (b == (0,) and f in self.A.graph.edges) or f[0] == f[1]

    def orbit_marked(self, s) -> bool:
        _, b, f = s
        inv = self.group.inv
        return any(self.raw_marked(h, b, self.A.act_path(inv[h], f)) for h in range(self.group.order))


def borel_via_quotient(A: DigraphAction, cap: int, level_budget: int = DEFAULT_LEVEL_BUDGET) -> MarkedSimplicialSet:
    Q = BorelQuotient(A, cap, level_budget)
    return MarkedSimplicialSet(Q, [s for s in Q.level(1) if Q.orbit_marked(s)])


def borel_phi(A: DigraphAction, s):
    g, b, f = s
    return (b, A.act_path(g, f))


def borel_psi(s):
    b, f = s
    return (0, b, f)


def check_borel_isomorphism(A: DigraphAction, twisted: MarkedSimplicialSet,
                            quotient: MarkedSimplicialSet, upto: int) -> ValidationReport:
    """Check that ``phi`` and ``psi`` are inverse marked simplicial isomorphisms through ``upto``."""
    T, Q = twisted.sset, quotient.sset
    report = ValidationReport()
    for n in range(upto + 1):
        tl, ql = T.level(n), Q.level(n)
        if {borel_phi(A, s) for s in ql} != set(tl):
            report.violations.append(Violation("phi not onto", (n,), None))
        for s in ql:
            t = borel_phi(A, s)
            if borel_psi(t) != s:
                report.violations.append(Violation("psi phi != id", (n,), s))
            for i in range(n + 1 if n else 0):
                if borel_phi(A, Q.face(i, s)) != T.face(i, t):
                    report.violations.append(Violation("phi vs face", (i,), s))
            if n + 1 <= upto:
                for i in range(n + 1):
                    if borel_phi(A, Q.degeneracy(i, s)) != T.degeneracy(i, t):
                        report.violations.append(Violation("phi vs degeneracy", (i,), s))
        for t in tl:
            if borel_phi(A, borel_psi(t)) != t:
                report.violations.append(Violation("phi psi != id", (n,), t))
    if {borel_phi(A, e) for e in quotient.marked} != set(twisted.marked):
        report.violations.append(Violation("markings differ", (1,), None))
    return report
