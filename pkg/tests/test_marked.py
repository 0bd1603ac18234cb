import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from eqpath.digraph import Digraph, Nerve, load_digraph, nerve_marked
from eqpath.groups import DigraphAction, borel_marked, group_closure
from eqpath.linalg import GF, QQ, ZZ, rank
from eqpath.marked import (
    MarkedSimplicialSet,
    NonFieldRing,
    allowed_basis,
    box_product,
    cochain_quotient,
    edge_face,
    induced_chain_map,
    path_complex,
    path_homology,
    validate_marking,
)
from eqpath.sset import StandardSimplex, boundary, normalized_complex
from checks import kunneth_holds, squares_to_zero
from oracles import in_integer_span, random_digraph

EX1 = '{"vertices": ["0", "1"], "edges": [["0", "1"], ["1", "0"]]}'


def digraph(n, edges):
    return Digraph.from_names([str(i) for i in range(n)], [(str(u), str(v)) for u, v in edges])


def example1_action():
    G = load_digraph(EX1)
    return DigraphAction(group_closure([(1, 0)]), G)


def random_marked(rng, cap):
    """Nerve of a random digraph with a random subset of its 1-simplices marked."""
    n, edges = random_digraph(rng, 4, 0.5)
    N = Nerve(digraph(n, edges), cap)
    marked = [e for e in N.level(1) if rng.random() < 0.6]
    return MarkedSimplicialSet(N, marked)


def test_marking_contains_degenerate_edges():
    N = Nerve(digraph(2, {(0, 1)}), 2)
    XM = MarkedSimplicialSet(N, [])
    assert XM.marked == {(0, 0), (1, 1)}
    assert validate_marking(XM).ok


def test_edge_face_trivial_cases():
    N = Nerve(digraph(3, {(0, 1), (1, 2), (0, 2)}), 3)
    assert edge_face(N, (0, 1), 1) == (0, 1)
    assert edge_face(N, (0, 1, 2), 2) == (1, 2)
    assert edge_face(N, (0, 1, 2), 1) == (0, 1)


def _raw_twisted_face(perms, i, s):
    """Face of ``B Gamma x_tau Nrv`` written out from the group's permutations."""
    b, f = s
    if i == 0:
        g = perms[b[0]]
        return b[1:], tuple(g[v] for v in f[1:])
    if i == len(b):
        return b[:-1], f[:-1]
    # inner faces of B Gamma merge the entries as x_{i+1} x_i
    p, q = perms[b[i - 1]], perms[b[i]]
    merged = tuple(q[p[v]] for v in range(len(p)))
    return b[:i - 1] + (perms.index(merged),) + b[i + 1:], f[:i] + f[i + 1:]


def test_edge_face_on_borel_simplices_matches_raw_faces():
    A = DigraphAction(group_closure([(1, 2, 0)]), digraph(3, {(0, 1), (1, 2), (2, 0)}))
    T = borel_marked(A, 3).sset
    perms = list(A.group.perms)
    for s in T.level(3):
        for k in range(1, 4):
            t = s
            for i in range(3, k, -1):
                t = _raw_twisted_face(perms, i, t)
            for _ in range(k - 1):
                t = _raw_twisted_face(perms, 0, t)
            assert edge_face(T, s, k) == t


def test_allowed_basis_in_degree_zero_is_every_vertex():
    XM = nerve_marked(digraph(3, {(0, 1)}), 2)
    assert allowed_basis(XM, 0) == [(0,), (1,), (2,)]


@pytest.mark.parametrize("seed", range(5))
def test_allowed_simplices_of_nerve_are_paths(seed):
    n, edges = random_digraph(random.Random(seed), 4, 0.5)
    XM = nerve_marked(digraph(n, edges), 3)
    for k in range(4):
        paths = sorted(p for p in itertools.product(range(n), repeat=k + 1)
                       if all(p[i] != p[i + 1] and (p[i], p[i + 1]) in edges for i in range(k)))
        assert allowed_basis(XM, k) == paths


def test_borel_allowed_edges_of_example_1():
    XM = borel_marked(example1_action(), 2)
    X = XM.sset
    all_edges = X.level(1)
    assert len(all_edges) == 8
    allowed = [e for e in all_edges if e in XM.marked]
    assert len(allowed) == 6
    assert len([e for e in allowed if not X.is_degenerate(e)]) == 4
    assert len(allowed_basis(XM, 1)) == 4


def test_sharp_marking_gives_all_normalized_chains():
    X = StandardSimplex(2, 3)
    pc = path_complex(MarkedSimplicialSet.sharp(X), ZZ, 3)
    assert pc.ranks() == [len(X.nondegenerate(n)) for n in range(4)]
    assert pc.differentials[1:] == normalized_complex(X, ZZ, 3).differentials[1:]


def test_omega_strictly_smaller_than_allowed():
    XM = nerve_marked(digraph(3, {(0, 1), (1, 2)}), 2)
    pc = path_complex(XM, ZZ, 2)
    assert pc.allowed[2] == [(0, 1, 2)]
    assert pc.rank(2) == 0


def test_example_1_omega_is_spanned_by_the_two_alternating_paths():
    pc = path_complex(nerve_marked(load_digraph(EX1), 5), ZZ, 5)
    for k in range(6):
        p = tuple(i % 2 for i in range(k + 1))
        q = tuple((i + 1) % 2 for i in range(k + 1))
        assert pc.allowed[k] == sorted([p, q])
        chains = [pc.omega_chain(k, j) for j in range(pc.rank(k))]
        assert sorted(tuple(c) for c in chains) == sorted([(p,), (q,)])
        assert all(abs(v) == 1 for c in chains for v in c.values())
    hs = path_homology(nerve_marked(load_digraph(EX1), 5), ZZ, 4)
    assert [(h.free_rank, h.torsion) for h in hs] == [(1, ())] + [(0, ())] * 4


def test_point_has_homology_of_a_point():
    hs = path_homology(nerve_marked(digraph(1, set()), 3), ZZ, 2)
    assert [(h.free_rank, h.torsion) for h in hs] == [(1, ()), (0, ()), (0, ())]


@pytest.mark.parametrize("seed", range(8))
def test_omega_is_a_subcomplex_and_squares_to_zero(seed):
    XM = random_marked(random.Random(seed), 4)
    pc = path_complex(XM, ZZ, 4)
    X = XM.sset
    for n in range(1, 5):
        below = set(pc.allowed[n - 1])
        for j in range(pc.rank(n)):
            d = {}
            for s, c in pc.omega_chain(n, j).items():
                for f, e in boundary(X, s).items():
                    d[f] = d.get(f, 0) + c * e
            assert all(f in below for f, c in d.items() if c)
    assert squares_to_zero(pc.differentials)


@pytest.mark.parametrize("seed", range(6))
def test_omega_is_maximal(seed):
    rng = random.Random(100 + seed)
    XM = random_marked(rng, 3)
    pc = path_complex(XM, ZZ, 3)
    X = XM.sset
    for n in range(1, 4):
        gens = pc.allowed[n]
        if not gens or len(gens) > 7:
            continue
        below = set(pc.allowed[n - 1])
        basis = [[pc.omega[n][j].get(i, 0) for i in range(len(gens))] for j in range(pc.rank(n))]
        for coeffs in itertools.product((-1, 0, 1), repeat=len(gens)):
            d = {}
            for s, c in zip(gens, coeffs):
                for f, e in boundary(X, s).items():
                    d[f] = d.get(f, 0) + c * e
            if all(f in below for f, c in d.items() if c):
                assert in_integer_span(basis, coeffs)


def test_box_product_with_a_point_keeps_the_marking():
    point = MarkedSimplicialSet.sharp(StandardSimplex(0, 2))
    YN = nerve_marked(digraph(3, {(0, 1), (1, 2)}), 2)
    B = box_product(point, YN)
    assert sorted(e[1] for e in B.marked) == sorted(YN.marked)


@pytest.mark.parametrize("seed", range(6))
def test_box_product_marked_edge_count(seed):
    rng = random.Random(seed)
    XM, YN = random_marked(rng, 2), random_marked(rng, 2)
    X, Y = XM.sset, YN.sset
    mx = len([e for e in XM.marked if not X.is_degenerate(e)])
    my = len([e for e in YN.marked if not Y.is_degenerate(e)])
    x0, y0 = len(X.level(0)), len(Y.level(0))
    assert len(box_product(XM, YN).marked) == mx * y0 + x0 * my + x0 * y0


@pytest.mark.parametrize("seed", range(4))
def test_kunneth_on_random_nerves(seed):
    rng = random.Random(seed)
    n1, e1 = random_digraph(rng, 3, 0.6)
    n2, e2 = random_digraph(rng, 3, 0.6)
    assert kunneth_holds(nerve_marked(digraph(n1, e1), 3), nerve_marked(digraph(n2, e2), 3), ZZ, 3)


@pytest.mark.parametrize("seed", range(4))
def test_inclusion_of_digraphs_induces_a_chain_map(seed):
    n, edges = random_digraph(random.Random(seed), 4, 0.6)
    sub_edges = {e for e in edges if random.Random(seed + 50).random() < 0.6}
    big = path_complex(nerve_marked(digraph(n, edges), 3), ZZ, 3)
    small = path_complex(nerve_marked(digraph(n, sub_edges), 3), ZZ, 3)
    maps = [induced_chain_map(small, big, lambda s: s, k) for k in range(4)]
    for k in range(1, 4):
        assert big.differentials[k] @ maps[k] == maps[k - 1] @ small.differentials[k]


# ---------------------------------------------------------------------------
# cochains over fields


def test_cochain_quotient_of_sharp_marking_is_everything():
    X = StandardSimplex(2, 3)
    cq = cochain_quotient(MarkedSimplicialSet.sharp(X), GF(2), 3)
    assert cq.dims() == [len(X.nondegenerate(n)) for n in range(4)]
    assert all(not rows for rows in cq.ideal_rows)


def test_example_1_cochains_over_f2():
    cq = cochain_quotient(nerve_marked(load_digraph(EX1), 4), GF(2), 4)
    assert cq.dims() == [2] * 5


def test_cochain_quotient_needs_a_field():
    with pytest.raises(NonFieldRing):
        cochain_quotient(nerve_marked(load_digraph(EX1), 2), ZZ, 2)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([GF(2), GF(3), QQ]))
def test_cochain_dimension_matches_chain_rank(seed, field):
    XM = random_marked(random.Random(seed), 3)
    cq = cochain_quotient(XM, field, 3)
    pc = path_complex(XM, field, 3)
    assert cq.dims() == pc.ranks()
    for n in range(4):
        P = cq.pairing(pc, n)
        assert P.rows == P.cols == pc.rank(n)
        assert rank(P) == pc.rank(n)


@pytest.mark.parametrize("seed", range(4))
def test_ideal_is_two_sided_and_cup_is_well_defined(seed):
    rng = random.Random(seed)
    XM = random_marked(rng, 3)
    cq = cochain_quotient(XM, GF(3), 3)
    one = cq.ring(1)
    for p, q in [(0, 1), (1, 1), (1, 2), (0, 3)]:
        assert cq.ideal_is_two_sided(p, q)
        for i in range(cq.dim(p)):
            for j in range(cq.dim(q)):
                base = cq.cup(p, i, q, j)
                for jr in cq.ideal_rows[p][:3]:
                    f = dict(jr)
                    k = cq.reps[p][i]
                    f[k] = cq.ring(f.get(k, 0) + one)
                    shifted = cq.reduce(p + q, cq.cup_vectors(p, f, q, {cq.reps[q][j]: one}))
                    assert shifted == base


def test_cochain_coboundary_squares_to_zero():
    XM = borel_marked(example1_action(), 4)
    cq = cochain_quotient(XM, GF(2), 4)
    for n in range(1, len(cq.coboundary)):
        assert (cq.coboundary[n] @ cq.coboundary[n - 1]).is_zero()
