import itertools
from pathlib import Path

import pytest

from eqpath.digraph import load_digraph, nerve_marked
from eqpath.groups import (
    CLASSICAL_CONVENTION,
    ConstantSimplicialGroup,
    DigraphAction,
    HypothesisViolated,
    InvalidTwisting,
    MarkedGSet,
    OrderExceeded,
    borel_marked,
    borel_via_quotient,
    check_borel_isomorphism,
    check_invariant,
    classifying_space,
    cycles_to_perm,
    group_closure,
    load_group,
    marked_twisted_product,
    nerve_gset,
    validate_digraph_action,
    validate_gset,
    validate_twisting,
    action_on_path_chains,
    NotInvariant,
)
from eqpath.linalg import ZZ, Matrix
from eqpath.marked import LevelExplosion, MarkedSimplicialSet, box_product, path_complex
from eqpath.sset import StandardSimplex, validate
from oracles import as_document

DATA = Path(__file__).resolve().parent.parent / "data"
EX1 = '{"vertices": ["0", "1"], "edges": [["0", "1"], ["1", "0"]]}'
SWAP = {"generators": [{"cycles": [["0", "1"]]}]}
Z2 = [(1, 0)]
Z3 = [(1, 2, 0)]
Z4 = [(1, 2, 3, 0)]
S3 = [(1, 0, 2), (1, 2, 0)]


def triangle():
    """Both orientations of the 3-cycle; invariant under S3."""
    return load_digraph(as_document(3, {(u, v) for u in range(3) for v in range(3) if u != v}))


def example1():
    G = load_digraph(EX1)
    return load_group(SWAP, G)


def test_closure_orders():
    assert group_closure(Z2).order == 2
    assert group_closure([cycles_to_perm([[0, 7], [1, 6], [2, 5], [3, 4]], 8)]).order == 2
    S = group_closure(S3)
    assert S.order == 6 and not S.is_abelian()
    assert S.check_axioms().ok
    with pytest.raises(OrderExceeded):
        group_closure(S3, max_order=4)


def test_closure_order_is_canonical():
    a = group_closure(S3)
    b = group_closure(S3)
    assert a.perms == b.perms
    assert a.perms[0] == (0, 1, 2)
    # generators come right after the identity, in lexicographic order
    assert sorted(a.perms[1:3]) == list(a.perms[1:3])
    assert set(a.perms) == set(itertools.permutations(range(3)))


def test_action_validation():
    A = example1()
    assert validate_digraph_action(A.graph, A).ok
    G2 = load_digraph((DATA / "example2_digraph.json").read_text())
    A2 = load_group((DATA / "example2_group.json").read_text(), G2)
    assert A2.group.order == 2 and validate_digraph_action(G2, A2).ok
    G = load_digraph('{"vertices": ["u", "v"], "edges": [["u", "v"]]}')
    bad = load_group({"generators": [{"cycles": [["u", "v"]]}]}, G)
    report = validate_digraph_action(G, bad)
    assert [(v.indices, v.simplex) for v in report.violations] == [((1,), ("u", "v"))]


def test_invariant_subgraph_check():
    A = example1()
    check_invariant(load_digraph('{"vertices": ["0", "1"], "edges": []}'), A)
    with pytest.raises(NotInvariant):
        check_invariant(load_digraph('{"vertices": ["0"], "edges": []}'), A)


def test_bar_construction_of_z2():
    B, tf = classifying_space(group_closure(Z2), 4)
    for n in range(1, 5):
        assert B.nondegenerate(n) == [(1,) * n]


@pytest.mark.parametrize("gens", [Z2, Z3, Z4, S3], ids=["Z2", "Z3", "Z4", "S3"])
def test_twisting_axioms_hold(gens):
    B, tf = classifying_space(group_closure(gens), 4)
    assert validate(B, 4).ok
    report = validate_twisting(tf, 4)
    assert report.ok, str(report)
    for n in range(4):
        for x in B.level(n):
            assert tf.tau(B.degeneracy(0, x)) == (n, 0)


def test_first_twisting_axiom_for_s3_exhaustively():
    S = group_closure(S3)
    B, tf = classifying_space(S, 3)
    for n in (2, 3):
        for x in itertools.product(range(6), repeat=n):
            first = S.perms[tf.tau(x)[1]]
            a = S.perms[tf.tau(B.face(0, x))[1]]
            b = S.perms[tf.tau(B.face(1, x))[1]]
            a_inv = tuple(sorted(range(3), key=lambda v: a[v]))
            assert tuple(a_inv[b[v]] for v in range(3)) == first


def test_classical_merge_order_breaks_the_axiom_for_s3():
    B, tf = classifying_space(group_closure(S3), 3, CLASSICAL_CONVENTION)
    assert validate(B, 3).ok
    assert not validate_twisting(tf, 3).ok
    Bab, tfab = classifying_space(group_closure(Z3), 3, CLASSICAL_CONVENTION)
    assert validate_twisting(tfab, 3).ok


def test_twisted_product_of_z2_and_z3_is_simplicial():
    A = example1()
    T = borel_marked(A, 4)
    assert validate(T.sset, 4).ok
    G = load_digraph(as_document(3, {(0, 1), (1, 2), (2, 0)}))
    A3 = DigraphAction(group_closure(Z3), G)
    assert validate_digraph_action(G, A3).ok
    assert validate(borel_marked(A3, 4).sset, 4).ok
    assert validate_gset(nerve_gset(A3, 4)).ok


def test_trivial_group_gives_the_box_product():
    G = load_digraph(as_document(3, {(0, 1), (1, 2)}))
    A = DigraphAction(group_closure([], degree=3), G)
    T = borel_marked(A, 3)
    B, _ = classifying_space(A.group, 3)
    box = box_product(MarkedSimplicialSet.sharp(B), nerve_marked(G, 3))
    assert T.marked == box.marked
    for n in range(4):
        assert T.sset.level(n) == box.sset.level(n)
        for s in T.sset.level(n):
            for i in range(n + 1 if n else 0):
                assert T.sset.face(i, s) == box.sset.face(i, s)


def test_borel_allowed_levels_respect_the_budget():
    T = borel_marked(example1(), 4, level_budget=40)
    with pytest.raises(LevelExplosion) as info:
        path_complex(T, ZZ, 4)
    assert info.value.count > 40
    path_complex(borel_marked(example1(), 2, level_budget=40), ZZ, 2)


def test_example_1_borel_counts():
    T = borel_marked(example1(), 4)
    assert [len(T.sset.level(n)) for n in range(5)] == [2 ** n * 2 ** (n + 1) for n in range(5)]
    assert len(T.marked) == 6


def test_twisted_product_rejects_bad_inputs():
    A = example1()
    B, tf = classifying_space(A.group, 2)
    other, _ = classifying_space(A.group, 2)
    with pytest.raises(InvalidTwisting):
        marked_twisted_product(other, tf, nerve_gset(A, 2))
    # an action moving a degenerate edge off the diagonal
    X = StandardSimplex(1, 2)
    G1 = ConstantSimplicialGroup(A.group, 2)

    def shove(g, f):
        if g[1] and len(f) == 2 and f[0] == f[1]:
            return (0, 1)
        return f
    with pytest.raises(HypothesisViolated):
        marked_twisted_product(B, tf, MarkedGSet(MarkedSimplicialSet.sharp(X), G1, shove))


@pytest.mark.parametrize("gens", [Z2, S3], ids=["Z2", "S3"])
def test_borel_quotient_is_isomorphic(gens):
    if len(gens[0]) == 2:
        A = example1()
    else:
        A = DigraphAction(group_closure(gens), triangle())
    cap = 4 if A.group.order == 2 else 3
    q = borel_via_quotient(A, cap)
    t = borel_marked(A, cap)
    assert check_borel_isomorphism(A, t, q, cap).ok
    for n in range(cap + 1):
        assert len(q.sset.level(n)) == A.group.order ** n * len(t.sset.F.level(n))


def test_action_matrices():
    A = example1()
    pc = path_complex(nerve_marked(A.graph, 4), ZZ, 4)
    ident = action_on_path_chains(A, pc, 0)
    assert all(m == Matrix.identity(m.rows) for m in ident)
    swap = action_on_path_chains(A, pc, 1)
    for k in range(5):
        p = tuple(i % 2 for i in range(k + 1))
        q = tuple((i + 1) % 2 for i in range(k + 1))
        img = {A.act_path(1, s): c for s, c in pc.omega_chain(k, 0).items()}
        assert set(img) <= {p, q} and set(img) != set(pc.omega_chain(k, 0))
        assert swap[k] @ swap[k] == Matrix.identity(2)
        assert [swap[k][i, i] for i in range(2)] == [0, 0]


def test_action_is_a_homomorphism_of_chain_automorphisms():
    A = DigraphAction(group_closure(S3), triangle())
    pc = path_complex(nerve_marked(A.graph, 3), ZZ, 3)
    mats = [action_on_path_chains(A, pc, g) for g in range(6)]
    S = A.group
    for g in range(6):
        for h in range(6):
            gh = S.mul(g, h)
            for n in range(4):
                assert mats[g][n] @ mats[h][n] == mats[gh][n]
        for n in range(1, 4):
            assert pc.differentials[n] @ mats[g][n] == mats[g][n - 1] @ pc.differentials[n]
