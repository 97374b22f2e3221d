import itertools
import json

import numpy as np

from endotrivial.algebra import automorphism, get_algebra
from endotrivial.linalg import rank_mod
from endotrivial.modules import (
    ModuleRep,
    WeightDiagram,
    build_weyl_sl2,
    character,
    check_valid,
    direct_sum,
    dual,
    dumps,
    frobenius_twist_trivial,
    inclusion,
    loads,
    natural_sl3,
    pim_module,
    quotient,
    submodule_closure,
    regular,
    restrict,
    submodule,
    tensor,
    trivial,
    twist,
    weight_diagram,
)
from endotrivial.structure import dade_split, is_isomorphic, is_projective, projective_multiplicities
from endotrivial.weights import Weight


def test_check_valid_examples():
    u = get_algebra("sl2-u1", 2)
    assert check_valid(trivial(u))[0]
    assert check_valid(ModuleRep(u, [np.array([[0, 1], [0, 0]])]))[0]
    ok, msg = check_valid(ModuleRep(u, [np.eye(2, dtype=np.int64)]))
    assert not ok and msg


def test_unit_and_regular_tensor():
    u = get_algebra("sl2-u1", 2)
    a = regular(u)
    assert is_isomorphic(tensor(trivial(u), a), a)
    aa = tensor(a, a)
    assert rank_mod(aa.gen("f"), 2) == 2
    split = dade_split(aa, 0)
    assert split.multiplicity == 2 and split.complement.dim == 0


def test_grading_adds_under_tensor():
    b = get_algebra("sl3-b1", 2)
    a1, a2 = b.pres.roots.simple_roots
    m = tensor(character(b, -a1), character(b, -a2))
    assert m.weights == (-a1 - a2,)


def test_dual_examples():
    u = get_algebra("sl2-u1", 3)
    k = trivial(u)
    assert is_isomorphic(dual(k), k)
    a = regular(u)
    dd = dual(dual(a))
    assert all(np.array_equal(x, y) for x, y in zip(dd.action, a.action))
    assert is_isomorphic(dual(a), a)


def test_restrict_identity_and_drop_torus():
    b = get_algebra("sl2-b1", 3)
    m, _ = pim_module(b, 1)
    ident = np.eye(b.d, dtype=np.int64)
    same = restrict(m, b, ident)
    assert all(np.array_equal(x, y) for x, y in zip(same.action, m.action))
    u = get_algebra("sl2-u1", 3)
    r = restrict(m, u, inclusion("sl2-u1", "sl2-b1", 3))
    assert r.dim == m.dim and np.array_equal(r.gen("f"), m.gen("f"))


def test_weyl_module_restriction_to_u1():
    # V(2) over F_2: f sends v0 -> v1 and v1 -> 2 v2 = 0, so f has rank 1
    u = get_algebra("sl2-u1", 2)
    v2 = build_weyl_sl2(2, 2)
    r = restrict(v2.ungraded(), u, inclusion("sl2-u1", "sl2-g1", 2))
    assert rank_mod(r.gen("f"), 2) == 1
    assert projective_multiplicities(r) == [1]
    assert dade_split(r, 0).complement.dim == 1


def test_weyl_module_shape():
    v = build_weyl_sl2(4, 5)
    assert v.dim == 5 and check_valid(v)[0]
    assert [w.coords[0] for w in v.weights] == [4, 2, 0, -2, -4]
    assert build_weyl_sl2(0, 3).dim == 1
    assert check_valid(build_weyl_sl2(1, 3))[0]


def test_twists():
    u = get_algebra("sl2-u1", 3)
    k = trivial(u)
    phi = automorphism(u.pres, "torus-scaling", t=(2,))
    assert is_isomorphic(twist(k, phi), k)
    ident = automorphism(u.pres, "torus-scaling", t=(1,))
    a = regular(u)
    assert all(np.array_equal(x, y) for x, y in zip(twist(a, ident).action, a.action))
    g = get_algebra("sl2-g1", 3)
    p0, _ = pim_module(g, 0)
    s = automorphism(g.pres, "weyl", word=[1])
    assert is_projective(twist(p0.ungraded(), s))


def test_frobenius_twist_trivial_examples():
    b = get_algebra("sl3-b1", 2)
    a1, a2 = b.pres.roots.simple_roots
    u1 = frobenius_twist_trivial(b, [-a1, -a2, -a1 - a2])
    assert u1.dim == 3 and not any(x.any() for x in u1.action)
    assert set(u1.weights) == {-2 * a1, -2 * a2, -2 * a1 - 2 * a2}
    assert frobenius_twist_trivial(b, []).dim == 0
    assert is_isomorphic(frobenius_twist_trivial(b, [Weight((0, 0))]), trivial(b), graded=True)


def test_weight_diagrams():
    b = get_algebra("sl3-b1", 2)
    rs = b.pres.roots
    a1, a2 = rs.simple_roots
    k = weight_diagram(trivial(b))
    assert len(k.nodes) == 1 and not k.arrows
    n1 = tensor(natural_sl3(b), character(b, -2 * a1 - a2 - rs.fundamental(0)))
    d = weight_diagram(n1)
    assert len(d.nodes) == 3
    assert d.arrow_set() == {(-2 * a1 - a2, -3 * a1 - a2, 0), (-3 * a1 - a2, -3 * a1 - 2 * a2, 1)}
    again = WeightDiagram.from_dot(d.to_dot())
    assert again.node_set() == d.node_set() and again.arrow_set() == d.arrow_set()


def test_submodule_and_quotient_are_valid():
    v = build_weyl_sl2(4, 3)
    span = submodule_closure(v, np.eye(5, dtype=np.int64)[:, 3:])
    assert 0 < span.shape[1] < v.dim
    sub, incl = submodule(v, span)
    quo, proj = quotient(v, incl)
    assert sub.dim + quo.dim == v.dim
    assert check_valid(sub)[0] and check_valid(quo)[0]


def test_json_round_trip():
    b = get_algebra("sl3-b1", 2)
    m = tensor(natural_sl3(b), dual(natural_sl3(b)))
    again = loads(dumps(m))
    assert again.weights == m.weights
    assert all(np.array_equal(x, y) for x, y in zip(again.action, m.action))
    assert json.loads(dumps(m)) == json.loads(json.dumps(m.to_json()))


def test_tensor_laws_and_closure():
    u = get_algebra("sl2-u1", 3)
    pool = [trivial(u), regular(u), ModuleRep(u, [np.array([[0, 0], [1, 0]])])]
    for a, b, c in itertools.product(pool, repeat=3):
        if a.dim * b.dim * c.dim > 6:
            continue
        left = tensor(tensor(a, b), c)
        right = tensor(a, tensor(b, c))
        assert check_valid(left)[0]
        assert is_isomorphic(left, right)
    for a, b in itertools.product(pool, repeat=2):
        dm = dual(tensor(a, b))
        assert is_isomorphic(dm, tensor(dual(b), dual(a)))
        assert is_isomorphic(dm, tensor(dual(a), dual(b)))


def test_graded_operations_keep_grading():
    b = get_algebra("sl3-b1", 2)
    v = natural_sl3(b)
    for m in (v, dual(v), tensor(v, v), direct_sum(v, dual(v))):
        assert m.graded and check_valid(m)[0]
