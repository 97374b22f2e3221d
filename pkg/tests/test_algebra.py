import numpy as np
import pytest

from endotrivial.algebra import AlgebraError, automorphism, build_algebra, get_algebra, is_restricted_map
from endotrivial.lie import PRESETS, PresentationError, RestrictedLiePresentation, preset
from endotrivial.linalg import matmul_mod, matpow_mod, rank_mod
from endotrivial.weights import A2, Weight, dot_action


@pytest.mark.parametrize("name,p,d", [("sl2-u1", 3, 1), ("sl3-u1", 2, 3), ("sl2-b1", 2, 2), ("sl3-b1", 2, 5)])
def test_preset_dimensions(name, p, d):
    alg = get_algebra(name, p)
    assert alg.d == d
    assert alg.dim == p**d


def test_sl3_u1_brackets_and_p_powers():
    pres = preset("sl3-u1", 2)
    f1, f2, f12 = (pres.index(n) for n in ("f1", "f2", "f12"))
    assert list(pres.brackets[f1, f2]) == [int(i == f12) for i in range(3)]
    assert not pres.p_power.any()


def test_sl2_b1_p2_brackets_vanish_and_h_is_toral():
    pres = preset("sl2-b1", 2)
    h, f = pres.index("h"), pres.index("f")
    assert not pres.brackets[h, f].any()
    assert list(pres.p_power[h]) == [int(i == h) for i in range(2)]


def test_truncated_polynomial_products():
    a2 = get_algebra("sl2-u1", 2)
    f = a2.lie_element([1])
    assert not a2.mul(f, f).any()
    a3 = get_algebra("sl2-u1", 3)
    f = a3.lie_element([1])
    ff = a3.mul(f, f)
    assert np.array_equal(ff, a3.basis_element((2,)))
    assert not a3.mul(ff, f).any()


@pytest.mark.parametrize("name", PRESETS)
@pytest.mark.parametrize("p", [2, 3])
def test_generators_satisfy_relations(name, p):
    alg = get_algebra(name, p)
    assert alg.check_relations()
    pres = alg.pres
    # independent oracle: brackets and p-maps directly on the generator matrices
    g = [np.asarray(x.array if hasattr(x, "array") else x) for x in alg.gens]
    for i in range(pres.d):
        for j in range(pres.d):
            comm = (matmul_mod(g[i], g[j], p) - matmul_mod(g[j], g[i], p)) % p
            rhs = sum(int(c) * g[k] for k, c in enumerate(pres.brackets[i, j])) % p
            assert np.array_equal(comm, rhs % p)
        lhs = matpow_mod(g[i], p, p)
        rhs = sum(int(c) * g[k] for k, c in enumerate(pres.p_power[i])) % p
        assert np.array_equal(lhs, rhs % p)


@pytest.mark.parametrize("name,p", [("sl2-u1", 3), ("sl2-b1", 3), ("sl3-u1", 2), ("sl3-b1", 2), ("sl2-g1", 2)])
def test_associative(name, p):
    assert get_algebra(name, p).check_associative()


def test_associative_sampled_large():
    assert get_algebra("sl2-g1", 3).check_associative(samples=300)


@pytest.mark.parametrize("name,p", [("sl2-u1", 3), ("sl2-b1", 3), ("sl3-b1", 2), ("sl2-g1", 3), ("sl2-g1", 5)])
def test_pims_cover_algebra_and_socles(name, p):
    alg = get_algebra(name, p)
    assert sum(pim.dim * pim.simple_dim for pim in alg.pims) == alg.dim
    rad = alg.radical_basis
    for pim in alg.pims:
        u = pim.socle_element
        assert u.any()
        # rad(A) . u = 0: u spans the socle of its PIM
        for c in range(rad.shape[1]):
            assert not alg.mul(rad[:, c], u).any()
        # t counts the rank of u on the PIM itself
        on_pim = matmul_mod(alg.left_matrix(u), pim.basis, p)
        assert rank_mod(on_pim, p) == pim.t


def test_sl2_g1_pim_dimensions():
    assert [pim.dim for pim in get_algebra("sl2-g1", 3).pims] == [6, 6, 3]
    assert [pim.simple_dim for pim in get_algebra("sl2-g1", 3).pims] == [1, 2, 3]


def test_torus_scaling_identity_and_general():
    pres = preset("sl3-u1", 2)
    auto = automorphism(pres, "torus-scaling", t=(1, 1))
    assert np.array_equal(auto.matrix, np.eye(3, dtype=np.int64))
    pres3 = preset("sl3-b1", 3)
    auto = automorphism(pres3, "torus-scaling", t=(2, 1))
    assert is_restricted_map(pres3, get_algebra("sl3-b1", 3), auto.matrix)
    # f1 has weight -a1, scaled by 2^-1 = 2; f12 by 2^-1 too
    assert auto.matrix[pres3.index("f1"), pres3.index("f1")] == 2
    with pytest.raises(AlgebraError):
        automorphism(pres3, "torus-scaling", t=(0, 1))


def test_weyl_twist_swaps_e_and_minus_f():
    pres = preset("sl2-g1", 3)
    s = automorphism(pres, "weyl", word=[1])
    f, h, e = pres.index("f"), pres.index("h"), pres.index("e")
    assert s.matrix[e, f] == 2 and s.matrix[f, e] == 2 and s.matrix[h, h] == 2
    assert s.apply_weight(Weight((4,))) == Weight((-4,))


def test_non_automorphism_rejected():
    pres = preset("sl2-g1", 3)
    bad = np.diag([1, 1, 2])
    with pytest.raises(AlgebraError):
        automorphism(pres, "matrix", matrix=bad)


def test_dot_action_values():
    a1, a2 = A2.simple_roots
    w1, w2 = A2.fundamental(0), A2.fundamental(1)
    assert dot_action(A2, 0, w2) == -2 * w1 + 2 * w2
    mu = -2 * a1 - a2 - w1
    assert mu - dot_action(A2, 0, w2) == -2 * (a1 + a2)
    assert mu - dot_action(A2, 1, w2) == -3 * a1
    for lam in (w1, w2, mu, Weight((3, -5))):
        for i in (0, 1):
            assert dot_action(A2, i, dot_action(A2, i, lam)) == lam


def test_presentation_json_round_trip_and_validation():
    pres = preset("sl3-b1", 2)
    again = RestrictedLiePresentation.from_json(pres.to_json())
    assert again.to_json() == pres.to_json()
    assert build_algebra(again) is get_algebra("sl3-b1", 2)
    data = pres.to_json()
    data["brackets"] = [[0, 1, [1, 0, 0, 0, 0]]]
    data["name"] = "custom"
    with pytest.raises(PresentationError):
        RestrictedLiePresentation.from_json(data)
