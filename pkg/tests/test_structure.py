import numpy as np
import pytest

from endotrivial.algebra import get_algebra
from endotrivial.endotrivial import omega, syzygy
from endotrivial.linalg import matmul_mod, matpow_mod, rank_mod
from endotrivial.modules import (
    ModuleRep,
    direct_sum,
    dual,
    kernel_module,
    natural_sl3,
    pim_module,
    regular,
    tensor,
    trivial,
    zero_module,
)
from endotrivial.structure import (
    dade_split,
    decompose,
    find_isomorphism,
    hom_space,
    injective_hull,
    is_isomorphic,
    is_module_map,
    is_projective,
    is_projective_free,
    projective_cover,
    radical,
    socle,
    strip_projectives,
    top,
)


@pytest.fixture(scope="module")
def u3():
    return get_algebra("sl2-u1", 3)


def test_radical_socle_top_small(u3):
    k, a = trivial(u3), regular(u3)
    assert radical(k)[0].dim == 0
    assert radical(a)[0].dim == 2
    assert socle(a)[0].dim == 1
    assert socle(k)[0].dim == 1
    assert top(a)[0].dim == 1


def test_hom_examples(u3):
    k, a = trivial(u3), regular(u3)
    assert hom_space(k, k).dim == 1
    assert hom_space(a, k).dim == 1
    assert hom_space(omega(k), k, graded=False).dim == 1
    # graded: Omega^1(k) has top weight -alpha, so only the shifted degree sees the map
    alpha = -u3.pres.weights[0]
    assert hom_space(omega(k), k).dim == 0
    assert hom_space(omega(k), k, degree=alpha).dim == 1
    assert hom_space(a, a).dim == 3
    for t in hom_space(a, a).basis:
        assert is_module_map(a, a, t)


def test_dade_examples(u3):
    u2 = get_algebra("sl2-u1", 2)
    s = dade_split(regular(u2), 0)
    assert s.multiplicity == 1 and s.complement.dim == 0
    s = dade_split(trivial(u3), 0)
    assert s.multiplicity == 0 and s.complement.dim == 1
    m = direct_sum(regular(u3), trivial(u3), regular(u3))
    s = dade_split(m, 0)
    assert s.multiplicity == 2 and is_isomorphic(s.complement, trivial(u3))
    psi, ret = s.witness
    assert np.array_equal(matmul_mod(ret, psi, 3), np.eye(psi.shape[1], dtype=np.int64))
    assert not dade_split(zero_module(u3), 0).multiplicity


def test_dade_split_reassembles():
    for name, p in (("sl2-b1", 3), ("sl2-g1", 3), ("sl3-b1", 2)):
        alg = get_algebra(name, p)
        k = trivial(alg).ungraded()
        x = omega(k).ungraded()
        for i in range(len(alg.pims)):
            pim, _ = pim_module(alg, i)
            m = direct_sum(pim.ungraded(), x, pim.ungraded())
            s = dade_split(m, i)
            assert m.dim == s.multiplicity * alg.pims[i].dim + s.complement.dim
            u = s.complement.element(alg.pims[i].socle_element) if s.complement.dim else np.zeros((0, 0))
            assert not u.any()
            assert is_isomorphic(direct_sum(*([pim.ungraded()] * s.multiplicity), s.complement), m)


def test_graded_dade_split_keeps_grading():
    b = get_algebra("sl3-b1", 2)
    k = trivial(b)
    m = direct_sum(pim_module(b, 0)[0], omega(k))
    s = dade_split(m, 0)
    assert s.multiplicity == 1 and s.complement.graded
    assert is_isomorphic(s.complement, omega(k), graded=True)


def test_strip_examples(u3):
    k, a = trivial(u3), regular(u3)
    assert strip_projectives(a).dim == 0
    assert is_isomorphic(strip_projectives(direct_sum(k, a, a)), k)
    assert strip_projectives(tensor(a, a)).dim == 0
    s = strip_projectives(direct_sum(a, omega(k)))
    assert is_projective_free(s) and is_isomorphic(strip_projectives(s), s)


def test_isomorphism_examples(u3):
    k, a = trivial(u3), regular(u3)
    assert is_isomorphic(a, a)
    assert not is_isomorphic(k, a)
    assert is_isomorphic(syzygy(k, 2), k, graded=False)
    assert syzygy(k, 2).weights == (3 * u3.pres.weights[0],)
    m = ModuleRep(u3, [np.array([[0, 0], [1, 0]])])
    n = ModuleRep(u3, [np.array([[0, 0], [2, 0]])])
    t = find_isomorphism(m, n)
    assert t is not None and rank_mod(t, 3) == 2 and is_module_map(m, n, t)


def test_decompose_examples(u3):
    parts = decompose(direct_sum(trivial(u3), regular(u3)))
    assert sorted(x.dim for x in parts) == [1, 3]
    g = get_algebra("sl2-g1", 3)
    dims = sorted(x.dim for x in decompose(regular(g)))
    assert dims == [3, 3, 3, 6, 6, 6]
    # 27 = sum over simples of dim P(S) * dim S
    assert sum(pim.dim * pim.simple_dim for pim in g.pims) == 27


def test_krull_schmidt_order_independent():
    b = get_algebra("sl3-b1", 2)
    k = trivial(b)
    pieces = [k, omega(k), natural_sl3(b), pim_module(b, 1)[0]]
    first = decompose(direct_sum(*pieces))
    second = decompose(direct_sum(*reversed(pieces)))
    assert sum(x.dim for x in first) == sum(x.dim for x in pieces)
    assert len(first) == len(second) == 4
    remaining = list(second)
    for x in first:
        match = next(i for i, y in enumerate(remaining) if is_isomorphic(x, y))
        del remaining[match]
    for x in first:
        end = hom_space(x, x).basis
        # local End: every endomorphism is invertible or nilpotent
        rng = np.random.default_rng(0)
        for _ in range(5):
            e = sum(int(c) * t for c, t in zip(rng.integers(0, 2, len(end)), end)) % 2
            assert rank_mod(e, 2) == x.dim or not matpow_mod(e, x.dim, 2).any()


def test_projective_cover_examples(u3):
    k, a = trivial(u3), regular(u3)
    cover, surj = projective_cover(k)
    assert is_isomorphic(cover, a) and rank_mod(surj, 3) == 1
    cover, surj = projective_cover(a)
    assert cover.dim == 3 and rank_mod(surj, 3) == 3
    b = get_algebra("sl3-b1", 2)
    cover, surj = projective_cover(trivial(b))
    assert cover.dim == 8 and is_projective(cover)
    ker, _ = kernel_module(cover, surj)
    assert is_projective_free(ker)


def test_injective_hull_examples(u3):
    k, a = trivial(u3), regular(u3)
    hull, inj = injective_hull(k)
    assert is_isomorphic(hull, a) and rank_mod(inj, 3) == 1
    soc, _ = socle(a)
    assert is_isomorphic(injective_hull(soc)[0], a)
    g = get_algebra("sl2-g1", 3)
    for m in (trivial(g).ungraded(), omega(trivial(g))):
        assert is_isomorphic(dual(injective_hull(m)[0]), projective_cover(dual(m))[0])


def test_hom_space_graded_degrees():
    b = get_algebra("sl3-b1", 2)
    v = natural_sl3(b)
    assert hom_space(v, v).dim == 1
    assert hom_space(v, v, graded=False).dim >= 1
