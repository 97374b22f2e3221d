"""Endotrivial modules: syzygies, Ext^1, class arithmetic and stable lifts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import Automorphism, PBWAlgebra
from .linalg import matmul_mod, rank_mod
from .modules import (
    ModuleError,
    ModuleRep,
    build_weyl_sl2,
    dual,
    kernel_module,
    pim_module,
    quotient,
    submodule_closure,
    tensor,
    trivial,
    twist,
)
from .structure import (
    IndeterminateError,
    decompose,
    hom_space,
    injective_hull,
    is_isomorphic,
    projective_cover,
    projective_multiplicities,
    strip_projectives,
)
from .weights import Weight


class NotEndotrivial(ValueError):
    pass


def is_trivial_module(m: ModuleRep) -> bool:
    """Dimension one with zero action (weight zero when graded)."""
    if m.dim != 1 or any(a.any() for a in m.action):
        return False
    return not m.graded or m.weights[0].is_zero()


def is_endotrivial(m: ModuleRep) -> bool:
    """strip(M (x) M*) is the trivial module."""
    if m.dim == 0:
        return False
    if m.dim % m.p == 0:
        # dim M (x) M* = 1 + dim(projective), and projectives have dimension divisible by p
        return False
    # k is a summand (identity followed by trace is dim M != 0), so it suffices
    # that the projective summands found by the rank criterion fill the rest
    prod = tensor(m, dual(m)).ungraded()
    mults = projective_multiplicities(prod)
    proj_dim = sum(a * pim.dim for a, pim in zip(mults, m.algebra.pims))
    return prod.dim - proj_dim == 1


# ---------------------------------------------------------------------------
# Syzygies


def omega(m: ModuleRep) -> ModuleRep:
    """Kernel of the projective cover, with projective summands removed."""
    cover, surj = projective_cover(m)
    ker, _ = kernel_module(cover, surj)
    return strip_projectives(ker)


def omega_inverse(m: ModuleRep) -> ModuleRep:
    """Cokernel of the injective hull."""
    hull, inj = injective_hull(m)
    coker, _ = quotient(hull, inj)
    return strip_projectives(coker)


def syzygy(m: ModuleRep, n: int) -> ModuleRep:
    """Omega^n(M) for any integer n; negative n by duality.

    M is stripped of projective summands first.
    """
    cur = strip_projectives(m)
    if n >= 0:
        for _ in range(n):
            cur = omega(cur)
        return cur
    return dual(syzygy(dual(cur), -n))


def syzygy_via_hulls(m: ModuleRep, n: int) -> ModuleRep:
    """Omega^{-n}(M) through injective hulls (cross-check for the dual route)."""
    cur = strip_projectives(m)
    for _ in range(n):
        cur = omega_inverse(cur)
    return cur


@dataclass(frozen=True)
class ResolutionStep:
    degree: int
    projective_dim: int
    top_labels: tuple
    syzygy_dim: int


def minimal_resolution(m: ModuleRep, n: int) -> tuple[list[ResolutionStep], list[ModuleRep]]:
    """P_0..P_{n-1} of a minimal resolution and Omega^0..Omega^n."""
    cur = strip_projectives(m)
    steps, syz = [], [cur]
    for k in range(n):
        cover, surj = projective_cover(cur)
        labels = _cover_labels(cur)
        ker, _ = kernel_module(cover, surj)
        cur = strip_projectives(ker)
        steps.append(ResolutionStep(k, cover.dim, labels, cur.dim))
        syz.append(cur)
    return steps, syz


def _cover_labels(m: ModuleRep) -> tuple:
    """PIM labels of the projective cover, one per summand."""
    from .structure import radical_basis

    alg, p = m.algebra, m.p
    if m.dim == 0:
        return ()
    rad = radical_basis(m)
    rad_rank = rank_mod(rad, p) if rad.shape[1] else 0
    labels = []
    for pim in alg.pims:
        e_m = m.element(pim.idempotent)
        # multiplicity of L in top(M) = dim e (M / rad M)
        both = np.hstack([rad, e_m]) if rad.shape[1] else e_m
        c = rank_mod(both, p) - rad_rank
        labels.extend([pim.label] * c)
    return tuple(labels)


# ---------------------------------------------------------------------------
# Ext^1


@dataclass(frozen=True)
class ExtResult:
    dim: int
    weights: Optional[dict]  # degree -> dimension, graded case only

    def carrier(self) -> "WeightedSpace":
        if self.weights is None:
            raise ModuleError("Ext carrier needs graded input")
        ws = [w for w, d in sorted(self.weights.items()) for _ in range(d)]
        return WeightedSpace(tuple(ws))


def _ext1_degree(m, n, omega1, cover, incl, graded, degree):
    p = m.p
    h_omega = hom_space(omega1, n, graded=graded, degree=degree)
    if h_omega.dim == 0:
        return 0
    h_cover = hom_space(cover, n, graded=graded, degree=degree)
    # restrictions of maps P -> N to Omega^1
    restricted = [matmul_mod(t, incl, p).ravel() for t in h_cover.basis]
    if restricted:
        r = rank_mod(np.stack(restricted, axis=1), p)
    else:
        r = 0
    return h_omega.dim - r


def ext1(m: ModuleRep, n: ModuleRep, graded: Optional[bool] = None) -> ExtResult:
    """dim Ext^1_A(M, N) = dim Hom(Omega^1 M, N) - dim(maps factoring through P(M)).

    For graded M, N the answer is split by the degree of the maps; only
    degrees in pX(T) contribute to the ungraded Ext group, so those are the
    ones reported.
    """
    if graded is None:
        graded = m.graded and n.graded
    cover, surj = projective_cover(m)
    omega1, incl = kernel_module(cover, surj)
    if not graded:
        return ExtResult(_ext1_degree(m, n, omega1.ungraded(), cover.ungraded(), incl, False, None), None)
    if not omega1.graded:
        raise ModuleError("graded Ext needs a graded syzygy")
    p = m.p
    degrees = set()
    for a in omega1.weights:
        for b in n.weights:
            d = b - a
            if all(c % p == 0 for c in d.coords):
                degrees.add(d)
    out = {}
    for d in sorted(degrees):
        k = _ext1_degree(m, n, omega1, cover, incl, True, d)
        if k:
            out[d] = k
    return ExtResult(sum(out.values()), out)


# ---------------------------------------------------------------------------
# Graded Hom against a weights-only carrier


@dataclass(frozen=True)
class WeightedSpace:
    """A graded vector space whose module structure is not known."""

    weights: tuple[Weight, ...]

    @property
    def dim(self) -> int:
        return len(self.weights)


def frobenius_twist(m: ModuleRep) -> ModuleRep:
    """Same action, weights scaled by p (a module for the Frobenius quotient)."""
    if not m.graded:
        raise ModuleError("Frobenius twist needs a graded module")
    return m.with_weights([m.p * w for w in m.weights])


def adjoint_nilpotent(alg: PBWAlgebra) -> ModuleRep:
    """The adjoint module of a nilpotent preset on its own Lie algebra."""
    pres = alg.pres
    if pres.torus_indices:
        raise ModuleError("adjoint module is built for nilpotent presets")
    mats = [pres.ad(i) for i in range(pres.d)]
    return ModuleRep(alg, mats, pres.weights)


def graded_hom(m, n) -> int:
    """Dimension of weight-preserving A-maps M -> N.

    Two graded modules: graded Hom of degree 0.  Two carriers (B_1-trivial
    spaces with f^(p) matrices): maps commuting with every f^(p).  When N is
    only known as a weighted space, every map kills the submodule of M
    generated by weight vectors whose weight does not occur in N; the
    result is exact when that forces zero, and IndeterminateError otherwise.
    """
    from .rational import Carrier, carrier_hom_dim

    if isinstance(m, Carrier) or isinstance(n, Carrier):
        if not (isinstance(m, Carrier) and isinstance(n, Carrier)):
            raise ModuleError("carriers can only be compared with carriers")
        return carrier_hom_dim(m, n)
    if not m.graded:
        raise ModuleError("graded Hom needs graded modules")
    if isinstance(n, ModuleRep):
        if not n.graded:
            raise ModuleError("graded Hom needs graded modules")
        return hom_space(m, n, graded=True).dim
    present = set(n.weights)
    missing = [i for i, w in enumerate(m.weights) if w not in present]
    if missing:
        forced = submodule_closure(m, np.eye(m.dim, dtype=np.int64)[:, missing])
        forced_dim = forced.shape[1]
    else:
        forced_dim = 0
    if forced_dim == m.dim:
        return 0
    raise IndeterminateError(
        f"{m.dim - forced_dim} weight(s) of the source survive; the target action is needed"
    )


# ---------------------------------------------------------------------------
# Classes in T(A)


@dataclass(frozen=True, eq=False)
class EndoClass:
    representative: ModuleRep

    @property
    def algebra(self) -> PBWAlgebra:
        return self.representative.algebra

    def __eq__(self, other):
        return isinstance(other, EndoClass) and is_isomorphic(
            self.representative, other.representative, graded=False
        )

    __hash__ = None


def endo_class(m: ModuleRep) -> EndoClass:
    rep = strip_projectives(m)
    if not is_endotrivial(rep):
        raise NotEndotrivial(f"{m!r} is not endotrivial")
    return EndoClass(rep)


def zero_class(alg: PBWAlgebra) -> EndoClass:
    return EndoClass(trivial(alg))


def class_add(c1: EndoClass, c2: EndoClass) -> EndoClass:
    return endo_class(tensor(c1.representative, c2.representative))


def class_neg(c: EndoClass) -> EndoClass:
    return endo_class(dual(c.representative))


class SyzygyTower:
    """Omega^n(k) computed on demand, for n of either sign."""

    def __init__(self, alg: PBWAlgebra, graded: bool = True):
        k = trivial(alg, graded=graded)
        self._pos = [k]
        self._neg = [k]

    def __getitem__(self, n: int) -> ModuleRep:
        seq = self._pos if n >= 0 else self._neg
        step = omega if n >= 0 else (lambda x: dual(omega(dual(x))))
        while len(seq) <= abs(n):
            seq.append(step(seq[-1]))
        return seq[abs(n)]


def syzygy_degree(m: ModuleRep, bound: int = 4, tower: Optional[SyzygyTower] = None) -> Optional[int]:
    """Least |n| <= bound with strip(M) = Omega^n(k); positive n wins ties."""
    rep = strip_projectives(m)
    tower = tower or SyzygyTower(m.algebra, graded=False)
    for k in range(bound + 1):
        for n in ((0,) if k == 0 else (k, -k)):
            cand = tower[n]
            if cand.dim != rep.dim:
                continue
            if is_isomorphic(rep, cand, graded=False):
                return n
    return None


# ---------------------------------------------------------------------------
# Stable lifts through a Steinberg-type projective


def steinberg_lift_sequence(
    proj: ModuleRep, eps: np.ndarray, n: int, strip_each: bool = True
) -> list[ModuleRep]:
    """K_0 = k, K_{m+1} = ker(P (x) K_m -> K_m) using eps (x) id.

    With ``strip_each`` the projective summands of each K_m are removed
    before the next step; this does not change the stable classes and keeps
    the dimensions small.
    """
    p = proj.p
    eps = np.asarray(eps, dtype=np.int64).reshape(1, proj.dim) % p
    if not eps.any():
        raise ModuleError("eps is not surjective")
    if any(np.any(matmul_mod(eps, a, p)) for a in proj.action):
        raise ModuleError("eps is not a module map to k")
    k = trivial(proj.algebra, graded=proj.graded)
    seq = [k]
    cur = k
    for _ in range(n):
        big = tensor(proj, cur)
        f = np.kron(eps, np.eye(cur.dim, dtype=np.int64))
        nxt, _ = kernel_module(big, f)
        if strip_each:
            nxt = strip_projectives(nxt)
        seq.append(nxt)
        cur = nxt
    return seq


def steinberg_projective(alg: PBWAlgebra) -> tuple[ModuleRep, np.ndarray]:
    """P = St (x) St with a surjection to k.

    For sl2-g1, St = V(p-1).  For the Borel kernel of sl3, St restricts to
    the projective cover of the weight (p-1)rho.
    """
    p = alg.p
    name = alg.pres.name
    if name == "sl2-g1":
        st = build_weyl_sl2(p - 1, p)
    elif name in ("sl3-b1", "sl2-b1"):
        rank = alg.pres.roots.rank
        rho = Weight((p - 1,) * rank)
        label = tuple(c % p for c in rho.coords)
        st, _ = pim_module(alg, alg.pim_index(label), rho)
    else:
        raise ModuleError(f"no Steinberg module for {name!r}")
    proj = tensor(st, st)
    k = trivial(alg, graded=proj.graded)
    hom = hom_space(proj, k)
    if hom.dim == 0:
        raise ModuleError("St (x) St has no map onto k")
    return proj, hom.basis[0]


# ---------------------------------------------------------------------------
# Stability predicates


def is_stable_under(m: ModuleRep, phi: Automorphism) -> bool:
    return is_isomorphic(twist(m, phi), m)


def is_direct_power(z: ModuleRep, m: ModuleRep) -> Optional[int]:
    """n with Z = M^n, or None."""
    if m.dim == 0:
        return None
    if z.dim == 0:
        return 0
    parts_m = decompose(m)
    parts_z = decompose(z)
    if len(parts_z) % len(parts_m):
        return None
    count = len(parts_z) // len(parts_m)
    remaining = list(parts_z)
    for part in parts_m:
        for _ in range(count):
            for idx, cand in enumerate(remaining):
                if cand.dim == part.dim and is_isomorphic(cand, part):
                    del remaining[idx]
                    break
            else:
                return None
    return count if not remaining else None


def is_stable_lift(k_restricted: ModuleRep, m: ModuleRep) -> bool:
    return is_isomorphic(strip_projectives(k_restricted), strip_projectives(m), graded=False)
