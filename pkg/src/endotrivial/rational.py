"""Modules carrying the divided powers f_alpha^(p) as extra data.

u(b) only sees f_alpha, f_alpha^2/2, ..., f_alpha^(p-1)/(p-1)!.  The quotient
B/B_1 acts on B_1-cohomology through the next divided powers f_alpha^(p),
which we record as one matrix per negative root vector.  This is enough to
test B/B_1-equivariance of maps between B_1-trivial modules such as Ext
groups and Frobenius twists.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
import numpy as np

from .algebra import PBWAlgebra
from .linalg import (
    column_space_mod,
    complement_mod,
    inv_mod,
    left_inverse_mod,
    matmul_mod,
    nullspace_mod,
    rank_mod,
    solve_mod,
)
from .modules import ModuleError, ModuleRep, character, natural_sl3, tensor
from .structure import hom_space
from .weights import Weight


@dataclass(frozen=True, eq=False)
class RationalModule:
    """A graded u(b)-module with f_alpha^(p) for each nilpotent basis element."""

    module: ModuleRep
    divided: dict  # nilpotent basis index -> matrix of f^(p)

    @property
    def p(self) -> int:
        return self.module.p

    def small_power(self, i: int, j: int) -> np.ndarray:
        """f_i^(j) = f_i^j / j! for 0 <= j < p."""
        p = self.p
        a = self.module.action[i]
        out = np.eye(self.module.dim, dtype=np.int64)
        for _ in range(j):
            out = matmul_mod(a, out, p)
        return out * pow(factorial(j), -1, p) % p

    def divided_power(self, i: int, j: int) -> np.ndarray:
        if j < self.p:
            return self.small_power(i, j)
        if j == self.p:
            return self.divided[i]
        raise ValueError("only divided powers up to p are recorded")


def _commutes_with_torus_shift(m: ModuleRep, i: int, f: np.ndarray) -> bool:
    w = m.pres.weights[i]
    rows, cols = np.nonzero(f)
    return all(m.weights[r] == m.weights[c] + m.p * w for r, c in zip(rows, cols))


def rational(m: ModuleRep, divided: dict) -> RationalModule:
    if not m.graded:
        raise ModuleError("rational data needs a graded module")
    for i, f in divided.items():
        if not _commutes_with_torus_shift(m, i, f):
            raise ModuleError(f"f^(p) for {m.pres.basis_names[i]} does not shift weights by p times its weight")
    return RationalModule(m, {i: np.asarray(f, dtype=np.int64) % m.p for i, f in divided.items()})


def trivially_divided(m: ModuleRep) -> RationalModule:
    """f^(p) = 0, correct for modules whose Z-form has f^p = 0 with p-divisible quotient, e.g. characters."""
    return rational(m, {i: np.zeros((m.dim, m.dim), dtype=np.int64) for i in m.pres.nilpotent_indices})


def rational_character(alg: PBWAlgebra, w: Weight) -> RationalModule:
    return trivially_divided(character(alg, w))


def rational_natural_sl3(alg: PBWAlgebra) -> RationalModule:
    # On the natural Z-form every f_alpha squares to zero, so f_alpha^(p) = 0.
    return trivially_divided(natural_sl3(alg))


def rational_tensor(a: RationalModule, b: RationalModule) -> RationalModule:
    """Delta(f^(p)) = sum_{i+j=p} f^(i) (x) f^(j)."""
    p = a.p
    m = tensor(a.module, b.module)
    divided = {}
    for i in a.divided:
        out = np.zeros((m.dim, m.dim), dtype=np.int64)
        for j in range(p + 1):
            out = (out + np.kron(a.divided_power(i, j), b.divided_power(i, p - j))) % p
        divided[i] = out
    return rational(m, divided)


def rational_submodule(a: RationalModule, basis: np.ndarray) -> RationalModule:
    """Restrict to an invariant graded subspace given by the columns of ``basis``."""
    from .modules import submodule

    sub, incl = submodule(a.module, basis)
    left = left_inverse_mod(incl, a.p)
    divided = {}
    for i, f in a.divided.items():
        img = matmul_mod(f, incl, a.p)
        coords = matmul_mod(left, img, a.p)
        if np.any((matmul_mod(incl, coords, a.p) - img) % a.p):
            raise ModuleError("subspace is not stable under divided powers")
        divided[i] = coords
    return rational(sub, divided), incl


def steinberg_sl3_p2(alg: PBWAlgebra) -> RationalModule:
    """St = L(rho) for SL3 at p = 2, realized as the adjoint Z-form reduced mod 2.

    Basis e1, e2, e12, h1, h2, f1, f2, f12 from 3x3 elementary matrices;
    f^(2) is (ad f)^2 / 2 computed over the integers.
    """
    if alg.p != 2 or alg.pres.root_system != "A2":
        raise ModuleError("the adjoint model of St is for sl3 at p = 2")

    def unit(i, j):
        e = np.zeros((3, 3), dtype=np.int64)
        e[i, j] = 1
        return e

    basis = {
        "e1": unit(0, 1), "e2": unit(1, 2), "e12": unit(0, 2),
        "h1": unit(0, 0) - unit(1, 1), "h2": unit(1, 1) - unit(2, 2),
        "f1": unit(1, 0), "f2": unit(2, 1), "f12": -unit(2, 0),
    }
    names = list(basis)
    flat = np.stack([basis[n].ravel() for n in names], axis=1)
    # coordinates over Z: the flattened basis has full column rank with a unimodular pivot block
    pinv = np.linalg.pinv(flat.astype(float))

    def coords(x):
        c = pinv @ x.ravel().astype(float)
        ci = np.rint(c).astype(np.int64)
        if np.any(flat @ ci != x.ravel()):
            raise ArithmeticError("element outside the integral span")
        return ci

    def ad(x):
        return np.stack([coords(x @ basis[n] - basis[n] @ x) for n in names], axis=1)

    a1, a2 = alg.pres.roots.simple_roots
    wts = {
        "e1": a1, "e2": a2, "e12": a1 + a2, "h1": Weight((0, 0)), "h2": Weight((0, 0)),
        "f1": -a1, "f2": -a2, "f12": -(a1 + a2),
    }
    mats, divided = [], {}
    for i, name in enumerate(alg.pres.basis_names):
        adx = ad(basis[name])
        mats.append(adx % 2)
        if alg.pres.nilpotent[i]:
            sq = adx @ adx
            if np.any(sq % 2):
                raise ArithmeticError("(ad f)^2 is not divisible by 2")
            divided[i] = (sq // 2) % 2
    st = ModuleRep(alg, mats, [wts[n] for n in names])
    return rational(st, divided)


def frobenius_adjoint(alg: PBWAlgebra) -> RationalModule:
    """u^(1): the Frobenius twist of the adjoint action of b on its nilradical.

    u(b) acts by zero; f_alpha^(p) acts as ad(f_alpha); weights are p times
    the root weights.
    """
    pres = alg.pres
    nil = pres.nilpotent_indices
    n = len(nil)
    pos = {k: j for j, k in enumerate(nil)}
    divided = {}
    for i in nil:
        mat = np.zeros((n, n), dtype=np.int64)
        for k in nil:
            col = pres.brackets[i, k]
            for t in np.flatnonzero(col):
                mat[pos[t], pos[k]] = col[t]
        divided[i] = mat % pres.p
    weights = [pres.p * pres.weights[k] for k in nil]
    m = ModuleRep(alg, [np.zeros((n, n), dtype=np.int64)] * pres.d, weights)
    return rational(m, divided)


# ---------------------------------------------------------------------------
# B/B_1-structure on Ext^1_{B_1}


@dataclass(frozen=True, eq=False)
class Carrier:
    """A B_1-trivial graded space with f_alpha^(p) matrices."""

    weights: tuple[Weight, ...]
    divided: dict  # basis name -> matrix of f^(p)
    p: int

    @property
    def dim(self) -> int:
        return len(self.weights)

    def socle_weights(self) -> list[Weight]:
        """Weights of the joint kernel of all f_alpha^(p) (weight vectors only)."""
        out = []
        for w in sorted(set(self.weights)):
            idx = [i for i, x in enumerate(self.weights) if x == w]
            block = np.vstack([f[:, idx] for f in self.divided.values()]) if self.divided else np.zeros((0, len(idx)))
            k = len(idx) - (rank_mod(block, self.p) if block.size else 0)
            out.extend([w] * k)
        return out


def as_carrier(r: RationalModule) -> Carrier:
    if any(a.any() for a in r.module.action):
        raise ModuleError("carrier must be B_1-trivial")
    names = r.module.pres.basis_names
    return Carrier(tuple(r.module.weights), {names[i]: f for i, f in r.divided.items()}, r.p)


def _hom_action(src: RationalModule, tgt: RationalModule, i: int, t: np.ndarray) -> np.ndarray:
    """f^(p) . T = sum_{a+b=p} (-1)^b f^(a) T f^(b)."""
    p = src.p
    out = np.zeros_like(t)
    for b in range(p + 1):
        term = matmul_mod(tgt.divided_power(i, p - b), matmul_mod(t, src.divided_power(i, b), p), p)
        out = (out + (-1) ** b * term) % p
    return out


def ext1_carrier(n: RationalModule, cover: RationalModule, eps: np.ndarray) -> Carrier:
    """Ext^1_{B_1}(k, N) with its f^(p)-action, from a B-equivariant cover eps: P -> k.

    Ext^1 = Hom_{B_1}(Omega, N) / (restrictions of Hom_{B_1}(P, N)), graded by
    the degree of the maps; degrees outside pX(T) are not B_1-equivariant
    classes of the ungraded group and are dropped.
    """
    p = n.p
    eps = np.asarray(eps, dtype=np.int64).reshape(1, -1) % p
    for i, f in cover.divided.items():
        if np.any(matmul_mod(eps, f, p)):
            raise ModuleError("cover map does not respect divided powers")
    omega, incl = rational_submodule(cover, nullspace_mod(eps, p))
    degrees = sorted(
        {b - a for a in omega.module.weights for b in n.module.weights if all(c % p == 0 for c in (b - a).coords)}
    )
    # per degree: cocycle basis Z_d, coboundary span B_d, chosen complement (Ext basis)
    pieces = {}
    for d in degrees:
        z = hom_space(omega.module, n.module, graded=True, degree=d).basis
        if not z:
            continue
        zmat = np.stack([t.ravel() for t in z], axis=1)
        bvecs = [matmul_mod(t, incl, p).ravel() for t in hom_space(cover.module, n.module, graded=True, degree=d).basis]
        bmat = np.stack(bvecs, axis=1) if bvecs else np.zeros((zmat.shape[0], 0), dtype=np.int64)
        bcoords = solve_mod(zmat, bmat, p) if bvecs else np.zeros((len(z), 0), dtype=np.int64)
        if bcoords is None:
            raise ArithmeticError("coboundaries are not cocycles")
        bspan = column_space_mod(bcoords, p) if bcoords.shape[1] else bcoords
        comp = complement_mod(bspan, p) if bspan.shape[1] else list(range(len(z)))
        if not comp:
            continue
        full = np.hstack([bspan, np.eye(len(z), dtype=np.int64)[:, comp]])
        pieces[d] = (z, zmat, full, bspan.shape[1], comp)
    weights, offsets = [], {}
    for d, (_, _, _, _, comp) in pieces.items():
        offsets[d] = len(weights)
        weights.extend([d] * len(comp))
    dim = len(weights)
    divided = {}
    for i in n.divided:
        mat = np.zeros((dim, dim), dtype=np.int64)
        shift = p * n.module.pres.weights[i]
        for d, (z, zmat, full, nb, comp) in pieces.items():
            target = d + shift
            for c_idx, c in enumerate(comp):
                img = _hom_action(omega, n, i, z[c])
                if target not in pieces:
                    # image must be a coboundary or zero; nothing to record in Ext
                    continue
                z2, zmat2, full2, nb2, comp2 = pieces[target]
                coords = solve_mod(zmat2, img.ravel(), p)
                if coords is None:
                    raise ArithmeticError("divided power does not preserve cocycles")
                ext_coords = matmul_mod(inv_mod(full2, p), coords, p)[nb2:]
                mat[offsets[target] : offsets[target] + len(comp2), offsets[d] + c_idx] = ext_coords
        divided[n.module.pres.basis_names[i]] = mat
    return Carrier(tuple(weights), divided, p)


def carrier_hom_dim(src: Carrier, tgt: Carrier) -> int:
    """Dimension of weight-preserving maps commuting with every f^(p)."""
    p = src.p
    if set(src.divided) != set(tgt.divided):
        raise ModuleError("carriers record divided powers for different root vectors")
    unknowns = [(r, c) for r in range(tgt.dim) for c in range(src.dim) if tgt.weights[r] == src.weights[c]]
    if not unknowns:
        return 0
    rows = []
    for i in src.divided:
        fs, ft = src.divided[i], tgt.divided[i]
        # (T fs - ft T)[a, b] for every entry
        for a in range(tgt.dim):
            for b in range(src.dim):
                row = np.zeros(len(unknowns), dtype=np.int64)
                for u, (r, c) in enumerate(unknowns):
                    val = 0
                    if r == a:
                        val += fs[c, b]
                    if c == b:
                        val -= ft[a, r]
                    row[u] = val
                if row.any():
                    rows.append(row % p)
    if not rows:
        return len(unknowns)
    return len(unknowns) - rank_mod(np.stack(rows), p)
