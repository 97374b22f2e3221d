"""Radicals, Hom spaces, projective summands, isomorphism and decomposition."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import PBWAlgebra
from .fitting import split_or_certify
from .linalg import (
    column_space_mod,
    complement_mod,
    inv_mod,
    left_inverse_mod,
    matmul_mod,
    nullspace_mod,
    rank_mod,
)
from .modules import (
    ModuleError,
    ModuleRep,
    direct_sum,
    dual,
    homogeneous_basis,
    kernel_module,
    pim_module,
    quotient,
    submodule,
    submodule_closure,
    zero_module,
)
from .weights import Weight


class UnsupportedAlgebra(ValueError):
    pass


class IndeterminateError(RuntimeError):
    """No invertible intertwiner found, but the Hom space is too large to scan."""


class RetractionNotFound(RuntimeError):
    pass


def _check_supported(alg: PBWAlgebra):
    if not alg.triangular and alg.pres.name != "sl2-g1":
        raise UnsupportedAlgebra(f"structure operations need a triangular algebra or sl2-g1, got {alg.pres.name!r}")


def action_tensor(m: ModuleRep) -> np.ndarray:
    """All monomial matrices rho(b_j), shape (dim A, n, n)."""
    eye = np.eye(m.dim, dtype=np.int64)
    return np.stack(m.images(eye), axis=0)


def orbit_matrix(m: ModuleRep, v: np.ndarray) -> np.ndarray:
    """Columns b_j . v for every PBW monomial b_j (n x dim A)."""
    return np.stack(m.images(np.asarray(v, dtype=np.int64) % m.p), axis=1)


# ---------------------------------------------------------------------------
# Radical, socle, top


def radical_basis(m: ModuleRep) -> np.ndarray:
    _check_supported(m.algebra)
    p = m.p
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m.algebra.triangular:
        nil = m.pres.nilpotent_indices
        if not nil:
            return np.zeros((m.dim, 0), dtype=np.int64)
        return submodule_closure(m, np.hstack([m.action[i] for i in nil]))
    rad = m.algebra.radical_basis
    t = action_tensor(m)
    mats = np.einsum("jab,jr->rab", t, rad) % p
    return column_space_mod(np.hstack(list(mats)), p)


def radical(m: ModuleRep) -> tuple[ModuleRep, np.ndarray]:
    """rad(A) M with its inclusion."""
    return submodule(m, radical_basis(m))


def socle_basis(m: ModuleRep) -> np.ndarray:
    _check_supported(m.algebra)
    p = m.p
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m.algebra.triangular:
        nil = m.pres.nilpotent_indices
        if not nil:
            return np.eye(m.dim, dtype=np.int64)
        return nullspace_mod(np.vstack([m.action[i] for i in nil]), p)
    rad = m.algebra.radical_basis
    t = action_tensor(m)
    mats = np.einsum("jab,jr->rab", t, rad) % p
    return nullspace_mod(np.vstack(list(mats)), p)


def socle(m: ModuleRep) -> tuple[ModuleRep, np.ndarray]:
    return submodule(m, socle_basis(m))


def top(m: ModuleRep) -> tuple[ModuleRep, np.ndarray]:
    """M / rad(M) with the projection."""
    return quotient(m, radical_basis(m))


# ---------------------------------------------------------------------------
# Hom spaces


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: ModuleRep
    target: ModuleRep
    basis: tuple[np.ndarray, ...]
    graded: bool = False
    degree: Optional[Weight] = None

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def combination(self, coeffs) -> np.ndarray:
        out = np.zeros((self.target.dim, self.source.dim), dtype=np.int64)
        for c, b in zip(coeffs, self.basis):
            out = out + int(c) * b
        return out % self.source.p

    def random_element(self, rng: np.random.Generator) -> np.ndarray:
        return self.combination(rng.integers(0, self.source.p, size=self.dim))


def module_generators(m: ModuleRep) -> np.ndarray:
    """Standard basis vectors generating M (a lift of a basis of the top when available)."""
    p = m.p
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    try:
        rad = radical_basis(m)
        idx = complement_mod(rad, p) if rad.shape[1] else list(range(m.dim))
        return np.eye(m.dim, dtype=np.int64)[:, idx]
    except UnsupportedAlgebra:
        pass
    chosen, span = [], np.zeros((m.dim, 0), dtype=np.int64)
    for i in range(m.dim):
        if span.shape[1] == m.dim:
            break
        e = np.zeros((m.dim, 1), dtype=np.int64)
        e[i, 0] = 1
        if rank_mod(np.hstack([span, e]), p) > span.shape[1]:
            chosen.append(i)
            span = submodule_closure(m, np.eye(m.dim, dtype=np.int64)[:, chosen])
    return np.eye(m.dim, dtype=np.int64)[:, chosen]


def hom_space(m: ModuleRep, n: ModuleRep, graded: Optional[bool] = None, degree: Optional[Weight] = None) -> HomSpace:
    """Basis of Hom_A(M, N).

    M is presented as a quotient of A^s by its generators m_1..m_s; a map is
    fixed by the images y_j of the generators, subject to the relations.
    Graded maps (the default when both modules carry weights) send weight mu
    to weight mu + degree.
    """
    if m.algebra is not n.algebra and m.pres.to_json() != n.pres.to_json():
        raise ModuleError("modules are over different algebras")
    p = m.p
    if graded is None:
        graded = m.graded and n.graded
    if graded and not (m.graded and n.graded):
        raise ModuleError("graded Hom needs graded modules")
    if graded and degree is None:
        degree = Weight.zero(m.weights[0].rank) if m.dim else None
    if m.dim == 0 or n.dim == 0:
        return HomSpace(m, n, (), graded, degree)
    gens = module_generators(m)
    s = gens.shape[1]
    big = m.algebra.dim
    # pi: A^s -> M, column (j, b) = b . m_j
    pi = np.hstack([orbit_matrix(m, gens[:, j]) for j in range(s)])
    rel = nullspace_mod(pi, p)
    tn = action_tensor(n)  # (D, nN, nN)
    # unknowns: y_j in N, restricted by weight in the graded case
    unknowns = []
    for j in range(s):
        gi = int(np.flatnonzero(gens[:, j])[0])
        for c in range(n.dim):
            if graded and n.weights[c] != m.weights[gi] + degree:
                continue
            unknowns.append((j, c))
    if not unknowns:
        return HomSpace(m, n, (), graded, degree)
    if rel.shape[1]:
        # coefficient of unknown (j, c) in Psi(y) K: sum_b rho_N(b)[:, c] K[(j, b), :]
        blocks = rel.reshape(s, big, -1)
        cols = []
        for j, c in unknowns:
            cols.append(matmul_mod(tn[:, :, c].T, blocks[j], p).ravel())
        system = np.stack(cols, axis=1)
        sol = nullspace_mod(system, p)
    else:
        sol = np.eye(len(unknowns), dtype=np.int64)
    # T = Psi(y) S with S a right inverse of pi
    sect = left_inverse_mod(pi.T, p).T  # pi @ sect = I
    basis = []
    for k in range(sol.shape[1]):
        y = np.zeros((n.dim, s), dtype=np.int64)
        for (j, c), val in zip(unknowns, sol[:, k]):
            y[c, j] = val
        psi = np.hstack([np.einsum("bac,c->ab", tn, y[:, j]) for j in range(s)]) % p
        basis.append(matmul_mod(psi, sect, p))
    return HomSpace(m, n, tuple(basis), graded, degree)


def is_module_map(m: ModuleRep, n: ModuleRep, t: np.ndarray) -> bool:
    p = m.p
    return all(
        not np.any((matmul_mod(t, a, p) - matmul_mod(b, t, p)) % p) for a, b in zip(m.action, n.action)
    )


# ---------------------------------------------------------------------------
# Dade splitting


@dataclass(frozen=True, eq=False)
class SplitResult:
    pim_index: int
    multiplicity: int
    complement: ModuleRep
    complement_inclusion: np.ndarray
    # psi: P^a -> M, retraction: M -> P^a, retraction @ psi = I
    psi: np.ndarray
    retraction: np.ndarray
    projective: ModuleRep

    @property
    def witness(self) -> tuple[np.ndarray, np.ndarray]:
        return self.psi, self.retraction


def _pim_image(m: ModuleRep, alg: PBWAlgebra, i: int, v: np.ndarray) -> np.ndarray:
    """Matrix of x -> x . v for x in P_i (columns over the PIM basis)."""
    return matmul_mod(orbit_matrix(m, v), alg.pims[i].basis, m.p)


def _frobenius_map(m: ModuleRep, alg: PBWAlgebra, i: int, phi: np.ndarray, right_e: np.ndarray, left_p: np.ndarray) -> np.ndarray:
    """The A-map M -> P_i attached to a functional phi on M.

    A is Frobenius for the top-coefficient form lam, so Hom_A(M, A) ~ M*:
    F(x) is the y with lam(b_j y) = phi(b_j x) for all j.  Right
    multiplication by e_i then lands in P_i.
    """
    from .algebra import monomial_rows

    p = m.p
    rows = np.stack(monomial_rows(m.action, alg.monomials, np.asarray(phi, dtype=np.int64)[None, :], p), axis=0)
    xi = rows[:, 0, :]  # (D, nM)
    f = matmul_mod(alg.gram_inverse, xi, p)
    return matmul_mod(left_p, matmul_mod(right_e, f, p), p)


def dade_split(m: ModuleRep, i: int, rng: Optional[np.random.Generator] = None, retries: int = 32) -> SplitResult:
    """Split off the largest power of the PIM P_i from M.

    The multiplicity is rank(u_i on M) / t_i.  Graded modules are split
    with graded maps, so the complement inherits a grading.
    """
    alg = m.algebra
    _check_supported(alg)
    p = m.p
    pim = alg.pims[i]
    rng = rng or np.random.default_rng(0)
    if m.dim == 0:
        z = np.zeros((0, 0), dtype=np.int64)
        return SplitResult(i, 0, m, z, z, z, zero_module(alg, m.graded))
    u_m = m.element(pim.socle_element)
    r = rank_mod(u_m, p)
    if r % pim.t:
        raise ArithmeticError(f"rank {r} of the socle element is not a multiple of t = {pim.t}")
    a = r // pim.t
    if a == 0:
        z = np.zeros((0, m.dim), dtype=np.int64)
        return SplitResult(i, 0, m, np.eye(m.dim, dtype=np.int64), z.T, z, zero_module(alg, m.graded))
    dp = pim.dim
    graded = m.graded and pim.relative_weights is not None

    # generators m_j with psi injective
    cands = [np.eye(m.dim, dtype=np.int64)[:, c] for c in np.flatnonzero(u_m.any(axis=0))]
    e_m = m.element(pim.idempotent)
    chosen, blocks = [], []
    psi = np.zeros((m.dim, 0), dtype=np.int64)

    def try_add(v):
        nonlocal psi
        blk = _pim_image(m, alg, i, v)
        trial = np.hstack([psi, blk])
        if rank_mod(trial, p) == trial.shape[1]:
            psi = trial
            chosen.append(v)
            blocks.append(blk)
            return True
        return False

    for v in cands:
        if len(chosen) == a:
            break
        v = matmul_mod(e_m, v, p)
        if v.any():
            try_add(v)
    attempts = 0
    while len(chosen) < a and attempts < 50 * a:
        attempts += 1
        if graded:
            w = m.weights[int(rng.integers(0, m.dim))]
            mask = np.array([x == w for x in m.weights])
            v = rng.integers(0, p, size=m.dim) * mask
        else:
            v = rng.integers(0, p, size=m.dim)
        v = matmul_mod(e_m, v, p)
        if v.any():
            try_add(v)
    if len(chosen) < a:
        raise RetractionNotFound("could not find an injective map from P^a")

    right_e = alg.right_matrix(pim.idempotent)
    left_p = left_inverse_mod(pim.basis, p)
    uvecs = np.stack([matmul_mod(u_m, v, p) for v in chosen], axis=1)
    _, piv = _row_pivots(uvecs, p)
    retraction = None
    for attempt in range(retries + 1):
        fs = []
        for j in range(a):
            if attempt == 0 and len(piv) == a:
                phi = np.zeros(m.dim, dtype=np.int64)
                phi[piv[j]] = 1
            else:
                phi = rng.integers(0, p, size=m.dim)
                if graded:
                    target = m.weights[int(np.flatnonzero(uvecs[:, j])[0])]
                    phi = phi * np.array([x == target for x in m.weights])
            fs.append(_frobenius_map(m, alg, i, phi, right_e, left_p))
        f = np.vstack(fs)
        c = matmul_mod(f, psi, p)
        if rank_mod(c, p) == a * dp:
            retraction = matmul_mod(inv_mod(c, p), f, p)
            break
    if retraction is None:
        raise RetractionNotFound("no retraction onto the projective summand was found")
    comp, incl = kernel_module(m, retraction)
    weights = None
    if graded:
        weights = [m.weights[int(np.flatnonzero(v)[0])] for v in chosen]
    proj = direct_sum(*[pim_module(alg, i, w)[0] for w in (weights or [None] * a)])
    if not graded:
        proj = proj.ungraded()
    return SplitResult(i, a, comp, incl, psi, retraction, proj)


def _row_pivots(u: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Rows of u that are independent, one per column when u has full column rank."""
    from .linalg import rref_mod

    r, piv = rref_mod(u.T, p)
    return r, piv


def projective_multiplicities(m: ModuleRep) -> list[int]:
    alg = m.algebra
    _check_supported(alg)
    out = []
    for pim in alg.pims:
        r = rank_mod(m.element(pim.socle_element), m.p) if m.dim else 0
        out.append(r // pim.t)
    return out


def is_projective_free(m: ModuleRep) -> bool:
    return not any(projective_multiplicities(m))


def strip_projectives(m: ModuleRep, rng: Optional[np.random.Generator] = None) -> ModuleRep:
    """Remove every projective summand."""
    _check_supported(m.algebra)
    rng = rng or np.random.default_rng(0)
    cur = m
    for i in range(len(m.algebra.pims)):
        if cur.dim == 0:
            break
        cur = dade_split(cur, i, rng).complement
    return cur


def is_projective(m: ModuleRep) -> bool:
    return strip_projectives(m).dim == 0


# ---------------------------------------------------------------------------
# Isomorphism


def _invariants(m: ModuleRep, graded: bool):
    p = m.p
    inv = [m.dim]
    if graded:
        inv.append(m.weight_multiset())
    mats = m.action
    inv.append(tuple(rank_mod(a, p) if m.dim else 0 for a in mats))
    inv.append(tuple(rank_mod(matmul_mod(a, b, p), p) if m.dim else 0 for a in mats for b in mats))
    try:
        inv.append(tuple(projective_multiplicities(m)))
    except UnsupportedAlgebra:
        pass
    return inv


def is_isomorphic(
    m: ModuleRep,
    n: ModuleRep,
    graded: Optional[bool] = None,
    seed: int = 0,
    tries: int = 64,
    exhaustive_dim: int = 6,
) -> bool:
    """True/False, or IndeterminateError when the search cannot decide."""
    if m.algebra is not n.algebra and m.pres.to_json() != n.pres.to_json():
        raise ModuleError("modules are over different algebras")
    if graded is None:
        graded = m.graded and n.graded
    if m.dim != n.dim:
        return False
    if m.dim == 0:
        return True
    if _invariants(m, graded) != _invariants(n, graded):
        return False
    p = m.p
    hom = hom_space(m, n, graded=graded)
    k = m.dim
    if hom.dim == 0:
        return False
    for b in hom.basis:
        if rank_mod(b, p) == k:
            return True
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        if rank_mod(hom.random_element(rng), p) == k:
            return True
    if hom.dim <= exhaustive_dim:
        for coeffs in itertools.product(range(p), repeat=hom.dim):
            if rank_mod(hom.combination(coeffs), p) == k:
                return True
        return False
    raise IndeterminateError(
        f"no isomorphism found among {tries} random maps in a Hom space of dimension {hom.dim}"
    )


def find_isomorphism(m: ModuleRep, n: ModuleRep, graded: Optional[bool] = None, seed: int = 0) -> Optional[np.ndarray]:
    if graded is None:
        graded = m.graded and n.graded
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return np.zeros((0, 0), dtype=np.int64)
    hom = hom_space(m, n, graded=graded)
    rng = np.random.default_rng(seed)
    cands = list(hom.basis) + [hom.random_element(rng) for _ in range(64)]
    for t in cands:
        if rank_mod(t, m.p) == m.dim:
            return t
    return None


# ---------------------------------------------------------------------------
# Krull-Schmidt decomposition


def _restrict_endos(endos, basis, left, p):
    return [matmul_mod(left, matmul_mod(e, basis, p), p) for e in endos]


def decompose(m: ModuleRep, seed: int = 0, budget: int = 64) -> list[ModuleRep]:
    """Indecomposable summands, each with a certified local endomorphism ring."""
    if m.dim == 0:
        return []
    p = m.p
    rng = np.random.default_rng(seed)
    endos = list(hom_space(m, m).basis)
    out: list[ModuleRep] = []
    work = [(m, endos)]
    while work:
        cur, ends = work.pop()
        if cur.dim == 0:
            continue
        proj = split_or_certify(ends, p, rng, budget)
        if proj is None:
            out.append(cur)
            continue
        parts = []
        for pr in (proj, (np.eye(cur.dim, dtype=np.int64) - proj) % p):
            sub, incl = submodule(cur, column_space_mod(pr, p))
            left = left_inverse_mod(incl, p)
            compressed = [matmul_mod(pr, matmul_mod(e, pr, p), p) for e in ends]
            parts.append((sub, _restrict_endos(compressed, incl, left, p)))
        work.extend(reversed(parts))
    return out


# ---------------------------------------------------------------------------
# Projective covers and injective hulls


def projective_cover(m: ModuleRep) -> tuple[ModuleRep, np.ndarray]:
    """(P(M), surjection P(M) -> M) built from generators lifting the top."""
    alg = m.algebra
    _check_supported(alg)
    p = m.p
    if m.dim == 0:
        return zero_module(alg, m.graded), np.zeros((0, 0), dtype=np.int64)
    rad = radical_basis(m)
    span = rad
    graded = m.graded and all(pim.relative_weights is not None for pim in alg.pims)
    pieces, maps = [], []
    for i, pim in enumerate(alg.pims):
        e_m = m.element(pim.idempotent)
        cols = column_space_mod(e_m, p)
        if cols.shape[1] == 0:
            continue
        weights = None
        if graded:
            hb = homogeneous_basis(m, cols)
            if hb is None:
                raise ModuleError("idempotent image is not graded")
            cols, weights = hb
        for j in range(cols.shape[1]):
            v = cols[:, j]
            trial = np.hstack([span, v[:, None]])
            if rank_mod(trial, p) > (rank_mod(span, p) if span.shape[1] else 0):
                span = trial
                mod, _ = pim_module(alg, i, weights[j] if weights else None)
                pieces.append(mod if graded else mod.ungraded())
                maps.append(_pim_image(m, alg, i, v))
    cover = direct_sum(*pieces)
    surj = np.hstack(maps)
    if rank_mod(surj, p) != m.dim:
        raise ModuleError("projective cover map is not surjective")
    return cover, surj


def injective_hull(m: ModuleRep) -> tuple[ModuleRep, np.ndarray]:
    """I(M) = P(M*)* with the transposed surjection as injection M -> I(M)."""
    cover, surj = projective_cover(dual(m))
    return dual(cover), surj.T.copy()
