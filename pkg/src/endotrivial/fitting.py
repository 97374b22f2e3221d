"""Fitting-lemma splitting inside a finite-dimensional endomorphism algebra."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from sympy import GF, Matrix, Poly, symbols

from .linalg import (
    column_space_mod,
    inv_mod,
    matmul_mod,
    matpow_mod,
    nullspace_mod,
    rank_mod,
)


class DecompositionBudgetExceeded(RuntimeError):
    """Neither a splitting endomorphism nor a locality certificate was found."""


def eigenvalues_mod(x: np.ndarray, p: int) -> list[int]:
    """Eigenvalues of x lying in F_p."""
    k = x.shape[0]
    if k == 0:
        return []
    if p <= 211:
        eye = np.eye(k, dtype=np.int64)
        return [c for c in range(p) if rank_mod((x - c * eye) % p, p) < k]
    lam = symbols("lam")
    poly = Poly(Matrix(x.tolist()).charpoly(lam).as_expr(), lam, domain=GF(p))
    return sorted({int(r) % p for r in poly.ground_roots()})


def fitting_projection(y: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Projection onto im(y^k) along ker(y^k), or None if that is trivial."""
    k = y.shape[0]
    yk = matpow_mod(y, k, p)
    if not yk.any():
        return None
    image = column_space_mod(yk, p)
    kernel = nullspace_mod(yk, p)
    if kernel.shape[1] == 0:
        return None
    basis = np.hstack([image, kernel])
    diag = np.zeros((k, k), dtype=np.int64)
    diag[: image.shape[1], : image.shape[1]] = np.eye(image.shape[1], dtype=np.int64)
    return matmul_mod(matmul_mod(basis, diag, p), inv_mod(basis, p), p)


def _split_by(x: np.ndarray, p: int, nil_parts: list) -> tuple[Optional[np.ndarray], bool]:
    """Try to split with x; returns (projection, has_rational_eigenvalue)."""
    k = x.shape[0]
    eye = np.eye(k, dtype=np.int64)
    eig = eigenvalues_mod(x, p)
    for c in eig:
        proj = fitting_projection((x - c * eye) % p, p)
        if proj is not None:
            return proj, True
    if len(eig) == 1:
        nil_parts.append((x - eig[0] * eye) % p)
    return None, bool(eig)


def try_split(x: np.ndarray, p: int) -> Optional[np.ndarray]:
    """Projection from a Fitting decomposition of x - c for some eigenvalue c."""
    return _split_by(np.asarray(x, dtype=np.int64) % p, p, [])[0]


def _is_local(endos: Sequence[np.ndarray], nil_parts: list, p: int) -> bool:
    k = endos[0].shape[0]
    eye = np.eye(k, dtype=np.int64).ravel()
    if nil_parts:
        jmat = column_space_mod(np.stack([n.ravel() for n in nil_parts], axis=1), p)
    else:
        jmat = np.zeros((k * k, 0), dtype=np.int64)
    span = np.hstack([eye[:, None], jmat])
    r_span = rank_mod(span, p)
    if r_span != jmat.shape[1] + 1:
        return False
    allv = np.hstack([span, np.stack([e.ravel() for e in endos], axis=1)])
    if rank_mod(allv, p) != r_span:
        return False
    jb = [jmat[:, i].reshape(k, k) for i in range(jmat.shape[1])]
    if not jb:
        return True
    r_j = jmat.shape[1]
    prods = [matmul_mod(a, b, p).ravel() for a in jb for b in jb]
    if rank_mod(np.hstack([jmat, np.stack(prods, axis=1)]), p) != r_j:
        return False
    # J must be a nilpotent ideal: J^m shrinks to zero.
    level = jb
    for _ in range(k + 1):
        nxt = [matmul_mod(a, s, p) for a in jb for s in level]
        nxt = [n for n in nxt if n.any()]
        if not nxt:
            return True
        cs = column_space_mod(np.stack([n.ravel() for n in nxt], axis=1), p)
        level = [cs[:, i].reshape(k, k) for i in range(cs.shape[1])]
    return False


def split_or_certify(
    endos: Sequence[np.ndarray],
    p: int,
    rng: Optional[np.random.Generator] = None,
    budget: int = 64,
) -> Optional[np.ndarray]:
    """Find a nontrivial idempotent endomorphism, or certify a local ring.

    ``endos`` must span the endomorphism algebra.  Returns a projection
    matrix commuting with the algebra when the space decomposes, ``None``
    when the algebra is certified local (scalars plus a nilpotent ideal).
    """
    endos = [np.asarray(e, dtype=np.int64) % p for e in endos]
    if not endos or endos[0].shape[0] <= 1:
        return None
    nil_parts: list[np.ndarray] = []
    for x in endos:
        proj, _ = _split_by(x, p, nil_parts)
        if proj is not None:
            return proj
    if _is_local(endos, nil_parts, p):
        return None
    rng = rng or np.random.default_rng(0)
    for _ in range(budget):
        coeffs = rng.integers(0, p, size=len(endos))
        x = sum(int(c) * e for c, e in zip(coeffs, endos)) % p
        proj, _ = _split_by(x, p, [])
        if proj is not None:
            return proj
    raise DecompositionBudgetExceeded(
        "no splitting endomorphism found and locality could not be certified"
    )
