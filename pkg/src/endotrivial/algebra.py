"""Restricted enveloping algebras u(g) in a PBW basis.

Monomials x_1^e_1 ... x_d^e_d with 0 <= e_i < p are ordered
lexicographically by exponent vector.  Left multiplication by a generator
is computed by straightening: commute the generator rightwards past smaller
basis elements and replace x^p by x^[p].
"""

from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Optional, Sequence

import numpy as np

from .fitting import split_or_certify, try_split
from .lie import RestrictedLiePresentation, is_triangular, preset, sl2_weyl_action
from .linalg import (
    column_space_mod,
    inv_mod,
    left_inverse_mod,
    matmul_mod,
    nullspace_mod,
    rank_mod,
)
from .weights import Weight


class AlgebraError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Evaluating PBW monomials on a representation


def _first_nonzero(e: tuple[int, ...]) -> int:
    for i, x in enumerate(e):
        if x:
            return i
    return -1


def _last_nonzero(e: tuple[int, ...]) -> int:
    for i in range(len(e) - 1, -1, -1):
        if e[i]:
            return i
    return -1


def monomial_images(gens: Sequence[np.ndarray], monomials, v: np.ndarray, p: int) -> list[np.ndarray]:
    """rho(b_e) @ v for every monomial, where rho(x_i) = gens[i].

    v may be a vector or a matrix.  Uses b_e = x_j b_{e - 1_j} with j the
    first nonzero exponent.
    """
    cache: dict[tuple, np.ndarray] = {}
    out = []
    for e in monomials:
        out.append(_image(gens, e, v, p, cache))
    return out


def _image(gens, e, v, p, cache):
    got = cache.get(e)
    if got is not None:
        return got
    j = _first_nonzero(e)
    if j < 0:
        res = np.asarray(v, dtype=np.int64) % p
    else:
        prev = list(e)
        prev[j] -= 1
        res = matmul_mod(gens[j], _image(gens, tuple(prev), v, p, cache), p)
    cache[e] = res
    return res


def monomial_rows(gens: Sequence[np.ndarray], monomials, rows: np.ndarray, p: int) -> list[np.ndarray]:
    """rows @ rho(b_e) for every monomial (b_e = b_{e - 1_k} x_k, k last nonzero)."""
    cache: dict[tuple, np.ndarray] = {}

    def go(e):
        got = cache.get(e)
        if got is not None:
            return got
        k = _last_nonzero(e)
        if k < 0:
            res = np.asarray(rows, dtype=np.int64) % p
        else:
            prev = list(e)
            prev[k] -= 1
            res = matmul_mod(go(tuple(prev)), gens[k], p)
        cache[e] = res
        return res

    return [go(e) for e in monomials]


def element_matrix(gens: Sequence[np.ndarray], alg: "PBWAlgebra", a: np.ndarray) -> np.ndarray:
    """rho(a) for an algebra element a given in the PBW basis.

    Nested Horner evaluation: sum_c rho(x_1)^c (sum_c' rho(x_2)^c' (...)).
    """
    p, d = alg.p, alg.d
    n = gens[0].shape[0] if len(gens) else 1
    coeffs = (np.asarray(a, dtype=np.int64) % p).reshape((p,) * d)
    if not coeffs.any():
        return np.zeros((n, n), dtype=np.int64)
    powers = []
    for g in gens:
        pw = [np.eye(n, dtype=np.int64)]
        for _ in range(p - 1):
            pw.append(matmul_mod(g, pw[-1], p))
        powers.append(pw)

    def go(level, block):
        if level == d - 1:
            out = np.zeros((n, n), dtype=np.int64)
            for c in np.flatnonzero(block):
                out += int(block[c]) * powers[level][c]
            return out % p
        out = np.zeros((n, n), dtype=np.int64)
        for c in range(p):
            sub = block[c]
            if not sub.any():
                continue
            inner = go(level + 1, sub)
            out = (out + (inner if c == 0 else matmul_mod(powers[level][c], inner, p))) % p
        return out

    return go(0, coeffs)


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PIM:
    """Projective indecomposable P = A e with a socle element u (Au = soc P)."""

    label: tuple[int, ...]
    idempotent: np.ndarray
    socle_element: np.ndarray
    t: int
    basis: np.ndarray
    relative_weights: Optional[tuple[Weight, ...]]
    simple_dim: int

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


class PBWAlgebra:
    def __init__(self, pres: RestrictedLiePresentation):
        pres.validate()
        self.pres = pres
        self.p = pres.p
        self.d = pres.d
        self.dim = self.p**self.d
        self.monomials: list[tuple[int, ...]] = list(itertools.product(range(self.p), repeat=self.d))
        self.index = {e: i for i, e in enumerate(self.monomials)}
        self.triangular = is_triangular(pres)
        self._memo: dict[tuple[int, int], np.ndarray] = {}
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(max(old, 20000))
        try:
            gens = []
            for i in range(self.d):
                g = np.zeros((self.dim, self.dim), dtype=np.int64)
                for col, e in enumerate(self.monomials):
                    g[:, col] = self._left(i, e)
                gens.append(g)
        finally:
            sys.setrecursionlimit(old)
        self.gens = gens
        self._memo.clear()

    # -- straightening --------------------------------------------------
    def _unit(self, e) -> np.ndarray:
        v = np.zeros(self.dim, dtype=np.int64)
        v[self.index[tuple(e)]] = 1
        return v

    def _left(self, i: int, e: tuple[int, ...]) -> np.ndarray:
        key = (i, self.index[e])
        got = self._memo.get(key)
        if got is not None:
            return got
        p, pres = self.p, self.pres
        j = _first_nonzero(e)
        if j < 0 or j > i:
            new = list(e)
            new[i] += 1
            res = self._unit(new)
        elif j == i:
            if e[i] + 1 < p:
                new = list(e)
                new[i] += 1
                res = self._unit(new)
            else:
                rest = list(e)
                rest[i] = 0
                res = np.zeros(self.dim, dtype=np.int64)
                for k in np.flatnonzero(pres.p_power[i]):
                    res = (res + int(pres.p_power[i, k]) * self._left(int(k), tuple(rest))) % p
        else:
            prev = list(e)
            prev[j] -= 1
            prev = tuple(prev)
            inner = self._left(i, prev)
            res = self._left_vec(j, inner)
            for k in np.flatnonzero(pres.brackets[i, j]):
                res = (res + int(pres.brackets[i, j, k]) * self._left(int(k), prev)) % p
        self._memo[key] = res
        return res

    def _left_vec(self, j: int, v: np.ndarray) -> np.ndarray:
        res = np.zeros(self.dim, dtype=np.int64)
        for idx in np.flatnonzero(v):
            res = (res + int(v[idx]) * self._left(j, self.monomials[idx])) % self.p
        return res

    # -- elements -------------------------------------------------------
    @property
    def name(self) -> str:
        return self.pres.name

    def one(self) -> np.ndarray:
        return self._unit((0,) * self.d)

    def basis_element(self, e) -> np.ndarray:
        return self._unit(e)

    def lie_element(self, coeffs) -> np.ndarray:
        """Embed a Lie algebra element (coefficients on x_1..x_d)."""
        v = np.zeros(self.dim, dtype=np.int64)
        for i, c in enumerate(coeffs):
            unit = [0] * self.d
            unit[i] = 1
            v[self.index[tuple(unit)]] = c
        return v % self.p

    def lie_part(self, a: np.ndarray) -> Optional[np.ndarray]:
        """Coefficients on x_1..x_d if a lies in the span of the generators."""
        coeffs = np.zeros(self.d, dtype=np.int64)
        rest = np.asarray(a, dtype=np.int64).copy() % self.p
        for i in range(self.d):
            unit = [0] * self.d
            unit[i] = 1
            k = self.index[tuple(unit)]
            coeffs[i] = rest[k]
            rest[k] = 0
        return None if rest.any() else coeffs

    def left_matrix(self, a: np.ndarray) -> np.ndarray:
        return element_matrix(self.gens, self, a)

    def right_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of x -> x a; column j is b_j a."""
        cols = monomial_images(self.gens, self.monomials, np.asarray(a) % self.p, self.p)
        return np.stack(cols, axis=1)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        # a b = sum_j a_j (b_j b), and b_j b is column j of the right matrix of b.
        return matmul_mod(self.right_matrix(b), np.asarray(a), self.p)

    def power(self, a: np.ndarray, k: int) -> np.ndarray:
        out = self.one()
        for _ in range(k):
            out = self.mul(a, out)
        return out

    def monomial_product(self, e1, e2) -> np.ndarray:
        """The multiplication table entry b_e1 * b_e2."""
        return self.mul(self._unit(e1), self._unit(e2))

    def check_associative(self, samples: Optional[int] = None, seed: int = 0) -> bool:
        """Exhaustive on monomial triples when samples is None."""
        n = self.dim
        mats = {}

        def lm(i):
            if i not in mats:
                mats[i] = self.left_matrix(self._unit(self.monomials[i]))
            return mats[i]

        if samples is None:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = np.random.default_rng(seed)
            triples = (tuple(int(x) for x in rng.integers(0, n, 3)) for _ in range(samples))
        for i, j, k in triples:
            bj_bk = lm(j)[:, k]
            left = matmul_mod(lm(i), bj_bk, self.p)
            bi_bj = lm(i)[:, j]
            right = matmul_mod(self.left_matrix(bi_bj), self._unit(self.monomials[k]), self.p)
            if np.any((left - right) % self.p):
                return False
        return True

    def check_relations(self) -> bool:
        """Generators of the regular representation satisfy brackets and p-powers."""
        return relations_hold(self.pres, self.gens)

    # -- counit / antipode ----------------------------------------------
    def counit(self, a: np.ndarray) -> int:
        return int(a[0]) % self.p

    # -- Frobenius structure ---------------------------------------------
    @cached_property
    def top_index(self) -> int:
        return self.index[(self.p - 1,) * self.d]

    @cached_property
    def gram(self) -> np.ndarray:
        """G[j, l] = lambda(b_j b_l) with lambda the top PBW coefficient."""
        e_top = np.zeros(self.dim, dtype=np.int64)
        e_top[self.top_index] = 1
        rows = monomial_rows(self.gens, self.monomials, e_top, self.p)
        return np.stack(rows, axis=0)

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        try:
            return inv_mod(self.gram, self.p)
        except ZeroDivisionError as exc:
            raise AlgebraError("top-coefficient form is degenerate") from exc

    # -- radical and simples ---------------------------------------------
    @cached_property
    def simples(self) -> list[tuple[tuple[int, ...], list[np.ndarray]]]:
        """(label, generator matrices) for each simple module."""
        p, pres = self.p, self.pres
        if self.triangular:
            tor = pres.torus_indices
            out = []
            for lam in itertools.product(range(p), repeat=len(tor)):
                mats = [np.zeros((1, 1), dtype=np.int64) for _ in range(self.d)]
                for t, val in zip(tor, lam):
                    mats[t][0, 0] = val
                out.append((tuple(lam), mats))
            return out
        if pres.name == "sl2-g1":
            out = []
            for lam in range(p):
                act = sl2_weyl_action(p, lam)
                out.append(((lam,), [act[nm] for nm in pres.basis_names]))
            return out
        raise AlgebraError(f"simple modules unknown for algebra {pres.name!r}")

    @cached_property
    def radical_basis(self) -> np.ndarray:
        """Columns spanning the Jacobson radical of A."""
        if self.triangular:
            nil = self.pres.nilpotent_indices
            cols = [i for i, e in enumerate(self.monomials) if any(e[k] for k in nil)]
            basis = np.zeros((self.dim, len(cols)), dtype=np.int64)
            for c, i in enumerate(cols):
                basis[i, c] = 1
            return basis
        blocks = []
        for _, mats in self.simples:
            n = mats[0].shape[0]
            imgs = monomial_images(mats, self.monomials, np.eye(n, dtype=np.int64), self.p)
            blocks.append(np.stack([m.ravel() for m in imgs], axis=1))
        return nullspace_mod(np.vstack(blocks), self.p)

    # -- projective indecomposables ---------------------------------------
    @cached_property
    def pims(self) -> list[PIM]:
        pims = self._triangular_pims() if self.triangular else self._general_pims()
        total = sum(pim.dim * pim.simple_dim for pim in pims)
        if total != self.dim:
            raise AlgebraError(f"PIM dimensions sum to {total}, expected {self.dim}")
        return pims

    def pim_index(self, label) -> int:
        label = tuple(label)
        for i, pim in enumerate(self.pims):
            if pim.label == label:
                return i
        raise KeyError(label)

    def _triangular_pims(self) -> list[PIM]:
        p, pres = self.p, self.pres
        tor, nil = pres.torus_indices, pres.nilpotent_indices
        top = [0] * self.d
        for k in nil:
            top[k] = p - 1
        top_f = self._unit(top)
        f_monos = [e for e in self.monomials if not any(e[t] for t in tor)]
        pims = []
        for lam in itertools.product(range(p), repeat=len(tor)):
            e = self.one()
            for t, val in zip(tor, lam):
                h = self.lie_element([int(k == t) for k in range(self.d)])
                for c in range(p):
                    if c == val:
                        continue
                    factor = (h - c * self.one()) * pow(val - c, -1, p) % p
                    e = self.mul(factor, e)
            u = self.mul(top_f, e)
            basis = np.stack([self.mul(self._unit(fm), e) for fm in f_monos], axis=1)
            rel = None
            if pres.weights is not None:
                rel = tuple(
                    sum((fm[k] * pres.weights[k] for k in nil), Weight.zero(pres.weights[0].rank))
                    for fm in f_monos
                )
            t = rank_mod(self.left_matrix(u), p)
            pims.append(PIM(tuple(lam), e, u, t, basis, rel, 1))
        return pims

    def _general_pims(self) -> list[PIM]:
        p = self.p
        idems = self.primitive_idempotents()
        rad = self.radical_basis
        pims = []
        seen = set()
        for e in idems:
            label = None
            for lab, mats in self.simples:
                if element_matrix(mats, self, e).any():
                    label = lab
                    simple_dim = mats[0].shape[0]
                    break
            if label is None:
                raise AlgebraError("idempotent acts as zero on every simple module")
            if label in seen:
                continue
            seen.add(label)
            basis = column_space_mod(self.right_matrix(e), p)
            # socle of Ae: vectors of Ae killed by the radical
            stacked = np.stack(
                [matmul_mod(self.right_matrix(basis[:, i]), rad, p).ravel() for i in range(basis.shape[1])],
                axis=1,
            )
            soc = nullspace_mod(stacked, p)
            u = matmul_mod(basis, soc[:, 0], p)
            # rank on the PIM itself; on A it is multiplied by simple_dim
            t = rank_mod(matmul_mod(self.left_matrix(u), basis, p), p)
            pims.append(PIM(label, e, u, t, basis, None, simple_dim))
        pims.sort(key=lambda pim: pim.label)
        return pims

    def primitive_idempotents(self) -> list[np.ndarray]:
        """A complete set of orthogonal primitive idempotents summing to 1.

        Splits the regular module by Fitting decomposition of right
        multiplications, which are exactly its endomorphisms.
        """
        p = self.p
        rng = np.random.default_rng(0)
        done = []
        work = [self.one()]
        while work:
            e = work.pop()
            basis = column_space_mod(self.right_matrix(e), p)
            left = left_inverse_mod(basis, p)
            k = basis.shape[1]

            def endo(x):
                return matmul_mod(left, matmul_mod(self.right_matrix(x), basis, p), p)

            proj = None
            if k > 1:
                # e A e acts on Ae by right multiplication; random elements usually split.
                ae_e = matmul_mod(self.left_matrix(e), self.right_matrix(e), p)
                for _ in range(8):
                    x = matmul_mod(ae_e, rng.integers(0, p, size=self.dim), p)
                    proj = try_split(endo(x), p)
                    if proj is not None:
                        break
                if proj is None:
                    cols = column_space_mod(ae_e, p)
                    proj = split_or_certify([endo(cols[:, j]) for j in range(cols.shape[1])], p, rng)
            if proj is None:
                done.append(e)
                continue
            e_coords = matmul_mod(left, e, p)
            f = matmul_mod(basis, matmul_mod(proj, e_coords, p), p)
            g = (e - f) % p
            work.extend([f, g])
        return done


def relations_hold(pres: RestrictedLiePresentation, mats: Sequence[np.ndarray]) -> bool:
    return first_violation(pres, mats) is None


def first_violation(pres: RestrictedLiePresentation, mats: Sequence[np.ndarray]) -> Optional[str]:
    p = pres.p
    d = pres.d
    for i in range(d):
        for j in range(i + 1, d):
            lhs = (matmul_mod(mats[i], mats[j], p) - matmul_mod(mats[j], mats[i], p)) % p
            rhs = sum(int(pres.brackets[i, j, k]) * mats[k] for k in range(d)) % p
            if np.any((lhs - rhs) % p):
                return f"[{pres.basis_names[i]}, {pres.basis_names[j]}]"
    from .linalg import matpow_mod

    for i in range(d):
        lhs = matpow_mod(mats[i], p, p)
        rhs = sum(int(pres.p_power[i, k]) * mats[k] for k in range(d)) % p
        if np.any((lhs - rhs) % p):
            return f"{pres.basis_names[i]}^p = {pres.basis_names[i]}^[p]"
    return None


def build_algebra(pres: RestrictedLiePresentation) -> PBWAlgebra:
    if pres.name != "custom":
        cached = get_algebra(pres.name, pres.p)
        if cached.pres.to_json() == pres.to_json():
            return cached
    return PBWAlgebra(pres)


@lru_cache(maxsize=None)
def get_algebra(name: str, p: int) -> PBWAlgebra:
    return PBWAlgebra(preset(name, p))


# ---------------------------------------------------------------------------
# Automorphisms


@dataclass(frozen=True, eq=False)
class Automorphism:
    """Linear automorphism of the Lie algebra; column i is the image of x_i.

    ``weight_map`` is an integer matrix acting on fundamental coordinates,
    used to transport gradings.
    """

    matrix: np.ndarray
    weight_map: Optional[np.ndarray] = None
    label: str = ""

    def apply_weight(self, w: Weight) -> Weight:
        if self.weight_map is None:
            return w
        return Weight(self.weight_map @ np.array(w.coords, dtype=np.int64))


def is_restricted_map(source: RestrictedLiePresentation, alg: PBWAlgebra, matrix: np.ndarray) -> bool:
    """Does x_i -> sum matrix[k, i] y_k preserve brackets and p-th powers?"""
    p = alg.p
    m = np.asarray(matrix, dtype=np.int64) % p
    target = alg.pres
    if m.shape != (target.d, source.d):
        return False
    for i in range(source.d):
        for j in range(source.d):
            lhs = matmul_mod(m, source.brackets[i, j], p)
            rhs = target.bracket(m[:, i], m[:, j])
            if np.any((lhs - rhs) % p):
                return False
    for i in range(source.d):
        img = alg.lie_element(m[:, i])
        powered = alg.power(img, p)
        expected = alg.lie_element(matmul_mod(m, source.p_power[i], p))
        if np.any((powered - expected) % p):
            return False
    return True


def automorphism(
    pres: RestrictedLiePresentation,
    kind: str,
    *,
    t: Sequence[int] = (),
    word: Sequence[int] = (),
    matrix: Optional[np.ndarray] = None,
) -> Automorphism:
    """Torus scaling, Weyl element, or an explicit matrix; always verified.

    Torus scaling by t (one nonzero scalar per simple root) multiplies a
    basis vector of root-lattice weight sum c_i alpha_i by prod t_i^c_i.
    The Weyl reflection of sl2-g1 is e -> -f, f -> -e, h -> -h.
    """
    p = pres.p
    d = pres.d
    roots = pres.roots
    if kind == "torus-scaling":
        if pres.weights is None or roots is None:
            raise AlgebraError("torus scaling needs weights and root data")
        t = [int(x) % p for x in t]
        if len(t) != roots.rank or any(x == 0 for x in t):
            raise AlgebraError("torus scaling needs one nonzero scalar per simple root")
        mat = np.zeros((d, d), dtype=np.int64)
        for i, w in enumerate(pres.weights):
            scale = 1
            for tj, c in zip(t, roots.to_roots(w)):
                if c.denominator != 1:
                    raise AlgebraError("basis weight is not in the root lattice")
                scale = scale * pow(tj, int(c), p) % p
            mat[i, i] = scale
        auto = Automorphism(mat, np.eye(roots.rank, dtype=np.int64), f"torus{tuple(t)}")
    elif kind == "weyl":
        if roots is None:
            raise AlgebraError("Weyl twist needs root data")
        word = list(word)
        if not word:
            auto = Automorphism(np.eye(d, dtype=np.int64), np.eye(roots.rank, dtype=np.int64), "weyl()")
        elif pres.name == "sl2-g1":
            mat = np.eye(d, dtype=np.int64)
            wmap = np.eye(1, dtype=np.int64)
            s = np.zeros((d, d), dtype=np.int64)
            f, h, e = pres.index("f"), pres.index("h"), pres.index("e")
            s[f, e] = -1
            s[e, f] = -1
            s[h, h] = -1
            for _ in word:
                mat = matmul_mod(s, mat, p)
                wmap = -wmap
            auto = Automorphism(mat % p, wmap, f"weyl{tuple(word)}")
        else:
            raise AlgebraError(f"no Weyl element normalizes {pres.name!r}")
    elif kind == "matrix":
        if matrix is None:
            raise AlgebraError("explicit automorphism needs a matrix")
        auto = Automorphism(np.asarray(matrix, dtype=np.int64) % p, None, "matrix")
    else:
        raise AlgebraError(f"unknown automorphism kind {kind!r}")
    if rank_mod(auto.matrix, p) != d:
        raise AlgebraError("automorphism matrix is singular")
    if not is_restricted_map(pres, build_algebra(pres), auto.matrix):
        raise AlgebraError("map does not preserve brackets and p-th powers")
    return auto
