"""Finite-dimensional modules over u(g), given by generator matrices.

A module stores one n x n residue matrix per Lie basis element and an
optional weight per basis vector.  Operations keep the grading when every
input is graded and drop it otherwise.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    Automorphism,
    PBWAlgebra,
    build_algebra,
    element_matrix,
    first_violation,
    get_algebra,
    is_restricted_map,
    monomial_images,
)
from .lie import RestrictedLiePresentation, sl2_weyl_action
from .linalg import (
    PrimeMatrix,
    column_space_mod,
    complement_mod,
    inv_mod,
    left_inverse_mod,
    matmul_mod,
    rank_mod,
)
from .weights import Weight


class ModuleError(ValueError):
    pass


def _freeze(a) -> np.ndarray:
    a = np.array(a, dtype=np.int64)
    a.setflags(write=False)
    return a


class ModuleRep:
    """A representation of a PBW algebra."""

    __slots__ = ("algebra", "action", "weights")

    def __init__(self, algebra: PBWAlgebra, action: Sequence, weights: Optional[Sequence[Weight]] = None):
        p = algebra.p
        mats = tuple(_freeze(np.asarray(a, dtype=np.int64) % p) for a in action)
        if len(mats) != algebra.d:
            raise ModuleError(f"expected {algebra.d} generator matrices, got {len(mats)}")
        n = mats[0].shape[0] if mats else 0
        for m in mats:
            if m.shape != (n, n):
                raise ModuleError("generator matrices must be square of a common size")
        if weights is not None:
            weights = tuple(Weight(w) for w in weights)
            if len(weights) != n:
                raise ModuleError("one weight per basis vector is required")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "action", mats)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleRep is immutable")

    @property
    def dim(self) -> int:
        return self.action[0].shape[0] if self.action else 0

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def pres(self) -> RestrictedLiePresentation:
        return self.algebra.pres

    @property
    def graded(self) -> bool:
        return self.weights is not None

    @property
    def gen_action(self) -> list[PrimeMatrix]:
        return [PrimeMatrix(self.p, m, shape=m.shape) for m in self.action]

    def gen(self, name: str) -> np.ndarray:
        return self.action[self.pres.index(name)]

    def element(self, a: np.ndarray) -> np.ndarray:
        """Matrix of an algebra element (PBW coordinates)."""
        if self.dim == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return element_matrix(self.action, self.algebra, a)

    def images(self, v: np.ndarray) -> list[np.ndarray]:
        """b . v for every PBW monomial b."""
        return monomial_images(self.action, self.algebra.monomials, v, self.p)

    def ungraded(self) -> "ModuleRep":
        return ModuleRep(self.algebra, self.action) if self.graded else self

    def with_weights(self, weights) -> "ModuleRep":
        return ModuleRep(self.algebra, self.action, weights)

    def shift(self, w: Weight) -> "ModuleRep":
        if not self.graded:
            raise ModuleError("cannot shift an ungraded module")
        return self.with_weights([x + w for x in self.weights])

    def weight_multiset(self) -> Optional[tuple[Weight, ...]]:
        return None if self.weights is None else tuple(sorted(self.weights))

    def __repr__(self):
        g = ", graded" if self.graded else ""
        return f"ModuleRep({self.pres.name}, p={self.p}, dim={self.dim}{g})"

    # -- serialization --------------------------------------------------
    def to_json(self) -> dict:
        pres = self.pres
        algebra = pres.name if pres.name != "custom" else pres.to_json()
        return {
            "algebra": algebra,
            "p": self.p,
            "dim": self.dim,
            "action": [[int(x) for x in m.ravel()] for m in self.action],
            "weights": None if self.weights is None else [list(w.coords) for w in self.weights],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ModuleRep":
        tag = data["algebra"]
        if isinstance(tag, str):
            alg = get_algebra(tag, int(data["p"]))
        else:
            alg = build_algebra(RestrictedLiePresentation.from_json(tag))
        n = int(data["dim"])
        mats = [np.array(m, dtype=np.int64).reshape(n, n) for m in data["action"]]
        if not mats:
            mats = [np.zeros((n, n), dtype=np.int64)] * alg.d
        return cls(alg, mats, data.get("weights"))


def dumps(m: ModuleRep) -> str:
    return json.dumps(m.to_json(), sort_keys=True)


def loads(text: str) -> ModuleRep:
    return ModuleRep.from_json(json.loads(text))


# ---------------------------------------------------------------------------
# Validity


def check_valid(m: ModuleRep) -> tuple[bool, Optional[str]]:
    """All relations hold, and the grading (if any) is respected."""
    if m.dim == 0:
        return True, None
    bad = first_violation(m.pres, m.action)
    if bad is not None:
        return False, bad
    if m.graded:
        bad = grading_violation(m)
        if bad is not None:
            return False, bad
    return True, None


def grading_violation(m: ModuleRep) -> Optional[str]:
    """Generators must shift weights by their own weight; torus elements act by the pairing."""
    pres, p = m.pres, m.p
    if pres.weights is None:
        return "algebra carries no weights"
    torus = pres.torus_indices
    for i in range(pres.d):
        mat = m.action[i]
        rows, cols = np.nonzero(mat)
        for r, c in zip(rows, cols):
            if m.weights[r] != m.weights[c] + pres.weights[i]:
                return f"{pres.basis_names[i]} does not shift weights by {pres.weights[i]}"
    for j, t in enumerate(torus):
        diag = np.array([w.coords[j] for w in m.weights], dtype=np.int64) % p
        if np.any((m.action[t] - np.diag(diag)) % p):
            return f"{pres.basis_names[t]} does not act by the weight pairing"
    return None


def is_valid(m: ModuleRep) -> bool:
    return check_valid(m)[0]


# ---------------------------------------------------------------------------
# Basic modules


def zero_module(alg: PBWAlgebra, graded: bool = False) -> ModuleRep:
    return ModuleRep(alg, [np.zeros((0, 0), dtype=np.int64)] * alg.d, () if graded else None)


def trivial(alg: PBWAlgebra, weight: Optional[Weight] = None, graded: bool = True) -> ModuleRep:
    """k, graded in weight 0 (or the given weight) when the algebra has weights."""
    mats = [np.zeros((1, 1), dtype=np.int64)] * alg.d
    if alg.pres.weights is None or not graded:
        return ModuleRep(alg, mats)
    w = weight if weight is not None else Weight.zero(alg.pres.weights[0].rank)
    return character(alg, w)


def character(alg: PBWAlgebra, weight: Weight) -> ModuleRep:
    """One-dimensional module of the given weight: h_j acts by coordinate j mod p."""
    pres = alg.pres
    mats = [np.zeros((1, 1), dtype=np.int64) for _ in range(alg.d)]
    for j, t in enumerate(pres.torus_indices):
        mats[t][0, 0] = weight.coords[j] % alg.p
    return ModuleRep(alg, mats, [weight])


def regular(alg: PBWAlgebra) -> ModuleRep:
    return ModuleRep(alg, alg.gens)


def pim_module(alg: PBWAlgebra, i: int, top_weight: Optional[Weight] = None) -> tuple[ModuleRep, np.ndarray]:
    """P_i = A e_i as a module, with its basis (columns in A).

    For triangular algebras with weights the module is graded with top
    weight ``top_weight`` (which must reduce to the PIM's label mod p).
    """
    pim = alg.pims[i]
    p = alg.p
    left = left_inverse_mod(pim.basis, p)
    mats = [matmul_mod(left, matmul_mod(g, pim.basis, p), p) for g in alg.gens]
    weights = None
    if pim.relative_weights is not None:
        rank = pim.relative_weights[0].rank
        if top_weight is None:
            coords = list(pim.label) + [0] * (rank - len(pim.label))
            top_weight = Weight(coords)
        if any((top_weight.coords[j] - pim.label[j]) % p for j in range(len(pim.label))):
            raise ModuleError(f"top weight {top_weight} does not reduce to label {pim.label}")
        weights = [top_weight + w for w in pim.relative_weights]
    return ModuleRep(alg, mats, weights), pim.basis


def natural_sl3(alg: PBWAlgebra) -> ModuleRep:
    """V = L(omega_1) restricted to sl3-u1 or sl3-b1, basis of weights w1, w1-a1, w1-a1-a2."""
    pres = alg.pres
    if pres.root_system != "A2":
        raise ModuleError("natural module is defined for sl3 presets")
    full = {
        "f1": [[0, 0, 0], [1, 0, 0], [0, 0, 0]],
        "f2": [[0, 0, 0], [0, 0, 0], [0, 1, 0]],
        # [f1, f2] = f1 f2 - f2 f1
        "f12": [[0, 0, 0], [0, 0, 0], [-1, 0, 0]],
        "h1": [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
        "h2": [[0, 0, 0], [0, 1, 0], [0, 0, -1]],
    }
    mats = [np.array(full[name], dtype=np.int64) for name in pres.basis_names]
    weights = [Weight((1, 0)), Weight((-1, 1)), Weight((0, -1))]
    return ModuleRep(alg, mats, weights)


def build_weyl_sl2(m: int, p: int) -> ModuleRep:
    """The Weyl module V(m) restricted to u(sl2), graded by h-weight."""
    if m < 0:
        raise ModuleError("highest weight must be non-negative")
    alg = get_algebra("sl2-g1", p)
    act = sl2_weyl_action(p, m)
    mats = [act[name] for name in alg.pres.basis_names]
    weights = [Weight((m - 2 * i,)) for i in range(m + 1)]
    return ModuleRep(alg, mats, weights)


def frobenius_twist_trivial(alg: PBWAlgebra, weights: Sequence[Weight]) -> ModuleRep:
    """Zero action, weights scaled by p: how a Frobenius twist looks to u(g)."""
    n = len(weights)
    mats = [np.zeros((n, n), dtype=np.int64) for _ in range(alg.d)]
    return ModuleRep(alg, mats, [alg.p * Weight(w) for w in weights])


# ---------------------------------------------------------------------------
# Monoidal structure


def _same_algebra(*mods: ModuleRep) -> PBWAlgebra:
    alg = mods[0].algebra
    for m in mods[1:]:
        if m.algebra is not alg and m.pres.to_json() != alg.pres.to_json():
            raise ModuleError("modules are over different algebras")
    return alg


def direct_sum(*mods: ModuleRep) -> ModuleRep:
    if not mods:
        raise ModuleError("direct_sum needs at least one module")
    alg = _same_algebra(*mods)
    n = sum(m.dim for m in mods)
    mats = []
    for i in range(alg.d):
        out = np.zeros((n, n), dtype=np.int64)
        off = 0
        for m in mods:
            out[off : off + m.dim, off : off + m.dim] = m.action[i]
            off += m.dim
        mats.append(out)
    weights = None
    if all(m.graded for m in mods):
        weights = [w for m in mods for w in m.weights]
    return ModuleRep(alg, mats, weights)


def tensor(m: ModuleRep, n: ModuleRep) -> ModuleRep:
    """Generators are primitive: x acts as x (x) 1 + 1 (x) x."""
    alg = _same_algebra(m, n)
    im, inn = np.eye(m.dim, dtype=np.int64), np.eye(n.dim, dtype=np.int64)
    mats = [np.kron(a, inn) + np.kron(im, b) for a, b in zip(m.action, n.action)]
    if m.dim * n.dim == 0:
        mats = [np.zeros((0, 0), dtype=np.int64)] * alg.d
    weights = None
    if m.graded and n.graded:
        weights = [a + b for a in m.weights for b in n.weights]
    return ModuleRep(alg, mats, weights)


def dual(m: ModuleRep) -> ModuleRep:
    """Antipode x -> -x gives rho*(x) = -rho(x)^T."""
    mats = [(-a.T) % m.p for a in m.action]
    weights = None if m.weights is None else [-w for w in m.weights]
    return ModuleRep(m.algebra, mats, weights)


def restrict(m: ModuleRep, sub: PBWAlgebra, embedding: np.ndarray) -> ModuleRep:
    """Restrict along a restricted Lie map; column i of ``embedding`` is the image of sub's x_i."""
    emb = np.asarray(embedding, dtype=np.int64) % m.p
    if not is_restricted_map(sub.pres, m.algebra, emb):
        raise ModuleError("embedding is not a restricted Lie algebra map")
    mats = []
    for i in range(sub.d):
        out = np.zeros((m.dim, m.dim), dtype=np.int64)
        for k in np.flatnonzero(emb[:, i]):
            out = (out + int(emb[k, i]) * m.action[k]) % m.p
        mats.append(out)
    weights = None
    if m.graded and sub.pres.weights is not None:
        ok = all(
            m.pres.weights[k] == sub.pres.weights[i]
            for i in range(sub.d)
            for k in np.flatnonzero(emb[:, i])
        )
        if ok:
            weights = m.weights
    return ModuleRep(sub, mats, weights)


def inclusion(sub_name: str, big_name: str, p: int, kind: str = "standard") -> np.ndarray:
    """Embedding matrix between presets, matching basis elements by name.

    ``kind="opposite"`` (sl2 only) sends f to -e, the Weyl-conjugate unipotent.
    """
    sub, big = get_algebra(sub_name, p).pres, get_algebra(big_name, p).pres
    emb = np.zeros((big.d, sub.d), dtype=np.int64)
    for i, name in enumerate(sub.basis_names):
        if kind == "opposite":
            if big.name != "sl2-g1" or name != "f":
                raise ModuleError("opposite embedding is only defined from sl2-u1 into sl2-g1")
            emb[big.index("e"), i] = p - 1
        else:
            emb[big.index(name), i] = 1
    return emb


def twist(m: ModuleRep, phi: Automorphism) -> ModuleRep:
    """rho'(x_i) = rho(phi(x_i)); weights transported by phi's weight map."""
    p = m.p
    mat = np.asarray(phi.matrix, dtype=np.int64) % p
    if mat.shape != (m.algebra.d, m.algebra.d):
        raise ModuleError("automorphism size does not match the algebra")
    mats = []
    for i in range(m.algebra.d):
        out = np.zeros((m.dim, m.dim), dtype=np.int64)
        for k in np.flatnonzero(mat[:, i]):
            out = (out + int(mat[k, i]) * m.action[k]) % p
        mats.append(out)
    weights = None
    if m.graded and phi.weight_map is not None:
        # phi maps the weight-w part of g to weight W(w); the twisted module has
        # M'_mu = M_{W mu} for W an involution or the identity.
        wmap = np.asarray(phi.weight_map, dtype=np.int64)
        inv = np.rint(np.linalg.inv(wmap)).astype(np.int64)
        weights = [Weight(inv @ np.array(w.coords)) for w in m.weights]
    out = ModuleRep(m.algebra, mats, weights)
    if weights is not None and grading_violation(out) is not None:
        out = out.ungraded()
    return out


# ---------------------------------------------------------------------------
# Subspaces, submodules and quotients


def module_map_ok(m: ModuleRep, n: ModuleRep, t: np.ndarray) -> bool:
    """t: M -> N (an n.dim x m.dim matrix) intertwines the actions."""
    p = m.p
    for a, b in zip(m.action, n.action):
        if np.any((matmul_mod(t, a, p) - matmul_mod(b, t, p)) % p):
            return False
    return True


def submodule_closure(m: ModuleRep, vectors: np.ndarray) -> np.ndarray:
    """Basis (columns) of the submodule generated by the given columns."""
    p = m.p
    vecs = np.asarray(vectors, dtype=np.int64).reshape(m.dim, -1) % p
    basis = column_space_mod(vecs, p)
    while True:
        grown = np.hstack([basis] + [matmul_mod(a, basis, p) for a in m.action])
        nb = column_space_mod(grown, p)
        if nb.shape[1] == basis.shape[1]:
            return nb
        basis = nb


def homogeneous_basis(m: ModuleRep, basis: np.ndarray) -> Optional[tuple[np.ndarray, list[Weight]]]:
    """A basis of span(basis) made of weight vectors, if the span is graded."""
    if not m.graded:
        return None
    p = m.p
    basis = np.asarray(basis, dtype=np.int64)
    cols, weights = [], []
    for w in sorted(set(m.weights)):
        mask = np.array([x == w for x in m.weights])
        part = basis.copy()
        part[~mask] = 0
        cs = column_space_mod(part, p)
        for j in range(cs.shape[1]):
            cols.append(cs[:, j])
            weights.append(w)
    if len(cols) != (rank_mod(basis, p) if basis.size else 0):
        return None
    if not cols:
        return np.zeros((m.dim, 0), dtype=np.int64), []
    hb = np.stack(cols, axis=1)
    if rank_mod(np.hstack([hb, basis]), p) != hb.shape[1]:
        return None
    return hb, weights


def submodule(m: ModuleRep, basis: np.ndarray) -> tuple[ModuleRep, np.ndarray]:
    """The submodule with the given (invariant) column span, and its inclusion matrix.

    Graded modules get a homogeneous basis when the span allows one.
    """
    p = m.p
    basis = np.asarray(basis, dtype=np.int64).reshape(m.dim, -1) % p
    if basis.shape[1]:
        basis = column_space_mod(basis, p)
    weights = None
    hom = homogeneous_basis(m, basis)
    if hom is not None:
        basis, weights = hom
    k = basis.shape[1]
    if k == 0:
        return zero_module(m.algebra, m.graded and hom is not None), basis
    left = left_inverse_mod(basis, p)
    mats = []
    for a in m.action:
        img = matmul_mod(a, basis, p)
        coords = matmul_mod(left, img, p)
        if np.any((matmul_mod(basis, coords, p) - img) % p):
            raise ModuleError("span is not a submodule")
        mats.append(coords)
    return ModuleRep(m.algebra, mats, weights), basis


def quotient(m: ModuleRep, basis: np.ndarray) -> tuple[ModuleRep, np.ndarray]:
    """M / span(basis) and the projection matrix (dim Q x dim M).

    The quotient basis is the images of standard basis vectors, so a graded
    module has a graded quotient when the submodule is graded.
    """
    p = m.p
    basis = np.asarray(basis, dtype=np.int64).reshape(m.dim, -1) % p
    if basis.shape[1]:
        basis = column_space_mod(basis, p)
    k = basis.shape[1]
    comp = complement_mod(basis, p)
    full = np.hstack([basis, np.eye(m.dim, dtype=np.int64)[:, comp]])
    inv = inv_mod(full, p)
    proj = inv[k:, :]
    mats = []
    for a in m.action:
        img = matmul_mod(a, full[:, k:], p)
        mats.append(matmul_mod(proj, img, p))
        if k and np.any(matmul_mod(proj, matmul_mod(a, basis, p), p)):
            raise ModuleError("span is not a submodule")
    weights = None
    if m.graded and homogeneous_basis(m, basis) is not None:
        weights = [m.weights[c] for c in comp]
    if not comp:
        return zero_module(m.algebra, weights is not None), proj
    return ModuleRep(m.algebra, mats, weights), proj


def kernel_module(m: ModuleRep, t: np.ndarray) -> tuple[ModuleRep, np.ndarray]:
    """Kernel of a module map out of M, as a submodule."""
    from .linalg import nullspace_mod

    return submodule(m, nullspace_mod(np.asarray(t, dtype=np.int64).reshape(-1, m.dim), m.p))


def image_module(n: ModuleRep, t: np.ndarray) -> tuple[ModuleRep, np.ndarray]:
    return submodule(n, column_space_mod(np.asarray(t, dtype=np.int64).reshape(n.dim, -1), n.p))


def change_basis(m: ModuleRep, b: np.ndarray, weights=None) -> ModuleRep:
    """The same module written in the basis given by the columns of b."""
    p = m.p
    binv = inv_mod(np.asarray(b, dtype=np.int64) % p, p)
    mats = [matmul_mod(binv, matmul_mod(a, b, p), p) for a in m.action]
    return ModuleRep(m.algebra, mats, weights)


# ---------------------------------------------------------------------------
# Weight diagrams


@dataclass(frozen=True)
class WeightDiagram:
    nodes: tuple[Weight, ...]
    arrows: tuple[tuple[int, int, int], ...]  # (source node, target node, simple root index)
    root_system: str = "A2"

    def node_set(self) -> set[Weight]:
        return set(self.nodes)

    def arrow_set(self) -> set[tuple[Weight, Weight, int]]:
        return {(self.nodes[a], self.nodes[b], k) for a, b, k in self.arrows}

    def to_dot(self, name: str = "weights") -> str:
        from .weights import RootSystem

        rs = RootSystem(self.root_system)
        lines = [f"digraph {name} {{"]
        for i, w in enumerate(self.nodes):
            coords = ",".join(str(c) for c in w.coords)
            lines.append(f'  n{i} [label="{rs.format(w)}", weight="{coords}"];')
        for a, b, k in self.arrows:
            lines.append(f'  n{a} -> n{b} [label="a{k + 1}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dot(cls, text: str, root_system: str = "A2") -> "WeightDiagram":
        node_re = re.compile(r'^\s*n(\d+)\s*\[label="[^"]*",\s*weight="([-\d,]*)"\];')
        edge_re = re.compile(r'^\s*n(\d+)\s*->\s*n(\d+)\s*\[label="a(\d+)"\];')
        nodes: dict[int, Weight] = {}
        arrows = []
        for line in text.splitlines():
            mt = node_re.match(line)
            if mt:
                nodes[int(mt.group(1))] = Weight(int(x) for x in mt.group(2).split(","))
                continue
            mt = edge_re.match(line)
            if mt:
                arrows.append((int(mt.group(1)), int(mt.group(2)), int(mt.group(3)) - 1))
        order = [nodes[i] for i in sorted(nodes)]
        return cls(tuple(order), tuple(arrows), root_system)


def weight_diagram(m: ModuleRep) -> WeightDiagram:
    """Nodes are basis weights; an arrow for each nonzero simple-root generator entry."""
    if not m.graded:
        raise ModuleError("weight diagrams need a graded module")
    pres = m.pres
    rs = pres.roots
    simple = {}
    for i, w in enumerate(pres.weights):
        for k, a in enumerate(rs.simple_roots):
            if w == -a:
                simple[i] = k
    arrows = []
    for i, k in sorted(simple.items(), key=lambda kv: kv[1]):
        rows, cols = np.nonzero(m.action[i])
        for r, c in sorted(zip(rows.tolist(), cols.tolist()), key=lambda rc: (rc[1], rc[0])):
            arrows.append((c, r, k))
    return WeightDiagram(tuple(m.weights), tuple(arrows), rs.name)
