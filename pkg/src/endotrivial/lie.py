"""Restricted Lie algebra presentations and the SL2/SL3 presets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import PrimeField, matmul_mod, matpow_mod
from .weights import A1, A2, RootSystem, Weight

PRESETS = ("sl2-u1", "sl2-b1", "sl2-g1", "sl3-u1", "sl3-b1")


class PresentationError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class RestrictedLiePresentation:
    """Basis, structure constants and p-map of a restricted Lie algebra.

    ``brackets[i, j, k]`` is the coefficient of x_k in [x_i, x_j];
    ``p_power[i, k]`` the coefficient of x_k in x_i^[p].
    """

    p: int
    basis_names: tuple[str, ...]
    brackets: np.ndarray
    p_power: np.ndarray
    weights: Optional[tuple[Weight, ...]] = None
    nilpotent: tuple[bool, ...] = ()
    root_system: Optional[str] = None
    name: str = "custom"

    def __post_init__(self):
        PrimeField(self.p)
        d = len(self.basis_names)
        c = np.asarray(self.brackets, dtype=np.int64) % self.p
        pp = np.asarray(self.p_power, dtype=np.int64) % self.p
        if c.shape != (d, d, d) or pp.shape != (d, d):
            raise PresentationError("structure constant shapes do not match the basis")
        c.setflags(write=False)
        pp.setflags(write=False)
        object.__setattr__(self, "brackets", c)
        object.__setattr__(self, "p_power", pp)
        if not self.nilpotent:
            object.__setattr__(self, "nilpotent", (False,) * d)
        if self.weights is not None:
            object.__setattr__(self, "weights", tuple(Weight(w) for w in self.weights))

    @property
    def d(self) -> int:
        return len(self.basis_names)

    @property
    def roots(self) -> Optional[RootSystem]:
        return RootSystem(self.root_system) if self.root_system else None

    @property
    def torus_indices(self) -> list[int]:
        return [i for i, nil in enumerate(self.nilpotent) if not nil]

    @property
    def nilpotent_indices(self) -> list[int]:
        return [i for i, nil in enumerate(self.nilpotent) if nil]

    def index(self, name: str) -> int:
        return self.basis_names.index(name)

    def bracket(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """[u, v] for coefficient vectors u, v."""
        return np.einsum("i,j,ijk->k", u, v, self.brackets) % self.p

    def ad(self, i: int) -> np.ndarray:
        # column j is [x_i, x_j]
        return self.brackets[i].T.copy()

    def ad_of(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("i,ijk->kj", v, self.brackets) % self.p

    def validate(self) -> None:
        """Raise PresentationError unless antisymmetry, Jacobi and the p-map check hold."""
        p, c = self.p, self.brackets
        if np.any((c + c.transpose(1, 0, 2)) % p):
            raise PresentationError("brackets are not antisymmetric")
        for i in range(self.d):
            for j in range(self.d):
                lhs = self.ad_of(c[i, j])
                ai, aj = self.ad(i), self.ad(j)
                rhs = (matmul_mod(ai, aj, p) - matmul_mod(aj, ai, p)) % p
                if np.any((lhs - rhs) % p):
                    raise PresentationError(
                        f"Jacobi identity fails for ({self.basis_names[i]}, {self.basis_names[j]})"
                    )
        for i in range(self.d):
            if np.any((matpow_mod(self.ad(i), p, p) - self.ad_of(self.p_power[i])) % p):
                raise PresentationError(f"ad(x)^p != ad(x^[p]) for x = {self.basis_names[i]}")
        if self.weights is not None:
            for i in range(self.d):
                for j in range(self.d):
                    for k in np.flatnonzero(c[i, j]):
                        if self.weights[k] != self.weights[i] + self.weights[j]:
                            raise PresentationError("brackets are not compatible with the weights")

    def to_json(self) -> dict:
        brackets = []
        for i in range(self.d):
            for j in range(i + 1, self.d):
                if self.brackets[i, j].any():
                    brackets.append([i, j, [int(x) for x in self.brackets[i, j]]])
        return {
            "name": self.name,
            "p": self.p,
            "basis": list(self.basis_names),
            "brackets": brackets,
            "p_power": [[int(x) for x in row] for row in self.p_power],
            "weights": None if self.weights is None else [list(w.coords) for w in self.weights],
            "nilpotent": list(self.nilpotent),
            "root_system": self.root_system,
        }

    @classmethod
    def from_json(cls, data: dict) -> "RestrictedLiePresentation":
        d = len(data["basis"])
        p = int(data["p"])
        c = np.zeros((d, d, d), dtype=np.int64)
        for i, j, coeffs in data["brackets"]:
            c[i, j] = coeffs
            c[j, i] = [-x for x in coeffs]
        pres = cls(
            p=p,
            basis_names=tuple(data["basis"]),
            brackets=c,
            p_power=np.array(data["p_power"], dtype=np.int64).reshape(d, d),
            weights=None if data.get("weights") is None else tuple(Weight(w) for w in data["weights"]),
            nilpotent=tuple(bool(x) for x in data.get("nilpotent") or [False] * d),
            root_system=data.get("root_system"),
            name=data.get("name", "custom"),
        )
        pres.validate()
        return pres


def _build(p, names, bracket_list, p_map, weights, nilpotent, root_system, name):
    d = len(names)
    idx = {n: i for i, n in enumerate(names)}
    c = np.zeros((d, d, d), dtype=np.int64)
    for a, b, terms in bracket_list:
        for target, coeff in terms.items():
            c[idx[a], idx[b], idx[target]] += coeff
            c[idx[b], idx[a], idx[target]] -= coeff
    pp = np.zeros((d, d), dtype=np.int64)
    for a, terms in p_map.items():
        for target, coeff in terms.items():
            pp[idx[a], idx[target]] += coeff
    pres = RestrictedLiePresentation(
        p=p,
        basis_names=tuple(names),
        brackets=c,
        p_power=pp,
        weights=tuple(weights),
        nilpotent=tuple(nilpotent),
        root_system=root_system,
        name=name,
    )
    pres.validate()
    return pres


def preset(name: str, p: int) -> RestrictedLiePresentation:
    """Presentation of a preset restricted Lie algebra.

    Conventions: Chevalley basis with [e, f] = h, [h, e] = 2e, [h, f] = -2f
    for sl2 and [f1, f2] = f12 for sl3; f_alpha has weight -alpha, torus
    elements weight 0, h^[p] = h and root vectors have zero p-th power.
    """
    PrimeField(p)
    if name == "sl2-u1":
        a = A1.simple_root(0)
        return _build(p, ["f"], [], {}, [-a], [True], "A1", name)
    if name == "sl2-b1":
        a = A1.simple_root(0)
        return _build(
            p, ["h", "f"], [("h", "f", {"f": -2})], {"h": {"h": 1}},
            [A1.zero(), -a], [False, True], "A1", name,
        )
    if name == "sl2-g1":
        a = A1.simple_root(0)
        return _build(
            p,
            ["f", "h", "e"],
            [("e", "f", {"h": 1}), ("h", "e", {"e": 2}), ("h", "f", {"f": -2})],
            {"h": {"h": 1}},
            [-a, A1.zero(), a],
            [True, False, True],
            "A1",
            name,
        )
    a1, a2 = A2.simple_roots
    if name == "sl3-u1":
        return _build(
            p, ["f1", "f2", "f12"], [("f1", "f2", {"f12": 1})], {},
            [-a1, -a2, -(a1 + a2)], [True, True, True], "A2", name,
        )
    if name == "sl3-b1":
        brackets = [("f1", "f2", {"f12": 1})]
        roots = {"f1": a1, "f2": a2, "f12": a1 + a2}
        for i, h in enumerate(("h1", "h2")):
            for f, alpha in roots.items():
                brackets.append((h, f, {f: -A2.pairing(alpha, i)}))
        return _build(
            p,
            ["h1", "h2", "f1", "f2", "f12"],
            brackets,
            {"h1": {"h1": 1}, "h2": {"h2": 1}},
            [A2.zero(), A2.zero(), -a1, -a2, -(a1 + a2)],
            [False, False, True, True, True],
            "A2",
            name,
        )
    raise ValueError(f"unknown preset {name!r}; expected one of {', '.join(PRESETS)}")


def is_triangular(pres: RestrictedLiePresentation) -> bool:
    """Torus part toral and diagonal on the nilpotent part, nilpotent part closed.

    For these algebras every simple module is a character of the torus.
    """
    tor, nil = pres.torus_indices, pres.nilpotent_indices
    for t in tor:
        if pres.p_power[t].tolist() != [int(k == t) for k in range(pres.d)]:
            return False
        for t2 in tor:
            if pres.brackets[t, t2].any():
                return False
        for n in nil:
            v = pres.brackets[t, n].copy()
            v[n] = 0
            if v.any():
                return False
    for a in nil:
        if pres.p_power[a].any():
            return False
        for b in nil:
            if any(pres.brackets[a, b, t] for t in tor):
                return False
    return True


def sl2_weyl_action(p: int, m: int) -> dict[str, np.ndarray]:
    """Matrices of f, h, e on the Weyl module V(m), basis v_0..v_m, mod p."""
    n = m + 1
    f = np.zeros((n, n), dtype=np.int64)
    e = np.zeros((n, n), dtype=np.int64)
    h = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        h[i, i] = m - 2 * i
        if i + 1 < n:
            f[i + 1, i] = i + 1
        if i >= 1:
            e[i - 1, i] = m - i + 1
    return {"f": f % p, "h": h % p, "e": e % p}
