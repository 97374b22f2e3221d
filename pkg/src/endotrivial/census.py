"""Enumerating F_p-points of representation varieties and counting endotrivial classes."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .algebra import PBWAlgebra, first_violation
from .endotrivial import is_endotrivial
from .linalg import rank_mod
from .modules import ModuleRep, tensor
from .structure import IndeterminateError, is_isomorphic

DEFAULT_BUDGET = 2**26
DEFAULT_SAMPLES = 10**6


class CensusBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class VarietyPoint:
    """One n x n matrix per Lie generator, satisfying the algebra relations."""

    matrices: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0] if self.matrices else 0

    def module(self, alg: PBWAlgebra) -> ModuleRep:
        return ModuleRep(alg, self.matrices)

    def key(self) -> tuple:
        return tuple(int(x) for m in self.matrices for x in m.ravel())


def satisfies_relations(alg: PBWAlgebra, mats) -> bool:
    return first_violation(alg.pres, mats) is None


def point_count(alg: PBWAlgebra, n: int) -> int:
    return alg.p ** (alg.d * n * n)


def enumerate_points(
    alg: PBWAlgebra,
    n: int,
    sample: Optional[int] = None,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> Iterator[VarietyPoint]:
    """Relation-satisfying generator tuples of size n.

    Exhaustive mode walks all p^(d n^2) tuples in lexicographic order of the
    flattened entries.  With ``sample`` set, that many uniform candidates are
    drawn from a seeded generator and filtered (duplicates possible).
    """
    p, d = alg.p, alg.d
    if n == 0:
        yield VarietyPoint(tuple(np.zeros((0, 0), dtype=np.int64) for _ in range(d)))
        return
    size = d * n * n
    if sample is None:
        total = point_count(alg, n)
        if total > budget:
            raise CensusBudgetExceeded(f"{total} points exceed the budget of {budget}; use sampling")
        for entries in itertools.product(range(p), repeat=size):
            arr = np.array(entries, dtype=np.int64).reshape(d, n, n)
            mats = tuple(arr[i] for i in range(d))
            if satisfies_relations(alg, mats):
                yield VarietyPoint(mats)
        return
    rng = np.random.default_rng(seed)
    for _ in range(sample):
        arr = rng.integers(0, p, size=(d, n, n))
        mats = tuple(arr[i] for i in range(d))
        if satisfies_relations(alg, mats):
            yield VarietyPoint(mats)


def _as_module(alg: PBWAlgebra, sigma) -> ModuleRep:
    return sigma if isinstance(sigma, ModuleRep) else sigma.module(alg)


def no_projective_submodule_test(m_fixed: ModuleRep, sigma, i: int, s: int) -> bool:
    """rank(u_i on M (x) L_sigma) < s * t_i: the closed condition ruling out P_i^s."""
    alg = m_fixed.algebra
    pim = alg.pims[i]
    prod = tensor(m_fixed, _as_module(alg, sigma))
    r = rank_mod(prod.element(pim.socle_element), alg.p) if prod.dim else 0
    return r < s * pim.t


@dataclass
class CensusClass:
    representative: ModuleRep
    count: int

    def to_json(self) -> dict:
        return {"representative": self.representative.to_json(), "points": self.count}


@dataclass
class CensusReport:
    algebra: str
    p: int
    n: int
    points_scanned: int
    relation_points: int
    endotrivial_points: int
    classes: list[CensusClass]
    indeterminate: list[ModuleRep] = field(default_factory=list)
    sampled: bool = False
    seed: int = 0
    wall_time: float = 0.0

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def to_json(self, with_time: bool = False) -> dict:
        out = {
            "algebra": self.algebra,
            "field_size": self.p,
            "n": self.n,
            "mode": "sampled" if self.sampled else "exhaustive",
            "seed": self.seed,
            "points_scanned": self.points_scanned,
            "relation_points": self.relation_points,
            "endotrivial_points": self.endotrivial_points,
            "class_count": self.class_count,
            "classes": [c.to_json() for c in self.classes],
            "indeterminate": [m.to_json() for m in self.indeterminate],
        }
        if with_time:
            out["wall_time"] = self.wall_time
        return out


def endotrivial_census(
    alg: PBWAlgebra,
    n: int,
    sample: Optional[int] = None,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> CensusReport:
    """Classify endotrivial modules of dimension n over F_p up to isomorphism."""
    start = time.perf_counter()
    sampled = sample is not None
    scanned = sample if sampled else (point_count(alg, n) if n else 1)
    rel_points = 0
    endo_points = 0
    classes: list[CensusClass] = []
    quarantine: list[ModuleRep] = []
    for pt in enumerate_points(alg, n, sample=sample, seed=seed, budget=budget):
        rel_points += 1
        if n == 0:
            continue
        m = pt.module(alg)
        if not is_endotrivial(m):
            continue
        endo_points += 1
        placed = False
        unsure = False
        for cls in classes:
            try:
                if is_isomorphic(m, cls.representative, seed=seed):
                    cls.count += 1
                    placed = True
                    break
            except IndeterminateError:
                unsure = True
        if placed:
            continue
        if unsure:
            quarantine.append(m)
        else:
            classes.append(CensusClass(m, 1))
    return CensusReport(
        alg.pres.name, alg.p, n, scanned, rel_points, endo_points, classes, quarantine,
        sampled, seed, time.perf_counter() - start,
    )


def one_dimensional_modules(alg: PBWAlgebra) -> list[ModuleRep]:
    return [pt.module(alg) for pt in enumerate_points(alg, 1)]


def one_dim_twist_orbit(alg: PBWAlgebra, m: ModuleRep) -> list[ModuleRep]:
    """{chi (x) M} over the one-dimensional modules chi, up to isomorphism."""
    out: list[ModuleRep] = []
    for chi in one_dimensional_modules(alg):
        cand = tensor(chi, m.ungraded())
        if not any(is_isomorphic(cand, x) for x in out):
            out.append(cand)
    return out
