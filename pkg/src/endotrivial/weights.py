"""Weights for the A1 and A2 root systems.

A weight is stored by its coordinates in the fundamental-weight basis, so
the pairing with a simple coroot is just a coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

CARTAN = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
}


@dataclass(frozen=True, order=True)
class Weight:
    coords: tuple[int, ...]

    def __init__(self, coords):
        object.__setattr__(self, "coords", tuple(int(c) for c in coords))

    @classmethod
    def zero(cls, rank: int) -> "Weight":
        return cls((0,) * rank)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self) -> "Weight":
        return Weight(-a for a in self.coords)

    def __mul__(self, k: int) -> "Weight":
        return Weight(k * a for a in self.coords)

    __rmul__ = __mul__

    def __iter__(self):
        return iter(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self):
        return "(" + ",".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"Weight{self.coords}"


@dataclass(frozen=True)
class RootSystem:
    name: str

    def __post_init__(self):
        if self.name not in CARTAN:
            raise ValueError(f"unsupported root system {self.name!r}")

    @property
    def rank(self) -> int:
        return len(CARTAN[self.name])

    @property
    def cartan(self) -> np.ndarray:
        return np.array(CARTAN[self.name], dtype=np.int64)

    def simple_root(self, i: int) -> Weight:
        # Row i of the Cartan matrix is alpha_i in fundamental coordinates.
        return Weight(CARTAN[self.name][i])

    @property
    def simple_roots(self) -> list[Weight]:
        return [self.simple_root(i) for i in range(self.rank)]

    def fundamental(self, i: int) -> Weight:
        c = [0] * self.rank
        c[i] = 1
        return Weight(c)

    @property
    def rho(self) -> Weight:
        return Weight((1,) * self.rank)

    def zero(self) -> Weight:
        return Weight.zero(self.rank)

    def pairing(self, lam: Weight, i: int) -> int:
        """<lam, alpha_i^vee>."""
        return lam.coords[i]

    def from_roots(self, coeffs) -> Weight:
        """Sum c_i alpha_i, given root coordinates."""
        out = self.zero()
        for i, c in enumerate(coeffs):
            out = out + c * self.simple_root(i)
        return out

    def to_roots(self, lam: Weight) -> tuple[Fraction, ...]:
        """Root coordinates of lam; denominators divide det(Cartan)."""
        return _to_roots(self.name, lam.coords)

    def reflect(self, i: int, lam: Weight) -> Weight:
        return lam - self.pairing(lam, i) * self.simple_root(i)

    def dot(self, i: int, lam: Weight) -> Weight:
        """s_i . lam = s_i(lam + rho) - rho."""
        return self.reflect(i, lam + self.rho) - self.rho

    def apply_word(self, word, lam: Weight) -> Weight:
        for i in reversed(list(word)):
            lam = self.reflect(i, lam)
        return lam

    def positive_roots(self) -> list[Weight]:
        if self.name == "A1":
            return [self.simple_root(0)]
        a1, a2 = self.simple_roots
        return [a1, a2, a1 + a2]

    def format(self, lam: Weight) -> str:
        """Human-readable root-coordinate label, e.g. '-2a1-3a2'."""
        coeffs = self.to_roots(lam)
        parts = []
        for i, c in enumerate(coeffs):
            if c == 0:
                continue
            mag = abs(c)
            s = "-" if c < 0 else ("+" if parts else "")
            body = "" if mag == 1 else str(mag)
            parts.append(f"{s}{body}a{i + 1}")
        return "".join(parts) or "0"


@lru_cache(maxsize=None)
def _to_roots(name: str, coords: tuple[int, ...]) -> tuple[Fraction, ...]:
    cartan = CARTAN[name]
    n = len(cartan)
    # Solve c . C = lam over Q by Cramer's rule (n <= 2).
    if n == 1:
        return (Fraction(coords[0], cartan[0][0]),)
    (a, b), (c, d) = cartan
    det = a * d - b * c
    x, y = coords
    # c1*(a,b) + c2*(c,d) = (x,y)
    c1 = Fraction(x * d - y * c, det)
    c2 = Fraction(a * y - b * x, det)
    return (c1, c2)


A1 = RootSystem("A1")
A2 = RootSystem("A2")


def dot_action(root_system: RootSystem, i: int, lam: Weight) -> Weight:
    return root_system.dot(i, lam)
