"""Reproduction suites: the SL2 resolution table and the SL3 (p = 2) second syzygy."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from .algebra import get_algebra
from .endotrivial import (
    ext1,
    is_endotrivial,
    is_stable_lift,
    minimal_resolution,
    steinberg_lift_sequence,
    steinberg_projective,
    syzygy,
)
from .modules import (
    build_weyl_sl2,
    direct_sum,
    dual,
    character,
    frobenius_twist_trivial,
    natural_sl3,
    tensor,
    trivial,
    weight_diagram,
)
from .rational import (
    as_carrier,
    carrier_hom_dim,
    ext1_carrier,
    frobenius_adjoint,
    rational_character,
    rational_natural_sl3,
    rational_tensor,
    steinberg_sl3_p2,
)
from .structure import decompose, hom_space, is_isomorphic, strip_projectives, top, radical
from .weights import dot_action

LITERATURE = "literature"
DERIVED = "derived"
TRIVIAL = "trivial"

PASS, FAIL, FLAGGED = "pass", "fail", "flagged"


@dataclass
class CheckRecord:
    name: str
    anchor: str
    source: str
    expected: Any
    computed: Any
    verdict: str
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "anchor": self.anchor,
            "source": self.source,
            "expected": self.expected,
            "computed": self.computed,
            "verdict": self.verdict,
        }
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class ReproReport:
    suite: str
    params: dict
    checks: list[CheckRecord] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    artifacts: dict = field(default_factory=dict)

    def add(self, *args, **kwargs) -> CheckRecord:
        rec = CheckRecord(*args, **kwargs)
        self.checks.append(rec)
        return rec

    @property
    def verdict(self) -> str:
        verdicts = {c.verdict for c in self.checks}
        if FAIL in verdicts:
            return FAIL
        if FLAGGED in verdicts:
            return FLAGGED
        return PASS

    @property
    def exit_code(self) -> int:
        return {PASS: 0, FLAGGED: 2, FAIL: 1}[self.verdict]

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "verdict": self.verdict,
            "checks": [c.to_json() for c in self.checks],
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    def summary(self) -> str:
        lines = [f"{self.suite} {json.dumps(self.params)}: {self.verdict.upper()}"]
        for c in self.checks:
            lines.append(f"  [{c.verdict.upper():7}] {c.name}: expected {c.expected}, computed {c.computed}")
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)


def _agree(ok: bool, on_mismatch: str = FAIL) -> str:
    return PASS if ok else on_mismatch


# ---------------------------------------------------------------------------
# SL2


def tilting_dim(lam: int, p: int) -> int:
    """dim T(lam) for SL2 via the tensor product decomposition of tilting modules."""
    if lam < 0:
        raise ValueError("negative highest weight")
    if lam <= p - 1:
        return lam + 1
    r, s = (lam - (p - 1)) % p, (lam - (p - 1)) // p
    return (p if r == 0 else 2 * p) * tilting_dim(s, p)


def tilting_g1_head(lam: int, p: int) -> list[int]:
    """Torus labels of the G1-head of T(lam), lam >= p - 1 (one per PIM summand)."""
    if lam < p - 1:
        return [lam % p]
    r, s = (lam - (p - 1)) % p, (lam - (p - 1)) // p
    mu = p - 1 if r == 0 else p - 1 - r
    return [mu] * tilting_dim(s, p)


def _sl2_formulas(module: str, n: int, p: int) -> tuple[int, int]:
    """(tilting weight of P_n, Weyl weight of Omega^n) as displayed for k and L(p-2)."""
    if module == "k":
        if n % 2 == 0:
            return (n // 2 + 1) * 2 * (p - 1), n * p
        return ((n + 1) // 2) * 2 * p, ((n + 1) // 2) * 2 * (p - 2)
    if n % 2 == 0:
        return (n + 1) * p, (n + 1) * p - 2
    return (n + 2) * p - 2, n * p


def repro_sl2_table(p: int, n_max: int) -> ReproReport:
    if p not in (2, 3, 5):
        raise ValueError("p must be 2, 3 or 5")
    if not 0 <= n_max <= 6:
        raise ValueError("n_max must lie in 0..6")
    alg = get_algebra("sl2-g1", p)
    report = ReproReport("sl2-table", {"p": p, "max_n": n_max})
    report.notes.append("tilting modules are not constructed; P_n is compared by dimension and G1-head labels")
    starts = {"k": trivial(alg).ungraded(), "L(p-2)": build_weyl_sl2(p - 2, p).ungraded()}
    for name, start in starts.items():
        steps, syz = minimal_resolution(start, n_max)
        for n in range(n_max + 1):
            parity = "even" if n % 2 == 0 else "odd"
            t_weight, v_weight = _sl2_formulas(name, n, p)
            on_mismatch = FAIL if parity == "even" else FLAGGED
            omega = syz[n]
            weyl = strip_projectives(build_weyl_sl2(v_weight, p).ungraded())
            same = weyl.dim == omega.dim and is_isomorphic(weyl, omega, graded=False)
            source = TRIVIAL if n == 0 else LITERATURE
            report.add(
                f"{name}: Omega^{n} = V({v_weight})",
                f"sl2-syzygy-{parity}/{name}",
                source,
                {"weyl_weight": v_weight, "stripped_dim": weyl.dim},
                {"dim": omega.dim, "isomorphic": same},
                _agree(same, on_mismatch),
            )
            report.add(
                f"{name}: Omega^{n} endotrivial",
                f"sl2-endotrivial/{name}",
                DERIVED,
                True,
                is_endotrivial(omega),
                _agree(is_endotrivial(omega)),
            )
            if n < n_max:
                step = steps[n]
                heads = sorted(int(lbl[0]) for lbl in step.top_labels)
                exp_heads = sorted(tilting_g1_head(t_weight, p))
                exp_dim = tilting_dim(t_weight, p)
                ok = step.projective_dim == exp_dim and heads == exp_heads
                report.add(
                    f"{name}: P_{n} = T({t_weight})",
                    f"sl2-resolution-{parity}/{name}",
                    LITERATURE,
                    {"dim": exp_dim, "head": exp_heads},
                    {"dim": step.projective_dim, "head": heads},
                    _agree(ok, FLAGGED),
                )
    return report


# ---------------------------------------------------------------------------
# SL3, p = 2


def omega2_weights(rs) -> list:
    a1, a2 = rs.simple_roots
    return [
        -2 * a1, -2 * a2, -2 * a1 - 2 * a2,
        -2 * a1 - a2, -3 * a1 - a2, -3 * a1 - 2 * a2,
        -a1 - 2 * a2, -a1 - 3 * a2, -2 * a1 - 3 * a2,
    ]


def omega2_arrows(rs) -> set:
    """(source, target, simple root index) for the nine-node diagram of Omega^2."""
    a1, a2 = rs.simple_roots
    return {
        (-2 * a1, -2 * a1 - a2, 1),
        (-2 * a1 - a2, -3 * a1 - a2, 0),
        (-3 * a1 - a2, -3 * a1 - 2 * a2, 1),
        (-2 * a1 - 2 * a2, -3 * a1 - 2 * a2, 0),
        (-2 * a1 - 2 * a2, -2 * a1 - 3 * a2, 1),
        (-2 * a2, -a1 - 2 * a2, 0),
        (-a1 - 2 * a2, -a1 - 3 * a2, 1),
        (-a1 - 3 * a2, -2 * a1 - 3 * a2, 0),
    }


def _fmt(rs, ws) -> list[str]:
    return sorted(rs.format(w) for w in ws)


def repro_sl3_omega2(emit_dot: bool = False) -> ReproReport:
    p = 2
    alg = get_algebra("sl3-b1", p)
    rs = alg.pres.roots
    a1, a2 = rs.simple_roots
    w1, w2 = rs.fundamental(0), rs.fundamental(1)
    report = ReproReport("sl3-omega2", {"p": p, "algebra": "sl3-b1"})
    k = trivial(alg)
    omega2 = syzygy(k, 2)
    diagram = weight_diagram(omega2)

    expected_weights = omega2_weights(rs)
    report.add(
        "dim and weights", "sl3-omega2-weight-diagram", LITERATURE,
        {"dim": 9, "weights": _fmt(rs, expected_weights)},
        {"dim": omega2.dim, "weights": _fmt(rs, omega2.weights)},
        _agree(omega2.dim == 9 and sorted(omega2.weights) == sorted(expected_weights)),
    )
    arrows = diagram.arrow_set()
    report.add(
        "arrows", "sl3-omega2-weight-diagram", LITERATURE,
        sorted(f"{rs.format(s)} -a{i + 1}-> {rs.format(t)}" for s, t, i in omega2_arrows(rs)),
        sorted(f"{rs.format(s)} -a{i + 1}-> {rs.format(t)}" for s, t, i in arrows),
        _agree(arrows == omega2_arrows(rs)),
    )

    top_mod, _ = top(omega2)
    u1_weights = [-2 * a1, -2 * a2, -2 * a1 - 2 * a2]
    u1 = frobenius_twist_trivial(alg, [-a1, -a2, -a1 - a2])
    same_top = is_isomorphic(top_mod, u1, graded=True)
    report.add(
        "top = u^(1)", "sl3-omega2-top", LITERATURE,
        _fmt(rs, u1_weights), _fmt(rs, top_mod.weights), _agree(same_top),
    )

    rad_mod, _ = radical(omega2)
    mu = -2 * a1 - a2 - w1
    n1 = tensor(natural_sl3(alg), character(alg, mu))
    # image of N1 under the diagram automorphism swapping the simple roots
    n2 = tensor(dual(natural_sl3(alg)), character(alg, -a1 - 2 * a2 - w2))
    same_rad = is_isomorphic(rad_mod, direct_sum(n1, n2), graded=True)
    report.add(
        "rad = N1 + N2", "sl3-omega2-radical", LITERATURE,
        {"N1": _fmt(rs, n1.weights), "N2": _fmt(rs, n2.weights)},
        {"rad": _fmt(rs, rad_mod.weights), "isomorphic": same_rad},
        _agree(same_rad),
    )
    literal_n2 = tensor(natural_sl3(alg), character(alg, -a1 - 2 * a2 - w1))
    report.notes.append(
        "N2 written as V (x) (-a1-2a2-w1) has weights "
        + ", ".join(_fmt(rs, literal_n2.weights))
        + ", which do not all occur in the radical; the check uses V* (x) (-a1-2a2-w2), "
        "the image of N1 under the diagram automorphism"
    )
    report.notes.append(
        "the twisting weight of N1 also appears as 2a1-a2-w1 (opposite sign on a1); "
        "this suite uses -2a1-a2-w1"
    )

    graded_parts = decompose(omega2)
    ungraded_parts = decompose(omega2.ungraded())
    indec = len(graded_parts) == 1 and len(ungraded_parts) == 1
    report.add(
        "indecomposable over B1", "sl3-omega2-indecomposable", LITERATURE,
        1, {"graded": len(graded_parts), "ungraded": len(ungraded_parts)}, _agree(indec),
    )

    e = ext1(k, n1)
    e_ungraded = ext1(k, n1, graded=False)
    report.add(
        "dim Ext^1(k, N1) <= 2", "sl3-ext1-bound", LITERATURE,
        "<= 2",
        {"dim": e.dim, "ungraded_dim": e_ungraded.dim,
         "weights": {rs.format(w): d for w, d in sorted(e.weights.items())}},
        _agree(e.dim <= 2 and e.dim == e_ungraded.dim),
    )

    dots = {
        "mu - s1.w2": rs.format(mu - dot_action(rs, 0, w2)),
        "mu - s2.w2": rs.format(mu - dot_action(rs, 1, w2)),
    }
    exp_dots = {"mu - s1.w2": rs.format(-2 * a1 - 2 * a2), "mu - s2.w2": rs.format(-3 * a1)}
    report.add(
        "dot-action differences", "sl3-dot-action", LITERATURE,
        exp_dots, dots, _agree(dots == exp_dots),
    )

    st = steinberg_sl3_p2(alg)
    cover = rational_tensor(st, rational_character(alg, -rs.rho))
    eps = hom_space(cover.module, k).basis[0]
    n1_rat = rational_tensor(rational_natural_sl3(alg), rational_character(alg, mu))
    carrier = ext1_carrier(n1_rat, cover, eps)
    u1_carrier = as_carrier(frobenius_adjoint(alg))
    hom_dim = carrier_hom_dim(u1_carrier, carrier)
    socle = _fmt(rs, carrier.socle_weights())
    report.add(
        "Ext^1 socle", "sl3-ext1-socle", LITERATURE,
        [rs.format(-2 * a1 - 2 * a2)], socle, _agree(socle == [rs.format(-2 * a1 - 2 * a2)]),
    )
    report.add(
        "graded Hom(u^(1), Ext^1) = 0", "sl3-graded-hom", LITERATURE,
        0, hom_dim, _agree(hom_dim == 0),
        note="projective cover carries the Steinberg divided powers; Ext^1 classes inherit f^(p)",
    )

    proj, eps_st = steinberg_projective(alg)
    seq = steinberg_lift_sequence(proj, eps_st, 2)
    lift_ok = is_stable_lift(seq[2], omega2)
    report.add(
        "stable lift: strip(K2) = Omega^2", "steinberg-stable-lift", LITERATURE,
        True, lift_ok, _agree(lift_ok),
    )

    if emit_dot or report.verdict != PASS:
        report.artifacts["dot"] = diagram.to_dot("omega2")
    return report
