"""Property checks for one surface, as run by the ``verify`` command."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .automorphisms import flip_shear_point, flip_shear_vector, same_point
from .cylinders import bouw_moller_modulus, perfectness, regular_modulus, theta_s
from .derivation import REGULAR_FAMILIES, check_trajectory, derive_combinatorial, sandwich_derive
from .diagrams import check_grid_shape, diagrams_isomorphic, transition_diagram
from .flow import VertexHit, flow, random_point, random_trajectory
from .geometry import Surface, build_regular_surface, validate_special
from .unfolding import UnfoldingVertexHit, unfold_labels


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class VerifyReport:
    surface: dict
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> dict:
        # timings are left out so that the JSON is reproducible byte for byte
        return {"surface": self.surface, "ok": self.ok, "checks": [c.to_json() for c in self.checks]}

    def text(self) -> str:
        rows = [f"{'PASS' if c.ok else 'FAIL'}  {c.name:<28} {c.seconds:8.3f}s  {c.detail}"
                for c in self.checks]
        rows.append("all checks passed" if self.ok else "some checks FAILED")
        return "\n".join(rows)


def sample_trajectories(s: Surface, rng: np.random.Generator, count: int, window: int):
    """``count`` (trajectory, sequence) pairs, redrawing any that hit a vertex."""
    limit = theta_s(s)
    out = []
    while len(out) < count:
        t = random_trajectory(s, rng, limit)
        try:
            out.append((t, flow(s, t, window)))
        except VertexHit:
            continue
    return out


def expected_modulus(s: Surface) -> float | None:
    p = s.params
    if s.family in REGULAR_FAMILIES:
        return regular_modulus(p["n"])
    if s.family == "bouw-moller":
        return bouw_moller_modulus(p["m"], p["n"])
    return None


def expected_theta_s(s: Surface) -> float | None:
    if s.family in REGULAR_FAMILIES:
        return math.pi / s.params["n"]
    return None


def run_checks(s: Surface, trials: int = 200, window: int = 100, seed: int = 0,
               points: int = 1000) -> VerifyReport:
    report = VerifyReport({"family": s.family, "params": dict(s.params)})
    rng = np.random.default_rng(seed)

    def check(name, fn):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # reported, not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        report.checks.append(CheckResult(name, ok, detail, time.perf_counter() - t0))
        return ok

    def special():
        v = validate_special(s)
        return v.ok, "; ".join(v.failures())

    if not check("special", special):
        return report

    def perfect():
        rep = perfectness(s)
        want = expected_modulus(s)
        if want is not None and abs(rep.common_modulus - want) > 1e-9:
            return False, f"modulus {rep.common_modulus!r} differs from closed form {want!r}"
        return rep.is_perfect, f"M = {rep.common_modulus:.12g}; " + "; ".join(rep.problems)

    if not check("perfect", perfect):
        return report

    def critical_angle():
        got, want = theta_s(s), expected_theta_s(s)
        if want is None:
            return True, f"theta_s = {got:.12g}"
        return abs(got - want) <= 1e-9, f"theta_s = {got:.12g}, closed form {want:.12g}"

    check("theta_s", critical_angle)

    def involution():
        worst = 0.0
        for _ in range(points):
            p = random_point(s, rng)
            q = flip_shear_point(s, flip_shear_point(s, p))
            if not same_point(s, p, q):
                return False, f"{p} returns as {q}"
            worst = max(worst, math.hypot(p.x - q.x, p.y - q.y))
        m = perfectness(s).common_modulus
        for theta in np.linspace(0, 2 * math.pi, 17):
            x, y = flip_shear_vector(*flip_shear_vector(math.cos(theta), math.sin(theta), m), m)
            if abs(x - math.cos(theta)) > 1e-12 or abs(y - math.sin(theta)) > 1e-12:
                return False, "direction map is not an involution"
        return True, f"{points} points, worst drift {worst:.2e}"

    check("flip-shear involution", involution)

    samples = sample_trajectories(s, rng, trials, window)

    def oracle():
        for j, (t, _) in enumerate(samples):
            a = check_trajectory(s, t, window)
            if not a.ok:
                return False, f"trial {j}: {a.problems[0]}"
        return True, f"{len(samples)} trajectories, window {window}"

    check("derived sequence oracle", oracle)

    if s.family in REGULAR_FAMILIES:
        def sandwich():
            for j, (_, seq) in enumerate(samples):
                a, b = sandwich_derive(seq), derive_combinatorial(s, seq)
                if a.labels != b.labels or a.indices != b.indices:
                    return False, f"trial {j} differs"
            return True, f"{len(samples)} trajectories"

        check("sandwich rule", sandwich)

    def soundness():
        d = transition_diagram(s)
        for j, (_, seq) in enumerate(samples):
            for pair in zip(seq.labels, seq.labels[1:]):
                if not d.has(*pair):
                    return False, f"trial {j} uses {pair}"
        return True, f"{len(d.arrows)} arrows"

    check("diagram soundness", soundness)

    if s.family == "bouw-moller":
        def grid():
            rep = check_grid_shape(transition_diagram(s), s.params["m"], s.params["n"])
            return rep.ok, "canonical numbering" if rep.identity else f"missing {rep.missing} extra {rep.extra}"

        check("diagram grid shape", grid)
        if s.params["m"] == 2:
            def double_ngon():
                other = build_regular_surface(s.params["n"], True)
                w = diagrams_isomorphic(transition_diagram(s), transition_diagram(other))
                return w is not None, "isomorphic to the double n-gon diagram" if w else "not isomorphic"

            check("matches double n-gon", double_ngon)

    def unfolding():
        count = min(20, len(samples))
        for j, (t, seq) in enumerate(samples[:count]):
            n = min(window, 50)
            try:
                exact = unfold_labels(s, t.start, *t.direction, n)
            except UnfoldingVertexHit:
                continue
            if exact != seq.labels[:n]:
                return False, f"trial {j} differs from the unfolding"
        return True, f"{count} trajectories"

    check("unfolding oracle", unfolding)
    return report
