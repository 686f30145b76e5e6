"""Derived cutting sequences: the combinatorial marking rule, the sandwich rule and the geometric check."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from .automorphisms import common_modulus, flip_shear_point, flip_shear_vector
from .diagrams import transition_diagram
from .flow import CuttingSequence, Trajectory, trace
from .geometry import EPS, Surface, SurfaceError

REGULAR_FAMILIES = ("regular-single", "regular-double")


class InadmissiblePair(SurfaceError):
    """Two labels that no trajectory in the admissible sector crosses in succession."""


class Inadmissible(SurfaceError):
    """A sequence containing an inadmissible consecutive pair."""

    def __init__(self, position: int, pair: tuple):
        super().__init__(f"letters {pair} at position {position} are not an admissible transition")
        self.position = position
        self.pair = pair


class WrongFamily(SurfaceError):
    pass


@dataclass(frozen=True)
class Occurrence:
    polygon: int
    edge: int
    side: str
    level: int


@dataclass(frozen=True)
class EdgeClass:
    label: Hashable
    kind: str  # "horizontal" or "gluing"
    occurrences: tuple[Occurrence, ...]

    @property
    def horizontal(self) -> bool:
        return self.kind == "horizontal"


def classify_edges(s: Surface) -> dict:
    def build():
        out = {}
        for label, (ref, other) in s.label_map.items():
            occ = []
            for k, i in (ref, other):
                pos = s.polygons[k].edge_position(i)
                occ.append(Occurrence(k, i, pos.side, pos.level))
            kind = "horizontal" if occ[0].side in ("top", "bottom") else "gluing"
            out[label] = EdgeClass(label, kind, tuple(occ))
        return out
    return s.cached("edge-classes", build)


def transition_type(s: Surface, e_in, e_out) -> int:
    arrow = transition_diagram(s).arrows.get((e_in, e_out))
    if arrow is None:
        raise InadmissiblePair(f"no admissible transition {e_in} -> {e_out}")
    return arrow.kind


@dataclass(frozen=True)
class Word3:
    labels: tuple
    types: tuple[int, int]
    middle_horizontal: bool = False

    @property
    def case(self) -> str:
        return f"{self.types[0]}{self.types[1]}"

    @property
    def kept(self) -> bool:
        return self.middle_horizontal or self.types[0] == self.types[1]

    @property
    def sandwiched(self) -> bool:
        return self.labels[0] == self.labels[2]

    def __str__(self) -> str:
        return "".join(str(x) for x in self.labels)


def word(s: Surface, a, b, c) -> Word3:
    types = (transition_type(s, a, b), transition_type(s, b, c))
    return Word3((a, b, c), types, classify_edges(s)[b].horizontal)


def _labels(c) -> list:
    return list(c.labels) if isinstance(c, CuttingSequence) else list(c)


def derive_combinatorial(s: Surface, c: CuttingSequence | Sequence) -> CuttingSequence:
    """Keep the letters that are horizontal or the middle of a (00) or (11) word.

    The first and last letters lack a neighbour and are never reported.
    ``indices`` of the result point back into the input.
    """
    labels = _labels(c)
    if len(labels) < 3:
        raise ValueError("need a window of at least three letters")
    types = []
    for i, pair in enumerate(zip(labels, labels[1:])):
        try:
            types.append(transition_type(s, *pair))
        except InadmissiblePair:
            raise Inadmissible(i, pair) from None
    classes = classify_edges(s)
    kept, idx = [], []
    for i in range(1, len(labels) - 1):
        if classes[labels[i]].horizontal or types[i - 1] == types[i]:
            kept.append(labels[i])
            idx.append(i)
    return CuttingSequence(kept, [], s.family, idx)


def sandwich_derive(c: CuttingSequence | Sequence, family: str | None = None) -> CuttingSequence:
    """Keep exactly the letters whose two neighbours agree."""
    fam = family if family is not None else getattr(c, "family", None)
    if fam not in REGULAR_FAMILIES:
        raise WrongFamily(f"the sandwich rule applies to regular polygon surfaces, not {fam!r}")
    labels = _labels(c)
    idx = [i for i in range(1, len(labels) - 1) if labels[i - 1] == labels[i + 1]]
    return CuttingSequence([labels[i] for i in idx], [], fam, idx)


def enumerate_words(s: Surface) -> list[Word3]:
    """Every length-two path of the transition diagram, sorted by middle letter."""
    d = transition_diagram(s)
    words = [word(s, *p) for p in d.paths2()]
    return sorted(words, key=lambda w: (w.labels[1], w.labels[0], w.labels[2]))


def format_words(words: list[Word3]) -> str:
    rows = [f"{'word':>8}  case  verdict  sandwiched"]
    for w in words:
        rows.append(f"{str(w):>8}  ({w.case})  {'kept   ' if w.kept else 'removed'}  "
                    f"{'yes' if w.sandwiched else 'no'}")
    return "\n".join(rows)


def geometric_derive(s: Surface, t: Trajectory, until: float) -> CuttingSequence:
    """Cutting sequence of the flip-shear image of ``t``.

    The image of the point at parameter ``x`` along ``t`` sits at arclength
    ``x * |V'd|`` along the image trajectory; crossing parameters of the
    result are converted back to the parameter of ``t``.  Crossings up to
    ``until`` (in that parameter) are returned.
    """
    m = common_modulus(s)
    dx, dy = flip_shear_vector(math.cos(t.theta), math.sin(t.theta), m)
    speed = math.hypot(dx, dy)
    start = flip_shear_point(s, t.start)
    seq = trace(s, start, dx, dy, max_length=until * speed)
    seq.crossings = [type(x)(x.polygon, x.edge, x.label, x.point, x.param / speed)
                     for x in seq.crossings]
    return seq


@dataclass
class Alignment:
    ok: bool
    combinatorial: list
    geometric: list
    dropped: list = field(default_factory=list)
    problems: list = field(default_factory=list)


def align_derived(s: Surface, original: CuttingSequence, derived: CuttingSequence) -> Alignment:
    """Compare the marking rule against the geometric derived sequence on a window.

    Geometric crossings are restricted to parameters strictly between the
    first and last original crossings.  The marked letters cover positions 1
    to n-2.  A geometric letter may instead stand for position 0 or n-1,
    whose status is unknown, so one extra letter is tolerated at either end
    when it lies before the second (after the second-to-last) crossing and
    repeats the label of the end letter.  Every other geometric crossing must
    fall strictly between the neighbours of the original crossing it matches.
    """
    comb = derive_combinatorial(s, original)
    ts = [x.param for x in original.crossings]
    labels = list(original.labels)
    geo = [x for x in derived.crossings if ts[0] < x.param < ts[-1]]
    head_ok = bool(geo) and geo[0].param < ts[1] and geo[0].label == labels[0]
    tail_ok = bool(geo) and geo[-1].param > ts[-2] and geo[-1].label == labels[-1]
    problems = []
    for head in ((False, True) if head_ok else (False,)):
        for tail in ((False, True) if tail_ok else (False,)):
            core = geo[int(head):len(geo) - int(tail)]
            got = [x.label for x in core]
            if got != comb.labels:
                problems.append(f"labels differ (trim {int(head)},{int(tail)}): "
                                f"marked {comb.labels} vs geometric {got}")
                continue
            bad = [(x.label, x.param, i) for x, i in zip(core, comb.indices)
                   if not ts[i - 1] < x.param < ts[i + 1]]
            if bad:
                problems.append(f"letters away from their crossings: {bad}")
                continue
            dropped = ([geo[0]] if head else []) + ([geo[-1]] if tail else [])
            return Alignment(True, comb.labels, got, dropped, [])
    return Alignment(False, comb.labels, [x.label for x in geo], [], problems)


def check_trajectory(s: Surface, t: Trajectory, window: int) -> Alignment:
    from .flow import flow
    original = flow(s, t, window)
    derived = geometric_derive(s, t, original.crossings[-1].param + EPS)
    return align_derived(s, original, derived)
