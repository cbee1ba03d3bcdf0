"""Surface-links given by triplane/multiplane diagrams or marked-vertex
diagrams, compiled to region-equation systems.

A trivial tangle on ``b`` strands has ``2b`` endpoints on a horizontal
boundary line.  It is stored as a braid word read from the boundary upward,
followed by caps joining positions ``(1,2), (3,4), ...`` at the top.  Braid
letters follow :mod:`surfcol.diagrams`: ``+j`` puts the strand from the lower
left on top, ``-j`` the strand from the lower right.

Endpoint signs: ``-1`` marks a source (the strand leaves the boundary), ``+1``
a sink.  The region between endpoints ``p`` and ``p+1`` is shared by all
tangles, and so is the outer region left of the first and right of the last
endpoint.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .diagrams import (
    RAD,
    RegionCrossing,
    braid_permutation,
    crossing_directions,
    crossing_equation,
    emit_equations,
    plat_directions,
    plat_pd,
    pd_system,
)
from .errors import DomainError, UnsupportedError
from .systems import EquationSystem, EqVar, TriEq

DATA = Path(__file__).parent / "data"


@dataclass(frozen=True)
class TrivialTangle:
    strands: int
    braid: tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise DomainError("a tangle needs at least one strand")
        word = tuple(int(g) for g in self.braid)
        for g in word:
            if g == 0 or abs(g) >= 2 * self.strands:
                raise DomainError(f"generator {g} out of range for {2 * self.strands} endpoints")
        object.__setattr__(self, "braid", word)

    def matching(self) -> list[int]:
        """``partner[p]`` is the endpoint joined to endpoint ``p`` (0-based)."""
        perm = braid_permutation(self.braid, 2 * self.strands)
        at_top = {t: p for p, t in enumerate(perm)}
        return [at_top[perm[p] ^ 1] for p in range(2 * self.strands)]


@dataclass(frozen=True)
class TriplaneDiagram:
    bridges: int
    tangles: tuple[TrivialTangle, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        b = self.bridges
        tangles = tuple(t if isinstance(t, TrivialTangle) else TrivialTangle(b, tuple(t)) for t in self.tangles)
        if len(tangles) < 2:
            raise DomainError("a multiplane diagram needs at least two tangles")
        if any(t.strands != b for t in tangles):
            raise DomainError("all tangles must have the same number of strands")
        signs = tuple(int(s) for s in self.signs)
        if len(signs) != 2 * b or any(s not in (1, -1) for s in signs):
            raise DomainError(f"need {2 * b} endpoint signs in {{+1, -1}}")
        object.__setattr__(self, "tangles", tangles)
        object.__setattr__(self, "signs", signs)

    def to_json(self) -> dict:
        return {
            "bridges": self.bridges,
            "signs": list(self.signs),
            "tangles": [{"braid": list(t.braid)} for t in self.tangles],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "TriplaneDiagram":
        try:
            b = int(doc["bridges"])
            tangles = tuple(TrivialTangle(b, tuple(int(g) for g in t["braid"])) for t in doc["tangles"])
            return cls(b, tangles, tuple(int(s) for s in doc["signs"]))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed triplane document: {exc!r}") from exc

    @classmethod
    def load(cls, path) -> "TriplaneDiagram":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def validate_orientation(tp: TriplaneDiagram) -> bool:
    """Every strand of every tangle joins a source to a sink."""
    for t in tp.tangles:
        partner = t.matching()
        if any(tp.signs[p] == tp.signs[q] for p, q in enumerate(partner)):
            return False
    return True


# ---------------------------------------------------------------------------
# region sweep
# ---------------------------------------------------------------------------

def _frame(bottom, left, right, top, d_a, d_b) -> tuple[int, int, int, int]:
    # (south, west, east, north) once both strands point up
    if d_a > 0 and d_b > 0:
        return bottom, left, right, top
    if d_a < 0 and d_b < 0:
        return top, right, left, bottom
    if d_a > 0:  # lower-left strand up, lower-right strand down: both leave east
        return left, top, bottom, right
    return right, bottom, top, left


def _sweep(word, dirs, gaps, fresh):
    """Walk a braid upward from a row of region variables.

    ``gaps[i]`` is the region left of position ``i`` (``len(dirs) + 1`` of
    them), ``fresh()`` hands out new variables.  Returns the equations and the
    final row.
    """
    gaps = list(gaps)
    eqs = []
    for g, (d_a, d_b) in zip(word, crossing_directions(word, dirs)):
        j = abs(g) - 1
        top = fresh()
        s, w, e, n = _frame(gaps[j + 1], gaps[j], gaps[j + 2], top, d_a, d_b)
        sign = (1 if g > 0 else -1) * d_a * d_b
        eqs.append(crossing_equation(RegionCrossing(s, w, e, n, sign)))
        gaps[j + 1] = top
    return eqs, gaps


def triplane_to_system(tp: TriplaneDiagram) -> EquationSystem:
    """Equations of an oriented multiplane diagram.

    Boundary regions ``g0 .. g{2b-1}`` are shared by all tangles; each
    crossing of tangle ``i`` adds one region ``t{i}_{k}``.  Above the caps
    every even gap opens into the outer region ``g0``.
    """
    if not validate_orientation(tp):
        raise DomainError("triplane orientation is invalid: some strand joins two sources or two sinks")
    b2 = 2 * tp.bridges
    names = [f"g{i}" for i in range(b2)]
    dirs = [-s for s in tp.signs]
    tri: list[TriEq] = []
    eq: list[EqVar] = []
    for ti, t in enumerate(tp.tangles):
        def fresh(ti=ti):
            names.append(f"t{ti}_{len(names)}")
            return len(names) - 1

        eqs, gaps = _sweep(t.braid, dirs, list(range(b2)) + [0], fresh)
        tri += eqs
        eq += [EqVar(0, gaps[i]) for i in range(2, b2, 2) if gaps[i] != 0]
    return EquationSystem(len(names), tuple(tri), tuple(eq), tuple(names))


def patch_numbers(tp: TriplaneDiagram) -> tuple[int, ...]:
    """Components of each union of consecutive tangles (cyclically)."""
    out = []
    m = [t.matching() for t in tp.tangles]
    for i in range(len(m)):
        a, b = m[i], m[(i + 1) % len(m)]
        seen = [False] * len(a)
        cycles = 0
        for p in range(len(a)):
            if seen[p]:
                continue
            cycles += 1
            q = p
            while not seen[q]:
                seen[q] = True
                r = a[q]
                seen[r] = True
                q = b[r]
        out.append(cycles)
    return tuple(out)


def euler_characteristic(tp: TriplaneDiagram) -> int:
    return (2 - len(tp.tangles)) * tp.bridges + sum(patch_numbers(tp))


@dataclass(frozen=True)
class BoundsReport:
    count: int
    x_size: int
    patch: tuple[int, ...]
    bridges: int
    euler: int
    slack_i: float | Fraction
    slack_ii: float | Fraction
    holds_i: bool
    holds_ii: bool

    @property
    def satisfied(self) -> bool:
        return self.holds_i and self.holds_ii

    def as_dict(self) -> dict:
        def num(x):
            if isinstance(x, Fraction):
                return int(x) if x.denominator == 1 else float(x)
            return x

        return {
            "count": self.count,
            "x_size": self.x_size,
            "patch_numbers": list(self.patch),
            "bridges": self.bridges,
            "euler_characteristic": self.euler,
            "slack_i": num(self.slack_i),
            "slack_ii": num(self.slack_ii),
            "holds_i": self.holds_i,
            "holds_ii": self.holds_ii,
            "satisfied": self.satisfied,
        }


def _log(count: int, base: int):
    """``log_base(count)``, exact when ``count`` is a power of ``base``."""
    k, p = 0, 1
    while p < count:
        p *= base
        k += 1
    return Fraction(k) if p == count else math.log(count) / math.log(base)


def bounds_report(tp: TriplaneDiagram, count: int, x_size: int) -> BoundsReport:
    """Check ``-1 + log C <= min c_i`` and
    ``-n - chi + n log C <= (n-2) b`` (logs base ``|X|``).

    The pass/fail flags use integer powers only:
    ``C <= |X|^(min c + 1)`` and ``C^n <= |X|^((n-2) b + chi + n)``.
    """
    if x_size < 2:
        raise DomainError("bounds need a tribracket with at least two elements")
    if count < 1:
        raise DomainError("a surface always has at least one coloring count to bound")
    patch = patch_numbers(tp)
    n = len(tp.tangles)
    b = tp.bridges
    chi = (2 - n) * b + sum(patch)
    lg = _log(count, x_size)
    rhs_ii = (n - 2) * b + chi + n
    return BoundsReport(
        count=count,
        x_size=x_size,
        patch=patch,
        bridges=b,
        euler=chi,
        slack_i=min(patch) + 1 - lg,
        slack_ii=rhs_ii - n * lg,
        holds_i=count <= x_size ** (min(patch) + 1),
        holds_ii=count**n <= x_size**rhs_ii,
    )


def mutual_braid_transposition(tp: TriplaneDiagram, j: int, sign: int) -> TriplaneDiagram:
    """Apply ``sigma_j^sign`` next to the boundary of every tangle."""
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    if not 1 <= j <= 2 * tp.bridges - 1:
        raise DomainError(f"generator index {j} out of range 1..{2 * tp.bridges - 1}")
    g = sign * j
    tangles = tuple(TrivialTangle(tp.bridges, (g,) + t.braid) for t in tp.tangles)
    signs = list(tp.signs)
    signs[j - 1], signs[j] = signs[j], signs[j - 1]
    return TriplaneDiagram(tp.bridges, tangles, tuple(signs))


# ---------------------------------------------------------------------------
# marked-vertex diagrams
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarkedVertexDiagram:
    """Classical crossings in frame form plus marked vertices, each given by
    the regions to its north, east, south and west."""

    region_count: int
    crossings: tuple[RegionCrossing, ...] = ()
    marked: tuple[tuple[int, int, int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        marked = tuple(tuple(int(r) for r in v) for v in self.marked)
        for v in marked:
            if len(v) != 4:
                raise DomainError("a marked vertex has four regions")
            for r in v:
                if not 0 <= r < self.region_count:
                    raise DomainError(f"region id {r} out of range")
        object.__setattr__(self, "marked", marked)
        RAD(self.crossings, self.region_count)  # range check

    @classmethod
    def from_json(cls, doc: dict) -> "MarkedVertexDiagram":
        try:
            xs = tuple(RegionCrossing(*[int(r) for r in c["swen"]], int(c["sign"])) for c in doc.get("crossings", []))
            marked = tuple(tuple(v["nesw"]) for v in doc.get("marked", []))
            return cls(int(doc["regions"]), xs, marked)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed marked-vertex document: {exc!r}") from exc

    @classmethod
    def load(cls, path) -> "MarkedVertexDiagram":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def marked_vertex_to_system(mvd: MarkedVertexDiagram) -> EquationSystem:
    """Crossing equations plus, at each marked vertex, north = south and
    east = west (the pairs merged by the A- and B-smoothing)."""
    tri = tuple(crossing_equation(c) for c in mvd.crossings)
    eq = []
    for n, e, s, w in mvd.marked:
        eq += [EqVar(n, s), EqVar(e, w)]
    return EquationSystem(mvd.region_count, tri, tuple(eq), tuple(f"r{i}" for i in range(mvd.region_count)))


def smooth(mvd: MarkedVertexDiagram, choices: Sequence[str]) -> RAD:
    """Replace each marked vertex by its A-smoothing (joins north and south)
    or B-smoothing (joins east and west)."""
    if len(choices) != len(mvd.marked):
        raise DomainError(f"need {len(mvd.marked)} smoothing choices, got {len(choices)}")
    parent = list(range(mvd.region_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (n, e, s, w), ch in zip(mvd.marked, choices):
        if ch not in ("A", "B"):
            raise DomainError(f"smoothing choice must be 'A' or 'B', got {ch!r}")
        x, y = (n, s) if ch == "A" else (e, w)
        parent[find(x)] = find(y)
    roots = sorted({find(r) for r in range(mvd.region_count)})
    new = {r: i for i, r in enumerate(roots)}
    rid = lambda r: new[find(r)]
    xs = tuple(RegionCrossing(rid(c.south), rid(c.west), rid(c.east), rid(c.north), c.sign) for c in mvd.crossings)
    return RAD(xs, len(roots))


# ---------------------------------------------------------------------------
# plats and spun knots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlatPresentation:
    bridges: int
    braid: tuple[int, ...] = ()
    name: str | None = None

    def __post_init__(self):
        if self.bridges < 1:
            raise DomainError("a plat needs at least one bridge")
        word = tuple(int(g) for g in self.braid)
        for g in word:
            if g == 0 or abs(g) >= 2 * self.bridges:
                raise DomainError(f"generator {g} out of range for {2 * self.bridges} strands")
        object.__setattr__(self, "braid", word)

    def components(self) -> int:
        return plat_directions(self.braid, self.bridges)[1]

    @classmethod
    def from_json(cls, doc: dict) -> "PlatPresentation":
        try:
            return cls(int(doc["bridges"]), tuple(int(g) for g in doc.get("braid", [])), doc.get("name"))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed plat document: {exc!r}") from exc

    @classmethod
    def load(cls, path) -> "PlatPresentation":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def plat_system(plat: PlatPresentation) -> EquationSystem:
    """Equations of the plat closure as a classical diagram (via its PD
    code and face tracing)."""
    if not plat.braid:
        if plat.bridges != 1:
            raise UnsupportedError("a crossingless plat with several bridges is a split unlink")
        return emit_equations(RAD((), 2))
    return pd_system(plat_pd(plat.braid, plat.bridges, plat.name))


def plat_as_bridge_pair(plat: PlatPresentation) -> TriplaneDiagram:
    """The plat as the union of two tangles: the braid with its top caps, and
    the bare bottom caps."""
    dirs, _ = plat_directions(plat.braid, plat.bridges)
    k = plat.bridges
    return TriplaneDiagram(k, (TrivialTangle(k, plat.braid), TrivialTangle(k, ())), tuple(-d for d in dirs))


# Each non-first block of a spun plat holds six punctures.  In tangle t the
# two punctures marked "L"/"R" continue into the plat strands 2i and 2i+1,
# the others pair off as nested arcs.  Around the block circle the L/R pair
# rotates by two positions from one tangle to the next.
_SPIN_BLOCKS = (
    (4, 3, 2, 1, "L", "R"),
    ("L", 5, 4, 3, 2, "R"),
    ("L", "R", 6, 5, 4, 3),
)
_SPIN_SIGNS = (1, -1, 1, -1, 1, -1)


def _shuffle_word(labels: list) -> list[int]:
    """Braid word (strands passing over) that moves the plat-strand
    punctures to the far left in order, then makes every arc's two ends
    adjacent so the caps close them."""
    lab = list(labels)
    word: list[int] = []

    def swap_left(p):
        word.append(-p)
        lab[p - 1], lab[p] = lab[p], lab[p - 1]

    strands = sorted(x[1] for x in lab if x[0] == "s")
    for target, want in enumerate(strands):
        p = lab.index(("s", want))
        for q in range(p, target, -1):
            swap_left(q)
    i = len(strands)
    while i < len(lab):
        j = lab.index(lab[i], i + 1)
        for q in range(j, i + 1, -1):
            swap_left(q)
        i += 2
    return word


def spun_triplane(plat: PlatPresentation) -> TriplaneDiagram:
    """Triplane diagram of the spun knot of a one-component plat with ``k``
    bridges; it has ``3k - 2`` bridges and patch numbers ``(k, k, k)``."""
    if plat.components() != 1:
        raise UnsupportedError("spinning is implemented for knots only")
    k = plat.bridges
    dirs, _ = plat_directions(plat.braid, k)
    signs = [-dirs[0], -dirs[1]]
    for i in range(1, k):
        signs += [-dirs[2 * i] * s for s in _SPIN_SIGNS]
    tangles = []
    for t, block in enumerate(_SPIN_BLOCKS):
        labels = [("s", 0), ("s", 1)]
        for i in range(1, k):
            for p, v in enumerate(block, start=1):
                if v == "L":
                    labels.append(("s", 2 * i))
                elif v == "R":
                    labels.append(("s", 2 * i + 1))
                else:
                    labels.append(("a", i, min(p, v)))
        word = _shuffle_word(labels) + list(plat.braid)
        tangles.append(TrivialTangle(3 * k - 2, tuple(word)))
    return TriplaneDiagram(3 * k - 2, tuple(tangles), tuple(signs))


_KINDS = {"plats": PlatPresentation, "triplanes": TriplaneDiagram, "marked": MarkedVertexDiagram}


def load_builtin(kind: str, name: str):
    """A bundled plat, triplane or marked-vertex diagram."""
    if kind not in _KINDS:
        raise DomainError(f"unknown kind {kind!r}; expected one of {sorted(_KINDS)}")
    path = DATA / kind / f"{name}.json"
    if not path.exists():
        raise DomainError(f"no bundled {kind[:-1]} named {name!r}")
    return _KINDS[kind].load(path)


def builtin_names(kind: str) -> list[str]:
    return sorted(p.stem for p in (DATA / kind).glob("*.json"))
