"""Classical diagrams as planar-diagram (PD) codes, their regions, and the
tribracket equations they impose.

A PD crossing lists four edge labels counterclockwise starting from the
incoming under-strand.  The under-strand runs slot 0 -> slot 2; the
over-strand runs slot 3 -> slot 1 at a positive crossing and slot 1 -> slot 3
at a negative one.

Crossing frame: turn the crossing so that both strands leave upward.  The
four regions are then *south* (between the incoming ends), *north* (between
the outgoing ends), *west* and *east*.  A positive crossing (over-strand
running south-west to north-east) imposes ``[west, south, north] = east`` and
a negative one ``[west, north, south] = east``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import DomainError, StructureError, UnsupportedError
from .systems import EquationSystem, TriEq

DATA = Path(__file__).parent / "data" / "diagrams"


@dataclass(frozen=True)
class PDCrossing:
    slots: tuple[int, int, int, int]
    sign: int

    def __post_init__(self):
        if len(self.slots) != 4:
            raise DomainError("a crossing has four slots")
        if self.sign not in (1, -1):
            raise DomainError(f"crossing sign must be +1 or -1, got {self.sign!r}")
        object.__setattr__(self, "slots", tuple(int(s) for s in self.slots))

    def outgoing(self, m: int) -> bool:
        if m in (0, 2):
            return m == 2
        return (m == 1) == (self.sign > 0)


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[PDCrossing, ...] = ()
    name: str | None = None

    def __post_init__(self):
        xs = tuple(c if isinstance(c, PDCrossing) else PDCrossing(tuple(c[0]), int(c[1])) for c in self.crossings)
        object.__setattr__(self, "crossings", xs)
        ends: dict[int, list] = {}
        for k, c in enumerate(xs):
            for m, e in enumerate(c.slots):
                ends.setdefault(e, []).append((k, m))
        for e, where in ends.items():
            if len(where) != 2:
                raise StructureError(f"edge {e} appears {len(where)} times; every edge must appear exactly twice")
            (k1, m1), (k2, m2) = where
            if xs[k1].outgoing(m1) == xs[k2].outgoing(m2):
                raise StructureError(f"edge {e} is oriented inconsistently at its two ends")

    def __len__(self) -> int:
        return len(self.crossings)

    def edges(self) -> list[int]:
        return sorted({e for c in self.crossings for e in c.slots})

    def ends(self) -> dict[int, list[tuple[int, int]]]:
        out: dict[int, list] = {}
        for k, c in enumerate(self.crossings):
            for m, e in enumerate(c.slots):
                out.setdefault(e, []).append((k, m))
        return out

    def to_json(self) -> dict:
        doc = {"crossings": [{"sign": c.sign, "slots": list(c.slots)} for c in self.crossings]}
        if self.name:
            doc["name"] = self.name
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "PDCode":
        try:
            xs = tuple(PDCrossing(tuple(int(s) for s in c["slots"]), int(c["sign"])) for c in doc["crossings"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed PD document: {exc!r}") from exc
        return cls(xs, doc.get("name"))

    @classmethod
    def load(cls, path) -> "PDCode":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class RegionCrossing:
    """A crossing seen in its frame: four region ids and a sign (``None``
    when the orientation is unknown)."""

    south: int
    west: int
    east: int
    north: int
    sign: int | None = 1


@dataclass(frozen=True)
class RAD:
    """Region-annotated diagram."""

    crossings: tuple[RegionCrossing, ...]
    region_count: int

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(self.crossings))
        for c in self.crossings:
            for r in (c.south, c.west, c.east, c.north):
                if not 0 <= r < self.region_count:
                    raise DomainError(f"region id {r} out of range")


def _frame(c: PDCrossing, corner: Sequence[int]) -> RegionCrossing:
    # corner[m] is the region between slot m and slot m+1 (counterclockwise)
    if c.sign > 0:
        return RegionCrossing(south=corner[3], west=corner[2], east=corner[0], north=corner[1], sign=1)
    return RegionCrossing(south=corner[0], west=corner[3], east=corner[1], north=corner[2], sign=-1)


def _connected(pd: PDCode) -> bool:
    n = len(pd.crossings)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (k1, _), (k2, _) in pd.ends().values():
        parent[find(k1)] = find(k2)
    return len({find(k) for k in range(n)}) <= 1


def trace_faces(pd: PDCode) -> tuple[RAD, dict[tuple[int, int], int]]:
    """Recover the complementary regions of a connected diagram.

    Corner ``(k, m)`` sits between slots ``m`` and ``m+1`` of crossing ``k``.
    The face containing it continues at the far end ``(k', m')`` of the edge
    in slot ``m+1``, at corner ``(k', m')``.  Returns the annotated diagram and
    the corner-to-region map.
    """
    if not pd.crossings:
        return RAD((), 2), {}
    if not _connected(pd):
        raise UnsupportedError("face tracing needs a connected diagram")
    ends = pd.ends()

    def far(k, m):
        e = pd.crossings[k].slots[m]
        a, b = ends[e]
        return b if a == (k, m) else a

    faces: dict[tuple[int, int], int] = {}
    region = 0
    for k in range(len(pd.crossings)):
        for m in range(4):
            if (k, m) in faces:
                continue
            cur = (k, m)
            while cur not in faces:
                faces[cur] = region
                ck, cm = cur
                cur = far(ck, (cm + 1) % 4)
            if cur != (k, m):
                raise StructureError(f"face starting at corner {(k, m)} does not close")
            region += 1
    v = len(pd.crossings)
    if region != v + 2:
        raise StructureError(f"found {region} faces for {v} crossings; the code is not planar")
    xs = tuple(_frame(c, [faces[(k, m)] for m in range(4)]) for k, c in enumerate(pd.crossings))
    return RAD(xs, region), faces


def crossing_equation(c: RegionCrossing) -> TriEq:
    if c.sign is None:
        raise DomainError("crossing has no orientation")
    if c.sign > 0:
        return TriEq(c.west, c.south, c.north, c.east)
    return TriEq(c.west, c.north, c.south, c.east)


def emit_equations(rad: RAD) -> EquationSystem:
    """One equation per crossing; variables are the region ids."""
    tri = tuple(crossing_equation(c) for c in rad.crossings)
    return EquationSystem(rad.region_count, tri, (), tuple(f"r{i}" for i in range(rad.region_count)))


def pd_system(pd: PDCode) -> EquationSystem:
    return emit_equations(trace_faces(pd)[0])


def mirror_reverse(rad: RAD) -> RAD:
    """Mirror in a line of the plane and reverse every strand.

    Re-framing the crossing swaps north and south and keeps west and east,
    while the sign flips.
    """
    xs = tuple(
        RegionCrossing(c.north, c.west, c.east, c.south, None if c.sign is None else -c.sign) for c in rad.crossings
    )
    return RAD(xs, rad.region_count)


def add_r1_kink(pd: PDCode, edge: int | None = None, side: str = "left", sign: int = 1) -> PDCode:
    """Insert a Reidemeister-I curl on ``edge``.

    ``side`` says on which side of the strand the small loop lies, ``sign``
    the sign of the new crossing.  The crossingless unknot (empty code) takes
    ``edge=None``.
    """
    if side not in ("left", "right"):
        raise DomainError("side must be 'left' or 'right'")
    if sign not in (1, -1):
        raise DomainError("sign must be +1 or -1")
    labels = pd.edges()
    top = max(labels, default=0)
    loop = top + 1
    if not pd.crossings:
        if edge is not None:
            raise DomainError("the crossingless unknot has no edge ids")
        e_in = e_out = top + 2
        rest: list[PDCrossing] = []
    else:
        if edge not in labels:
            raise DomainError(f"no edge {edge!r} in the diagram")
        e_in, e_out = edge, top + 2
        rest = []
        for c in pd.crossings:
            slots = list(c.slots)
            for m, e in enumerate(slots):
                # the end of the edge where the strand arrives is re-labelled
                if e == edge and not c.outgoing(m):
                    slots[m] = e_out
            rest.append(PDCrossing(tuple(slots), c.sign))
    if side == "left":
        slots = (e_in, e_out, loop, loop) if sign > 0 else (loop, e_in, e_out, loop)
    else:
        slots = (loop, loop, e_out, e_in) if sign > 0 else (e_in, loop, loop, e_out)
    return PDCode(tuple(rest) + (PDCrossing(slots, sign),), pd.name)


# ---------------------------------------------------------------------------
# PD codes from braid words
# ---------------------------------------------------------------------------
#
# A braid word is read bottom to top on strands at positions 1..m.  The
# generator +j crosses positions j and j+1 with the strand coming from the
# lower left on top; -j puts the strand from the lower right on top.

_SW, _SE, _NE, _NW = range(4)  # counterclockwise
_DIRS = {_SW: (-1, -1), _SE: (1, -1), _NE: (1, 1), _NW: (-1, 1)}
_STRAIGHT = {_SW: _NE, _NE: _SW, _SE: _NW, _NW: _SE}


def _check_word(word: Sequence[int], strands: int):
    for g in word:
        if g == 0 or abs(g) >= strands:
            raise DomainError(f"generator {g} out of range for {strands} strands")


def _braid_skeleton(word: Sequence[int], strands: int):
    """Crossings as dicts position -> segment id, plus the segment ids at
    the bottom and top of every position."""
    bottom = list(range(strands))
    cur = list(bottom)
    nxt = strands
    crossings = []
    for g in word:
        j = abs(g) - 1
        seg = {_SW: cur[j], _SE: cur[j + 1], _NW: nxt, _NE: nxt + 1}
        nxt += 2
        cur[j], cur[j + 1] = seg[_NW], seg[_NE]
        crossings.append((seg, 1 if g > 0 else -1))
    return crossings, bottom, cur, nxt


def braid_permutation(word: Sequence[int], strands: int) -> list[int]:
    """``perm[p]`` is the top position reached by the strand starting at
    bottom position ``p`` (0-based)."""
    cur = list(range(strands))  # cur[pos] = starting position of the strand there
    for g in word:
        j = abs(g) - 1
        cur[j], cur[j + 1] = cur[j + 1], cur[j]
    perm = [0] * strands
    for pos, p in enumerate(cur):
        perm[p] = pos
    return perm


def crossing_directions(word: Sequence[int], bottom_dirs: Sequence[int]) -> list[tuple[int, int]]:
    """For each letter, the directions (+1 up, -1 down) of the strand from
    the lower left and of the strand from the lower right."""
    cur = list(range(len(bottom_dirs)))
    out = []
    for g in word:
        j = abs(g) - 1
        out.append((bottom_dirs[cur[j]], bottom_dirs[cur[j + 1]]))
        cur[j], cur[j + 1] = cur[j + 1], cur[j]
    return out


def plat_directions(word: Sequence[int], bridges: int) -> tuple[list[int], int]:
    """Directions of the strands of a plat at the bottom of the braid and the
    number of components.  Each component runs upward at the leftmost bottom
    position it visits."""
    strands = 2 * bridges
    perm = braid_permutation(word, strands)
    inv = [0] * strands
    for p, t in enumerate(perm):
        inv[t] = p
    dirs = [0] * strands
    components = 0
    for start in range(strands):
        if dirs[start]:
            continue
        components += 1
        p = start
        while not dirs[p]:
            dirs[p] = 1
            q = inv[perm[p] ^ 1]  # over the top cap, then down
            dirs[q] = -1
            p = q ^ 1  # around the bottom cap
    return dirs, components


def _pd_from_skeleton(crossings, identify, nseg: int, dirs, name=None) -> PDCode:
    """Label a diagram built from braid crossings.

    ``identify`` lists pairs of segment ids that are the same edge and
    ``dirs`` gives, per crossing, the directions of its two strands.
    """
    parent = list(range(nseg))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in identify:
        parent[find(a)] = find(b)
    used = sorted({find(s) for seg, _ in crossings for s in seg.values()})
    if len(used) != 2 * len(crossings) or {find(s) for s in range(nseg)} != set(used):
        raise UnsupportedError("diagram has a crossingless component")
    labels = {e: i + 1 for i, e in enumerate(used)}
    out = []
    for (seg, eps), (d_a, d_b) in zip(crossings, dirs):
        a_in = _SW if d_a > 0 else _NE
        b_in = _SE if d_b > 0 else _NW
        u_in, o_in = (b_in, a_in) if eps > 0 else (a_in, b_in)
        u_dir = _DIRS[_STRAIGHT[u_in]]
        o_dir = _DIRS[_STRAIGHT[o_in]]
        cross = o_dir[0] * u_dir[1] - o_dir[1] * u_dir[0]
        slots = tuple(labels[find(seg[(u_in + i) % 4])] for i in range(4))
        out.append(PDCrossing(slots, 1 if cross > 0 else -1))
    return PDCode(tuple(out), name)


def braid_closure_pd(word: Sequence[int], strands: int, name: str | None = None) -> PDCode:
    """Closure of a braid, oriented upward along the braid."""
    _check_word(word, strands)
    crossings, bottom, top, nseg = _braid_skeleton(word, strands)
    dirs = crossing_directions(word, [1] * strands)
    return _pd_from_skeleton(crossings, list(zip(bottom, top)), nseg, dirs, name)


def plat_pd(word: Sequence[int], bridges: int, name: str | None = None) -> PDCode:
    """Plat closure of a braid on ``2 * bridges`` strands: consecutive caps
    below and above, oriented as in :func:`plat_directions`."""
    strands = 2 * bridges
    _check_word(word, strands)
    crossings, bottom, top, nseg = _braid_skeleton(word, strands)
    pairs = [(bottom[2 * i], bottom[2 * i + 1]) for i in range(bridges)]
    pairs += [(top[2 * i], top[2 * i + 1]) for i in range(bridges)]
    bottom_dirs, _ = plat_directions(word, bridges)
    return _pd_from_skeleton(crossings, pairs, nseg, crossing_directions(word, bottom_dirs), name)


def load_builtin(name: str) -> PDCode:
    path = DATA / f"{name}.json"
    if not path.exists():
        raise DomainError(f"no bundled diagram named {name!r}")
    return PDCode.load(path)


def builtin_names() -> list[str]:
    return sorted(p.stem for p in DATA.glob("*.json"))
