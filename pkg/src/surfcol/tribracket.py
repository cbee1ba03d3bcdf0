"""Finite tribrackets (knot-theoretic ternary quasigroups) as tensors."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from . import _accel
from .errors import BudgetExceeded, DomainError

SLOTS = ("A", "B", "C", "D")


class Axiom1Failure(NamedTuple):
    """A line of the tensor that is not a permutation.

    ``axis`` names the free argument; ``fixed`` holds the other two
    coordinates with ``None`` in the free position.
    """

    axis: str
    fixed: tuple
    value: int

    def as_dict(self) -> dict:
        return {"axis": self.axis, "fixed": list(self.fixed), "duplicated": self.value}


class Axiom2Failure(NamedTuple):
    a: int
    b: int
    c: int
    d: int
    values: tuple[int, int, int]

    def as_dict(self) -> dict:
        return {"quad": [self.a, self.b, self.c, self.d], "values": list(self.values)}


@dataclass(frozen=True)
class ValidationReport:
    axiom1_failures: list[Axiom1Failure] = field(default_factory=list)
    axiom2_failures: list[Axiom2Failure] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.axiom1_failures and not self.axiom2_failures

    def as_dict(self) -> dict:
        return {
            "valid": self.valid,
            "axiom1_failures": [f.as_dict() for f in self.axiom1_failures],
            "axiom2_failures": [f.as_dict() for f in self.axiom2_failures],
        }


class Tribracket:
    """An n x n x n ternary product table; ``tensor[a, b, c] == [a, b, c]``.

    Construction only checks that entries are in range, so malformed tables
    (such as typeset tables with a typo) can be loaded and reported on by
    :meth:`validate`.  Counting routines work for any table; the uniqueness
    guarantees of :meth:`solve_slot` need a valid one.
    """

    __slots__ = ("tensor", "name", "_pre", "_report")

    def __init__(self, tensor, name: str | None = None):
        t = np.array(tensor, dtype=np.int64)
        if t.ndim != 3 or not (t.shape[0] == t.shape[1] == t.shape[2]) or t.shape[0] == 0:
            raise DomainError(f"tribracket tensor must be a non-empty n x n x n array, got shape {t.shape}")
        n = t.shape[0]
        if t.min() < 0 or t.max() >= n:
            raise DomainError(f"tensor entries must lie in [0, {n})")
        t.setflags(write=False)
        self.tensor = t
        self.name = name
        self._pre = None
        self._report = None

    @property
    def size(self) -> int:
        return self.tensor.shape[0]

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<Tribracket{label} size={self.size}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Tribracket) and np.array_equal(self.tensor, other.tensor)

    def __hash__(self) -> int:
        return hash(self.tensor.tobytes())

    def eval(self, a: int, b: int, c: int) -> int:
        n = self.size
        if not (0 <= a < n and 0 <= b < n and 0 <= c < n):
            raise DomainError(f"element out of range for size {n}: {(a, b, c)}")
        return int(self.tensor[a, b, c])

    __call__ = eval

    # -- inverse lookups -------------------------------------------------

    def _preimages(self):
        # per slot, a table mapping the three known values to the tuple of
        # solutions for the unknown one (singletons for a valid tribracket)
        if self._pre is None:
            n = self.size
            t = self.tensor
            pre = {s: [[[[] for _ in range(n)] for _ in range(n)] for _ in range(n)] for s in SLOTS}
            for a, b, c in itertools.product(range(n), repeat=3):
                d = int(t[a, b, c])
                pre["A"][b][c][d].append(a)
                pre["B"][a][c][d].append(b)
                pre["C"][a][b][d].append(c)
                pre["D"][a][b][c].append(d)
            self._pre = {
                s: tuple(tuple(tuple(tuple(x) for x in row) for row in plane) for plane in table)
                for s, table in pre.items()
            }
        return self._pre

    def candidates(self, slot: str, known: Sequence[int]) -> tuple[int, ...]:
        """All values for ``slot`` completing ``[a,b,c]=d`` given the other three
        (in their natural order, e.g. ``(b, c, d)`` for slot ``A``)."""
        if slot not in SLOTS:
            raise DomainError(f"slot must be one of {SLOTS}, got {slot!r}")
        x, y, z = known
        return self._preimages()[slot][x][y][z]

    def solve_slot(self, slot: str, known: Sequence[int]) -> int:
        found = self.candidates(slot, known)
        if len(found) != 1:
            raise DomainError(
                f"slot {slot} with known {tuple(known)} has {len(found)} solutions; "
                "the table is not a tribracket"
            )
        return found[0]

    # -- structure ---------------------------------------------------------

    def validate(self) -> ValidationReport:
        if self._report is None:
            object.__setattr__(self, "_report", ValidationReport(_axiom1(self.tensor), _axiom2(self.tensor)))
        return self._report

    @property
    def is_valid(self) -> bool:
        return self.validate().valid

    def is_commutative(self) -> bool:
        """``[a,b,c] = [b,c,a] = [a,c,b] = [c,b,a]`` for all triples."""
        t = self.tensor
        return bool(
            np.array_equal(t, t.transpose(1, 2, 0))
            and np.array_equal(t, t.transpose(0, 2, 1))
            and np.array_equal(t, t.transpose(2, 1, 0))
        )

    def is_bc_symmetric(self) -> bool:
        """``[a,b,c] = [a,c,b]``; holds for Dehn tribrackets of abelian groups."""
        return bool(np.array_equal(self.tensor, self.tensor.transpose(0, 2, 1)))

    def to_json(self, one_indexed: bool = False) -> dict:
        offset = 1 if one_indexed else 0
        doc = {"size": self.size, "one_indexed": one_indexed, "tensor": (self.tensor + offset).tolist()}
        if self.name:
            doc["name"] = self.name
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Tribracket":
        try:
            n = int(doc["size"])
            t = np.array(doc["tensor"], dtype=np.int64)
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed tribracket document: {exc}") from exc
        if doc.get("one_indexed", False):
            # "shift" reads value v as element v-1, "mod" as v mod n (so n means 0)
            rule = doc.get("value_map", "shift")
            if rule == "shift":
                t = t - 1
            elif rule == "mod":
                t = t % n
            else:
                raise DomainError(f"unknown value_map {rule!r}")
        if t.shape != (n, n, n):
            raise DomainError(f"tensor shape {t.shape} does not match size {n}")
        return cls(t, name=doc.get("name"))

    @classmethod
    def load(cls, path) -> "Tribracket":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _axiom1(t: np.ndarray) -> list[Axiom1Failure]:
    n = t.shape[0]
    out = []
    for x, y in itertools.product(range(n), repeat=2):
        lines = (("a", (None, x, y), t[:, x, y]), ("b", (x, None, y), t[x, :, y]), ("c", (x, y, None), t[x, y, :]))
        for axis, fixed, line in lines:
            counts = np.bincount(line, minlength=n)
            for v in np.flatnonzero(counts > 1):
                out.append(Axiom1Failure(axis, fixed, int(v)))
    order = {"a": 0, "b": 1, "c": 2}
    out.sort(key=lambda f: (order[f.axis], [(-1 if v is None else v) for v in f.fixed], f.value))
    return out


def _axiom2(t: np.ndarray) -> list[Axiom2Failure]:
    rows = _accel.axiom2_failures(t)
    return [Axiom2Failure(int(r[0]), int(r[1]), int(r[2]), int(r[3]), (int(r[4]), int(r[5]), int(r[6]))) for r in rows]


# ---------------------------------------------------------------------------
# finite groups and Dehn tribrackets
# ---------------------------------------------------------------------------

class FiniteGroup:
    """A group given by its Cayley table; elements are ``0..size-1``."""

    def __init__(self, cayley, identity: int = 0, name: str | None = None):
        table = np.array(cayley, dtype=np.int64)
        n = table.shape[0] if table.ndim == 2 else 0
        if table.ndim != 2 or table.shape != (n, n) or n == 0:
            raise DomainError("Cayley table must be a non-empty square array")
        if table.min() < 0 or table.max() >= n or not (0 <= identity < n):
            raise DomainError("Cayley table entries and identity must lie in range")
        ar = np.arange(n)
        if not (np.array_equal(table[identity], ar) and np.array_equal(table[:, identity], ar)):
            raise DomainError(f"{identity} is not a two-sided identity")
        for row in np.vstack([table, table.T]):
            if len(set(row.tolist())) != n:
                raise DomainError("Cayley table rows and columns must be permutations")
        # associativity: (xy)z == x(yz)
        if not np.array_equal(table[table[:, :, None], ar[None, None, :]], table[ar[:, None, None], table[None, :, :]]):
            raise DomainError("Cayley table is not associative")
        table.setflags(write=False)
        self.cayley = table
        self.identity = identity
        self.name = name
        self.inverse = np.array([int(np.flatnonzero(table[x] == identity)[0]) for x in range(n)])

    @property
    def size(self) -> int:
        return self.cayley.shape[0]

    def __repr__(self) -> str:
        return f"<FiniteGroup {self.name or ''} order={self.size}>"

    def mul(self, x: int, y: int) -> int:
        return int(self.cayley[x, y])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    @classmethod
    def from_json(cls, doc: dict) -> "FiniteGroup":
        try:
            return cls(doc["cayley"], int(doc.get("identity", 0)), name=doc.get("name"))
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed group document: {exc}") from exc


def cyclic_group(n: int) -> FiniteGroup:
    ar = np.arange(n)
    return FiniteGroup((ar[:, None] + ar[None, :]) % n, 0, name=f"Z{n}")


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    m = h.size
    n = g.size * m
    table = np.empty((n, n), dtype=np.int64)
    for x, y in itertools.product(range(n), repeat=2):
        table[x, y] = g.cayley[x // m, y // m] * m + h.cayley[x % m, y % m]
    return FiniteGroup(table, g.identity * m + h.identity, name=f"{g.name}x{h.name}")


def _group_from_permutations(perms: list[tuple[int, ...]], name: str) -> FiniteGroup:
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[k]] for k in range(len(q)))] for q in perms] for p in perms]
    ident = index[tuple(range(len(perms[0])))]
    return FiniteGroup(table, ident, name=name)


def _closure(gens: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    k = len(gens[0])
    seen = {tuple(range(k))}
    frontier = list(seen)
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[i]] for i in range(k))
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return sorted(seen)


def symmetric_group(k: int) -> FiniteGroup:
    return _group_from_permutations(sorted(itertools.permutations(range(k))), f"S{k}")


def dihedral_group(k: int) -> FiniteGroup:
    """Symmetries of a k-gon, order 2k."""
    rot = tuple((i + 1) % k for i in range(k))
    ref = tuple((-i) % k for i in range(k))
    return _group_from_permutations(_closure([rot, ref]), f"D{k}")


def quaternion_group() -> FiniteGroup:
    # elements (s, i) meaning s * {1, i, j, k}[i] with sign s in {0:+, 1:-}
    unit = {  # product of basis units x*y = sign, unit
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }
    elems = [(s, u) for s in (0, 1) for u in range(4)]
    table = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s3, u3 = unit[(u1, u2)]
            row.append(elems.index(((s1 + s2 + s3) % 2, u3)))
        table.append(row)
    return FiniteGroup(table, 0, name="Q8")


def small_groups(max_order: int = 8) -> list[FiniteGroup]:
    """One representative of every isomorphism class of order <= 8."""
    z = cyclic_group
    groups = [z(n) for n in range(1, 9)]
    groups += [
        direct_product(z(2), z(2)),
        symmetric_group(3),
        direct_product(z(2), z(4)),
        direct_product(direct_product(z(2), z(2)), z(2)),
        dihedral_group(4),
        quaternion_group(),
    ]
    return [g for g in groups if g.size <= max_order]


def dehn_tribracket(group: FiniteGroup) -> Tribracket:
    """``[a, b, c] = b a^{-1} c``."""
    g = group.cayley
    inv = group.inverse
    n = group.size
    a, b, c = np.indices((n, n, n))
    tensor = g[g[b, inv[a]], c]
    return Tribracket(tensor, name=f"Dehn({group.name})" if group.name else None)


def as_dehn_group(t: Tribracket) -> FiniteGroup | None:
    """Recover a group G with ``t == Dehn(G)``, or ``None``.

    For a Dehn tribracket, ``x*y := [e, x, y]`` is the group law with identity
    ``e``; any base point works, so ``e = 0`` is tried.
    """
    table = t.tensor[0]
    try:
        group = FiniteGroup(table, 0)
    except DomainError:
        return None
    return group if dehn_tribracket(group) == t else None


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def enumerate_tribrackets(n: int, budget: int = 10_000_000) -> Iterator[Tribracket]:
    """Every valid size-``n`` tribracket, in lexicographic order of the
    flattened tensor.  Raises :class:`BudgetExceeded` (carrying the ones found
    so far) when the search visits more than ``budget`` nodes."""
    if n < 1:
        raise DomainError("size must be positive")
    tensors, nodes, exhausted = _accel.enumerate_tensors(n, budget)
    found = [Tribracket(t, name=f"T{n}_{i}") for i, t in enumerate(tensors)]
    if exhausted:
        raise BudgetExceeded(f"enumeration of size {n} exceeded {budget} nodes", partial=found, progress=nodes)
    yield from found


def load_builtin(name: str) -> Tribracket:
    path = Path(__file__).parent / "data" / "tribrackets" / f"{name}.json"
    if not path.exists():
        raise DomainError(f"no bundled tribracket named {name!r}")
    return Tribracket.load(path)
