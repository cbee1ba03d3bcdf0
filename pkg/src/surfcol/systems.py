"""Region-equation systems over a tribracket and exact solution counting.

A system has variables ``0..var_count-1`` (optionally named) and two kinds of
constraint: ``TriEq(p, q, r, s)`` meaning ``[x_p, x_q, x_r] = x_s`` and
``EqVar(i, j)`` meaning ``x_i = x_j``.
"""
from __future__ import annotations

import itertools
import json
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _accel
from .errors import BudgetExceeded, DomainError
from .tribracket import Tribracket

Coloring = tuple  # one element per variable

DEFAULT_BUDGET = 10**7


class TriEq(NamedTuple):
    p: int
    q: int
    r: int
    s: int


class EqVar(NamedTuple):
    i: int
    j: int


@dataclass(frozen=True)
class EquationSystem:
    var_count: int
    tri_eqs: tuple[TriEq, ...] = ()
    eq_vars: tuple[EqVar, ...] = ()
    var_names: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.var_count < 0:
            raise DomainError("var_count must be non-negative")
        tri = tuple(TriEq(*map(int, t)) for t in self.tri_eqs)
        eqs = tuple(EqVar(*map(int, e)) for e in self.eq_vars)
        for idx in itertools.chain.from_iterable(tri + eqs):
            if not 0 <= idx < self.var_count:
                raise DomainError(f"variable index {idx} out of range for {self.var_count} variables")
        names = self.var_names
        if names is not None:
            names = tuple(str(x) for x in names)
            if len(names) != self.var_count:
                raise DomainError("var_names length does not match var_count")
            if len(set(names)) != len(names):
                raise DomainError("variable names must be distinct")
        object.__setattr__(self, "tri_eqs", tri)
        object.__setattr__(self, "eq_vars", eqs)
        object.__setattr__(self, "var_names", names)

    def name(self, i: int) -> str:
        return self.var_names[i] if self.var_names else f"x{i}"

    def names(self) -> tuple[str, ...]:
        return tuple(self.name(i) for i in range(self.var_count))

    def satisfied_by(self, assignment: Sequence[int], t: Tribracket) -> bool:
        x = assignment
        ten = t.tensor
        return all(ten[x[p], x[q], x[r]] == x[s] for p, q, r, s in self.tri_eqs) and all(
            x[i] == x[j] for i, j in self.eq_vars
        )

    def relabel(self, perm: Sequence[int]) -> "EquationSystem":
        """Rename variable ``i`` to ``perm[i]``."""
        if sorted(perm) != list(range(self.var_count)):
            raise DomainError("relabel needs a permutation of the variables")
        names = None
        if self.var_names:
            names = [""] * self.var_count
            for i, j in enumerate(perm):
                names[j] = self.var_names[i]
        return EquationSystem(
            self.var_count,
            tuple(TriEq(*(perm[v] for v in t)) for t in self.tri_eqs),
            tuple(EqVar(perm[e.i], perm[e.j]) for e in self.eq_vars),
            names,
        )

    def constraint_multiset(self) -> Counter:
        """Constraints keyed by variable name, for order-free comparisons."""
        nm = self.name
        c = Counter(("tri", tuple(nm(v) for v in t)) for t in self.tri_eqs)
        c.update(("eq", tuple(sorted((nm(e.i), nm(e.j))))) for e in self.eq_vars if e.i != e.j)
        return c

    def to_text(self) -> str:
        nm = self.name
        parts = [f"[{nm(p)},{nm(q)},{nm(r)}]={nm(s)}" for p, q, r, s in self.tri_eqs]
        parts += [f"{nm(i)}={nm(j)}" for i, j in self.eq_vars]
        return ", ".join(parts)

    def to_json(self) -> dict:
        nm = self.name
        eqs = [{"op": "tri", "args": [nm(v) for v in t]} for t in self.tri_eqs]
        eqs += [{"op": "eq", "args": [nm(e.i), nm(e.j)]} for e in self.eq_vars]
        return {"variables": list(self.names()), "equations": eqs}

    @classmethod
    def from_json(cls, doc: dict) -> "EquationSystem":
        try:
            names = [str(v) for v in doc["variables"]]
            index = {v: i for i, v in enumerate(names)}
            tri, eqs = [], []
            for item in doc.get("equations", []):
                args = [index[a] if isinstance(a, str) else int(a) for a in item["args"]]
                if item["op"] == "tri" and len(args) == 4:
                    tri.append(TriEq(*args))
                elif item["op"] == "eq" and len(args) == 2:
                    eqs.append(EqVar(*args))
                else:
                    raise DomainError(f"bad equation {item!r}")
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"malformed system document: {exc!r}") from exc
        return cls(len(names), tuple(tri), tuple(eqs), tuple(names))

    @classmethod
    def load(cls, path) -> "EquationSystem":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# text form, e.g. "d=[a,c,b], [a,b,c]=e, d=e=f=[a,b,c]=[a,c,b]"
# ---------------------------------------------------------------------------

_TERM = re.compile(r"\s*(\[\s*\w+\s*,\s*\w+\s*,\s*\w+\s*\]|\w+)\s*")


def _split_top(text: str) -> list[str]:
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch in ",;" and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return [s.strip() for s in out if s.strip()]


def parse_equations(text: str, variables: Sequence[str] | None = None) -> EquationSystem:
    """Parse comma-separated equation chains.

    Each chain is ``term = term = ...`` where a term is a variable or a
    bracket ``[x,y,z]``.  All terms of a chain are equal.  A chain with no bare
    variable gets a fresh auxiliary variable (named ``_t0``, ``_t1``, ...);
    since a bracket is a function of its arguments this does not change the
    number of solutions.
    """
    names = list(variables) if variables is not None else []
    index = {v: i for i, v in enumerate(names)}
    fixed = variables is not None

    def var(name: str) -> int:
        if name not in index:
            if fixed:
                raise DomainError(f"unknown variable {name!r}")
            index[name] = len(names)
            names.append(name)
        return index[name]

    chains = []
    for chain in _split_top(text):
        terms = []
        for raw in chain.split("="):
            m = _TERM.fullmatch(raw)
            if not m:
                raise DomainError(f"cannot parse term {raw!r} in {chain!r}")
            tok = m.group(1)
            if tok.startswith("["):
                terms.append(tuple(x.strip() for x in tok[1:-1].split(",")))
            else:
                terms.append(tok)
        if len(terms) < 2:
            raise DomainError(f"equation {chain!r} has no '='")
        chains.append(terms)

    # register names in order of first appearance for stable indexing
    for terms in chains:
        for t in terms:
            for v in (t if isinstance(t, tuple) else (t,)):
                var(v)
    fixed = True
    tri, eqs = [], []
    aux = 0
    for terms in chains:
        anchors = [t for t in terms if isinstance(t, str)]
        if anchors:
            anchor = var(anchors[0])
        else:
            name = f"_t{aux}"
            aux += 1
            index[name] = len(names)
            names.append(name)
            anchor = index[name]
        for t in terms:
            if isinstance(t, tuple):
                tri.append(TriEq(var(t[0]), var(t[1]), var(t[2]), anchor))
            elif var(t) != anchor:
                eqs.append(EqVar(anchor, var(t)))
    return EquationSystem(len(names), tuple(tri), tuple(eqs), tuple(names))


# ---------------------------------------------------------------------------
# normalisation
# ---------------------------------------------------------------------------

def _classes(sys: EquationSystem) -> list[int]:
    parent = list(range(sys.var_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in sys.eq_vars:
        a, b = find(i), find(j)
        if a != b:
            parent[max(a, b)] = min(a, b)
    return [find(x) for x in range(sys.var_count)]


def _normalize(sys: EquationSystem) -> tuple[EquationSystem, list[int]]:
    reps = _classes(sys)
    order = sorted(set(reps))
    compact = {r: k for k, r in enumerate(order)}
    mapping = [compact[r] for r in reps]
    seen = set()
    tri = []
    for t in sys.tri_eqs:
        u = TriEq(*(mapping[v] for v in t))
        if u not in seen:
            seen.add(u)
            tri.append(u)
    names = None
    if sys.var_names:
        names = tuple("=".join(sys.var_names[v] for v in range(sys.var_count) if reps[v] == r) for r in order)
    return EquationSystem(len(order), tuple(tri), (), names), mapping


def normalize(sys: EquationSystem) -> EquationSystem:
    """Merge ``EqVar`` classes, drop duplicate constraints and compact indices.

    Free variables are kept, so the solution count is unchanged.
    """
    return _normalize(sys)[0]


# ---------------------------------------------------------------------------
# exact counting
# ---------------------------------------------------------------------------

@dataclass
class SolveStats:
    nodes_visited: int = 0
    propagations: int = 0
    branch_depth_max: int = 0

    def as_dict(self) -> dict:
        return {
            "nodes_visited": self.nodes_visited,
            "propagations": self.propagations,
            "branch_depth_max": self.branch_depth_max,
        }


_SLOT = "ABCD"


class _Search:
    """Propagate-and-branch search over a normalised system."""

    def __init__(self, sys: EquationSystem, t: Tribracket):
        self.n = t.size
        self.t = t
        self.ten = t.tensor.tolist()
        self.cons = list(sys.tri_eqs)
        self.nv = sys.var_count
        occ = [[] for _ in range(self.nv)]
        for k, c in enumerate(self.cons):
            for v in set(c):
                occ[v].append(k)
        self.occ = occ
        self.constrained = [v for v in range(self.nv) if occ[v]]
        self.free = [v for v in range(self.nv) if not occ[v]]
        self.stats = SolveStats()

    def _options(self, c: TriEq, x: list[int]):
        """``None`` if ``c`` holds or has several unknowns; otherwise
        ``(var, candidates)`` for its single unknown variable (candidates may
        be empty, which signals a conflict)."""
        vals = [x[v] for v in c]
        unknown = {v for v, val in zip(c, vals) if val < 0}
        if not unknown:
            ok = self.ten[vals[0]][vals[1]][vals[2]] == vals[3]
            return None if ok else (-1, ())
        if len(unknown) > 1:
            return None
        v = unknown.pop()
        pos = [k for k in range(4) if c[k] == v]
        if len(pos) == 1:
            known = tuple(vals[k] for k in range(4) if k != pos[0])
            return v, self.t.candidates(_SLOT[pos[0]], known)
        cands = []
        for val in range(self.n):
            w = [val if k in pos else vals[k] for k in range(4)]
            if self.ten[w[0]][w[1]][w[2]] == w[3]:
                cands.append(val)
        return v, tuple(cands)

    def _propagate(self, x: list[int], trail: list[int]):
        """Run unit propagation to a fixpoint.  Returns ``False`` on conflict,
        otherwise ``(var, candidates)`` for the best multi-valued unit found
        (or ``None``)."""
        pending = None
        changed = True
        while changed:
            changed = False
            pending = None
            for c in self.cons:
                opt = self._options(c, x)
                if opt is None:
                    continue
                v, cands = opt
                if not cands:
                    return False
                if len(cands) == 1:
                    x[v] = cands[0]
                    trail.append(v)
                    self.stats.propagations += 1
                    changed = True
                elif pending is None or len(cands) < len(pending[1]):
                    pending = (v, cands)
        return pending if pending is not None else True

    def _branch_var(self, x: list[int]) -> int:
        best, best_score = -1, -1
        for v in self.constrained:
            if x[v] >= 0:
                continue
            score = sum(1 for k in self.occ[v] if any(x[u] < 0 for u in self.cons[k]))
            if score > best_score:
                best, best_score = v, score
        return best

    def run(self, x: list[int], depth: int, sink) -> int:
        """Count completions of ``x`` over the constrained variables; calls
        ``sink(x)`` on every complete solution when given."""
        self.stats.nodes_visited += 1
        self.stats.branch_depth_max = max(self.stats.branch_depth_max, depth)
        trail: list[int] = []
        res = self._propagate(x, trail)
        total = 0
        if res is not False:
            if isinstance(res, tuple):
                v, values = res
            else:
                v = self._branch_var(x)
                values = range(self.n)
            if v < 0:
                total = 1
                if sink is not None:
                    sink(x)
            else:
                for val in values:
                    x[v] = val
                    total += self.run(x, depth + 1, sink)
                    x[v] = -1
                    if sink is not None and sink.full():
                        break
        for v in trail:
            x[v] = -1
        return total


def count_colorings(sys: EquationSystem, t: Tribracket) -> tuple[int, SolveStats]:
    """Exact number of solutions of ``sys`` over ``t`` with search statistics.

    Works for any table; when ``t`` is not a valid tribracket, a unit
    constraint may have zero or several solutions and is handled as a
    conflict or a branch respectively.
    """
    norm, _ = _normalize(sys)
    s = _Search(norm, t)
    x = [-1] * norm.var_count
    core = s.run(x, 0, None)
    return core * t.size ** len(s.free), s.stats


class _Collector:
    def __init__(self, limit: int):
        self.limit = limit
        self.items: list[tuple] = []

    def __call__(self, x):
        self.items.append(tuple(x))

    def full(self) -> bool:
        return len(self.items) >= self.limit


def enumerate_colorings(sys: EquationSystem, t: Tribracket, limit: int = 1000) -> list[Coloring]:
    """Up to ``limit`` solutions in deterministic search order."""
    if limit <= 0:
        return []
    norm, mapping = _normalize(sys)
    s = _Search(norm, t)
    sink = _Collector(limit)
    s.run([-1] * norm.var_count, 0, sink)
    out = []
    for partial in sink.items:
        for fill in itertools.product(range(t.size), repeat=len(s.free)):
            x = list(partial)
            for v, val in zip(s.free, fill):
                x[v] = val
            out.append(tuple(x[mapping[i]] for i in range(sys.var_count)))
            if len(out) >= limit:
                return out
    return out


def brute_force_count(sys: EquationSystem, t: Tribracket, budget: int = DEFAULT_BUDGET) -> int:
    """Check every assignment; refuses when ``|X|^var_count`` exceeds ``budget``."""
    space = t.size ** sys.var_count
    if space > budget:
        raise BudgetExceeded(f"brute force needs {space} assignments, budget is {budget}", progress=0)
    tri = np.array(sys.tri_eqs, dtype=np.int64).reshape(-1, 4)
    eqs = np.array(sys.eq_vars, dtype=np.int64).reshape(-1, 2)
    return _accel.brute_force(t.tensor, t.size, sys.var_count, tri, eqs)


# ---------------------------------------------------------------------------
# orientation
# ---------------------------------------------------------------------------

def reverse_orientation(sys: EquationSystem) -> EquationSystem:
    """Equations of the reversed surface: ``[p,q,r]=s`` becomes ``[s,r,q]=p``."""
    return EquationSystem(
        sys.var_count,
        tuple(TriEq(s, r, q, p) for p, q, r, s in sys.tri_eqs),
        sys.eq_vars,
        sys.var_names,
    )


class InvertibilityWitness(NamedTuple):
    forward: int
    reversed: int
    distinguishes: bool


def invertibility_witness(sys: EquationSystem, t: Tribracket) -> InvertibilityWitness:
    fwd, _ = count_colorings(sys, t)
    rev, _ = count_colorings(reverse_orientation(sys), t)
    return InvertibilityWitness(fwd, rev, fwd != rev)


def merge_systems(parts: Iterable[EquationSystem]) -> EquationSystem:
    """Disjoint union; variables of later parts are shifted past earlier ones."""
    tri, eqs = [], []
    offset = 0
    for part in parts:
        tri += [TriEq(*(v + offset for v in c)) for c in part.tri_eqs]
        eqs += [EqVar(e.i + offset, e.j + offset) for e in part.eq_vars]
        offset += part.var_count
    return EquationSystem(offset, tuple(tri), tuple(eqs), None)
