"""Bundled golden data: the Yoshikawa-table systems, two torus links, the
named tribrackets, and a runner that recounts everything."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DomainError
from .systems import EquationSystem, count_colorings, reverse_orientation
from .tribracket import Tribracket, as_dehn_group, cyclic_group, dehn_tribracket, load_builtin

DATA = Path(__file__).parent / "data" / "catalog"


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    system: EquationSystem
    components: int
    source: str = ""
    description: str = ""
    provenance: str = ""
    expected: dict = field(default_factory=dict)
    reverse_of: str | None = None


def _load_file(path: Path) -> list[CatalogEntry]:
    try:
        doc = json.loads(path.read_text())
    except (OSError, ValueError) as exc:
        raise DomainError(f"cannot read catalog file {path.name}: {exc}") from exc
    out = []
    for item in doc.get("entries", []):
        name = item.get("name", "?")
        try:
            out.append(
                CatalogEntry(
                    name=name,
                    system=EquationSystem.from_json(item),
                    components=int(item["components"]),
                    source=item.get("source", ""),
                    description=item.get("description", ""),
                    provenance=item.get("provenance", ""),
                    expected={k: int(v) for k, v in item.get("expected", {}).items()},
                    reverse_of=item.get("reverse_of"),
                )
            )
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"corrupt catalog entry {name!r}: {exc}") from exc
    return out


def load_catalog() -> list[CatalogEntry]:
    """Table entries (forward and reversed rows) followed by the torus links."""
    return _load_file(DATA / "table.json") + _load_file(DATA / "torus_links.json")


def table_entries() -> list[CatalogEntry]:
    return _load_file(DATA / "table.json")


def bundled_tribrackets() -> dict[str, Tribracket]:
    """X3 (the table behind the stored counts), X4, and the Dehn tribrackets
    of Z2..Z5."""
    out = {"X3": load_builtin("X3"), "X4": load_builtin("X4")}
    for n in range(2, 6):
        out[f"Dehn(Z{n})"] = dehn_tribracket(cyclic_group(n))
    return out


@dataclass
class TableRow:
    name: str
    count: int
    expected: int | None
    reverse_matches: bool | None = None

    @property
    def ok(self) -> bool:
        return (self.expected is None or self.count == self.expected) and self.reverse_matches is not False

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "count": self.count,
            "expected": self.expected,
            "reverse_matches": self.reverse_matches,
            "ok": self.ok,
        }


@dataclass
class TableReport:
    tribracket: str
    rows: list[TableRow]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def mismatches(self) -> list[str]:
        return [r.name for r in self.rows if not r.ok]

    def as_dict(self) -> dict:
        return {
            "tribracket": self.tribracket,
            "ok": self.ok,
            "mismatches": self.mismatches(),
            "rows": [r.as_dict() for r in self.rows],
        }

    def to_text(self) -> str:
        head = f"{'entry':<12}{'count':>8}{'expected':>10}  reverse  status"
        lines = [f"tribracket {self.tribracket}", head, "-" * len(head)]
        for r in self.rows:
            exp = "" if r.expected is None else str(r.expected)
            rev = {None: "", True: "ok", False: "DIFF"}[r.reverse_matches]
            lines.append(f"{r.name:<12}{r.count:>8}{exp:>10}  {rev:<7}  {'ok' if r.ok else 'MISMATCH'}")
        return "\n".join(lines)


def expectation(entry: CatalogEntry, t: Tribracket, label: str | None) -> int | None:
    """Expected count of ``entry`` under ``t``: the stored value for a named
    tribracket, or ``|A|^(components + 1)`` when ``t`` is the Dehn
    tribracket of an abelian group."""
    if label and label in entry.expected:
        return entry.expected[label]
    g = as_dehn_group(t)
    if g is not None and g.is_abelian():
        return t.size ** (entry.components + 1)
    return None


def run_table(t: Tribracket, label: str | None = None, entries: list[CatalogEntry] | None = None) -> TableReport:
    """Count every catalog system under ``t`` and compare with expectations.

    Reversed rows are also checked against ``reverse_orientation`` of their
    forward row (same constraints, same variable names).
    """
    entries = load_catalog() if entries is None else entries
    label = label or t.name
    by_name = {e.name: e for e in entries}
    rows = []
    for e in entries:
        count, _ = count_colorings(e.system, t)
        rev = None
        if e.reverse_of and e.reverse_of in by_name:
            fwd = by_name[e.reverse_of].system
            rev = reverse_orientation(fwd).constraint_multiset() == e.system.constraint_multiset()
        rows.append(TableRow(e.name, count, expectation(e, t, label), rev))
    return TableReport(label or t.name or f"size-{t.size}", rows)
