"""Success records, normal forms, and their text and JSON encodings.

Two text encodings exist.  The display form follows the usual notation::

    T({a, -b}) v T({a, c})          plain
    [pa(3)]({pa(3), pa(3,2,3)}) v [in]({...})     abductive

The store form is lossless and is what computed-rule files use::

    T({a, -b}) v T({}) & in@{in, in(2,3), pa(3,2,3)}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .program import Literal, ParseError, is_consistent, parse_literal, sorted_literals


@dataclass(frozen=True)
class SuccessRecord:
    context: frozenset
    residue: frozenset = frozenset()  # {(abducible Literal, context frozenset)}
    # loop segments (excluding both endpoints) of branches that closed back on the goal
    root_loops: frozenset = field(default=frozenset(), compare=False, repr=False)

    @property
    def residue_literals(self) -> frozenset:
        return frozenset(lit for lit, _ in self.residue)

    @property
    def support(self) -> frozenset:
        out = set(self.context)
        for _, ctx in self.residue:
            out |= ctx
        return frozenset(out)

    def is_consistent(self) -> bool:
        return is_consistent(self.support)

    @property
    def key(self):
        return (self.context, self.residue)


class NormalForm:
    """F (no records) or a disjunction of success records, in discovery order."""

    __slots__ = ("records",)

    def __init__(self, records: Iterable[SuccessRecord] = ()):
        merged: dict = {}
        for rec in records:
            old = merged.get(rec.key)
            if old is None:
                merged[rec.key] = rec
            elif not rec.root_loops <= old.root_loops:
                merged[rec.key] = SuccessRecord(old.context, old.residue,
                                                old.root_loops | rec.root_loops)
        self.records = tuple(merged.values())

    @property
    def is_false(self) -> bool:
        return not self.records

    def __bool__(self) -> bool:
        return bool(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def record_set(self) -> frozenset:
        return frozenset(self.records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.record_set() == other.record_set()

    def __hash__(self) -> int:
        return hash(self.record_set())

    def __repr__(self) -> str:
        return f"NormalForm({format_normal_form(self)})"

    def __str__(self) -> str:
        return render(self)

    def contexts(self) -> set:
        return {r.context for r in self.records}

    def explanations(self) -> list[frozenset]:
        """Subset-minimal residue literal sets, in discovery order."""
        sets = list(dict.fromkeys(r.residue_literals for r in self.records))
        # anything dominated is dominated by a minimal set, so only compare with those
        minimal: list = []
        for s in sorted(sets, key=len):
            if not any(m < s for m in minimal):
                minimal.append(s)
        keep = set(minimal)
        return [s for s in sets if s in keep]

    def minimized(self) -> NormalForm:
        """Drop records dominated by another record (smaller context and residue)."""
        proj = {r.key: (r.context, r.residue_literals) for r in self.records}
        minimal: list = []
        for c, lits in sorted(set(proj.values()), key=lambda p: len(p[0]) + len(p[1])):
            if not any(mc <= c and ml <= lits and (mc, ml) != (c, lits) for mc, ml in minimal):
                minimal.append((c, lits))
        keep = set(minimal)
        return NormalForm(r for r in self.records if proj[r.key] in keep)


FALSE = NormalForm()


# -- display -----------------------------------------------------------------

def format_context(ctx: Iterable[Literal]) -> str:
    return "{" + ", ".join(map(str, sorted_literals(ctx))) + "}"


def render_record(rec: SuccessRecord) -> str:
    if not rec.residue:
        return f"T({format_context(rec.context)})"
    lits = ", ".join(map(str, sorted_literals(rec.residue_literals)))
    return f"[{lits}]({format_context(rec.support)})"


def render(nf: NormalForm) -> str:
    if nf.is_false:
        return "F"
    return " v ".join(render_record(r) for r in nf.records)


def render_explanations(nf: NormalForm) -> str:
    if nf.is_false:
        return "F"
    parts = []
    for expl in nf.explanations():
        parts.append(" & ".join(map(str, sorted_literals(expl))) if expl else "T")
    return " v ".join(parts)


# -- lossless text -----------------------------------------------------------

def _format_store_record(rec: SuccessRecord) -> str:
    parts = [f"T({format_context(rec.context)})"]
    for lit, ctx in sorted(rec.residue, key=lambda e: e[0].sort_key()):
        parts.append(f"{lit}@{format_context(ctx)}")
    return " & ".join(parts)


def format_normal_form(nf: NormalForm) -> str:
    if nf.is_false:
        return "F"
    return " v ".join(_format_store_record(r) for r in nf.records)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, start, i = [], 0, 0, 0
    while i < len(text):
        ch = text[i]
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif depth == 0 and text.startswith(sep, i):
            parts.append(text[start:i])
            i += len(sep)
            start = i
            continue
        i += 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


def _parse_context(text: str) -> frozenset:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise ParseError(f"malformed context {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return frozenset()
    return frozenset(parse_literal(t) for t in _split_top(inner, ","))


def parse_normal_form(text: str) -> NormalForm:
    text = text.strip()
    if text == "F":
        return FALSE
    records = []
    for chunk in _split_top(text, " v "):
        context, residue = None, []
        for part in _split_top(chunk, " & "):
            if part.startswith("T(") and part.endswith(")"):
                context = _parse_context(part[2:-1])
            elif "@" in part:
                lit, ctx = part.split("@", 1)
                residue.append((parse_literal(lit), _parse_context(ctx)))
            else:
                raise ParseError(f"malformed record part {part!r}")
        if context is None:
            raise ParseError(f"record without T(...) part: {chunk!r}")
        records.append(SuccessRecord(context, frozenset(residue)))
    return NormalForm(records)


# -- JSON --------------------------------------------------------------------

def _ctx_list(ctx) -> list[str]:
    return [str(l) for l in sorted_literals(ctx)]


def to_json_obj(query: Literal, nf: NormalForm) -> dict:
    if nf.is_false:
        result = "F"
    else:
        result = [{"context": _ctx_list(r.context),
                   "residue": [{"lit": str(lit), "context": _ctx_list(ctx)}
                               for lit, ctx in sorted(r.residue, key=lambda e: e[0].sort_key())]}
                  for r in nf.records]
    return {"query": str(query), "result": result}


def from_json_obj(obj: dict) -> tuple[Literal, NormalForm]:
    query = parse_literal(obj["query"])
    if obj["result"] == "F":
        return query, FALSE
    records = []
    for item in obj["result"]:
        context = frozenset(parse_literal(s) for s in item["context"])
        residue = frozenset((parse_literal(e["lit"]), frozenset(parse_literal(s) for s in e["context"]))
                            for e in item.get("residue", ()))
        records.append(SuccessRecord(context, residue))
    return query, NormalForm(records)


def dumps(results: Iterable[tuple[Literal, NormalForm]]) -> str:
    return json.dumps([to_json_obj(q, nf) for q, nf in results], indent=2)


def loads(text: str) -> list[tuple[Literal, NormalForm]]:
    return [from_json_obj(o) for o in json.loads(text)]
