"""Reading and writing the FOON subgraph text format, plus JSON/DOT export.

The format is line-based and tab-separated. A functional unit is a block
of lines terminated by ``//``:

    O<TAB>label            object node (inputs before the M line, outputs after)
    S<TAB>name[<TAB>[relation]]   state attached to the nearest preceding O
    I<TAB>label            ingredient attached to the nearest preceding O
    M<TAB>label            the unit's motion; separates inputs from outputs
    //                     end of unit

Lines whose first non-blank character is ``#`` are comments; blank lines
are ignored. Object sets (kitchens, goals) reuse the O/S/I lines without
any M line; every O starts a new node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum

from .errors import FoonError
from .model import (
    FOONGraph,
    FunctionalUnit,
    MotionNode,
    ObjectNode,
    StateDescriptor,
    Violation,
    normalize,
    validate,
)

__all__ = [
    "DiagnosticKind",
    "ParseDiagnostic",
    "ParseError",
    "InvalidGraph",
    "parse_subgraph",
    "serialize_subgraph",
    "parse_object_set",
    "serialize_object_set",
    "export_json",
    "export_dot",
]


class DiagnosticKind(Enum):
    BAD_PREFIX = "BadPrefix"
    MISSING_MOTION = "MissingMotion"
    EMPTY_UNIT = "EmptyUnit"
    ORPHAN_STATE = "OrphanState"
    ORPHAN_INGREDIENT = "OrphanIngredient"
    DUPLICATE_DELIMITER = "DuplicateDelimiter"


@dataclass(frozen=True)
class ParseDiagnostic:
    """Why parsing stopped, pointing at a 1-based source line."""

    line: int
    kind: DiagnosticKind
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.kind.value}: {self.message}"


class ParseError(FoonError):
    """Raised with the first diagnostic encountered while parsing."""

    def __init__(self, diagnostic: ParseDiagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class InvalidGraph(FoonError):
    """Raised when an operation requires a graph that passes validation."""

    def __init__(self, violations: list[Violation], context: str = "graph"):
        lines = "; ".join(str(v) for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"{context} is invalid: {lines}{more}")
        self.violations = violations


class _PendingObject:
    __slots__ = ("label", "states", "ingredients")

    def __init__(self, label: str):
        self.label = label
        self.states: list[StateDescriptor] = []
        self.ingredients: list[str] = []

    def freeze(self) -> ObjectNode:
        return ObjectNode(self.label, frozenset(self.states), frozenset(self.ingredients))


def _strip_relation(text: str) -> str:
    text = text.strip()
    if text.startswith("[") and text.endswith("]") and len(text) >= 2:
        return text[1:-1].strip()
    return text


class _BlockParser:
    """Shared line loop for unit blocks and plain object sets."""

    def __init__(self, allow_motion: bool):
        self.allow_motion = allow_motion
        self.reset()

    def reset(self) -> None:
        self.inputs: list[_PendingObject] = []
        self.outputs: list[_PendingObject] = []
        self.motion: str | None = None
        self.current: _PendingObject | None = None
        self.has_content = False

    def feed(self, lineno: int, fields: list[str]) -> ParseDiagnostic | None:
        prefix = fields[0].strip()
        rest = [f.strip() for f in fields[1:]]
        if prefix == "O":
            obj = _PendingObject(rest[0] if rest else "")
            (self.outputs if self.motion is not None else self.inputs).append(obj)
            self.current = obj
            self.has_content = True
            return None
        if prefix == "S":
            if self.current is None:
                return ParseDiagnostic(lineno, DiagnosticKind.ORPHAN_STATE, "state line with no preceding object")
            name = rest[0] if rest else ""
            relation = _strip_relation(rest[1]) if len(rest) > 1 and rest[1] else None
            self.current.states.append(StateDescriptor(name, relation or None))
            self.has_content = True
            return None
        if prefix == "I":
            if self.current is None:
                return ParseDiagnostic(lineno, DiagnosticKind.ORPHAN_INGREDIENT, "ingredient line with no preceding object")
            self.current.ingredients.append(rest[0] if rest else "")
            self.has_content = True
            return None
        if prefix == "M":
            if not self.allow_motion:
                return ParseDiagnostic(lineno, DiagnosticKind.BAD_PREFIX, "motion line not allowed in an object set")
            if self.motion is not None:
                return ParseDiagnostic(lineno, DiagnosticKind.DUPLICATE_DELIMITER, "second motion line in one unit")
            self.motion = rest[0] if rest else ""
            self.has_content = True
            return None
        return ParseDiagnostic(lineno, DiagnosticKind.BAD_PREFIX, f"unknown line prefix {prefix!r}")

    def finish_unit(self, lineno: int) -> FunctionalUnit | ParseDiagnostic:
        if not self.has_content:
            return ParseDiagnostic(lineno, DiagnosticKind.EMPTY_UNIT, "unit delimiter with no unit content")
        if self.motion is None:
            return ParseDiagnostic(lineno, DiagnosticKind.MISSING_MOTION, "unit block without a motion line")
        unit = FunctionalUnit(
            inputs=tuple(o.freeze() for o in self.inputs),
            motion=MotionNode(self.motion),
            outputs=tuple(o.freeze() for o in self.outputs),
        )
        self.reset()
        return unit


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def parse_subgraph(text: str, name: str | None = None) -> FOONGraph:
    """Parse subgraph text into a FOONGraph, raising ParseError on bad syntax.

    Structural problems that are not syntax errors (a unit without outputs,
    say) parse fine and are reported by ``model.validate`` instead.
    """
    parser = _BlockParser(allow_motion=True)
    units: list[FunctionalUnit] = []
    last_lineno = 0
    for lineno, line in _lines(text):
        last_lineno = lineno
        if line.strip() == "//":
            result = parser.finish_unit(lineno)
            if isinstance(result, ParseDiagnostic):
                raise ParseError(result)
            units.append(result)
            continue
        diagnostic = parser.feed(lineno, line.split("\t"))
        if diagnostic is not None:
            raise ParseError(diagnostic)
    if parser.has_content:
        # Implicit delimiter at end of input.
        result = parser.finish_unit(last_lineno)
        if isinstance(result, ParseDiagnostic):
            raise ParseError(result)
        units.append(result)
    return FOONGraph(units=tuple(units), name=name)


def _sorted_states(node: ObjectNode) -> list[StateDescriptor]:
    return sorted(node.states, key=lambda s: (*s.key(), s.name, s.relation or ""))


def _sorted_ingredients(node: ObjectNode) -> list[str]:
    return sorted(node.ingredients, key=lambda i: (normalize(i), i))


def _object_lines(node: ObjectNode, out: list[str]) -> None:
    out.append(f"O\t{node.label}")
    for state in _sorted_states(node):
        if state.relation:
            out.append(f"S\t{state.name}\t[{state.relation}]")
        else:
            out.append(f"S\t{state.name}")
    for ingredient in _sorted_ingredients(node):
        out.append(f"I\t{ingredient}")


def serialize_subgraph(graph: FOONGraph) -> str:
    """Canonical text for a valid graph; inverse of parse_subgraph.

    States and ingredients are emitted sorted, so serializing twice (with a
    reparse in between) is byte-identical.
    """
    violations = validate(graph)
    if violations:
        raise InvalidGraph(violations)
    lines: list[str] = []
    for unit in graph.units:
        for node in unit.inputs:
            _object_lines(node, lines)
        lines.append(f"M\t{unit.motion.label}")
        for node in unit.outputs:
            _object_lines(node, lines)
        lines.append("//")
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def parse_object_set(text: str) -> list[ObjectNode]:
    """Parse an object-set file (kitchen or goal): O/S/I lines, no motions."""
    parser = _BlockParser(allow_motion=False)
    for lineno, line in _lines(text):
        if line.strip() == "//":
            # Optional separators are accepted between objects.
            continue
        diagnostic = parser.feed(lineno, line.split("\t"))
        if diagnostic is not None:
            raise ParseError(diagnostic)
    return [o.freeze() for o in parser.inputs]


def serialize_object_set(nodes) -> str:
    """Canonical text for a set of object nodes, sorted for determinism."""
    lines: list[str] = []
    for node in sorted(set(nodes), key=ObjectNode.key):
        _object_lines(node, lines)
    if not lines:
        return ""
    return "\n".join(lines) + "\n"


def _node_payload(node: ObjectNode) -> dict:
    return {
        "label": node.label,
        "states": [
            {"name": s.name, "relation": s.relation} for s in _sorted_states(node)
        ],
        "ingredients": _sorted_ingredients(node),
    }


def export_json(graph: FOONGraph) -> str:
    """Render a valid graph as compact JSON."""
    violations = validate(graph)
    if violations:
        raise InvalidGraph(violations)
    payload = {
        "name": graph.name,
        "units": [
            {
                "inputs": [_node_payload(n) for n in unit.inputs],
                "motion": unit.motion.label,
                "outputs": [_node_payload(n) for n in unit.outputs],
            }
            for unit in graph.units
        ],
    }
    return json.dumps(payload, separators=(",", ":"))


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def export_dot(graph: FOONGraph) -> str:
    """Render a valid graph in DOT: circles for objects, squares for motions.

    Object fill colors follow the usual FOON legend: green for input-only
    nodes, purple for output-only nodes, blue for nodes playing both roles.
    """
    violations = validate(graph)
    if violations:
        raise InvalidGraph(violations)
    node_ids: dict = {}
    node_for_id: dict[str, ObjectNode] = {}
    roles: dict[str, set[str]] = {}

    def object_id(node: ObjectNode, role: str) -> str:
        node_id = node_ids.setdefault(node.key(), f"o{len(node_ids)}")
        node_for_id[node_id] = node
        roles.setdefault(node_id, set()).add(role)
        return node_id

    edges: list[str] = []
    motion_decls: list[str] = []
    for i, unit in enumerate(graph.units):
        motion_id = f"m{i}"
        motion_decls.append(
            f'  {motion_id} [shape=square, style=filled, fillcolor=lightgray, '
            f'label="{_dot_escape(unit.motion.label)}"];'
        )
        for node in unit.inputs:
            edges.append(f"  {object_id(node, 'input')} -> {motion_id};")
        for node in unit.outputs:
            edges.append(f"  {motion_id} -> {object_id(node, 'output')};")

    color_by_role = {
        frozenset({"input"}): ("green", "input"),
        frozenset({"output"}): ("purple", "output"),
        frozenset({"input", "output"}): ("blue", "both"),
    }
    object_decls: list[str] = []
    for node_id, node in node_for_id.items():
        color, css = color_by_role[frozenset(roles[node_id])]
        label_parts = [node.label]
        label_parts.extend(str(s) for s in _sorted_states(node))
        label_parts.extend(f"<{i}>" for i in _sorted_ingredients(node))
        label = "\\n".join(_dot_escape(part) for part in label_parts)
        object_decls.append(
            f'  {node_id} [shape=circle, style=filled, fillcolor={color}, '
            f'class="{css}", label="{label}"];'
        )

    title = _dot_escape(graph.name) if graph.name else "foon"
    lines = [f'digraph "{title}" {{', "  rankdir=LR;"]
    lines.extend(object_decls)
    lines.extend(motion_decls)
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"
