"""Core data model for functional object-oriented networks (FOON).

A FOON is a bipartite graph that alternates between object nodes and
motion nodes. Each state transition is captured by a functional unit:
the object nodes going into an action, the motion node for the action
itself, and the object nodes coming out of it. A graph is an ordered
collection of functional units; a kitchen is the set of object nodes
available before planning starts.

Labels are stored as written but compared case-insensitively after
trimming, so "Tomato" and "tomato " denote the same object type.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

__all__ = [
    "StateDescriptor",
    "ObjectNode",
    "MotionNode",
    "FunctionalUnit",
    "FOONGraph",
    "Kitchen",
    "NodeUse",
    "Violation",
    "normalize",
    "unit_equals",
    "object_index",
    "validate",
]


def normalize(label: str) -> str:
    """Comparison key for a label: trimmed and case-folded."""
    return label.strip().casefold()


@dataclass(frozen=True, eq=False)
class StateDescriptor:
    """One observed state of an object, optionally relative to another object.

    ``StateDescriptor("on", "cutting board")`` reads as "on [cutting board]".
    """

    name: str
    relation: str | None = None

    def key(self) -> tuple[str, str]:
        return (normalize(self.name), normalize(self.relation) if self.relation else "")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StateDescriptor):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        if self.relation:
            return f"{self.name} [{self.relation}]"
        return self.name


@dataclass(frozen=True, eq=False)
class ObjectNode:
    """An object type plus the states and ingredients that identify it.

    Identity is structural: two nodes are the same node exactly when their
    labels, state sets, and ingredient sets agree (case-insensitively).
    """

    label: str
    states: frozenset[StateDescriptor] = frozenset()
    ingredients: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "ingredients", frozenset(self.ingredients))

    def key(self):
        return (
            normalize(self.label),
            tuple(sorted(s.key() for s in self.states)),
            tuple(sorted(normalize(i) for i in self.ingredients)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ObjectNode):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        parts = [self.label]
        if self.states:
            parts.append("{" + ", ".join(str(s) for s in sorted(self.states, key=StateDescriptor.key)) + "}")
        if self.ingredients:
            parts.append("(" + ", ".join(sorted(self.ingredients, key=normalize)) + ")")
        return " ".join(parts)


@dataclass(frozen=True, eq=False)
class MotionNode:
    """An action type, e.g. "pour", "dice", "pick-and-place"."""

    label: str

    def key(self) -> str:
        return normalize(self.label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MotionNode):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True, eq=False)
class FunctionalUnit:
    """Input objects, one motion, output objects: a single state transition.

    Inputs and outputs keep file order for serialization, but compare as
    multisets: listing the same objects in a different order gives an
    equal unit.
    """

    inputs: tuple[ObjectNode, ...]
    motion: MotionNode
    outputs: tuple[ObjectNode, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    def key(self):
        return (
            tuple(sorted(n.key() for n in self.inputs)),
            self.motion.key(),
            tuple(sorted(n.key() for n in self.outputs)),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FunctionalUnit):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass(frozen=True, eq=False)
class FOONGraph:
    """An ordered collection of functional units (a subgraph or a merged FOON)."""

    units: tuple[FunctionalUnit, ...] = ()
    name: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "units", tuple(self.units))

    def nodes(self) -> list[ObjectNode]:
        """Distinct object nodes in first-appearance order."""
        seen: dict = {}
        for unit in self.units:
            for node in (*unit.inputs, *unit.outputs):
                seen.setdefault(node.key(), node)
        return list(seen.values())

    def __eq__(self, other: object) -> bool:
        # Structural equality over the unit sequence; the name is metadata.
        if not isinstance(other, FOONGraph):
            return NotImplemented
        return len(self.units) == len(other.units) and all(
            a == b for a, b in zip(self.units, other.units)
        )

    def __hash__(self) -> int:
        return hash(tuple(u.key() for u in self.units))

    def __len__(self) -> int:
        return len(self.units)


@dataclass(frozen=True, eq=False)
class Kitchen:
    """The set of object nodes available to the robot at planning time."""

    available: frozenset[ObjectNode] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "available", frozenset(self.available))

    @classmethod
    def of(cls, nodes: Iterable[ObjectNode]) -> "Kitchen":
        return cls(frozenset(nodes))

    def __contains__(self, node: ObjectNode) -> bool:
        return node in self.available

    def __iter__(self) -> Iterator[ObjectNode]:
        return iter(sorted(self.available, key=ObjectNode.key))

    def __len__(self) -> int:
        return len(self.available)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Kitchen):
            return NotImplemented
        return self.available == other.available

    def __hash__(self) -> int:
        return hash(self.available)


@dataclass(frozen=True)
class NodeUse:
    """Where one object node occurs in a graph, as unit indices."""

    producers: tuple[int, ...] = ()
    consumers: tuple[int, ...] = ()


@dataclass(frozen=True)
class Violation:
    """One broken model invariant; ``unit`` is None for graph-level rules."""

    unit: int | None
    rule: str
    message: str

    def __str__(self) -> str:
        if self.unit is None:
            return self.message
        return f"unit {self.unit}: {self.message}"


def unit_equals(a: FunctionalUnit, b: FunctionalUnit) -> bool:
    """True iff motions match and input/output multisets match under node identity."""
    return a.key() == b.key()


def object_index(graph: FOONGraph) -> dict[ObjectNode, NodeUse]:
    """Map each distinct object node to the units producing and consuming it.

    A unit appears at most once per node and side, even if the node is
    listed several times among that unit's inputs or outputs.
    """
    producers: dict[ObjectNode, list[int]] = {}
    consumers: dict[ObjectNode, list[int]] = {}
    for i, unit in enumerate(graph.units):
        for node in unit.inputs:
            uses = consumers.setdefault(node, [])
            if not uses or uses[-1] != i:
                uses.append(i)
        for node in unit.outputs:
            uses = producers.setdefault(node, [])
            if not uses or uses[-1] != i:
                uses.append(i)
    index: dict[ObjectNode, NodeUse] = {}
    for node in {**producers, **consumers}:
        index[node] = NodeUse(
            producers=tuple(producers.get(node, ())),
            consumers=tuple(consumers.get(node, ())),
        )
    return index


def _label_problem(text: str) -> str | None:
    if any(c in text for c in "\t\n\r"):
        return "contains tab or newline"
    if not text.strip():
        return "is empty"
    if text != text.strip():
        return "has surrounding whitespace"
    return None


def _check_node(node: ObjectNode, unit: int, out: list[Violation]) -> None:
    problem = _label_problem(node.label)
    if problem:
        out.append(Violation(unit, "object-label", f"object label {problem}"))
    for state in node.states:
        problem = _label_problem(state.name)
        if problem:
            out.append(Violation(unit, "state-name", f"state name {problem} on {node.label!r}"))
        if state.relation is not None:
            problem = _label_problem(state.relation)
            if problem:
                out.append(Violation(unit, "state-relation", f"state relation {problem} on {node.label!r}"))
    seen_ingredients: set[str] = set()
    for ingredient in node.ingredients:
        problem = _label_problem(ingredient)
        if problem:
            out.append(Violation(unit, "ingredient", f"ingredient label {problem} on {node.label!r}"))
        ing_key = normalize(ingredient)
        if ing_key in seen_ingredients:
            out.append(Violation(unit, "duplicate-ingredient", f"duplicate ingredient {ingredient!r} on {node.label!r}"))
        seen_ingredients.add(ing_key)


def validate(graph: FOONGraph) -> list[Violation]:
    """Check every model invariant; an empty list means the graph is well formed.

    Violations are data, not exceptions: callers that require a valid graph
    (serialization, merging) raise on a non-empty result.
    """
    violations: list[Violation] = []
    seen_units: dict = {}
    for i, unit in enumerate(graph.units):
        if not unit.inputs:
            violations.append(Violation(i, "no-inputs", "no inputs"))
        if not unit.outputs:
            violations.append(Violation(i, "no-outputs", "no outputs"))
        problem = _label_problem(unit.motion.label)
        if problem:
            violations.append(Violation(i, "motion-label", f"motion label {problem}"))
        for node in (*unit.inputs, *unit.outputs):
            _check_node(node, i, violations)
        first = seen_units.setdefault(unit.key(), i)
        if first != i:
            violations.append(Violation(i, "duplicate-unit", f"duplicate unit (same as unit {first})"))
    return violations
