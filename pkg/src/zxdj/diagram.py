"""Open multigraphs of Z/X spiders with plain or Hadamard edges.

A diagram is a plain value: spiders live in a dict keyed by stable NodeIds
(never reused within a diagram's lifetime), edges in a dict keyed by EdgeIds.
Boundaries are ordered lists of spider ids; a spider listed in ``inputs`` or
``outputs`` carries one dangling tensor leg per occurrence.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator

from .errors import ArityMismatchError, SelfLoopError, UnknownNodeError
from .phase import Phase, ZERO


class SpiderKind(Enum):
    Z = "Z"
    X = "X"

    def toggled(self) -> "SpiderKind":
        return SpiderKind.X if self is SpiderKind.Z else SpiderKind.Z


class EdgeKind(Enum):
    PLAIN = "plain"
    HADAMARD = "h"

    def toggled(self) -> "EdgeKind":
        return EdgeKind.HADAMARD if self is EdgeKind.PLAIN else EdgeKind.PLAIN


@dataclass
class Spider:
    kind: SpiderKind
    phase: Phase


@dataclass(frozen=True)
class Edge:
    a: int
    b: int
    kind: EdgeKind

    def other(self, v: int) -> int:
        return self.b if v == self.a else self.a


@dataclass
class ValidationReport:
    findings: list = field(default_factory=list)

    def ok(self) -> bool:
        return not self.findings


class ZxDiagram:
    def __init__(self) -> None:
        self.spiders: dict[int, Spider] = {}
        self.edges: dict[int, Edge] = {}
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self._next_node = 0
        self._next_edge = 0

    # -- construction -----------------------------------------------------

    def add_spider(self, kind: SpiderKind, phase: Phase = ZERO) -> int:
        nid = self._next_node
        self._next_node += 1
        self.spiders[nid] = Spider(kind, phase)
        return nid

    def add_edge(self, a: int, b: int, kind: EdgeKind = EdgeKind.PLAIN) -> int:
        if a == b:
            raise SelfLoopError(f"self-loop on node {a}")
        for v in (a, b):
            if v not in self.spiders:
                raise UnknownNodeError(f"unknown node {v}")
        eid = self._next_edge
        self._next_edge += 1
        self.edges[eid] = Edge(a, b, kind)
        return eid

    def remove_edge(self, eid: int) -> None:
        del self.edges[eid]

    def remove_spider(self, v: int) -> None:
        """Remove a spider together with its incident edges.

        The spider must not be referenced by the boundary lists.
        """
        if v in self.inputs or v in self.outputs:
            raise ValueError(f"cannot remove boundary spider {v}")
        for eid in [e for e, edge in self.edges.items() if v in (edge.a, edge.b)]:
            del self.edges[eid]
        del self.spiders[v]

    # -- queries ----------------------------------------------------------

    def edges_at(self, v: int) -> list[int]:
        return [eid for eid, e in sorted(self.edges.items()) if v in (e.a, e.b)]

    def degree(self, v: int) -> int:
        return len(self.edges_at(v))

    def neighbors(self, v: int) -> set[int]:
        return {self.edges[eid].other(v) for eid in self.edges_at(v)}

    def edges_between(self, a: int, b: int) -> list[int]:
        return [eid for eid, e in sorted(self.edges.items())
                if {e.a, e.b} == {a, b}]

    def boundary_legs(self, v: int) -> int:
        return self.inputs.count(v) + self.outputs.count(v)

    def is_closed(self) -> bool:
        return not self.inputs and not self.outputs

    def node_ids(self) -> Iterator[int]:
        return iter(sorted(self.spiders))

    # -- structural operations -------------------------------------------

    def copy(self) -> "ZxDiagram":
        d = ZxDiagram()
        d.spiders = {v: Spider(s.kind, s.phase) for v, s in self.spiders.items()}
        d.edges = dict(self.edges)
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d._next_node = self._next_node
        d._next_edge = self._next_edge
        return d

    def _absorb(self, other: "ZxDiagram") -> dict[int, int]:
        """Copy another diagram's spiders and edges in; returns the node id map."""
        node_map: dict[int, int] = {}
        for v in sorted(other.spiders):
            s = other.spiders[v]
            node_map[v] = self.add_spider(s.kind, s.phase)
        for eid in sorted(other.edges):
            e = other.edges[eid]
            self.add_edge(node_map[e.a], node_map[e.b], e.kind)
        return node_map

    def compose(self, other: "ZxDiagram") -> "ZxDiagram":
        """Sequential composition: self first, then ``other``."""
        if len(self.outputs) != len(other.inputs):
            raise ArityMismatchError(
                f"{len(self.outputs)} outputs vs {len(other.inputs)} inputs")
        result = self.copy()
        node_map = result._absorb(other)
        for out_v, in_v in zip(self.outputs, other.inputs):
            result.add_edge(out_v, node_map[in_v], EdgeKind.PLAIN)
        result.outputs = [node_map[v] for v in other.outputs]
        return result

    def tensor_product(self, other: "ZxDiagram") -> "ZxDiagram":
        result = self.copy()
        node_map = result._absorb(other)
        result.inputs = list(self.inputs) + [node_map[v] for v in other.inputs]
        result.outputs = list(self.outputs) + [node_map[v] for v in other.outputs]
        return result

    # -- validation -------------------------------------------------------

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        for eid, e in self.edges.items():
            if e.a == e.b:
                report.findings.append(("SelfLoop", eid))
            for v in (e.a, e.b):
                if v not in self.spiders:
                    report.findings.append(("UnknownNode", eid, v))
        for label, ids in (("input", self.inputs), ("output", self.outputs)):
            for v in ids:
                if v not in self.spiders:
                    report.findings.append(("UnknownBoundary", label, v))
        return report

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "spiders": [
                {"id": v, "kind": s.kind.value, "phase": str(s.phase)}
                for v, s in sorted(self.spiders.items())
            ],
            "edges": [
                {"a": e.a, "b": e.b, "kind": e.kind.value}
                for _, e in sorted(self.edges.items())
            ],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "ZxDiagram":
        d = cls()
        remap: dict[int, int] = {}
        for rec in doc["spiders"]:
            nid = d.add_spider(SpiderKind(rec["kind"]), Phase.parse(rec["phase"]))
            remap[rec["id"]] = nid
        for rec in doc["edges"]:
            d.add_edge(remap[rec["a"]], remap[rec["b"]], EdgeKind(rec["kind"]))
        d.inputs = [remap[v] for v in doc["inputs"]]
        d.outputs = [remap[v] for v in doc["outputs"]]
        return d

    @classmethod
    def from_json(cls, text: str) -> "ZxDiagram":
        return cls.from_json_dict(json.loads(text))

    def to_dot(self) -> str:
        """Z spiders as ellipses, X spiders as boxes, Hadamard edges dashed."""
        lines = ["graph zx {"]
        for v, s in sorted(self.spiders.items()):
            shape = "ellipse" if s.kind is SpiderKind.Z else "box"
            label = str(s.phase) if not s.phase.is_zero() else ""
            lines.append(f'  n{v} [shape={shape}, label="{label}"];')
        for _, e in sorted(self.edges.items()):
            style = " [style=dashed]" if e.kind is EdgeKind.HADAMARD else ""
            lines.append(f"  n{e.a} -- n{e.b}{style};")
        lines.append("}")
        return "\n".join(lines)


def new_diagram(n_in: int, n_out: int) -> ZxDiagram:
    """A bare diagram whose boundary wires are phase-0 Z spiders.

    ``new_diagram(1, 1)`` is an identity wire; ``new_diagram(0, 0)`` is the
    empty scalar diagram with value 1.
    """
    d = ZxDiagram()
    ins = [d.add_spider(SpiderKind.Z, ZERO) for _ in range(n_in)]
    outs = [d.add_spider(SpiderKind.Z, ZERO) for _ in range(n_out)]
    for a, b in zip(ins, outs):
        d.add_edge(a, b, EdgeKind.PLAIN)
    d.inputs = ins
    d.outputs = outs
    return d
