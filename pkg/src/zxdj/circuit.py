"""Gate-list circuit IR, dense unitary simulation, and ZX translation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .diagram import EdgeKind, SpiderKind, ZxDiagram
from .errors import ArityMismatchError, NotPromiseError, WidthTooLargeError
from .phase import Phase, PI, ZERO
from .tensor import Tensor

# ops: "phase" (1q, carries an angle), "cnot" (control, target),
#      "z", "y", "h" (1q)
_ONE_QUBIT_OPS = {"phase", "z", "y", "h"}


@dataclass(frozen=True)
class Gate:
    op: str
    qubits: tuple[int, ...]
    phase: Phase | None = None

    def __post_init__(self):
        if self.op in _ONE_QUBIT_OPS:
            if len(self.qubits) != 1:
                raise ArityMismatchError(f"{self.op} acts on one qubit")
        elif self.op == "cnot":
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ArityMismatchError("cnot needs two distinct qubits")
        else:
            raise ArityMismatchError(f"unknown op {self.op!r}")
        if (self.phase is not None) != (self.op == "phase"):
            raise ArityMismatchError("exactly the phase op carries an angle")


def phase_gate(qubit: int, angle: Phase) -> Gate:
    return Gate("phase", (qubit,), angle)


def cnot(control: int, target: int) -> Gate:
    return Gate("cnot", (control, target))


def pauli_z(qubit: int) -> Gate:
    return Gate("z", (qubit,))


def pauli_y(qubit: int) -> Gate:
    return Gate("y", (qubit,))


def hadamard(qubit: int) -> Gate:
    return Gate("h", (qubit,))


@dataclass
class Circuit:
    width: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            if any(q < 0 or q >= self.width for q in g.qubits):
                raise ArityMismatchError(
                    f"gate {g.op} out of range for width {self.width}")

    def to_json_dict(self) -> dict:
        gates = []
        for g in self.gates:
            rec = {"op": g.op, "qubits": list(g.qubits)}
            if g.phase is not None:
                rec["phase"] = str(g.phase)
            gates.append(rec)
        return {"width": self.width, "gates": gates}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Circuit":
        gates = [
            Gate(rec["op"], tuple(rec["qubits"]),
                 Phase.parse(rec["phase"]) if "phase" in rec else None)
            for rec in doc["gates"]
        ]
        return cls(int(doc["width"]), gates)

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_json_dict(json.loads(text))


_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_Z = np.diag([1, -1]).astype(complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def _gate_matrix(g: Gate) -> np.ndarray:
    if g.op == "phase":
        return np.diag([1, g.phase.phase_factor()]).astype(complex)
    return {"z": _Z, "y": _Y, "h": _H, "cnot": _CNOT}[g.op]


def unitary(c: Circuit) -> Tensor:
    """Dense unitary of the circuit; qubit 0 is the most significant bit.

    The result is a tensor over (output, input) axes, one binary axis per
    qubit on each side.
    """
    if c.width > 10:
        raise WidthTooLargeError(f"width {c.width} exceeds 10")
    w = c.width
    # row axes 0..w-1 are the output qubits; the flat column axis is last
    state = np.eye(2 ** w, dtype=complex).reshape((2,) * w + (2 ** w,))
    for g in c.gates:
        k = len(g.qubits)
        mat = _gate_matrix(g).reshape((2,) * (2 * k))
        state = np.tensordot(mat, state, axes=(range(k, 2 * k), g.qubits))
        state = np.moveaxis(state, range(k), g.qubits)
    return Tensor(state.reshape((2,) * (2 * w)))


def to_zx_tracked(c: Circuit):
    """Translate a circuit to a diagram, reporting parameter spider ids.

    Returns ``(diagram, carriers)`` where ``carriers`` lists the node ids of
    phase-carrying spiders (phase gates and Pauli Z/Y translations) in gate
    order.
    """
    d = ZxDiagram()
    last = [d.add_spider(SpiderKind.Z, ZERO) for _ in range(c.width)]
    d.inputs = list(last)
    pending = [EdgeKind.PLAIN] * c.width
    carriers: list[int] = []

    def extend(wire: int, kind: SpiderKind, phase: Phase) -> int:
        v = d.add_spider(kind, phase)
        d.add_edge(last[wire], v, pending[wire])
        pending[wire] = EdgeKind.PLAIN
        last[wire] = v
        return v

    for g in c.gates:
        if g.op == "phase":
            carriers.append(extend(g.qubits[0], SpiderKind.Z, g.phase))
        elif g.op == "z":
            carriers.append(extend(g.qubits[0], SpiderKind.Z, PI))
        elif g.op == "y":
            carriers.append(extend(g.qubits[0], SpiderKind.X, PI))
            carriers.append(extend(g.qubits[0], SpiderKind.Z, PI))
        elif g.op == "h":
            pending[g.qubits[0]] = pending[g.qubits[0]].toggled()
        elif g.op == "cnot":
            ctrl, tgt = g.qubits
            zc = extend(ctrl, SpiderKind.Z, ZERO)
            xt = extend(tgt, SpiderKind.X, ZERO)
            d.add_edge(zc, xt, EdgeKind.PLAIN)
    outs = []
    for wire in range(c.width):
        v = d.add_spider(SpiderKind.Z, ZERO)
        d.add_edge(last[wire], v, pending[wire])
        outs.append(v)
    d.outputs = outs
    return d, carriers


def to_zx(c: Circuit) -> ZxDiagram:
    """Translate a circuit to an equivalent diagram (up to scalar)."""
    return to_zx_tracked(c)[0]


def plus_amplitude(c: Circuit) -> complex:
    """<+...+|U|+...+> for the circuit's unitary U."""
    u = unitary(c).as_matrix(c.width)
    return complex(u.sum()) / 2 ** c.width


def dj_run_circuit(oracle: Circuit, tol: float = 1e-9):
    """Run the deterministic promise test: amplitude of |+...+> after the
    oracle decides constant (magnitude 1) versus balanced (magnitude 0)."""
    from .oracle import Verdict  # local import to avoid a cycle

    amplitude = plus_amplitude(oracle)
    if abs(abs(amplitude) - 1.0) <= tol:
        return Verdict.CONSTANT
    if abs(amplitude) <= tol:
        return Verdict.BALANCED
    raise NotPromiseError(
        f"|<+...+|U|+...+>| = {abs(amplitude):.6f} is neither 0 nor 1")
