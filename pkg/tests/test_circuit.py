"""Circuit IR: gate guards, dense unitaries, ZX translation, promise runs."""

import math
import random

import numpy as np
import pytest

from zxdj.circuit import (
    Circuit,
    Gate,
    cnot,
    dj_run_circuit,
    hadamard,
    pauli_y,
    pauli_z,
    phase_gate,
    plus_amplitude,
    to_zx,
    to_zx_tracked,
    unitary,
)
from zxdj.diagram import SpiderKind
from zxdj.errors import ArityMismatchError, NotPromiseError, WidthTooLargeError
from zxdj.oracle import Verdict
from zxdj.phase import HALF_PI, PI, Phase, QUARTER_PI, ZERO
from zxdj.tensor import Tensor, equivalent_up_to_scalar, evaluate

# -- independent matrix oracle ----------------------------------------------

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_Z = np.diag([1, -1]).astype(complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def _embed_1q(mat, qubit, width):
    """Kron the single-qubit matrix onto the given wire (qubit 0 = MSB)."""
    out = np.eye(1, dtype=complex)
    for q in range(width):
        out = np.kron(out, mat if q == qubit else np.eye(2, dtype=complex))
    return out


def _embed_cnot(control, target, width):
    dim = 2 ** width
    out = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        c = (col >> (width - 1 - control)) & 1
        row = col ^ (c << (width - 1 - target))
        out[row, col] = 1
    return out


def _reference_unitary(c: Circuit) -> np.ndarray:
    u = np.eye(2 ** c.width, dtype=complex)
    for g in c.gates:
        if g.op == "phase":
            m = _embed_1q(np.diag([1, g.phase.phase_factor()]), g.qubits[0],
                          c.width)
        elif g.op == "z":
            m = _embed_1q(_Z, g.qubits[0], c.width)
        elif g.op == "y":
            m = _embed_1q(_Y, g.qubits[0], c.width)
        elif g.op == "h":
            m = _embed_1q(_H, g.qubits[0], c.width)
        else:
            m = _embed_cnot(g.qubits[0], g.qubits[1], c.width)
        u = m @ u
    return u


def _random_circuit(rng, width, depth):
    gates = []
    for _ in range(depth):
        kind = rng.choice(["phase", "z", "y", "h", "cnot"]) if width > 1 \
            else rng.choice(["phase", "z", "y", "h"])
        if kind == "phase":
            gates.append(phase_gate(rng.randrange(width),
                                    Phase(rng.randrange(8), 4)))
        elif kind == "cnot":
            a, b = rng.sample(range(width), 2)
            gates.append(cnot(a, b))
        else:
            ctor = {"z": pauli_z, "y": pauli_y, "h": hadamard}[kind]
            gates.append(ctor(rng.randrange(width)))
    return Circuit(width, gates)


# -- gate and circuit guards -------------------------------------------------

def test_gate_guards():
    with pytest.raises(ArityMismatchError):
        Gate("h", (0, 1))
    with pytest.raises(ArityMismatchError):
        Gate("cnot", (0, 0))
    with pytest.raises(ArityMismatchError):
        Gate("cnot", (0,))
    with pytest.raises(ArityMismatchError):
        Gate("swap", (0, 1))
    with pytest.raises(ArityMismatchError):
        Gate("h", (0,), PI)  # angle only belongs on the phase op
    with pytest.raises(ArityMismatchError):
        Gate("phase", (0,))  # phase op requires an angle


def test_circuit_range_guard():
    with pytest.raises(ArityMismatchError):
        Circuit(1, [hadamard(1)])


def test_width_guard():
    with pytest.raises(WidthTooLargeError):
        unitary(Circuit(11, []))


# -- unitary semantics -------------------------------------------------------

def test_single_gate_matrices():
    cases = [
        (hadamard(0), _H),
        (pauli_z(0), _Z),
        (pauli_y(0), _Y),
        (phase_gate(0, QUARTER_PI), np.diag([1, np.exp(1j * math.pi / 4)])),
    ]
    for gate, expected in cases:
        u = unitary(Circuit(1, [gate])).as_matrix(1)
        assert np.allclose(u, expected), gate.op


def test_cnot_qubit_order():
    # qubit 0 is the most significant bit: cnot(0, 1) flips the low bit
    # exactly on inputs |10> and |11>
    u = unitary(Circuit(2, [cnot(0, 1)])).as_matrix(2)
    expected = np.array([[1, 0, 0, 0], [0, 1, 0, 0],
                         [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
    assert np.allclose(u, expected)
    # and cnot(1, 0) flips the high bit on inputs with low bit set
    u = unitary(Circuit(2, [cnot(1, 0)])).as_matrix(2)
    expected = np.array([[1, 0, 0, 0], [0, 0, 0, 1],
                         [0, 0, 1, 0], [0, 1, 0, 0]], dtype=complex)
    assert np.allclose(u, expected)


def test_unitary_matches_reference_composition():
    rng = random.Random(7)
    for _ in range(30):
        c = _random_circuit(rng, rng.randint(1, 3), rng.randint(0, 8))
        u = unitary(c).as_matrix(c.width)
        assert np.allclose(u, _reference_unitary(c), atol=1e-12)


def test_unitary_is_unitary():
    rng = random.Random(13)
    for _ in range(10):
        c = _random_circuit(rng, 3, 6)
        u = unitary(c).as_matrix(3)
        assert np.allclose(u @ u.conj().T, np.eye(8), atol=1e-12)


# -- serialization -----------------------------------------------------------

def test_json_round_trip():
    rng = random.Random(3)
    for _ in range(10):
        c = _random_circuit(rng, 3, 6)
        c2 = Circuit.from_json(c.to_json())
        assert c2 == c


# -- ZX translation ----------------------------------------------------------

def test_to_zx_matches_unitary():
    rng = random.Random(21)
    for _ in range(30):
        c = _random_circuit(rng, rng.randint(1, 3), rng.randint(0, 8))
        m = evaluate(to_zx(c)).as_matrix(c.width)
        ok, _ = equivalent_up_to_scalar(
            Tensor(m), Tensor(_reference_unitary(c)), tol=1e-9)
        assert ok


def test_to_zx_tracked_carriers():
    c = Circuit(2, [phase_gate(0, HALF_PI), pauli_z(1), pauli_y(0),
                    hadamard(1), cnot(0, 1)])
    d, carriers = to_zx_tracked(c)
    # phase -> 1 carrier, z -> 1, y -> 2 (X then Z); h and cnot -> none
    assert len(carriers) == 4
    assert d.spiders[carriers[0]].phase == HALF_PI
    assert d.spiders[carriers[1]].phase == PI
    assert d.spiders[carriers[2]].kind is SpiderKind.X
    assert d.spiders[carriers[3]].kind is SpiderKind.Z
    assert all(v in d.spiders for v in carriers)


# -- promise runs ------------------------------------------------------------

def test_plus_amplitude_identity():
    assert plus_amplitude(Circuit(2, [])) == pytest.approx(1)


def test_plus_amplitude_phase_flip():
    # Z on one wire sends |+> to |->: overlap with |+> is 0
    assert plus_amplitude(Circuit(1, [pauli_z(0)])) == pytest.approx(0)


def test_dj_run_circuit_verdicts():
    assert dj_run_circuit(Circuit(2, [])) is Verdict.CONSTANT
    assert dj_run_circuit(Circuit(2, [pauli_z(0)])) is Verdict.BALANCED


def test_dj_run_circuit_rejects_non_promise():
    # a Hadamard is not a phase oracle for any promise function
    with pytest.raises(NotPromiseError):
        dj_run_circuit(Circuit(1, [hadamard(0)]))
