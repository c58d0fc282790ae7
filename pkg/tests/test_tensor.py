"""Dense contraction semantics against independently constructed matrices."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zxdj.diagram import EdgeKind, SpiderKind, ZxDiagram, new_diagram
from zxdj.errors import ShapeMismatchError
from zxdj.phase import HALF_PI, PI, Phase, QUARTER_PI, ZERO
from zxdj.tensor import (
    HADAMARD,
    Tensor,
    collapse_floor,
    elimination_order,
    equivalent_up_to_scalar,
    evaluate,
    max_intermediate_rank,
    spider_tensor,
)

from test_diagram import diagrams, random_diagram


def test_hadamard_is_involutive():
    assert np.allclose(HADAMARD @ HADAMARD, np.eye(2), atol=1e-15)


def test_z_spider_tensor_definition():
    # oracle: 1 at index 0...0, phase factor at 1...1, zero elsewhere
    for rank in range(1, 4):
        t = spider_tensor(SpiderKind.Z, 1j, rank)
        flat = t.reshape(-1)
        assert flat[0] == 1
        assert flat[-1] == 1j
        assert np.count_nonzero(flat) == 2


def test_x_spider_tensor_definition():
    # oracle: entry at bits b is 1 + e^{i a} (-1)^popcount(b)
    for rank in range(1, 4):
        pf = np.exp(0.3j)
        t = spider_tensor(SpiderKind.X, pf, rank).reshape(-1)
        for i, entry in enumerate(t):
            assert entry == pytest.approx(1 + pf * (-1) ** bin(i).count("1"))


def test_two_leg_z_is_phase_matrix():
    d = new_diagram(1, 1)
    d.spiders[d.inputs[0]].phase = Phase(1, 3)
    m = evaluate(d).as_matrix(1)
    ok, _ = equivalent_up_to_scalar(
        Tensor(m), Tensor(np.diag([1, np.exp(1j * math.pi / 3)])))
    assert ok


def test_hadamard_edge_squares_to_identity():
    d = ZxDiagram()
    a = d.add_spider(SpiderKind.Z)
    mid = d.add_spider(SpiderKind.Z)
    b = d.add_spider(SpiderKind.Z)
    d.add_edge(a, mid, EdgeKind.HADAMARD)
    d.add_edge(mid, b, EdgeKind.HADAMARD)
    d.inputs, d.outputs = [a], [b]
    m = evaluate(d).as_matrix(1)
    ok, c = equivalent_up_to_scalar(Tensor(m), Tensor(np.eye(2, dtype=complex)))
    assert ok


def test_closed_chain_scalar():
    # Z(0)-H-Z(a0)-H-Z(a1) closed chain contracts to 1 + e^{i a1},
    # independent of a0
    for a0, a1 in [(ZERO, ZERO), (HALF_PI, PI), (QUARTER_PI, HALF_PI)]:
        d = ZxDiagram()
        v0 = d.add_spider(SpiderKind.Z, ZERO)
        v1 = d.add_spider(SpiderKind.Z, a0)
        v2 = d.add_spider(SpiderKind.Z, a1)
        d.add_edge(v0, v1, EdgeKind.HADAMARD)
        d.add_edge(v1, v2, EdgeKind.HADAMARD)
        s = evaluate(d).scalar()
        assert s == pytest.approx(1 + a1.phase_factor())


def test_cnot_diagram():
    d = ZxDiagram()
    zi = d.add_spider(SpiderKind.Z)
    zc = d.add_spider(SpiderKind.Z)
    zo = d.add_spider(SpiderKind.Z)
    xi = d.add_spider(SpiderKind.Z)
    xt = d.add_spider(SpiderKind.X)
    xo = d.add_spider(SpiderKind.Z)
    for a, b in [(zi, zc), (zc, zo), (xi, xt), (xt, xo), (zc, xt)]:
        d.add_edge(a, b)
    d.inputs, d.outputs = [zi, xi], [zo, xo]
    m = evaluate(d).as_matrix(2)
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
                    dtype=complex)
    ok, _ = equivalent_up_to_scalar(Tensor(m), Tensor(cnot))
    assert ok


def test_spider_color_duality():
    # an X spider equals the Z spider conjugated by Hadamard edges
    for rank in (1, 2, 3):
        for phase in (ZERO, PI, HALF_PI, QUARTER_PI):
            d1 = ZxDiagram()
            x = d1.add_spider(SpiderKind.X, phase)
            d1.outputs = [x] * rank
            d2 = ZxDiagram()
            z = d2.add_spider(SpiderKind.Z, phase)
            outs = []
            for _ in range(rank):
                cap = d2.add_spider(SpiderKind.Z, ZERO)
                d2.add_edge(z, cap, EdgeKind.HADAMARD)
                outs.append(cap)
            d2.outputs = outs
            ok, _ = equivalent_up_to_scalar(evaluate(d1), evaluate(d2))
            assert ok, (rank, phase)


def test_parallel_plain_edges_are_distinct_strands():
    # two plain strands between Z(0) and X(0) disconnect (Hopf law): the
    # composite is the rank-1 product of a Z-side |0>+|1> sum and an X-side
    # |0> column, i.e. [[2, 2], [0, 0]] as an (out, in) matrix
    d = ZxDiagram()
    a = d.add_spider(SpiderKind.Z)
    b = d.add_spider(SpiderKind.X)
    d.add_edge(a, b)
    d.add_edge(a, b)
    d.inputs, d.outputs = [a], [b]
    m = evaluate(d).as_matrix(1)
    assert np.allclose(m, [[2, 2], [0, 0]])


def test_scalar_guard():
    d = new_diagram(1, 1)
    with pytest.raises(ShapeMismatchError):
        evaluate(d).scalar()


def test_equivalence_edge_cases():
    z = Tensor(np.zeros((2, 2), dtype=complex))
    i = Tensor(np.eye(2, dtype=complex))
    assert equivalent_up_to_scalar(z, z) == (True, 1)
    ok, c = equivalent_up_to_scalar(z, i)
    assert not ok
    ok, c = equivalent_up_to_scalar(Tensor(2j * np.eye(2, dtype=complex)), i)
    assert ok and c == pytest.approx(2j)
    with pytest.raises(ShapeMismatchError):
        equivalent_up_to_scalar(z, Tensor(np.zeros((2,), dtype=complex)))


def _grid_diagram(rows, cols):
    d = ZxDiagram()
    ids = {}
    for r in range(rows):
        for c in range(cols):
            ids[r, c] = d.add_spider(SpiderKind.Z, ZERO)
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                d.add_edge(ids[r, c], ids[r, c + 1], EdgeKind.HADAMARD)
            if r + 1 < rows:
                d.add_edge(ids[r, c], ids[r + 1, c], EdgeKind.HADAMARD)
    return d


def test_elimination_order_keeps_grid_rank_small():
    d = _grid_diagram(4, 4)
    order = elimination_order(d)
    assert sorted(order) == sorted(d.spiders)
    assert max_intermediate_rank(d, order) <= 8


def test_elimination_order_deterministic():
    d = _grid_diagram(3, 5)
    assert elimination_order(d) == elimination_order(d)


@given(diagrams)
@settings(max_examples=50, deadline=None)
def test_contraction_order_independence(d):
    boundary = set(d.inputs) | set(d.outputs)
    default = evaluate(d)
    reverse_order = [v for v in sorted(d.spiders, reverse=True)
                     if v not in boundary]
    alt = evaluate(d, reverse_order)
    assert np.allclose(default.data, alt.data, atol=1e-12 * max(
        1.0, default.max_norm()))


def test_collapse_floor_scales_with_spider_norms():
    d = ZxDiagram()
    d.add_spider(SpiderKind.X, ZERO)  # degree-0: max |entry| = 2
    assert collapse_floor(d) == pytest.approx(2e-9)
    assert collapse_floor(new_diagram(0, 0)) == pytest.approx(1e-9)
