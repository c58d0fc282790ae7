"""Ground-truth semantics: contract a diagram to a dense complex tensor.

Spiders are kept unnormalized (the Z spider of degree k is the k-index
tensor with 1 at 0...0 and e^{i*alpha} at 1...1; the X spider is the same
object in the unnormalized plus/minus basis).  A Hadamard edge carries the
matrix [[1,1],[1,-1]]/sqrt(2) so that two consecutive Hadamard edges are
the identity (to machine precision).  All cross-model comparisons go
through ``equivalent_up_to_scalar``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .diagram import EdgeKind, SpiderKind, ZxDiagram
from .errors import ShapeMismatchError

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


@dataclass
class Tensor:
    """Dense complex array over (outputs, inputs), one binary axis per leg."""

    data: np.ndarray

    @property
    def rank(self) -> int:
        return self.data.ndim

    def as_matrix(self, n_out: int) -> np.ndarray:
        n_in = self.rank - n_out
        return self.data.reshape(2 ** n_out, 2 ** n_in)

    def scalar(self) -> complex:
        if self.rank != 0:
            raise ShapeMismatchError(f"rank {self.rank} tensor is not a scalar")
        return complex(self.data)

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0


def spider_tensor(kind: SpiderKind, phase_factor: complex, rank: int) -> np.ndarray:
    """The bare spider tensor before Hadamard-edge dressing."""
    if kind is SpiderKind.Z:
        data = np.zeros((2,) * rank, dtype=complex) if rank else np.zeros((), complex)
        data.reshape(-1)[0] = 1
        data.reshape(-1)[-1] = phase_factor
        if rank == 0:
            # degree-0 spider: sum of the two basis weights
            data = np.array(1 + phase_factor)
        return data
    # X spider: entry at bits b is 1 + e^{i*alpha} * (-1)^popcount(b)
    flat = np.array(
        [1 + phase_factor * (-1) ** bin(i).count("1") for i in range(2 ** rank)],
        dtype=complex,
    )
    return flat.reshape((2,) * rank) if rank else np.array(flat[0])


def _greedy_order(d: ZxDiagram, score) -> list[int]:
    boundary = set(d.inputs) | set(d.outputs)
    adj: dict[int, set[int]] = {v: set() for v in d.spiders}
    for e in d.edges.values():
        adj[e.a].add(e.b)
        adj[e.b].add(e.a)
    remaining = set(v for v in d.spiders if v not in boundary)
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (*score(u, adj), u))
        order.append(v)
        remaining.discard(v)
        nbrs = adj.pop(v)
        for u in nbrs:
            adj[u].discard(v)
        for u in nbrs:
            for w in nbrs:
                if u != w:
                    adj[u].add(w)
    return order


def _simulated_max_rank(d: ZxDiagram, order: list[int]) -> int:
    """Largest factor rank a contraction with this order would materialize,
    tracked on edge-label sets alone (no tensors are built)."""
    labels: dict[int, set] = {v: set() for v in d.spiders}
    for eid, e in d.edges.items():
        labels[e.a].add(("e", eid, 0))
        labels[e.b].add(("e", eid, 1))
    for side, ids in (("in", d.inputs), ("out", d.outputs)):
        for i, b in enumerate(ids):
            labels[b].add((side, i))
    # strands of one edge share a label, so identify the two endpoints' copies
    def canon(lab):
        return lab[:2] if lab[0] == "e" else lab
    merged_into: dict[int, int] = {}

    def find(v: int) -> int:
        while v in merged_into:
            v = merged_into[v]
        return v

    best = max((len(ls) for ls in labels.values()), default=0)
    pool = {v: {canon(l) for l in ls} for v, ls in labels.items()}
    if not pool:
        return 0
    for v in order:
        for eid in d.edges_at(v):
            e = d.edges[eid]
            ka, kb = find(e.a), find(e.b)
            if ka == kb:
                continue
            la, lb = pool.pop(ka), pool.pop(kb)
            pool[ka] = la ^ lb
            merged_into[kb] = ka
            best = max(best, len(pool[ka]))
    keys = sorted(pool)
    acc = pool[keys[0]]
    for k in keys[1:]:
        acc = acc ^ pool[k]
        best = max(best, len(acc))
    return best


def elimination_order(d: ZxDiagram) -> list[int]:
    """Deterministic elimination ordering over the internal spiders.

    Tries min-degree greedy, min-fill greedy, and plain ascending-id order,
    simulates the factor ranks each would materialize, and returns the
    cheapest (first wins ties).
    """
    def degree(u, adj):
        return (len(adj[u]),)

    def fill(u, adj):
        nbrs = sorted(adj[u])
        missing = sum(1 for i, a in enumerate(nbrs)
                      for b in nbrs[i + 1:] if b not in adj[a])
        return (missing, len(nbrs))

    boundary = set(d.inputs) | set(d.outputs)
    ascending = [v for v in sorted(d.spiders) if v not in boundary]
    candidates = [_greedy_order(d, degree), _greedy_order(d, fill), ascending]
    return min(candidates, key=lambda o: _simulated_max_rank(d, o))


class _Factor:
    __slots__ = ("data", "labels")

    def __init__(self, data: np.ndarray, labels: list):
        self.data = data
        self.labels = labels


def _merge(f1: _Factor, f2: _Factor) -> _Factor:
    shared = [lab for lab in f1.labels if lab in f2.labels]
    ax1 = [f1.labels.index(lab) for lab in shared]
    ax2 = [f2.labels.index(lab) for lab in shared]
    data = np.tensordot(f1.data, f2.data, axes=(ax1, ax2))
    labels = [lab for lab in f1.labels if lab not in shared] + [
        lab for lab in f2.labels if lab not in shared
    ]
    return _Factor(data, labels)


def _build_factors(d: ZxDiagram) -> dict[int, _Factor]:
    factors: dict[int, _Factor] = {}
    for v in d.node_ids():
        s = d.spiders[v]
        labels: list = []
        for eid in d.edges_at(v):
            e = d.edges[eid]
            # a parallel edge contributes one leg per strand at each endpoint
            labels.append(("e", eid))
        for i, b in enumerate(d.inputs):
            if b == v:
                labels.append(("in", i))
        for i, b in enumerate(d.outputs):
            if b == v:
                labels.append(("out", i))
        data = spider_tensor(s.kind, s.phase.phase_factor(), len(labels))
        factors[v] = _Factor(data, labels)
    # fold each Hadamard edge's matrix into the lower-id endpoint
    for eid, e in sorted(d.edges.items()):
        if e.kind is EdgeKind.HADAMARD:
            v = min(e.a, e.b)
            f = factors[v]
            axis = f.labels.index(("e", eid))
            f.data = np.moveaxis(
                np.tensordot(f.data, HADAMARD, axes=([axis], [0])), -1, axis
            )
    return factors


def evaluate(d: ZxDiagram, order: list[int] | None = None) -> Tensor:
    """Contract the diagram; resulting axes are ordered outputs then inputs."""
    pool: dict[int, _Factor] = _build_factors(d)
    merged_into: dict[int, int] = {}

    def find(v: int) -> int:
        k = v
        while k in merged_into:
            k = merged_into[k]
        return k

    if order is None:
        order = elimination_order(d)
    for v in order:
        for eid in d.edges_at(v):
            e = d.edges[eid]
            ka, kb = find(e.a), find(e.b)
            if ka == kb:
                continue
            fa, fb = pool.pop(ka), pool.pop(kb)
            pool[ka] = _merge(fa, fb)
            merged_into[kb] = ka
    # merge whatever remains (boundary spiders, disconnected parts)
    keys = sorted(pool)
    if not keys:
        return Tensor(np.array(1 + 0j))
    result = pool[keys[0]]
    for k in keys[1:]:
        result = _merge(result, pool[k])
    perm = [result.labels.index(("out", i)) for i in range(len(d.outputs))] + [
        result.labels.index(("in", i)) for i in range(len(d.inputs))
    ]
    data = np.transpose(result.data, perm) if perm else result.data
    # note: ascontiguousarray would promote rank-0 results to rank 1
    return Tensor(np.array(data, dtype=complex, copy=True))


def max_intermediate_rank(d: ZxDiagram, order: list[int] | None = None) -> int:
    """Largest factor rank materialized while contracting with the given order."""
    factors = _build_factors(d)
    pool: dict[int, _Factor] = dict(factors)
    merged_into: dict[int, int] = {}

    def find(v: int) -> int:
        k = v
        while k in merged_into:
            k = merged_into[k]
        return k

    best = max((f.data.ndim for f in pool.values()), default=0)
    if order is None:
        order = elimination_order(d)
    for v in order:
        for eid in d.edges_at(v):
            e = d.edges[eid]
            ka, kb = find(e.a), find(e.b)
            if ka == kb:
                continue
            fa, fb = pool.pop(ka), pool.pop(kb)
            merged = _merge(fa, fb)
            pool[ka] = merged
            merged_into[kb] = ka
            best = max(best, merged.data.ndim)
    return best


def collapse_floor(d: ZxDiagram) -> float:
    """Absolute threshold below which a closed diagram's scalar counts as zero.

    Scaled by the product of per-spider max norms so the verdict is invariant
    under the diagram's unnormalized-spider convention.
    """
    product = 1.0
    for v in d.node_ids():
        s = d.spiders[v]
        rank = d.degree(v) + d.boundary_legs(v)
        base = spider_tensor(s.kind, s.phase.phase_factor(), rank)
        product *= max(float(np.max(np.abs(base))), 1.0)
    return 1e-9 * product


def equivalent_up_to_scalar(t1: Tensor, t2: Tensor, tol: float = 1e-9):
    """True iff t1 = c * t2 for some nonzero c, within tol; returns (bool, c)."""
    a, b = np.asarray(t1.data), np.asarray(t2.data)
    if a.shape != b.shape:
        raise ShapeMismatchError(f"{a.shape} vs {b.shape}")
    na, nb = t1.max_norm(), t2.max_norm()
    scale = max(na, nb)
    # absolute floor: entries below tol count as zero, so that an exact 0
    # and an accumulated-roundoff 1e-32 compare equal
    if scale <= tol:
        return True, complex(1)
    if na <= tol * scale or nb <= tol * scale:
        return False, complex(0)
    denom = np.vdot(b, b)
    c = complex(np.vdot(b, a) / denom)
    if c == 0:
        return False, complex(0)
    err = float(np.max(np.abs(a - c * b)))
    return err <= tol * scale, c
