"""Random modular vertex labels and risky-edge classification.

Everything here is built around the constant beta = 2^(50/19), chosen so that
powers of beta are powers of two raised to rational exponents: comparisons
against beta^k reduce to big-integer comparisons and no predicate ever touches
a float.  The per-vertex modulus is lam(v) = 2^ceil_log_beta(d(v)).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..exact import BETA_POW, BETA_SHIFT, le_scaled_pow
from ..graph_core import Graph, canon_edge

# display-only approximation; every predicate goes through exact arithmetic
BETA = 2.0 ** (BETA_SHIFT / BETA_POW)

_CLB_CACHE = {}


def ceil_log_beta(d: int) -> int:
    """Least k >= 0 with d <= beta^k, i.e. with d^19 <= 2^(50k)."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    k = _CLB_CACHE.get(d)
    if k is None:
        p = d ** BETA_POW
        k = max(0, (p.bit_length() - 1) // BETA_SHIFT - 1)
        while p > (1 << (BETA_SHIFT * k)):
            k += 1
        _CLB_CACHE[d] = k
    return k


def lambda_of(d: int) -> int:
    return 1 << ceil_log_beta(d)


def ratio_gate(du: int, dv: int) -> bool:
    """(1/beta)*dv < du < beta*dv, decided exactly.

    Equality is impossible: beta^19 = 2^50 is not a ratio of 19-th powers.
    """
    if du < 1 or dv < 1:
        raise ValueError("degrees must be >= 1")
    pu, pv = du ** BETA_POW, dv ** BETA_POW
    return pu < (pv << BETA_SHIFT) and pv < (pu << BETA_SHIFT)


@dataclass
class LabelPair:
    """Per-vertex labels c1, c2, each uniform on [0, lam(v))."""

    c1: list
    c2: list

    def validate(self, g: Graph) -> None:
        for labels in (self.c1, self.c2):
            if len(labels) != g.n:
                raise ValueError("label array length differs from vertex count")
            for v, c in enumerate(labels):
                lam = lambda_of(g.degree(v)) if g.degree(v) >= 1 else 1
                if not (0 <= c < lam):
                    raise ValueError(f"label {c} at vertex {v} outside [0, {lam})")

    def to_json(self) -> dict:
        return {"c1": list(self.c1), "c2": list(self.c2)}

    @classmethod
    def from_json(cls, obj: dict) -> "LabelPair":
        return cls(c1=list(obj["c1"]), c2=list(obj["c2"]))


def sample_labels(g: Graph, seed) -> LabelPair:
    """Draw all c1 values in vertex order, then all c2 values.

    Isolated vertices get label 0 (their modulus is taken as 1).
    """
    rng = random.Random(seed)
    lams = [lambda_of(g.degree(v)) if g.degree(v) >= 1 else 1 for v in range(g.n)]
    c1 = [rng.randrange(lam) for lam in lams]
    c2 = [rng.randrange(lam) for lam in lams]
    return LabelPair(c1, c2)


def symmetric_mod_predicate(a: int, b: int, k: int) -> bool:
    """True iff a is congruent mod k to one of -b+1, ..., b-1."""
    if not 1 <= b <= k:
        raise ValueError(f"need 1 <= b <= k, got b={b}, k={k}")
    r = a % k
    return r < b or r > k - b


def _risky_core(rtype: int, du, dv, eu, ev, c1u, c1v, c2u, c2v) -> bool:
    """Congruence tests; the ratio gate has already passed."""
    emin = min(eu, ev)
    if rtype == 1:
        return ((c1u << eu) - (c1v << ev)) % (1 << (2 * emin)) == 0
    if rtype == 2:
        return ((c2u << eu) - (c2v << ev)) % (1 << (2 * emin)) == 0
    if rtype == 3:
        a = du - 3 * ((c1u + c2u) << eu) - dv + 3 * ((c1v + c2v) << ev)
        return symmetric_mod_predicate(a, 3 << emin, 3 << (2 * emin))
    raise ValueError(f"risky type must be 1, 2 or 3, got {rtype}")


def is_risky(g: Graph, labels: LabelPair, u: int, v: int, rtype: int) -> bool:
    if not g.has_edge(u, v):
        raise ValueError(f"{u}-{v} is not an edge")
    du, dv = g.degree(u), g.degree(v)
    if not ratio_gate(du, dv):
        return False
    eu, ev = ceil_log_beta(du), ceil_log_beta(dv)
    return _risky_core(rtype, du, dv, eu, ev,
                       labels.c1[u], labels.c1[v], labels.c2[u], labels.c2[v])


class RiskyClassification:
    """Edge sets r1, r2, r3 plus the per-vertex neighbour views.

    a_of(v), b_of(v), c_of(v) are the neighbours joined to v by a risky edge
    of type 1, 2, 3 respectively; f_of(v) = b_of(v) & c_of(v).
    """

    __slots__ = ("graph", "r1", "r2", "r3", "_a", "_b", "_c")

    def __init__(self, graph: Graph, r1, r2, r3):
        self.graph = graph
        self.r1 = frozenset(r1)
        self.r2 = frozenset(r2)
        self.r3 = frozenset(r3)
        self._a = self._views(self.r1)
        self._b = self._views(self.r2)
        self._c = self._views(self.r3)

    def _views(self, edge_set):
        out = {v: set() for v in range(self.graph.n)}
        for u, v in edge_set:
            out[u].add(v)
            out[v].add(u)
        return {v: frozenset(s) for v, s in out.items()}

    def a_of(self, v: int) -> frozenset:
        return self._a[v]

    def b_of(self, v: int) -> frozenset:
        return self._b[v]

    def c_of(self, v: int) -> frozenset:
        return self._c[v]

    def f_of(self, v: int) -> frozenset:
        return self._b[v] & self._c[v]


def classify(g: Graph, labels: LabelPair) -> RiskyClassification:
    labels.validate(g)
    deg = g.degrees()
    es = {v: ceil_log_beta(d) if d >= 1 else 0 for v, d in enumerate(deg)}
    r1, r2, r3 = set(), set(), set()
    for u, v in g.edges:
        if not ratio_gate(deg[u], deg[v]):
            continue
        args = (deg[u], deg[v], es[u], es[v],
                labels.c1[u], labels.c1[v], labels.c2[u], labels.c2[v])
        e = canon_edge(u, v)
        if _risky_core(1, *args):
            r1.add(e)
        if _risky_core(2, *args):
            r2.add(e)
        if _risky_core(3, *args):
            r3.add(e)
    return RiskyClassification(g, r1, r2, r3)


@dataclass
class BoundsReport:
    """Per-vertex verdicts for the neighbourhood-size bounds.

    The reference bounds are |A(v)|, |B(v)|, |C(v)| <= slack*8*d^0.62 and
    |F(v)| <= slack*12*d^0.24, decided by exact rational comparison.
    degree_one_flagged lists vertices of degree 1 touching a risky edge;
    such edges are risky by the literal definitions even though the regime
    the bounds were designed for never contains them.
    """

    slack: object
    a_ok: dict
    b_ok: dict
    c_ok: dict
    f_ok: dict
    degree_one_flagged: list

    @property
    def all_hold(self) -> bool:
        return all(
            all(d.values()) for d in (self.a_ok, self.b_ok, self.c_ok, self.f_ok)
        )

    def failing_vertices(self) -> list:
        bad = set()
        for d in (self.a_ok, self.b_ok, self.c_ok, self.f_ok):
            bad.update(v for v, ok in d.items() if not ok)
        return sorted(bad)


def _bound_coeff(slack, base: int):
    if slack == math.inf:
        return math.inf
    return Fraction(slack) * base


def bounds_hold(g: Graph, cls: RiskyClassification, slack) -> BoundsReport:
    if not (slack == math.inf or slack > 0):
        raise ValueError("slack must be positive")
    c8 = _bound_coeff(slack, 8)
    c12 = _bound_coeff(slack, 12)
    deg = g.degrees()
    a_ok, b_ok, c_ok, f_ok = {}, {}, {}, {}
    flagged = []
    for v in range(g.n):
        d = deg[v]
        a_ok[v] = le_scaled_pow(len(cls.a_of(v)), c8, d, 31, 50)
        b_ok[v] = le_scaled_pow(len(cls.b_of(v)), c8, d, 31, 50)
        c_ok[v] = le_scaled_pow(len(cls.c_of(v)), c8, d, 31, 50)
        f_ok[v] = le_scaled_pow(len(cls.f_of(v)), c12, d, 12, 50)
        if d == 1 and (cls.a_of(v) or cls.b_of(v) or cls.c_of(v)):
            flagged.append(v)
    return BoundsReport(slack, a_ok, b_ok, c_ok, f_ok, flagged)
