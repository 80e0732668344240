"""Bad events over risky neighbourhoods, their dependency digraph, a
Moser-Tardos resampler, exact risk-probability enumeration, and the
numeric audit of every closed-form constant the machinery relies on.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from ..exact import floor_beta_mult, floor_scaled_pow, iroot, BETA_POW, BETA_SHIFT
from ..graph_core import Graph
from ..labeling import (
    LabelPair,
    RiskyClassification,
    ceil_log_beta,
    classify,
    lambda_of,
    ratio_gate,
    symmetric_mod_predicate,
)

KINDS = ("A", "B", "C", "F")
_KIND_RANK = {k: i for i, k in enumerate(KINDS)}


@dataclass(frozen=True)
class BadEvent:
    """One oversized-neighbourhood event at a vertex.

    kind A watches |a_of(v)|, B |b_of(v)|, C |c_of(v)|, F |f_of(v)|.
    scope is the exact set of label slots the event reads: (w, 1) for c1
    and (w, 2) for c2, over v and its gate-passing neighbours.
    """

    vertex: int
    kind: str
    scope: frozenset

    def sort_key(self):
        return (self.vertex, _KIND_RANK[self.kind])


def gated_neighbours(g: Graph, v: int) -> list:
    dv = g.degree(v)
    return [u for u in sorted(g.neighbours(v)) if ratio_gate(g.degree(u), dv)]


def event_scope(g: Graph, v: int, kind: str) -> frozenset:
    verts = [v] + gated_neighbours(g, v)
    if kind == "A":
        slots = (1,)
    elif kind == "B":
        slots = (2,)
    elif kind in ("C", "F"):
        slots = (1, 2)
    else:
        raise ValueError(f"unknown event kind {kind!r}")
    return frozenset((w, s) for w in verts for s in slots)


def make_event(g: Graph, v: int, kind: str) -> BadEvent:
    return BadEvent(v, kind, event_scope(g, v, kind))


def _thresholds(slack, d: int):
    """Largest allowed |a|/|b|/|c| and |f| at a vertex of degree d.

    None means unbounded (the infinity sentinel turns the check off).
    """
    if slack == math.inf:
        return None, None
    s = Fraction(slack)
    return (
        floor_scaled_pow(8 * s, d, 31, 50),
        floor_scaled_pow(12 * s, d, 12, 50),
    )


def violated_events(g: Graph, labels: LabelPair, slack,
                    cls: RiskyClassification | None = None) -> list:
    """Events whose size bound (scaled by slack) fails, in (vertex, kind) order."""
    if cls is None:
        cls = classify(g, labels)
    out = []
    cache = {}
    for v in range(g.n):
        d = g.degree(v)
        if d not in cache:
            cache[d] = _thresholds(slack, d)
        t_abc, t_f = cache[d]
        if t_abc is None:
            continue
        if len(cls.a_of(v)) > t_abc:
            out.append(make_event(g, v, "A"))
        if len(cls.b_of(v)) > t_abc:
            out.append(make_event(g, v, "B"))
        if len(cls.c_of(v)) > t_abc:
            out.append(make_event(g, v, "C"))
        if len(cls.f_of(v)) > t_f:
            out.append(make_event(g, v, "F"))
    return out


@dataclass
class Timeout:
    """Resampling gave up; carries the rounds spent and the picked events."""

    rounds: int
    trajectory: list


def moser_tardos(g: Graph, seed, slack, max_rounds: int, observer=None):
    """Resample until no event is violated, or Timeout after max_rounds.

    One PRNG stream drives everything: the initial labels are drawn exactly
    as sample_labels draws them, then each round resamples the scope slots
    of the lexicographically least violated event, in sorted slot order.
    observer, when given, is called as observer(round_no, event, before,
    after) with label snapshots around each resampling.
    """
    if not (slack == math.inf or slack > 0):
        raise ValueError("slack must be positive")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")
    rng = random.Random(seed)
    lams = [lambda_of(g.degree(v)) if g.degree(v) >= 1 else 1 for v in range(g.n)]
    c1 = [rng.randrange(lam) for lam in lams]
    c2 = [rng.randrange(lam) for lam in lams]
    labels = LabelPair(c1, c2)
    trajectory = []
    for round_no in range(max_rounds):
        bad = violated_events(g, labels, slack)
        if not bad:
            return labels
        ev = min(bad, key=BadEvent.sort_key)
        trajectory.append((ev.vertex, ev.kind))
        before = LabelPair(list(c1), list(c2)) if observer else None
        for w, slot in sorted(ev.scope):
            value = rng.randrange(lams[w])
            (c1 if slot == 1 else c2)[w] = value
        if observer:
            observer(round_no, ev, before, LabelPair(list(c1), list(c2)))
    return Timeout(rounds=max_rounds, trajectory=trajectory)


@dataclass
class DependencyDigraph:
    events: list
    arcs: dict

    def out_degree(self, key) -> int:
        return len(self.arcs[key])


def build_dependency_digraph(g: Graph) -> DependencyDigraph:
    """Arcs from each event to every other event whose vertex is the same
    vertex, a gate-passing neighbour, or a gate-passing neighbour thereof.

    Checks the out-degree bound 3 + 4*d*floor(beta*d) and, for arcs leaving
    a vertex of positive degree, that targets stay inside the squared-ratio
    window (1/beta^2)*d < d(w) < beta^2*d.
    """
    events = [make_event(g, v, k) for v in range(g.n) for k in KINDS]
    reach = {}
    for v in range(g.n):
        around = {v}
        for u in gated_neighbours(g, v):
            around.add(u)
            around.update(gated_neighbours(g, u))
        reach[v] = sorted(around)
    arcs = {}
    for ev in events:
        targets = tuple(
            (w, k)
            for w in reach[ev.vertex]
            for k in KINDS
            if (w, k) != (ev.vertex, ev.kind)
        )
        arcs[(ev.vertex, ev.kind)] = targets
        d = g.degree(ev.vertex)
        bound = 3 + 4 * d * floor_beta_mult(d)
        assert len(targets) <= bound, (ev, len(targets), bound)
        if d >= 1:
            pd = d ** BETA_POW
            for w, _ in targets:
                if w == ev.vertex:
                    continue
                pw = g.degree(w) ** BETA_POW
                assert pw < (pd << (2 * BETA_SHIFT)) and pd < (pw << (2 * BETA_SHIFT)), (
                    ev.vertex, w, d, g.degree(w),
                )
    return DependencyDigraph(events, arcs)


def lll_weight(d: int) -> Fraction:
    """Per-event weight used in the audit's feasibility chain."""
    return Fraction(1, 1 + d ** 3)


# ---------------------------------------------------------------------------
# exact probabilities for a single gated edge

_SLOT_NAMES = ("c1_u", "c2_u", "c1_v", "c2_v")


def _type3_offset(du, dv, eu, ev, c1u, c1v, c2u, c2v) -> int:
    return du - 3 * ((c1u + c2u) << eu) - dv + 3 * ((c1v + c2v) << ev)


def _holds(rtype, du, dv, eu, ev, c1u, c1v, c2u, c2v) -> bool:
    emin = min(eu, ev)
    if rtype == 1:
        return ((c1u << eu) - (c1v << ev)) % (1 << (2 * emin)) == 0
    if rtype == 2:
        return ((c2u << eu) - (c2v << ev)) % (1 << (2 * emin)) == 0
    if rtype == 3:
        a = _type3_offset(du, dv, eu, ev, c1u, c1v, c2u, c2v)
        return symmetric_mod_predicate(a, 3 << emin, 3 << (2 * emin))
    if rtype == "23":
        return _holds(2, du, dv, eu, ev, c1u, c1v, c2u, c2v) and _holds(
            3, du, dv, eu, ev, c1u, c1v, c2u, c2v
        )
    raise ValueError(f"risk type must be 1, 2, 3 or '23', got {rtype!r}")


def exact_edge_risk_probability(du: int, dv: int, rtype, conditioned=None) -> Fraction:
    """Probability that an edge with endpoint degrees (du, dv) is risky of
    the given type, by enumeration over the unconditioned label slots.

    conditioned maps slot names from {"c1_u","c2_u","c1_v","c2_v"} to fixed
    values; remaining slots are uniform on their label ranges.
    """
    if not ratio_gate(du, dv):
        raise ValueError(f"degree pair ({du}, {dv}) fails the ratio gate")
    eu, ev = ceil_log_beta(du), ceil_log_beta(dv)
    lam = {"c1_u": 1 << eu, "c2_u": 1 << eu, "c1_v": 1 << ev, "c2_v": 1 << ev}
    conditioned = dict(conditioned or {})
    for name, value in conditioned.items():
        if name not in lam:
            raise ValueError(f"unknown slot {name!r}")
        if not 0 <= value < lam[name]:
            raise ValueError(f"{name}={value} outside [0, {lam[name]})")
    free = [n for n in _SLOT_NAMES if n not in conditioned]
    total = 1
    for n in free:
        total *= lam[n]
    count = 0

    def rec(i, assign):
        nonlocal count
        if i == len(free):
            count += _holds(rtype, du, dv, eu, ev,
                            assign["c1_u"], assign["c1_v"], assign["c2_u"], assign["c2_v"])
            return
        name = free[i]
        for value in range(lam[name]):
            assign[name] = value
            rec(i + 1, assign)

    rec(0, dict(conditioned))
    return Fraction(count, total)


# worst-case conditional probabilities; results depend on the degrees only
# through (e(u), e(v)) and, for type 3, the degree difference mod the modulus
_WORST_CACHE = {}


def _window_count_table(eu, ev, emin):
    """cnt[r] = number of c1(u) values with (r - 3*2^eu*c1u) mod k inside
    the symmetric window; shared by the type-3 and joint enumerations."""
    k = 3 << (2 * emin)
    b = 3 << emin
    lu = 1 << eu
    step = (3 << eu) % k
    cnt = [0] * k
    for r in range(k):
        x = r
        c = 0
        for _ in range(lu):
            rr = x % k
            if rr < b or rr > k - b:
                c += 1
            x -= step
        cnt[r] = c
    return cnt


def worst_conditional_risk(du: int, dv: int, which: str) -> Fraction:
    """Max over conditioned labels of the conditional risk probability.

    which selects the conditioning scheme:
      "type1_given_c1v"     max over c1(v) of P(type 1 | c1(v)), free c1(u)
      "type2_given_c2v"     same with c2
      "type3_given_rest"    max over (c1v, c2v, c2u), free c1(u)
      "both23_given_c1v_c2v" max over (c1v, c2v), free (c1u, c2u)
    """
    if not ratio_gate(du, dv):
        raise ValueError(f"degree pair ({du}, {dv}) fails the ratio gate")
    eu, ev = ceil_log_beta(du), ceil_log_beta(dv)
    emin = min(eu, ev)
    k = 3 << (2 * emin)
    if which in ("type1_given_c1v", "type2_given_c2v"):
        key = (which, eu, ev)
    elif which in ("type3_given_rest", "both23_given_c1v_c2v"):
        key = (which, eu, ev, (du - dv) % k)
    else:
        raise ValueError(f"unknown scheme {which!r}")
    hit = _WORST_CACHE.get(key)
    if hit is not None:
        return hit

    lu, lv = 1 << eu, 1 << ev
    if which in ("type1_given_c1v", "type2_given_c2v"):
        mod = 1 << (2 * emin)
        best = 0
        for cv in range(lv):
            c = sum(1 for cu in range(lu) if ((cu << eu) - (cv << ev)) % mod == 0)
            best = max(best, c)
        worst = Fraction(best, lu)
    else:
        delta = (du - dv) % k
        cnt = _window_count_table(eu, ev, emin)
        if which == "type3_given_rest":
            best = 0
            for s in range(2 * lv - 1):  # s = c1v + c2v
                for c2u in range(lu):
                    r = (delta + 3 * (s << ev) - 3 * (c2u << eu)) % k
                    best = max(best, cnt[r])
            worst = Fraction(best, lu)
        else:
            mod2 = 1 << (2 * emin)
            best = 0
            for c1v in range(lv):
                for c2v in range(lv):
                    tot = 0
                    for c2u in range(lu):
                        if ((c2u << eu) - (c2v << ev)) % mod2 != 0:
                            continue
                        r = (delta + 3 * ((c1v + c2v) << ev) - 3 * (c2u << eu)) % k
                        tot += cnt[r]
                    best = max(best, tot)
            worst = Fraction(best, lu * lu)
    _WORST_CACHE[key] = worst
    return worst


def risk_bound_holds(du: int, dv: int, which: str) -> bool:
    """Exact check of the conditional bound for one degree pair.

    Bounds: 2/dv^0.38 for the single-label schemes, 4/dv^0.38 for type 3,
    8/dv^0.76 for the joint scheme.  Probability p <= c/dv^(num/50) is
    decided as p^50 * dv^num <= c^50 in integers.
    """
    coeff, num = {
        "type1_given_c1v": (2, 19),
        "type2_given_c2v": (2, 19),
        "type3_given_rest": (4, 19),
        "both23_given_c1v_c2v": (8, 38),
    }[which]
    p = worst_conditional_risk(du, dv, which)
    return p.numerator ** 50 * dv ** num <= coeff ** 50 * p.denominator ** 50


# ---------------------------------------------------------------------------
# Chernoff-style tail bound and its exact small-n companion

def chernoff_bound(n: int, p, t) -> float:
    """The tail bound 2*exp(-t^2/(3np)) for Pr(|BIN(n,p) - np| > t)."""
    np_ = n * p
    if not 0 <= t <= np_:
        raise ValueError(f"need 0 <= t <= n*p, got t={t}, n*p={np_}")
    return 2.0 * math.exp(-float(t) * float(t) / (3.0 * float(np_)))


def exact_binomial_tail(n: int, p: Fraction, t) -> Fraction:
    """Pr(|BIN(n,p) - np| > t) by direct enumeration; intended for n <= 25."""
    if n > 25:
        raise ValueError("exact tail enumeration is capped at n = 25")
    p = Fraction(p)
    q = 1 - p
    np_ = n * p
    total = Fraction(0)
    for i in range(n + 1):
        if abs(i - np_) > t:
            total += math.comb(n, i) * p ** i * q ** (n - i)
    return total


# ---------------------------------------------------------------------------
# constants audit

AUDIT_PRINTED = {
    "beta_interval": "6.19 < beta < 6.2",
    "chain_exp_threshold": 221460,
    "f10_positive": 14,
    "f_derivative_root": 3617959,
    "deg_margin_threshold_16": 398893555,
    "deg_margin_threshold_219": 5647425084,
    "f_margin_threshold_24": 7221904256,
    "window_upper_threshold_44": 21129,
    "window_lower_threshold_2664": 1034102857,
    "part_ratio_gap": "2/3 / (4/37) < 6.17 < beta",
    "lll_chain_at_1e10": "weight chain dominates event bounds at d=1e10",
}


def _mp():
    import mpmath

    mpmath.mp.dps = 60
    return mpmath


def _root_claim(claim_id, formula, float_root, exact_floor, printed):
    """A threshold claim passes when the printed figure is the root rounded
    to integer precision and the exact integer floor brackets the root."""
    ok = (
        round(float_root) == printed
        and exact_floor in (printed - 1, printed)
        and abs(float_root - exact_floor) < 1
    )
    return {
        "claim_id": claim_id,
        "formula": formula,
        "computed": f"{float_root:.4f} (exact floor {exact_floor})",
        "printed": printed,
        "pass": bool(ok),
    }


def audit_constants() -> list:
    """Recompute every printed constant and inequality; list of claim records."""
    mp = _mp()
    out = []

    beta = mp.power(2, mp.mpf(50) / 19)
    ok = 619 ** 19 < 2 ** 50 * 100 ** 19 and 2 ** 50 * 10 ** 19 < 62 ** 19 * 10 ** 19
    out.append({
        "claim_id": "beta_interval",
        "formula": "beta = 2^(50/19)",
        "computed": mp.nstr(beta, 12),
        "printed": AUDIT_PRINTED["beta_interval"],
        "pass": bool(ok and mp.mpf("6.19") < beta < mp.mpf("6.2")),
    })

    # (75 * beta^6)^(1/1.24); exact floor from d^589 <= 75^475 * 2^7500
    root = mp.power(75 * mp.power(beta, 6), mp.mpf(1) / mp.mpf("1.24"))
    out.append(_root_claim(
        "chain_exp_threshold", "(3*25*beta^6)^(1/1.24)",
        float(root), iroot((75 ** 475) << 7500, 589),
        AUDIT_PRINTED["chain_exp_threshold"],
    ))

    # f(d) = d^0.24/3 - ln(2d^3) at d = 1e10
    d = mp.mpf(10) ** 10
    f10 = mp.power(d, mp.mpf("0.24")) / 3 - mp.log(2 * d ** 3)
    out.append({
        "claim_id": "f10_positive",
        "formula": "d^0.24/3 - ln(2*d^3) at d=1e10",
        "computed": mp.nstr(f10, 8),
        "printed": AUDIT_PRINTED["f10_positive"],
        "pass": bool(abs(f10 - 14) <= mp.mpf("0.5")),
    })

    # (3/0.08)^(1/0.24) = (75/2)^(25/6); exact floor from d^6 * 2^25 <= 75^25
    root = mp.power(mp.mpf(3) / mp.mpf("0.08"), mp.mpf(1) / mp.mpf("0.24"))
    out.append(_root_claim(
        "f_derivative_root", "(3/0.08)^(1/0.24)",
        float(root), iroot(75 ** 25 >> 25, 6),
        AUDIT_PRINTED["f_derivative_root"],
    ))

    # 16^(1/0.14) = 2^(200/7)
    root = mp.power(16, mp.mpf(1) / mp.mpf("0.14"))
    out.append(_root_claim(
        "deg_margin_threshold_16", "16^(1/0.14)",
        float(root), iroot(1 << 200, 7),
        AUDIT_PRINTED["deg_margin_threshold_16"],
    ))

    # (3*73)^(1/0.24) = 219^(25/6)
    root = mp.power(219, mp.mpf(1) / mp.mpf("0.24"))
    out.append(_root_claim(
        "deg_margin_threshold_219", "(3*73)^(1/0.24)",
        float(root), iroot(219 ** 25, 6),
        AUDIT_PRINTED["deg_margin_threshold_219"],
    ))

    # 24^(1/0.14) = 24^(50/7)
    root = mp.power(24, mp.mpf(1) / mp.mpf("0.14"))
    out.append(_root_claim(
        "f_margin_threshold_24", "24^(1/0.14)",
        float(root), iroot(24 ** 50, 7),
        AUDIT_PRINTED["f_margin_threshold_24"],
    ))

    # 44^(1/0.38) = 44^(50/19)
    root = mp.power(44, mp.mpf(1) / mp.mpf("0.38"))
    out.append(_root_claim(
        "window_upper_threshold_44", "44^(1/0.38)",
        float(root), iroot(44 ** 50, 19),
        AUDIT_PRINTED["window_upper_threshold_44"],
    ))

    # (8*333)^(1/0.38) = 2664^(50/19)
    root = mp.power(2664, mp.mpf(1) / mp.mpf("0.38"))
    out.append(_root_claim(
        "window_lower_threshold_2664", "(8*333)^(1/0.38)",
        float(root), iroot(2664 ** 50, 19),
        AUDIT_PRINTED["window_lower_threshold_2664"],
    ))

    # (2/3) / (4/37) = 37/6 < 6.17 < beta, all exact
    gap_ok = 37 * 100 < 617 * 6 and 617 ** 19 < (2 ** 50) * (100 ** 19)
    out.append({
        "claim_id": "part_ratio_gap",
        "formula": "(2/3)/(4/37) = 37/6 vs 6.17 vs beta",
        "computed": f"37/6 = {37 / 6:.6f}",
        "printed": AUDIT_PRINTED["part_ratio_gap"],
        "pass": bool(gap_ok),
    })

    # the feasibility chain at d = 1e10: weight * (1-weight)^(out-degree+1)
    # must dominate both event probability bounds
    dd = 10 ** 10
    bd = floor_beta_mult(dd)
    exponent = 4 + 4 * dd * bd
    exact_pre = (
        exponent <= 25 * dd ** 2
        # 75 * beta^6 <= d^1.24  <=>  75^475 * 2^7500 <= d^589
        and (75 ** 475) << 7500 <= dd ** 589
        # 2*e^(-4d^0.62/3) <= 2*e^(-2d^0.24/3)  <=>  2*d^0.62 >= d^0.24
        and 2 ** 50 * dd ** 31 >= dd ** 12
    )
    x = mp.mpf(1) / (1 + mp.mpf(dd) ** 3)
    chain_value = x * mp.power(1 - x, exponent)
    lower = (1 / mp.mpf(dd) ** 3) * mp.exp(-25 * mp.power(beta, 6) / dd)
    target = 2 * mp.exp(-2 * mp.power(mp.mpf(dd), mp.mpf("0.24")) / 3)
    abc_bound = 2 * mp.exp(-4 * mp.power(mp.mpf(dd), mp.mpf("0.62")) / 3)
    f_pos = mp.power(mp.mpf(dd), mp.mpf("0.24")) / 3 - mp.log(2 * mp.mpf(dd) ** 3) > 0
    ok = bool(
        exact_pre and f_pos
        and chain_value > lower > target > abc_bound
    )
    out.append({
        "claim_id": "lll_chain_at_1e10",
        "formula": "x*(1-x)^(4+4d*floor(beta*d)) >= (1/d^3)*exp(-25*beta^6/d)"
                   " >= 2*exp(-2d^0.24/3) >= 2*exp(-4d^0.62/3) at d=1e10",
        "computed": f"{mp.nstr(chain_value, 6)} >= {mp.nstr(lower, 6)}"
                    f" >= {mp.nstr(target, 6)} >= {mp.nstr(abc_bound, 6)}",
        "printed": AUDIT_PRINTED["lll_chain_at_1e10"],
        "pass": ok,
    })
    return out
