"""Simple undirected graphs, edge decompositions, generators, and the
recognizer for the three exception families (odd paths, odd cycles, and the
triangle-based family that never decomposes).
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass


def canon_edge(u: int, v: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices 0..n-1 with a canonical edge set."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        es = set()
        for u, v in edges:
            e = canon_edge(u, v)
            if not (0 <= e[0] and e[1] < n):
                raise ValueError(f"edge {e} outside vertex range 0..{n - 1}")
            es.add(e)
        self.n = n
        self.edges = frozenset(es)
        adj = {v: set() for v in range(n)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        self._adj = {v: frozenset(s) for v, s in adj.items()}

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(self._adj[v]) for v in range(self.n)]

    def neighbours(self, v: int) -> frozenset:
        return self._adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return canon_edge(u, v) in self.edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def min_degree(self) -> int:
        return min(self.degrees()) if self.n else 0

    def max_degree(self) -> int:
        return max(self.degrees()) if self.n else 0

    def spanning(self, edges) -> "Graph":
        """Spanning subgraph on the same vertex set with the given edges."""
        return Graph(self.n, edges)

    def without_edges(self, edges) -> "Graph":
        drop = {canon_edge(u, v) for u, v in edges}
        return Graph(self.n, self.edges - drop)

    def union_edges(self, other: "Graph") -> "Graph":
        if other.n != self.n:
            raise ValueError("vertex counts differ")
        return Graph(self.n, self.edges | other.edges)

    def components(self) -> list[frozenset]:
        seen = set()
        out = []
        for s in range(self.n):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for y in self._adj[x]:
                    if y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            out.append(frozenset(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def is_locally_irregular(g: Graph) -> bool:
    """True iff every edge joins vertices of distinct degree."""
    deg = g.degrees()
    return all(deg[u] != deg[v] for u, v in g.edges)


@dataclass(eq=False)
class Decomposition:
    """Edge colouring of a graph with colours 1..k; empty classes are fine."""

    graph: Graph
    k: int
    colour: dict

    def validate(self) -> None:
        missing = self.graph.edges - set(self.colour)
        if missing:
            raise ValueError(f"uncoloured edges: {sorted(missing)[:5]}")
        extra = set(self.colour) - self.graph.edges
        if extra:
            raise ValueError(f"coloured non-edges: {sorted(extra)[:5]}")
        for e, c in self.colour.items():
            if not (1 <= c <= self.k):
                raise ValueError(f"edge {e} has colour {c} outside 1..{self.k}")

    def class_edges(self, i: int) -> frozenset:
        return frozenset(e for e, c in self.colour.items() if c == i)

    def class_subgraph(self, i: int) -> Graph:
        return self.graph.spanning(self.class_edges(i))


def is_locally_irregular_decomposition(dec: Decomposition) -> bool:
    dec.validate()
    return all(is_locally_irregular(dec.class_subgraph(i)) for i in range(1, dec.k + 1))


# ---------------------------------------------------------------------------
# generators

def path(m: int) -> Graph:
    """Path with m edges (m+1 vertices); m = 0 gives a single vertex."""
    if m < 0:
        raise ValueError("path length must be >= 0")
    return Graph(m + 1, [(i, i + 1) for i in range(m)])


def cycle(m: int) -> Graph:
    if m < 3:
        raise ValueError("cycle needs length >= 3")
    return Graph(m, [(i, (i + 1) % m) for i in range(m)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 0 or b < 0:
        raise ValueError("part sizes must be >= 0")
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gnp(n: int, p: float, seed: int) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be in [0, 1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, edges)


def random_regular(n: int, d: int, seed: int) -> Graph:
    """d-regular graph on n vertices via the pairing model.

    Pairs up half-edges in shuffled passes, keeping pairs that form new
    simple edges and recycling the rest; restarts from scratch when the
    leftover stubs admit no further simple edge.  Deterministic in the seed.
    """
    if d < 0 or n < 0:
        raise ValueError("n and d must be >= 0")
    if (n * d) % 2 != 0:
        raise ValueError("n * d must be even")
    if d >= n and not (n == 0 and d == 0):
        raise ValueError("need d < n")
    if d == 0:
        return Graph(n)
    rng = random.Random(seed)

    def attempt():
        edges = set()
        stubs = [v for v in range(n) for _ in range(d)]
        while stubs:
            rng.shuffle(stubs)
            leftover = []
            it = iter(stubs)
            for u, v in zip(it, it):
                if u != v and canon_edge(u, v) not in edges:
                    edges.add(canon_edge(u, v))
                else:
                    leftover.extend((u, v))
            vs = sorted(set(leftover))
            stuck = all(
                a == b or canon_edge(a, b) in edges for i, a in enumerate(vs) for b in vs[i:]
            )
            if leftover and stuck:
                return None
            stubs = leftover
        return edges

    edges = attempt()
    while edges is None:
        edges = attempt()
    return Graph(n, edges)


def spider(length: int) -> Graph:
    """One edge uv with two hanging paths of the given even length at each end.

    10 vertices and 9 edges for length 2: the two centres have degree 3,
    each hanging path contributes interior degree-2 vertices and one leaf.
    """
    if length < 2 or length % 2 != 0:
        raise ValueError("hanging path length must be even and >= 2")
    edges = [(0, 1)]
    nxt = 2
    for centre in (0, 1):
        for _ in range(2):
            prev = centre
            for _ in range(length):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
    return Graph(nxt, edges)


def t_family(script=()) -> Graph:
    """Member of the triangle-based exception family.

    Starts from a triangle; each step (attach, length, glue) appends at a
    degree-2 vertex `attach` lying on a triangle either a hanging path of
    even length (glue False) or a hanging path of odd length with a
    triangle glued to its far end (glue True).
    """
    edges = {(0, 1), (0, 2), (1, 2)}
    n = 3
    for step_no, (attach, length, glue) in enumerate(script):
        g = Graph(n, edges)
        if not (0 <= attach < n):
            raise ValueError(f"step {step_no}: attach vertex {attach} out of range")
        if g.degree(attach) != 2:
            raise ValueError(f"step {step_no}: attach vertex {attach} has degree {g.degree(attach)}, need 2")
        if not _on_triangle(g, attach):
            raise ValueError(f"step {step_no}: attach vertex {attach} is not on a triangle")
        if glue:
            if length < 1 or length % 2 == 0:
                raise ValueError(f"step {step_no}: glued construction needs odd path length >= 1")
        else:
            if length < 2 or length % 2 == 1:
                raise ValueError(f"step {step_no}: plain path must have even length >= 2")
        prev = attach
        for _ in range(length):
            edges.add(canon_edge(prev, n))
            prev = n
            n += 1
        if glue:
            x, y = n, n + 1
            edges.add(canon_edge(prev, x))
            edges.add(canon_edge(prev, y))
            edges.add(canon_edge(x, y))
            n += 2
    return Graph(n, edges)


def _on_triangle(g: Graph, v: int) -> bool:
    nb = sorted(g.neighbours(v))
    return any(g.has_edge(a, b) for i, a in enumerate(nb) for b in nb[i + 1:])


GENERATORS = {
    "path": path,
    "cycle": cycle,
    "complete": complete,
    "complete_bipartite": complete_bipartite,
    "gnp": gnp,
    "random_regular": random_regular,
    "spider": spider,
    "t_family": t_family,
}


def generate(family: str, params: dict, seed: int | None = None) -> Graph:
    """Dispatch wrapper used by the CLI; seeded families require a seed."""
    if family not in GENERATORS:
        raise ValueError(f"unknown family {family!r}")
    fn = GENERATORS[family]
    if family in ("gnp", "random_regular"):
        if seed is None:
            raise ValueError(f"{family} requires a seed")
        return fn(**params, seed=seed)
    return fn(**params)


# ---------------------------------------------------------------------------
# edge-list format: first line n, then one "u v" pair per line, '#' comments

def parse_edge_list(text: str) -> Graph:
    lines = []
    for ln_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((ln_no, stripped))
    if not lines:
        raise ValueError("empty edge list: missing vertex-count header")
    hdr_no, hdr = lines[0]
    try:
        n = int(hdr)
    except ValueError:
        raise ValueError(f"line {hdr_no}: vertex count expected, got {hdr!r}") from None
    if n < 0:
        raise ValueError(f"line {hdr_no}: vertex count must be >= 0")
    edges = set()
    for ln_no, body in lines[1:]:
        parts = body.split()
        if len(parts) != 2:
            raise ValueError(f"line {ln_no}: expected 'u v', got {body!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(f"line {ln_no}: non-integer vertex id in {body!r}") from None
        if u == v:
            raise ValueError(f"line {ln_no}: self-loop at {u}")
        if not (0 <= u < v < n):
            raise ValueError(f"line {ln_no}: need 0 <= u < v < n, got {u} {v} with n={n}")
        if (u, v) in edges:
            raise ValueError(f"line {ln_no}: duplicate edge {u} {v}")
        edges.add((u, v))
    return Graph(n, edges)


def serialize_edge_list(g: Graph) -> str:
    out = [str(g.n)]
    out.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# exception families

class ExceptionFamily(enum.Enum):
    ODD_PATH = "odd_path"
    ODD_CYCLE = "odd_cycle"
    T_FAMILY = "t_family"


def recognize_exception(g: Graph):
    """Classify a connected graph as one of the exception families, or None.

    The bare triangle is both an odd cycle and the base of the T family; the
    cycle test runs first, so it reports ODD_CYCLE.
    """
    if not g.is_connected():
        raise ValueError("exception recognition needs a connected graph")
    deg = g.degrees()
    if g.n >= 2 and all(d <= 2 for d in deg):
        leaves = sum(1 for d in deg if d == 1)
        if leaves == 2 and g.m == g.n - 1:
            return ExceptionFamily.ODD_PATH if g.m % 2 == 1 else None
        if leaves == 0 and all(d == 2 for d in deg):
            return ExceptionFamily.ODD_CYCLE if g.m % 2 == 1 else None
    if is_t_member(g):
        return ExceptionFamily.T_FAMILY
    return None


def is_t_member(g: Graph) -> bool:
    """Membership in the triangle-based family, by reverse peeling.

    Strips one appended unit at a time (an even pendant path hanging at a
    triangle vertex, or an odd pendant path ending in a glued triangle) and
    accepts when a bare triangle remains.  Peel choices are searched with
    memoized failure states, so an unlucky strip order cannot cause a miss.
    """
    if g.n < 3 or not g.is_connected() or g.max_degree() > 3:
        return False
    if g.m % 2 == 0:
        return False  # every member has odd edge count (3 plus even units)
    memo = {}

    def still_on_triangle(edges, v):
        nb = sorted({b for e in edges for a, b in (e, e[::-1]) if a == v})
        return any(canon_edge(p, q) in edges for i, p in enumerate(nb) for q in nb[i + 1:])

    def peel(edges: frozenset) -> bool:
        if edges in memo:
            return memo[edges]
        if len(edges) == 3:
            vs = {x for e in edges for x in e}
            ok = len(vs) == 3
            memo[edges] = ok
            return ok
        deg_now = {}
        adj_now = {}
        for u, v in edges:
            deg_now[u] = deg_now.get(u, 0) + 1
            deg_now[v] = deg_now.get(v, 0) + 1
            adj_now.setdefault(u, set()).add(v)
            adj_now.setdefault(v, set()).add(u)

        def on_triangle(v):
            nb = sorted(adj_now.get(v, ()))
            return any(canon_edge(a, b) in edges for i, a in enumerate(nb) for b in nb[i + 1:])

        units = []
        # even pendant paths: walk from each leaf to the first degree-3 vertex
        for leaf, dv in deg_now.items():
            if dv != 1:
                continue
            walk = [leaf]
            prev, cur = None, leaf
            while deg_now.get(cur, 0) <= 2:
                nxts = [w for w in adj_now[cur] if w != prev]
                if not nxts:
                    break
                prev, cur = cur, nxts[0]
                walk.append(cur)
            if deg_now.get(cur, 0) != 3:
                continue  # never reached a branch vertex; not a unit
            length = len(walk) - 1
            if length % 2 == 0 and on_triangle(cur):
                # path interior vertices have both edges on the walk, so the
                # triangle at cur survives the strip untouched
                unit = frozenset(canon_edge(walk[i], walk[i + 1]) for i in range(length))
                units.append(unit)
        # odd pendant path ending in a glued triangle
        for anchor, dv in deg_now.items():
            if dv != 3:
                continue
            nb = sorted(adj_now[anchor])
            for i, x in enumerate(nb):
                for y in nb[i + 1:]:
                    if canon_edge(x, y) not in edges:
                        continue
                    if deg_now[x] != 2 or deg_now[y] != 2:
                        continue
                    # triangle {anchor,x,y} with free corners x,y; follow the
                    # third edge of the anchor back to the attach vertex
                    (start,) = [w for w in adj_now[anchor] if w not in (x, y)]
                    walk = [anchor, start]
                    prev, cur = anchor, start
                    while deg_now.get(cur, 0) == 2:
                        nxts = [w for w in adj_now[cur] if w != prev]
                        if not nxts:
                            break
                        prev, cur = cur, nxts[0]
                        walk.append(cur)
                    if deg_now.get(cur, 0) != 3:
                        continue
                    length = len(walk) - 1
                    if length % 2 == 1:
                        unit = set(canon_edge(walk[i], walk[i + 1]) for i in range(length))
                        unit |= {canon_edge(anchor, x), canon_edge(anchor, y), canon_edge(x, y)}
                        attach = cur
                        rest = edges - frozenset(unit)
                        if still_on_triangle(rest, attach):
                            units.append(frozenset(unit))
        result = False
        for unit in units:
            rest = edges - unit
            if peel(rest):
                result = True
                break
        memo[edges] = result
        return result

    return peel(frozenset(g.edges))


def t_family_members(max_edges: int):
    """All family members with at most max_edges edges, up to isomorphism."""
    base = t_family()
    seen = [base]
    frontier = [((), base)]
    while frontier:
        new_frontier = []
        for script, g in frontier:
            budget = max_edges - g.m
            if budget < 2:
                continue
            attach_points = [v for v in range(g.n) if g.degree(v) == 2 and _on_triangle(g, v)]
            steps = []
            for length in range(2, budget + 1, 2):
                steps.append((length, False))
            for length in range(1, budget - 2, 2):
                steps.append((length, True))
            for v in attach_points:
                for length, glue in steps:
                    s2 = script + ((v, length, glue),)
                    g2 = t_family(s2)
                    if g2.m > max_edges:
                        continue
                    if not any(_isomorphic(g2, h) for h in seen):
                        seen.append(g2)
                        new_frontier.append((s2, g2))
        frontier = new_frontier
    return seen


def _isomorphic(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism for the small graphs handled here (refinement plus
    backtracking); only used to dedupe generated family members."""
    if g1.n != g2.n or g1.m != g2.m or sorted(g1.degrees()) != sorted(g2.degrees()):
        return False

    def refine(g):
        colour = {v: g.degree(v) for v in range(g.n)}
        for _ in range(g.n):
            nxt = {v: (colour[v], tuple(sorted(colour[w] for w in g.neighbours(v)))) for v in range(g.n)}
            ranks = {key: i for i, key in enumerate(sorted(set(nxt.values())))}
            new = {v: ranks[nxt[v]] for v in range(g.n)}
            if new == colour:
                break
            colour = new
        return colour

    c1, c2 = refine(g1), refine(g2)
    if sorted(c1.values()) != sorted(c2.values()):
        return False
    order = sorted(range(g1.n), key=lambda v: (sum(1 for w in c1 if c1[w] == c1[v]), c1[v], -g1.degree(v)))
    used = set()
    mapping = {}

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in range(g2.n):
            if w in used or c2[w] != c1[v]:
                continue
            ok = True
            for x, y in mapping.items():
                if g1.has_edge(v, x) != g2.has_edge(w, y):
                    ok = False
                    break
            if ok:
                mapping[v] = w
                used.add(w)
                if extend(i + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return extend(0)
